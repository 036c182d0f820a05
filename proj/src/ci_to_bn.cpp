#include "cibn/ci_to_bn.hpp"

#include <deque>

namespace cibn {

namespace {

std::string triple_words(const MixedGraph& g, const Triple& t) {
    return g.label(t[0]) + " " + g.label(t[1]) + " " + g.label(t[2]);
}

class Completion {
public:
    Completion(MixedGraph g, CompletionStats& stats) : g_(std::move(g)), stats_(stats) {}

    MixedGraph run() {
        accept_fixed_edges();
        for (const auto& e : g_.edges())
            if (e.at_a == EndMark::circle && e.at_b == EndMark::circle) open_.emplace_back(e.a, e.b);

        // Arrowheads already fixed at the centre of a non-collider triple force the other edge.
        for (const auto& [a, b, c] : g_.noncolliders()) {
            for (auto [p, r] : {std::pair{a, c}, std::pair{c, a}}) {
                if (g_.mark_at(b, p) != EndMark::arrow) continue;
                if (g_.ends(b, r) == std::pair{EndMark::circle, EndMark::circle} && !assign(b, r))
                    fail("fixed arrowheads force a cycle or a clash");
            }
        }
        if (!search(0)) fail("no orientation of the o-o edges satisfies all constraints");
        return std::move(g_);
    }

private:
    [[noreturn]] void fail(const std::string& why) const {
        std::vector<std::string> constraints;
        for (const auto& t : g_.noncolliders()) constraints.push_back(triple_words(g_, t));
        throw NoValidOrientation(why, std::move(constraints));
    }

    void accept_fixed_edges() {
        for (const auto& e : g_.edges()) {
            auto [ma, mb] = std::pair{e.at_a, e.at_b};
            if (ma == EndMark::circle && mb == EndMark::arrow) g_.set_mark(e.a, e.b, EndMark::tail);
            else if (ma == EndMark::arrow && mb == EndMark::circle) g_.set_mark(e.b, e.a, EndMark::tail);
            else if (ma == EndMark::tail && mb == EndMark::tail)
                fail("edge " + g_.label(e.a) + "-" + g_.label(e.b) + " is tail/tail");
            else if ((ma == EndMark::tail) != (mb == EndMark::tail) && (ma == EndMark::circle || mb == EndMark::circle))
                fail("edge " + g_.label(e.a) + "-" + g_.label(e.b) + " mixes a tail with a circle");
        }
        if (!is_acyclic_directed_part(g_)) fail("directed edges fixed by the input already form a cycle");
        for (const auto& [a, b, c] : g_.noncolliders())
            if (g_.mark_at(b, a) == EndMark::arrow && g_.mark_at(b, c) == EndMark::arrow)
                fail("non-collider " + triple_words(g_, {a, b, c}) + " is already a collider");
    }

    // Orients s -> t and everything it forces. Returns false on a clash; the trail keeps
    // whatever was set so the caller can undo it.
    bool assign(NodeId s, NodeId t) {
        std::deque<std::pair<NodeId, NodeId>> queue{{s, t}};
        while (!queue.empty()) {
            auto [u, v] = queue.front();
            queue.pop_front();
            const auto ends = g_.ends(u, v);
            if (ends == std::pair{EndMark::tail, EndMark::arrow}) continue;
            if (ends != std::pair{EndMark::circle, EndMark::circle}) {
                ++stats_.constraint_rejections;
                return false;
            }
            if (directed_path_exists(g_, v, u)) {
                ++stats_.cycle_rejections;
                return false;
            }
            g_.set_mark(u, v, EndMark::tail);
            g_.set_mark(v, u, EndMark::arrow);
            trail_.emplace_back(u, v);
            for (NodeId w : g_.neighbors(v)) {
                if (w == u || !g_.is_noncollider(u, v, w)) continue;
                const auto far = g_.ends(v, w);
                if (far.first == EndMark::arrow) {
                    ++stats_.constraint_rejections;
                    return false;
                }
                if (far == std::pair{EndMark::circle, EndMark::circle}) {
                    ++stats_.forced;
                    queue.emplace_back(v, w);
                }
            }
        }
        return true;
    }

    void undo(std::size_t mark) {
        while (trail_.size() > mark) {
            auto [u, v] = trail_.back();
            trail_.pop_back();
            g_.set_mark(u, v, EndMark::circle);
            g_.set_mark(v, u, EndMark::circle);
        }
    }

    bool search(std::size_t idx) {
        while (idx < open_.size() &&
               g_.ends(open_[idx].first, open_[idx].second) != std::pair{EndMark::circle, EndMark::circle})
            ++idx;
        if (idx == open_.size()) return true;
        const auto [a, b] = open_[idx];
        for (auto [u, v] : {std::pair{a, b}, std::pair{b, a}}) {
            ++stats_.decisions;
            const std::size_t mark = trail_.size();
            if (assign(u, v) && search(idx + 1)) return true;
            undo(mark);
            ++stats_.backtracks;
        }
        return false;
    }

    MixedGraph g_;
    CompletionStats& stats_;
    std::vector<std::pair<NodeId, NodeId>> open_;
    std::vector<std::pair<NodeId, NodeId>> trail_;
};

}  // namespace

MixedGraph complete_orientation(const MixedGraph& pi, CompletionStats* stats) {
    CompletionStats local;
    CompletionStats& s = stats ? *stats : local;
    return Completion(pi, s).run();
}

BeliefNetwork expand_bidirected(const MixedGraph& g) {
    BeliefNetwork bn;
    for (std::size_t i = 0; i < g.size(); ++i) bn.dag.add_node(g.label(NodeId(i)));
    std::vector<std::pair<NodeId, NodeId>> bidirected;
    for (const auto& e : g.edges()) {
        if (e.at_a == EndMark::circle || e.at_b == EndMark::circle)
            throw GraphError(GraphError::Kind::invalid,
                             "edge " + g.label(e.a) + "-" + g.label(e.b) + " still carries a circle mark");
        if (e.at_a == EndMark::arrow && e.at_b == EndMark::arrow) bidirected.emplace_back(e.a, e.b);
        else if (e.at_a == EndMark::tail && e.at_b == EndMark::arrow) bn.dag.add_edge(e.a, e.b);
        else if (e.at_a == EndMark::arrow && e.at_b == EndMark::tail) bn.dag.add_edge(e.b, e.a);
        else throw GraphError(GraphError::Kind::invalid, "edge " + g.label(e.a) + "-" + g.label(e.b) + " is tail/tail");
    }
    std::size_t counter = 0;
    for (auto [a, b] : bidirected) {
        std::string label;
        do {
            label = "L#" + std::to_string(counter++);
        } while (bn.dag.find(label));
        NodeId latent = bn.dag.add_node(label, true);
        bn.dag.add_edge(latent, a);
        bn.dag.add_edge(latent, b);
        bn.auxiliary.push_back(latent);
        bn.origin.emplace(latent, std::pair{a, b});
    }
    bn.validate();
    return bn;
}

BeliefNetwork run_ci_to_bn(const PartialIPG& p, CompletionStats* stats) {
    return expand_bidirected(complete_orientation(p.graph, stats));
}

}  // namespace cibn
