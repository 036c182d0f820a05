#include "cibn/latent.hpp"

#include <string>

namespace cibn {

namespace {

void check_budget(const Dag& g, std::size_t budget) {
    if (g.size() > budget)
        throw BudgetError("graph has " + std::to_string(g.size()) + " nodes; exhaustive path search budget is " +
                          std::to_string(budget));
}

struct PathEnds {
    bool into_into = false;
    bool out_a_into_b = false;
    bool out_b_into_a = false;
};

// Walks all qualifying simple paths between a and b and records which end-mark
// combinations occur. Stops early once an into-into path is seen.
PathEnds scan_including_paths(const Dag& g, NodeId a, NodeId b) {
    const std::vector<bool> anc = g.ancestors_of({a, b});
    PathEnds found;
    std::vector<NodeId> path{a};
    std::vector<bool> on_path(g.size(), false);
    on_path[a.index] = true;

    auto interior_ok = [&](NodeId prev, NodeId v, NodeId next) {
        const bool collider = g.has_edge(prev, v) && g.has_edge(next, v);
        if (collider) return static_cast<bool>(anc[v.index]);
        return g.is_hidden(v);
    };

    auto dfs = [&](auto&& self) -> void {
        NodeId v = path.back();
        std::vector<NodeId> next = g.parents(v);
        next.insert(next.end(), g.children(v).begin(), g.children(v).end());
        std::sort(next.begin(), next.end());
        for (NodeId w : next) {
            if (found.into_into) return;
            if (on_path[w.index]) continue;
            if (path.size() >= 2 && !interior_ok(path[path.size() - 2], v, w)) continue;
            if (w == b) {
                const bool arrow_at_a = g.has_edge(path.size() >= 2 ? path[1] : b, a);
                const bool arrow_at_b = g.has_edge(v, b);
                if (arrow_at_a && arrow_at_b) found.into_into = true;
                else if (!arrow_at_a && arrow_at_b) found.out_a_into_b = true;
                else if (arrow_at_a && !arrow_at_b) found.out_b_into_a = true;
                continue;
            }
            if (!g.is_hidden(w) && !anc[w.index]) continue;  // observed interior must reach a or b
            path.push_back(w);
            on_path[w.index] = true;
            self(self);
            on_path[w.index] = false;
            path.pop_back();
        }
    };
    dfs(dfs);
    return found;
}

void check_observed_pair(const Dag& g, NodeId a, NodeId b) {
    g.check(a);
    g.check(b);
    if (a == b) throw GraphError(GraphError::Kind::invalid, "including path needs two distinct nodes");
    for (NodeId n : {a, b})
        if (g.is_hidden(n))
            throw GraphError(GraphError::Kind::invalid, "including path endpoint " + g.label(n) + " is hidden");
}

}  // namespace

const char* to_string(IncludingPathKind kind) {
    switch (kind) {
        case IncludingPathKind::none: return "none";
        case IncludingPathKind::out_into: return "out-into";
        case IncludingPathKind::into_into: return "into-into";
    }
    return "?";
}

IncludingPathKind including_path_kind(const Dag& g, NodeId a, NodeId b, std::size_t node_budget) {
    check_observed_pair(g, a, b);
    check_budget(g, node_budget);
    const PathEnds ends = scan_including_paths(g, a, b);
    if (ends.into_into) return IncludingPathKind::into_into;
    if (ends.out_a_into_b) return IncludingPathKind::out_into;
    return IncludingPathKind::none;
}

MixedGraph build_fhd(const Dag& g, std::size_t node_budget) {
    check_budget(g, node_budget);
    const std::vector<NodeId> obs = g.observed();
    MixedGraph fhd;
    for (NodeId v : obs) fhd.add_node(g.label(v));
    for (std::size_t i = 0; i < obs.size(); ++i) {
        for (std::size_t j = i + 1; j < obs.size(); ++j) {
            const PathEnds ends = scan_including_paths(g, obs[i], obs[j]);
            NodeId a(i), b(j);
            if (ends.into_into) fhd.add_edge(a, b, EndMark::arrow, EndMark::arrow);
            else if (ends.out_a_into_b) fhd.add_edge(a, b, EndMark::tail, EndMark::arrow);
            else if (ends.out_b_into_a) fhd.add_edge(a, b, EndMark::arrow, EndMark::tail);
        }
    }
    return fhd;
}

std::optional<std::vector<NodeId>> find_forbidden_collider_chain(const MixedGraph& g) {
    const std::size_t n = g.size();
    auto arrow_at = [&](NodeId at, NodeId other) {
        auto m = g.mark(at, other);
        return m && *m == EndMark::arrow;
    };

    std::vector<NodeId> chain;  // B1..Bk
    std::vector<bool> used(n, false);
    std::optional<std::vector<NodeId>> hit;

    // chain[0] = B1 is reached from `a`; every later Bi must point at `a`.
    auto extend = [&](auto&& self, NodeId a) -> void {
        if (hit) return;
        const NodeId last = chain.back();
        const std::size_t k = chain.size();
        if (k >= 3) {
            for (NodeId c : g.neighbors(last)) {
                if (used[c.index] || !arrow_at(last, c) || g.adjacent(a, c)) continue;
                for (std::size_t j = 1; j + 1 < k; ++j) {
                    if (is_directed(g, chain[j], c)) {
                        hit = std::vector<NodeId>{a};
                        hit->insert(hit->end(), chain.begin(), chain.end());
                        hit->push_back(c);
                        return;
                    }
                }
            }
        }
        for (NodeId next : g.neighbors(last)) {
            if (used[next.index]) continue;
            if (!(arrow_at(last, next) && arrow_at(next, last))) continue;
            if (!is_directed(g, next, a)) continue;
            chain.push_back(next);
            used[next.index] = true;
            self(self, a);
            used[next.index] = false;
            chain.pop_back();
            if (hit) return;
        }
    };

    for (std::size_t ai = 0; ai < n && !hit; ++ai) {
        NodeId a(ai);
        used[ai] = true;
        for (NodeId b1 : g.neighbors(a)) {
            if (!arrow_at(b1, a)) continue;
            chain = {b1};
            used[b1.index] = true;
            extend(extend, a);
            used[b1.index] = false;
            if (hit) break;
        }
        used[ai] = false;
    }
    return hit;
}

}  // namespace cibn
