#include "cibn/dsep.hpp"

#include <deque>

namespace cibn {

namespace {

void validate(const Dag& g, const SeparationQuery& q) {
    g.check(q.x);
    g.check(q.y);
    if (q.x == q.y) throw GraphError(GraphError::Kind::invalid, "d-separation query needs two distinct nodes");
    for (NodeId z : q.conditioning) {
        g.check(z);
        if (z == q.x || z == q.y)
            throw GraphError(GraphError::Kind::invalid, "query endpoint " + g.label(z) + " inside conditioning set");
        if (g.is_hidden(z))
            throw GraphError(GraphError::Kind::invalid, "hidden node " + g.label(z) + " inside conditioning set");
    }
}

}  // namespace

bool d_separated(const Dag& g, const SeparationQuery& q) {
    validate(g, q);
    const auto& z = q.conditioning;
    const std::vector<bool> anc = g.ancestors_of(z.items());

    // State: (node, arrived_from_child). Travelling "up" means we came from a child.
    enum : int { kUp = 0, kDown = 1 };
    std::vector<std::array<bool, 2>> seen(g.size(), {false, false});
    std::deque<std::pair<NodeId, int>> queue{{q.x, kUp}};
    while (!queue.empty()) {
        auto [v, dir] = queue.front();
        queue.pop_front();
        if (seen[v.index][dir]) continue;
        seen[v.index][dir] = true;
        const bool in_z = z.contains(v);
        if (!in_z && v == q.y) return false;
        if (dir == kUp) {
            if (in_z) continue;
            for (NodeId p : g.parents(v)) queue.emplace_back(p, kUp);
            for (NodeId c : g.children(v)) queue.emplace_back(c, kDown);
        } else {
            if (!in_z)
                for (NodeId c : g.children(v)) queue.emplace_back(c, kDown);
            if (anc[v.index])
                for (NodeId p : g.parents(v)) queue.emplace_back(p, kUp);
        }
    }
    return true;
}

bool d_separated_exhaustive(const Dag& g, const SeparationQuery& q) {
    validate(g, q);
    const auto& z = q.conditioning;

    auto has_descendant_in_z = [&](NodeId v) {
        if (z.contains(v)) return true;
        for (NodeId s : z)
            if (g.reaches(v, s)) return true;
        return false;
    };
    auto active_at = [&](NodeId prev, NodeId v, NodeId next) {
        const bool collider = g.has_edge(prev, v) && g.has_edge(next, v);
        return collider ? has_descendant_in_z(v) : !z.contains(v);
    };

    std::vector<NodeId> path{q.x};
    std::vector<bool> on_path(g.size(), false);
    on_path[q.x.index] = true;

    // Depth-first over simple paths. A prefix whose interior is already blocked cannot
    // be extended into an active path, so it is abandoned.
    auto dfs = [&](auto&& self) -> bool {
        NodeId v = path.back();
        std::vector<NodeId> next = g.parents(v);
        next.insert(next.end(), g.children(v).begin(), g.children(v).end());
        for (NodeId w : next) {
            if (on_path[w.index]) continue;
            if (path.size() >= 2 && !active_at(path[path.size() - 2], v, w)) continue;
            if (w == q.y) return true;
            path.push_back(w);
            on_path[w.index] = true;
            const bool found = self(self);
            on_path[w.index] = false;
            path.pop_back();
            if (found) return true;
        }
        return false;
    };
    return !dfs(dfs);
}

bool d_connected_given_node(const Dag& g, const NodeSet& observed, NodeId a, NodeId b, NodeId c) {
    for (NodeId n : {a, b, c}) {
        g.check(n);
        if (!observed.contains(n))
            throw GraphError(GraphError::Kind::invalid, "node " + g.label(n) + " is not observed");
    }
    if (a == b || a == c || b == c) throw GraphError(GraphError::Kind::invalid, "d_connected_given_node needs distinct nodes");
    std::vector<NodeId> pool;
    for (NodeId v : observed)
        if (v != a && v != b && v != c) pool.push_back(v);
    const bool separable = for_each_subset(pool, kUnlimited, [&](const NodeSet& rest) {
        NodeSet s = rest;
        s.insert(c);
        return d_separated(g, a, b, s);
    });
    return !separable;
}

std::map<std::pair<NodeId, NodeId>, std::optional<NodeSet>> all_separations(const Dag& g, const NodeSet& observed) {
    std::map<std::pair<NodeId, NodeId>, std::optional<NodeSet>> table;
    for (NodeId a : observed) {
        for (NodeId b : observed) {
            if (!(a < b)) continue;
            std::vector<NodeId> pool;
            for (NodeId v : observed)
                if (v != a && v != b) pool.push_back(v);
            std::optional<NodeSet> found;
            for_each_subset(pool, kUnlimited, [&](const NodeSet& s) {
                if (!d_separated(g, a, b, s)) return false;
                found = s;
                return true;
            });
            table.emplace(std::pair{a, b}, std::move(found));
        }
    }
    return table;
}

}  // namespace cibn
