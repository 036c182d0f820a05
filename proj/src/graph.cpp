#include "cibn/graph.hpp"

#include <deque>

namespace cibn {

namespace {

std::string describe(const NodeTable& t, NodeId a, NodeId b) {
    return t.label(a) + "-" + t.label(b);
}

}  // namespace

char mark_symbol(EndMark m) {
    switch (m) {
        case EndMark::tail: return '-';
        case EndMark::arrow: return '>';
        case EndMark::circle: return 'o';
    }
    return '?';
}

// NodeTable

NodeId NodeTable::add(std::string label) {
    if (label.empty()) throw GraphError(GraphError::Kind::invalid, "empty node label");
    if (index_.count(label)) throw GraphError(GraphError::Kind::duplicate_label, "duplicate node label '" + label + "'");
    NodeId id(labels_.size());
    index_.emplace(label, id);
    labels_.push_back(std::move(label));
    return id;
}

const std::string& NodeTable::label(NodeId id) const {
    check(id);
    return labels_[id.index];
}

std::optional<NodeId> NodeTable::find(std::string_view label) const {
    auto it = index_.find(std::string(label));
    if (it == index_.end()) return std::nullopt;
    return it->second;
}

NodeId NodeTable::require(std::string_view label) const {
    if (auto id = find(label)) return *id;
    throw GraphError(GraphError::Kind::unknown_node, "unknown node '" + std::string(label) + "'");
}

void NodeTable::check(NodeId id) const {
    if (id.index >= labels_.size())
        throw GraphError(GraphError::Kind::unknown_node, "unknown node #" + std::to_string(id.index));
}

// Dag

NodeId Dag::add_node(std::string label, bool hidden) {
    NodeId id = nodes_.add(std::move(label));
    hidden_.push_back(hidden);
    parents_.emplace_back();
    children_.emplace_back();
    return id;
}

void Dag::add_edge(NodeId parent, NodeId child) {
    check(parent);
    check(child);
    if (parent == child) throw GraphError(GraphError::Kind::self_loop, "self-loop at " + label(parent));
    if (has_edge(parent, child))
        throw GraphError(GraphError::Kind::duplicate_edge, "duplicate edge " + describe(nodes_, parent, child));
    if (reaches(child, parent))
        throw GraphError(GraphError::Kind::cycle, "edge " + describe(nodes_, parent, child) + " closes a cycle");
    auto insert_sorted = [](std::vector<NodeId>& v, NodeId x) { v.insert(std::lower_bound(v.begin(), v.end(), x), x); };
    insert_sorted(children_[parent.index], child);
    insert_sorted(parents_[child.index], parent);
}

bool Dag::is_hidden(NodeId id) const {
    check(id);
    return hidden_[id.index];
}

std::vector<NodeId> Dag::observed() const {
    std::vector<NodeId> out;
    for (std::size_t i = 0; i < size(); ++i)
        if (!hidden_[i]) out.emplace_back(i);
    return out;
}

std::vector<NodeId> Dag::hidden() const {
    std::vector<NodeId> out;
    for (std::size_t i = 0; i < size(); ++i)
        if (hidden_[i]) out.emplace_back(i);
    return out;
}

const std::vector<NodeId>& Dag::parents(NodeId id) const {
    check(id);
    return parents_[id.index];
}

const std::vector<NodeId>& Dag::children(NodeId id) const {
    check(id);
    return children_[id.index];
}

bool Dag::has_edge(NodeId parent, NodeId child) const {
    const auto& c = children(parent);
    check(child);
    return std::binary_search(c.begin(), c.end(), child);
}

std::vector<std::pair<NodeId, NodeId>> Dag::edges() const {
    std::vector<std::pair<NodeId, NodeId>> out;
    for (std::size_t i = 0; i < size(); ++i)
        for (NodeId c : children_[i]) out.emplace_back(NodeId(i), c);
    return out;
}

std::size_t Dag::edge_count() const {
    std::size_t n = 0;
    for (const auto& c : children_) n += c.size();
    return n;
}

bool Dag::reaches(NodeId from, NodeId to) const {
    check(from);
    check(to);
    std::vector<bool> seen(size(), false);
    std::vector<NodeId> stack(children_[from.index].begin(), children_[from.index].end());
    while (!stack.empty()) {
        NodeId v = stack.back();
        stack.pop_back();
        if (v == to) return true;
        if (seen[v.index]) continue;
        seen[v.index] = true;
        for (NodeId c : children_[v.index]) stack.push_back(c);
    }
    return false;
}

std::vector<bool> Dag::ancestors_of(const std::vector<NodeId>& targets) const {
    std::vector<bool> anc(size(), false);
    std::vector<NodeId> stack;
    for (NodeId t : targets) {
        check(t);
        if (!anc[t.index]) {
            anc[t.index] = true;
            stack.push_back(t);
        }
    }
    while (!stack.empty()) {
        NodeId v = stack.back();
        stack.pop_back();
        for (NodeId p : parents_[v.index]) {
            if (!anc[p.index]) {
                anc[p.index] = true;
                stack.push_back(p);
            }
        }
    }
    return anc;
}

std::vector<NodeId> Dag::topological_order() const {
    std::vector<std::size_t> indeg(size());
    for (std::size_t i = 0; i < size(); ++i) indeg[i] = parents_[i].size();
    std::set<NodeId> ready;
    for (std::size_t i = 0; i < size(); ++i)
        if (indeg[i] == 0) ready.insert(NodeId(i));
    std::vector<NodeId> order;
    while (!ready.empty()) {
        NodeId v = *ready.begin();
        ready.erase(ready.begin());
        order.push_back(v);
        for (NodeId c : children_[v.index])
            if (--indeg[c.index] == 0) ready.insert(c);
    }
    return order;
}

// MixedGraph

MixedGraph::MixedGraph(const std::vector<std::string>& labels) {
    for (const auto& l : labels) add_node(l);
}

NodeId MixedGraph::add_node(std::string label) {
    NodeId id = nodes_.add(std::move(label));
    for (auto& row : marks_) row.push_back(kNone);
    marks_.emplace_back(nodes_.size(), kNone);
    return id;
}

void MixedGraph::add_edge(NodeId a, NodeId b, EndMark at_a, EndMark at_b) {
    check(a);
    check(b);
    if (a == b) throw GraphError(GraphError::Kind::self_loop, "self-loop at " + label(a));
    if (adjacent(a, b)) throw GraphError(GraphError::Kind::duplicate_edge, "duplicate edge " + describe(nodes_, a, b));
    cell(a, b) = static_cast<std::uint8_t>(at_a);
    cell(b, a) = static_cast<std::uint8_t>(at_b);
}

void MixedGraph::remove_edge(NodeId a, NodeId b) {
    if (!adjacent(a, b)) throw GraphError(GraphError::Kind::missing_edge, "no edge " + describe(nodes_, a, b));
    cell(a, b) = kNone;
    cell(b, a) = kNone;
    std::erase_if(noncolliders_, [&](const Triple& t) {
        auto touches = [&](NodeId x, NodeId y) { return (x == a && y == b) || (x == b && y == a); };
        return touches(t[0], t[1]) || touches(t[1], t[2]);
    });
}

void MixedGraph::set_mark(NodeId at, NodeId other, EndMark mark) {
    if (!adjacent(at, other)) throw GraphError(GraphError::Kind::missing_edge, "no edge " + describe(nodes_, at, other));
    cell(at, other) = static_cast<std::uint8_t>(mark);
}

bool MixedGraph::adjacent(NodeId a, NodeId b) const {
    check(a);
    check(b);
    return cell(a, b) != kNone;
}

std::optional<EndMark> MixedGraph::mark(NodeId at, NodeId other) const {
    if (!adjacent(at, other)) return std::nullopt;
    return static_cast<EndMark>(cell(at, other));
}

EndMark MixedGraph::mark_at(NodeId at, NodeId other) const {
    if (auto m = mark(at, other)) return *m;
    throw GraphError(GraphError::Kind::missing_edge, "no edge " + describe(nodes_, at, other));
}

std::pair<EndMark, EndMark> MixedGraph::ends(NodeId a, NodeId b) const {
    return {mark_at(a, b), mark_at(b, a)};
}

std::vector<NodeId> MixedGraph::neighbors(NodeId id) const {
    check(id);
    std::vector<NodeId> out;
    const auto& row = marks_[id.index];
    for (std::size_t j = 0; j < row.size(); ++j)
        if (row[j] != kNone) out.emplace_back(j);
    return out;
}

std::vector<MixedEdge> MixedGraph::edges() const {
    std::vector<MixedEdge> out;
    for (std::size_t i = 0; i < size(); ++i)
        for (std::size_t j = i + 1; j < size(); ++j)
            if (marks_[i][j] != kNone)
                out.push_back({NodeId(i), NodeId(j), static_cast<EndMark>(marks_[i][j]), static_cast<EndMark>(marks_[j][i])});
    return out;
}

std::size_t MixedGraph::edge_count() const {
    std::size_t n = 0;
    for (std::size_t i = 0; i < size(); ++i)
        for (std::size_t j = i + 1; j < size(); ++j)
            if (marks_[i][j] != kNone) ++n;
    return n;
}

Triple canonical_triple(NodeId a, NodeId b, NodeId c) {
    return a < c ? Triple{a, b, c} : Triple{c, b, a};
}

void MixedGraph::add_noncollider(NodeId a, NodeId b, NodeId c) {
    if (a == c) throw GraphError(GraphError::Kind::invalid, "non-collider triple needs distinct endpoints");
    if (!adjacent(a, b) || !adjacent(b, c))
        throw GraphError(GraphError::Kind::missing_edge,
                         "non-collider " + label(a) + " " + label(b) + " " + label(c) + " needs both edges");
    noncolliders_.insert(canonical_triple(a, b, c));
}

bool MixedGraph::is_noncollider(NodeId a, NodeId b, NodeId c) const {
    return noncolliders_.count(canonical_triple(a, b, c)) > 0;
}

// Predicates

bool is_directed(const MixedGraph& g, NodeId a, NodeId b) {
    auto ma = g.mark(a, b);
    return ma && *ma == EndMark::tail && g.mark_at(b, a) == EndMark::arrow;
}

bool directed_path_exists(const MixedGraph& g, NodeId x, NodeId y) {
    g.check(x);
    g.check(y);
    std::vector<bool> seen(g.size(), false);
    std::deque<NodeId> queue{x};
    while (!queue.empty()) {
        NodeId v = queue.front();
        queue.pop_front();
        for (NodeId w : g.neighbors(v)) {
            if (!is_directed(g, v, w)) continue;
            if (w == y) return true;
            if (!seen[w.index]) {
                seen[w.index] = true;
                queue.push_back(w);
            }
        }
    }
    return false;
}

bool is_collider(const MixedGraph& g, NodeId a, NodeId b, NodeId c) {
    return g.mark_at(b, a) == EndMark::arrow && g.mark_at(b, c) == EndMark::arrow;
}

bool is_acyclic_directed_part(const MixedGraph& g) {
    const std::size_t n = g.size();
    std::vector<std::size_t> indeg(n, 0);
    for (const auto& e : g.edges()) {
        if (e.at_a == EndMark::tail && e.at_b == EndMark::arrow) ++indeg[e.b.index];
        if (e.at_b == EndMark::tail && e.at_a == EndMark::arrow) ++indeg[e.a.index];
    }
    std::vector<NodeId> ready;
    for (std::size_t i = 0; i < n; ++i)
        if (indeg[i] == 0) ready.emplace_back(i);
    std::size_t done = 0;
    while (!ready.empty()) {
        NodeId v = ready.back();
        ready.pop_back();
        ++done;
        for (NodeId w : g.neighbors(v))
            if (is_directed(g, v, w) && --indeg[w.index] == 0) ready.push_back(w);
    }
    return done == n;
}

void BeliefNetwork::validate() const {
    for (NodeId aux : auxiliary) {
        if (!dag.is_hidden(aux))
            throw GraphError(GraphError::Kind::invalid, "auxiliary node " + dag.label(aux) + " is not hidden");
        if (!dag.parents(aux).empty())
            throw GraphError(GraphError::Kind::invalid, "auxiliary node " + dag.label(aux) + " has parents");
        const auto& kids = dag.children(aux);
        if (kids.size() != 2 || dag.is_hidden(kids[0]) || dag.is_hidden(kids[1]))
            throw GraphError(GraphError::Kind::invalid,
                             "auxiliary node " + dag.label(aux) + " must have exactly two observed children");
        auto it = origin.find(aux);
        if (it == origin.end())
            throw GraphError(GraphError::Kind::invalid, "auxiliary node " + dag.label(aux) + " has no origin");
        auto [a, b] = it->second;
        if (!((kids[0] == a && kids[1] == b) || (kids[0] == b && kids[1] == a)))
            throw GraphError(GraphError::Kind::invalid, "auxiliary node " + dag.label(aux) + " origin mismatch");
    }
    if (dag.topological_order().size() != dag.size())
        throw GraphError(GraphError::Kind::cycle, "belief network is cyclic");
}

}  // namespace cibn
