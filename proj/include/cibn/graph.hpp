#pragma once

#include "cibn/node_set.hpp"

#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

namespace cibn {

class GraphError : public std::runtime_error {
public:
    enum class Kind { self_loop, duplicate_edge, missing_edge, unknown_node, duplicate_label, cycle, invalid };

    GraphError(Kind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}
    Kind kind() const { return kind_; }

private:
    Kind kind_;
};

/// Mark stored at one end of a mixed-graph edge. The `*` wildcard is a query, never a mark.
enum class EndMark : std::uint8_t { tail, arrow, circle };

char mark_symbol(EndMark m);

/// Label table shared by both graph kinds.
class NodeTable {
public:
    NodeId add(std::string label);
    std::size_t size() const { return labels_.size(); }
    const std::string& label(NodeId id) const;
    std::optional<NodeId> find(std::string_view label) const;
    NodeId require(std::string_view label) const;
    void check(NodeId id) const;
    const std::vector<std::string>& labels() const { return labels_; }

    bool operator==(const NodeTable& o) const { return labels_ == o.labels_; }

private:
    std::vector<std::string> labels_;
    std::unordered_map<std::string, NodeId> index_;
};

/// Directed acyclic graph over observed and hidden nodes.
class Dag {
public:
    NodeId add_node(std::string label, bool hidden = false);
    /// Throws on self-loops, duplicates and edges that would close a cycle.
    void add_edge(NodeId parent, NodeId child);

    std::size_t size() const { return nodes_.size(); }
    const std::string& label(NodeId id) const { return nodes_.label(id); }
    std::optional<NodeId> find(std::string_view label) const { return nodes_.find(label); }
    NodeId require(std::string_view label) const { return nodes_.require(label); }
    void check(NodeId id) const { nodes_.check(id); }
    const NodeTable& nodes() const { return nodes_; }

    bool is_hidden(NodeId id) const;
    std::vector<NodeId> observed() const;
    std::vector<NodeId> hidden() const;

    const std::vector<NodeId>& parents(NodeId id) const;
    const std::vector<NodeId>& children(NodeId id) const;
    bool has_edge(NodeId parent, NodeId child) const;
    bool adjacent(NodeId a, NodeId b) const { return has_edge(a, b) || has_edge(b, a); }
    /// All edges as (parent, child), ascending.
    std::vector<std::pair<NodeId, NodeId>> edges() const;
    std::size_t edge_count() const;

    /// True iff a directed path of length >= 1 leads from `from` to `to`.
    bool reaches(NodeId from, NodeId to) const;
    /// Flags every node that is `target` or has a directed path into some target.
    std::vector<bool> ancestors_of(const std::vector<NodeId>& targets) const;
    std::vector<NodeId> topological_order() const;

    bool operator==(const Dag&) const = default;

private:
    NodeTable nodes_;
    std::vector<bool> hidden_;
    std::vector<std::vector<NodeId>> parents_;
    std::vector<std::vector<NodeId>> children_;
};

/// One stored mixed-graph edge, reported with `a < b`.
struct MixedEdge {
    NodeId a;
    NodeId b;
    EndMark at_a;
    EndMark at_b;

    bool operator==(const MixedEdge&) const = default;
};

/// Ordered triple (a, b, c) stored canonically with a < c.
using Triple = std::array<NodeId, 3>;

/// Graph whose edges carry one mark per end, plus non-collider constraints.
class MixedGraph {
public:
    MixedGraph() = default;
    explicit MixedGraph(const std::vector<std::string>& labels);

    NodeId add_node(std::string label);
    /// Throws on self-loops and duplicate edges.
    void add_edge(NodeId a, NodeId b, EndMark at_a, EndMark at_b);
    void remove_edge(NodeId a, NodeId b);
    void set_mark(NodeId at, NodeId other, EndMark mark);

    std::size_t size() const { return nodes_.size(); }
    const std::string& label(NodeId id) const { return nodes_.label(id); }
    std::optional<NodeId> find(std::string_view label) const { return nodes_.find(label); }
    NodeId require(std::string_view label) const { return nodes_.require(label); }
    void check(NodeId id) const { nodes_.check(id); }
    const NodeTable& nodes() const { return nodes_; }

    bool adjacent(NodeId a, NodeId b) const;
    /// Mark at `at` on the edge at-other, or nullopt when the edge is absent.
    std::optional<EndMark> mark(NodeId at, NodeId other) const;
    /// Like mark(), but throws GraphError(missing_edge).
    EndMark mark_at(NodeId at, NodeId other) const;
    /// (mark at a, mark at b); symmetric under swapping the arguments.
    std::pair<EndMark, EndMark> ends(NodeId a, NodeId b) const;

    std::vector<NodeId> neighbors(NodeId id) const;
    std::vector<MixedEdge> edges() const;
    std::size_t edge_count() const;

    /// Records that a-b and b-c may not both carry an arrowhead at b.
    void add_noncollider(NodeId a, NodeId b, NodeId c);
    bool is_noncollider(NodeId a, NodeId b, NodeId c) const;
    const std::set<Triple>& noncolliders() const { return noncolliders_; }

    bool operator==(const MixedGraph& o) const {
        return nodes_ == o.nodes_ && marks_ == o.marks_ && noncolliders_ == o.noncolliders_;
    }

private:
    static constexpr std::uint8_t kNone = 0xff;
    std::uint8_t& cell(NodeId at, NodeId other) { return marks_[at.index][other.index]; }
    std::uint8_t cell(NodeId at, NodeId other) const { return marks_[at.index][other.index]; }

    NodeTable nodes_;
    // marks_[x][y] is the mark at x on the edge x-y, kNone when absent.
    std::vector<std::vector<std::uint8_t>> marks_;
    std::set<Triple> noncolliders_;
};

Triple canonical_triple(NodeId a, NodeId b, NodeId c);

// Structural predicates. Node arguments are validated; failures raise GraphError.

/// Edge a-b is a -> b (tail at a, arrow at b).
bool is_directed(const MixedGraph& g, NodeId a, NodeId b);
/// Directed path x -> ... -> y of length >= 1 through tail/arrow edges only.
bool directed_path_exists(const MixedGraph& g, NodeId x, NodeId y);
/// Pattern a *-> b <-* c.
bool is_collider(const MixedGraph& g, NodeId a, NodeId b, NodeId c);
/// The tail/arrow sub-relation has no directed cycle.
bool is_acyclic_directed_part(const MixedGraph& g);

/// DAG over observed nodes plus parentless latent nodes standing in for bidirected edges.
struct BeliefNetwork {
    Dag dag;
    std::vector<NodeId> auxiliary;
    std::map<NodeId, std::pair<NodeId, NodeId>> origin;

    /// Checks the auxiliary-node invariants; throws GraphError(invalid) on violation.
    void validate() const;
};

}  // namespace cibn
