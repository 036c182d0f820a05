#pragma once

#include "cibn/graph.hpp"
#include "cibn/indep_test.hpp"

#include <functional>
#include <iosfwd>
#include <map>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

namespace cibn {

/// Faithful independence oracle: d-separation in a ground-truth DAG, conditioning on
/// observed nodes only. Variable i is the i-th observed node of `dag`.
struct OracleSource {
    Dag dag;
};

/// Independence decisions from sample data via the G-squared test.
struct StatisticalSource {
    Dataset data;
    double alpha = 0.05;
    /// Largest conditioning set tried during skeleton search.
    std::size_t max_condition_size = 3;
    /// When set, every test is logged as "x ⫫ y | S : p-value".
    std::ostream* audit = nullptr;
};

using IndependenceSource = std::variant<OracleSource, StatisticalSource>;

std::vector<std::string> variable_names(const IndependenceSource& src);

class CiContradiction : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Symmetric map from a removed pair to the set that separated it.
class SepsetTable {
public:
    void record(NodeId a, NodeId b, NodeSet s);
    const NodeSet* find(NodeId a, NodeId b) const;
    bool contains(NodeId a, NodeId b) const { return find(a, b) != nullptr; }
    std::size_t size() const { return table_.size(); }
    /// Entries keyed with first < second, ascending.
    const std::map<std::pair<NodeId, NodeId>, NodeSet>& entries() const { return table_; }

    bool operator==(const SepsetTable&) const = default;

private:
    std::map<std::pair<NodeId, NodeId>, NodeSet> table_;
};

enum class Rule { C, Dp, Ds, Dd, Dc };
const char* to_string(Rule r);

/// One change of edge-end marks on the edge a-b (a < b).
struct OrientationEvent {
    Rule rule;
    NodeId a;
    NodeId b;
    EndMark before_a;
    EndMark before_b;
    EndMark after_a;
    EndMark after_b;

    bool operator==(const OrientationEvent&) const = default;
};

struct PartialIPG {
    MixedGraph graph;
    SepsetTable sepsets;
    std::vector<OrientationEvent> log;
    /// Which rule introduced each non-collider triple (C or Dd).
    std::map<Triple, Rule> noncollider_origin;
};

/// Adjacency search: complete graph, then edge removal for every separable pair. Surviving edges
/// are circle/circle. Oracle sources try every subset of the other observed nodes; data
/// sources try subsets of current neighborhoods up to max_condition_size.
std::pair<MixedGraph, SepsetTable> skeleton(const IndependenceSource& src);

/// Marks every unshielded triple as a collider or a non-collider from its separating set.
PartialIPG orient_colliders(PartialIPG p);

/// First definite discriminating path from x to y for b, or nullopt.
std::optional<std::vector<NodeId>> find_definite_discriminating_path(const PartialIPG& p, NodeId x, NodeId y,
                                                                     NodeId b);
/// Visits every definite discriminating path from x to y for b in depth-first order
/// (ascending neighbors). Returning true from `visit` stops the walk.
void for_each_definite_discriminating_path(const MixedGraph& g, NodeId x, NodeId y, NodeId b,
                                           const std::function<bool(const std::vector<NodeId>&)>& visit);

/// Orientation loop: fires the highest-priority applicable rule instance, one per pass, until none
/// applies. Throws CiContradiction when a rule's conclusion clashes with a settled mark.
PartialIPG orient_loop(PartialIPG p, const IndependenceSource& src);

PartialIPG run_ci(const IndependenceSource& src);

}  // namespace cibn
