#pragma once

#include "cibn/graph.hpp"

#include <optional>
#include <stdexcept>
#include <vector>

namespace cibn {

/// Raised when an exhaustive path search is asked to run on a graph above its node budget.
class BudgetError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

inline constexpr std::size_t kDefaultNodeBudget = 16;

enum class IncludingPathKind {
    none,
    out_into,   // some qualifying path leaves a through a tail and enters b with an arrowhead
    into_into,  // some qualifying path has arrowheads at both a and b
};

const char* to_string(IncludingPathKind kind);

/// Classifies the including paths between observed nodes a and b by walking every simple
/// path of `g`. A path qualifies when each interior observed node is a collider on it, and
/// each interior collider (observed or hidden) is an ancestor of a or b. into_into takes
/// precedence over out_into.
IncludingPathKind including_path_kind(const Dag& g, NodeId a, NodeId b,
                                      std::size_t node_budget = kDefaultNodeBudget);

/// Including path graph over the observed nodes of `g`, in ascending id order. Node i of
/// the result is g.observed()[i]; labels are carried over. Never contains circle marks.
MixedGraph build_fhd(const Dag& g, std::size_t node_budget = kDefaultNodeBudget);

/// Looks for a path A, B1..Bn, C (n >= 3) between non-adjacent A and C with A *-> B1,
/// Bi <-> Bi+1, Bn <-* C, an edge Bi -> A for every i >= 2, and Bj -> C for some 1 < j < n.
/// The first hit found is returned as the node sequence A, B1..Bn, C.
std::optional<std::vector<NodeId>> find_forbidden_collider_chain(const MixedGraph& g);

}  // namespace cibn
