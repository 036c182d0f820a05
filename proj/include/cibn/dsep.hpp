#pragma once

#include "cibn/graph.hpp"

#include <map>
#include <optional>
#include <utility>

namespace cibn {

struct SeparationQuery {
    NodeId x;
    NodeId y;
    NodeSet conditioning;
};

/// Reachability ("Bayes ball") d-separation test. Conditioning sets may only hold
/// observed nodes; hidden nodes take part in paths but are never conditioned on.
bool d_separated(const Dag& g, const SeparationQuery& q);
inline bool d_separated(const Dag& g, NodeId x, NodeId y, const NodeSet& z) {
    return d_separated(g, SeparationQuery{x, y, z});
}

/// Reference implementation: walks every simple undirected path between x and y and
/// checks the active-path condition node by node. Exponential; meant as an oracle.
bool d_separated_exhaustive(const Dag& g, const SeparationQuery& q);
inline bool d_separated_exhaustive(const Dag& g, NodeId x, NodeId y, const NodeSet& z) {
    return d_separated_exhaustive(g, SeparationQuery{x, y, z});
}

/// True iff every S ⊆ observed \ {a, b} with c ∈ S leaves a and b d-connected.
bool d_connected_given_node(const Dag& g, const NodeSet& observed, NodeId a, NodeId b, NodeId c);

/// For each observed pair (a < b): the first smallest separating subset of
/// observed \ {a, b}, or nullopt when no subset separates the pair.
std::map<std::pair<NodeId, NodeId>, std::optional<NodeSet>> all_separations(const Dag& g, const NodeSet& observed);

}  // namespace cibn
