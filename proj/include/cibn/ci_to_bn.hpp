#pragma once

#include "cibn/ci_engine.hpp"
#include "cibn/graph.hpp"

#include <stdexcept>
#include <string>
#include <vector>

namespace cibn {

/// No orientation of the circle/circle edges satisfies the non-collider constraints and
/// acyclicity. `constraints` lists the triples involved, as "A B C".
class NoValidOrientation : public std::runtime_error {
public:
    NoValidOrientation(const std::string& what, std::vector<std::string> constraints)
        : std::runtime_error(what), constraints_(std::move(constraints)) {}
    const std::vector<std::string>& constraints() const { return constraints_; }

private:
    std::vector<std::string> constraints_;
};

/// Search counters. `cycle_rejections` counts assignments refused only because they
/// would close a directed cycle.
struct CompletionStats {
    std::size_t decisions = 0;
    std::size_t forced = 0;
    std::size_t backtracks = 0;
    std::size_t cycle_rejections = 0;
    std::size_t constraint_rejections = 0;
};

/// Keeps directed and bidirected edges, turns every o-> into ->, and orients each o-o edge
/// by backtracking in ascending edge order, preferring lower id -> higher id, with
/// propagation of non-collider constraints and incremental cycle checks.
MixedGraph complete_orientation(const MixedGraph& pi, CompletionStats* stats = nullptr);
inline MixedGraph complete_orientation(const PartialIPG& p, CompletionStats* stats = nullptr) {
    return complete_orientation(p.graph, stats);
}

/// Replaces every A <-> B by a fresh parentless node "L#<n>" with L -> A and L -> B.
/// Node i of the result is node i of `g`; auxiliary nodes follow in edge order.
BeliefNetwork expand_bidirected(const MixedGraph& g);

BeliefNetwork run_ci_to_bn(const PartialIPG& p, CompletionStats* stats = nullptr);

}  // namespace cibn
