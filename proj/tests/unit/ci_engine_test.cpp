#include "test_support.hpp"

#include "cibn/ci_engine.hpp"
#include "cibn/graph_file.hpp"
#include "cibn/latent.hpp"
#include "cibn/verify.hpp"

#include <doctest.h>

#include <sstream>

using namespace cibn;
using testsupport::make_dag;
using testsupport::mixed;

namespace {

PartialIPG oracle_ci(const Dag& g) {
    return run_ci(OracleSource{g});
}

std::size_t count_rule(const PartialIPG& p, Rule r) {
    return static_cast<std::size_t>(std::count_if(p.log.begin(), p.log.end(), [&](const auto& e) { return e.rule == r; }));
}

PartialIPG partial(const MixedGraph& g) {
    PartialIPG p;
    p.graph = g;
    return p;
}

}  // namespace

TEST_CASE("skeleton search with the oracle") {
    Dag chain = make_dag({"A->B", "B->C"});
    auto [g, seps] = skeleton(OracleSource{chain});
    CHECK(print_graph(g) == "node A\nnode B\nnode C\nA o-o B\nB o-o C\n");
    REQUIRE(seps.contains(NodeId(0), NodeId(2)));
    CHECK(*seps.find(NodeId(2), NodeId(0)) == NodeSet{NodeId(1)});

    Dag coll = make_dag({"A->B", "C->B"});
    auto [gc, sc] = skeleton(OracleSource{coll});
    CHECK(gc.edge_count() == 2);
    CHECK(sc.find(NodeId(0), NodeId(2))->empty());

    Dag f = testsupport::five_node_dag();
    auto [gf, sf] = skeleton(OracleSource{f});
    CHECK(gf.edge_count() == 7);
    for (auto [p, c] : f.edges()) CHECK(gf.ends(p, c) == std::pair{EndMark::circle, EndMark::circle});
    CHECK(sf.size() == 3);
}

TEST_CASE("unshielded triples: chain, fork and collider") {
    PartialIPG chain = oracle_ci(make_dag({"A->B", "B->C"}));
    CHECK(chain.graph.is_noncollider(NodeId(0), NodeId(1), NodeId(2)));
    CHECK(chain.graph.mark_at(NodeId(1), NodeId(0)) == EndMark::circle);
    CHECK(chain.graph.mark_at(NodeId(1), NodeId(2)) == EndMark::circle);
    CHECK(chain.noncollider_origin.at(Triple{NodeId(0), NodeId(1), NodeId(2)}) == Rule::C);
    CHECK(chain.log.empty());

    PartialIPG fork = oracle_ci(make_dag({"B->A", "B->C"}, {}, {"A", "B", "C"}));
    CHECK(fork.graph.is_noncollider(NodeId(0), NodeId(1), NodeId(2)));
    CHECK(fork.log.empty());

    PartialIPG coll = oracle_ci(make_dag({"A->B", "C->B"}));
    CHECK(print_graph(coll.graph) == "node A\nnode B\nnode C\nA o-> B\nC o-> B\n");
    CHECK(coll.graph.noncolliders().empty());
    CHECK(count_rule(coll, Rule::C) == 2);
}

TEST_CASE("reference DAG comes back with every edge undetermined") {
    PartialIPG p = oracle_ci(testsupport::five_node_dag());
    CHECK(p.graph.edge_count() == 7);
    for (const auto& e : p.graph.edges()) {
        CHECK(e.at_a == EndMark::circle);
        CHECK(e.at_b == EndMark::circle);
    }
    CHECK(p.log.empty());
    // its unshielded triples all carry a separating centre
    CHECK(p.graph.noncolliders().size() == 5);
}

TEST_CASE("single edge and hidden common causes carry no orientation") {
    CHECK(print_graph(oracle_ci(make_dag({"A->B"})).graph) == "node A\nnode B\nA o-o B\n");

    // A and B are adjacent through H, so no triple around X is unshielded
    Dag g = make_dag({"H->A", "H->B", "A->X", "B->X"}, {"H"});
    PartialIPG p = oracle_ci(g);
    CHECK(print_graph(p.graph) == "node A\nnode B\nnode X\nA o-o B\nA o-o X\nB o-o X\n");
    CHECK_FALSE(soundness_mismatch(p.graph, build_fhd(g)).has_value());

    Dag g2 = make_dag({"H->A", "H->B", "A->C", "B->C"}, {"H"});
    PartialIPG p2 = oracle_ci(g2);
    for (const auto& e : p2.graph.edges()) CHECK(e.at_a == EndMark::circle);
    CHECK_FALSE(soundness_mismatch(p2.graph, build_fhd(g2)).has_value());
}

TEST_CASE("definite discriminating path") {
    MixedGraph g = mixed("node X\nnode V\nnode B\nnode Y\nX -> V\nB o-> V\nV -> Y\nB o-o Y\n");
    PartialIPG p = partial(g);
    auto path = find_definite_discriminating_path(p, g.require("X"), g.require("Y"), g.require("B"));
    REQUIRE(path.has_value());
    CHECK(*path == std::vector<NodeId>{g.require("X"), g.require("V"), g.require("B"), g.require("Y")});

    // V no longer points into Y: not discriminating
    MixedGraph weak = mixed("node X\nnode V\nnode B\nnode Y\nX -> V\nB o-> V\nV o-o Y\nB o-o Y\n");
    CHECK_FALSE(find_definite_discriminating_path(partial(weak), NodeId(0), NodeId(3), NodeId(2)).has_value());

    MixedGraph adj = mixed("X -> V\nB o-> V\nV -> Y\nB o-o Y\nX o-o Y\n");
    CHECK_FALSE(find_definite_discriminating_path(partial(adj), adj.require("X"), adj.require("Y"), adj.require("B")).has_value());

    MixedGraph empty(std::vector<std::string>{"X", "V", "B", "Y"});
    CHECK_FALSE(find_definite_discriminating_path(partial(empty), NodeId(0), NodeId(3), NodeId(2)).has_value());
}

TEST_CASE("rule Dp: a directed path forces an arrowhead") {
    Dag truth = make_dag({"A->B", "B->C", "A->C"});
    PartialIPG p = partial(mixed("A -> B\nB -> C\nA o-o C\n"));
    p = orient_loop(std::move(p), OracleSource{truth});
    CHECK(p.graph.ends(NodeId(0), NodeId(2)) == std::pair{EndMark::circle, EndMark::arrow});
    REQUIRE(p.log.size() == 1);
    CHECK(p.log[0] == OrientationEvent{Rule::Dp, NodeId(0), NodeId(2), EndMark::circle, EndMark::circle,
                                       EndMark::circle, EndMark::arrow});
}

TEST_CASE("rule Dc: arrow into a non-collider centre continues as a tail") {
    Dag truth = make_dag({"A->B", "B->C"});
    PartialIPG p = partial(mixed("A o-> B\nB o-o C\nnoncollider A B C\n"));
    p = orient_loop(std::move(p), OracleSource{truth});
    CHECK(is_directed(p.graph, NodeId(1), NodeId(2)));
    REQUIRE(p.log.size() == 1);
    CHECK(p.log[0].rule == Rule::Dc);

    PartialIPG full = oracle_ci(make_dag({"X0->X2", "X1->X2", "X2->X3"}, {}, {"X0", "X1", "X2", "X3"}));
    CHECK(print_graph(full.graph) ==
          "node X0\nnode X1\nnode X2\nnode X3\nX0 o-> X2\nX1 o-> X2\nX2 -> X3\nnoncollider X0 X2 X3\nnoncollider X1 X2 X3\n");
    CHECK(count_rule(full, Rule::Dc) == 1);
}

TEST_CASE("rule Ds: a separating set through D keeps D out of the collider's descendants") {
    // D is the common cause separating A and C; B is their common effect
    Dag truth = make_dag({"A->B", "C->B", "D->A", "D->B", "D->C"}, {}, {"A", "B", "C", "D"});
    PartialIPG p = oracle_ci(truth);
    CHECK(p.graph.ends(truth.require("D"), truth.require("B")) == std::pair{EndMark::circle, EndMark::arrow});
    CHECK(count_rule(p, Rule::Ds) == 1);
    CHECK_FALSE(soundness_mismatch(p.graph, build_fhd(truth)).has_value());

    // D below the collider: every set containing D connects A and C, so Ds stays silent
    Dag below = make_dag({"A->B", "C->B", "B->D"});
    PartialIPG q = oracle_ci(below);
    CHECK(count_rule(q, Rule::Ds) == 0);
    CHECK(is_directed(q.graph, below.require("B"), below.require("D")));
}

TEST_CASE("rule Dd: discriminating path with the centre in the separating set") {
    Dag truth = make_dag({"X0->X2", "X1->X0", "X1->X2", "X3->X0"}, {}, {"X0", "X1", "X2", "X3"});
    PartialIPG p = oracle_ci(truth);
    CHECK(print_graph(p.graph) == "node X0\nnode X1\nnode X2\nnode X3\nX1 o-> X0\nX0 -> X2\nX3 o-> X0\nX1 o-> X2\n"
                                  "noncollider X0 X1 X2\nnoncollider X2 X0 X3\n");
    CHECK(p.noncollider_origin.at(Triple{NodeId(0), NodeId(1), NodeId(2)}) == Rule::Dd);
    CHECK(*p.sepsets.find(NodeId(2), NodeId(3)) == (NodeSet{NodeId(0), NodeId(1)}));
    CHECK_FALSE(soundness_mismatch(p.graph, build_fhd(truth)).has_value());
}

TEST_CASE("conflicting conclusions raise a contradiction") {
    // A directed path A -> B -> C wants an arrow at C, but C already has a tail.
    Dag truth = make_dag({"A->B", "B->C", "A->C"});
    PartialIPG p = partial(mixed("A -> B\nB -> C\nC -o A\n"));
    CHECK_THROWS_AS(orient_loop(std::move(p), OracleSource{truth}), CiContradiction);

    PartialIPG q = partial(mixed("A -> B\nC -> B\nnoncollider A B C\n"));
    CHECK_THROWS_AS(orient_loop(std::move(q), OracleSource{make_dag({"A->B", "C->B"})}), CiContradiction);
}

TEST_CASE("statistical source on chain data") {
    std::ostringstream audit;
    StatisticalSource src{testsupport::sample_chain(31, 10000), 0.05, 3, &audit};
    PartialIPG p = run_ci(src);
    CHECK(print_graph(p.graph) == "node A\nnode B\nnode C\nA o-o B\nB o-o C\nnoncollider A B C\n");
    CHECK(audit.str().find("A ⫫ C | {B} : ") != std::string::npos);
    CHECK(variable_names(src) == std::vector<std::string>{"A", "B", "C"});
}

TEST_CASE("property: marks only leave circles, never tail/tail, bounded and deterministic") {
    for (std::size_t t = 0; t < 400; ++t) {
        TrialConfig cfg;
        cfg.n_observed = 4 + t % 4;
        cfg.n_hidden = t % 3;
        cfg.edge_probability = t % 2 ? 0.45 : 0.3;
        cfg.seed = 404;
        Dag g = random_dag(cfg, t);
        PartialIPG p = oracle_ci(g);
        for (const auto& e : p.log) {
            if (e.before_a != e.after_a) REQUIRE(e.before_a == EndMark::circle);
            if (e.before_b != e.after_b) REQUIRE(e.before_b == EndMark::circle);
            REQUIRE_FALSE((e.after_a == EndMark::tail && e.after_b == EndMark::tail));
        }
        for (const auto& e : p.graph.edges()) REQUIRE_FALSE((e.at_a == EndMark::tail && e.at_b == EndMark::tail));
        REQUIRE(p.log.size() <= 2 * p.graph.edge_count());
        PartialIPG again = oracle_ci(g);
        REQUIRE(again.graph == p.graph);
        REQUIRE(again.log == p.log);
        REQUIRE(again.sepsets == p.sepsets);
    }
}
