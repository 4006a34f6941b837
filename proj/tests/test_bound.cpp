#include <doctest.h>

#include "outertrack/bound.hpp"
#include "outertrack/game.hpp"
#include "outertrack/measure.hpp"

using namespace outertrack;

namespace {

// n loops on a line of vertices joined by n-1 path edges: rank n, and the
// decomposition into singletons realizes the 2n-1 equality branch.
MarkedGraph loop_chain(int n) {
    std::vector<MarkedGraph::Edge> edges;
    for (int i = 0; i < n; ++i) edges.push_back({i, i, "l_" + std::to_string(i)});
    for (int i = 0; i + 1 < n; ++i) edges.push_back({i, i + 1, "p_" + std::to_string(i)});
    return MarkedGraph(n, std::move(edges));
}

}  // namespace

TEST_CASE("chi_minus unit values") {
    CHECK(chi_minus(MarkedGraph::rose(5)).total == 4);  // rose: n - 1
    MarkedGraph theta(2, {{0, 1, "x"}, {0, 1, "y"}, {0, 1, "z"}});
    CHECK(chi_minus(theta).total == 1);
    MarkedGraph two_circles(2, {{0, 0, "x"}, {1, 1, "y"}});
    CHECK(chi_minus(two_circles).total == 0);
    // contractible input allowed
    MarkedGraph arc(2, {{0, 1, "x"}});
    CHECK(chi_minus(arc).total == 0);
    CHECK(chi_minus(arc).non_contractible.empty());
}

TEST_CASE("chi_minus is additive over disjoint unions") {
    MarkedGraph a = MarkedGraph::rose(3), b = MarkedGraph::rose(2);
    MarkedGraph u = MarkedGraph::disjoint_union(a, b);
    CHECK(chi_minus(u).total == chi_minus(a).total + chi_minus(b).total);
}

TEST_CASE("mixing certificate finds the positivity depth") {
    GameResult res = run_game(5, 4, Direction::Folding, 6);
    auto d0 = mixing_certificate(res.run, Int(0));
    REQUIRE(d0.has_value());
    CHECK(res.run.cumulative(0, *d0).entrywise_greater_than(Int(0)));
    if (*d0 > 1) CHECK_FALSE(res.run.cumulative(0, *d0 - 1).entrywise_greater_than(Int(0)));
    auto d100 = mixing_certificate(res.run, Int(100));
    REQUIRE(d100.has_value());
    CHECK(*d100 >= *d0);  // monotone in K
    auto dhuge = mixing_certificate(res.run, Int("1") << 2000);
    CHECK_FALSE(dhuge.has_value());  // NotWithinHorizon as a value
}

TEST_CASE("edge order recovers synthetic growth rates") {
    // block growth 3^s vs 2^s vs 2^s: strict order plus a tie
    ExactMatrix step(3, 3);
    step.at(0, 0) = 3;
    step.at(1, 1) = 2;
    step.at(2, 2) = 2;
    SequenceRun run = synthetic_run(Direction::Folding, 3, std::vector<ExactMatrix>(9, step),
                                    {"fast", "slow", "slow2"});
    EdgeOrder order = estimate_edge_order(run, 9, Rat(3, 2));
    REQUIRE(order.complete());
    REQUIRE(order.classes.size() == 2);
    // folding: larger growth = wider = smaller in the order
    CHECK(order.classes[0] == std::vector<std::size_t>{0});
    CHECK(order.classes[1] == (std::vector<std::size_t>{1, 2}));
}

TEST_CASE("edge order flags unclassifiable pairs") {
    // oscillating growth cannot settle within margin
    ExactMatrix a(2, 2), b(2, 2);
    a.at(0, 0) = 9;
    a.at(1, 1) = 1;
    b.at(0, 0) = 1;
    b.at(1, 1) = 9;
    std::vector<ExactMatrix> steps{a, b, a, b, a, b};
    SequenceRun run = synthetic_run(Direction::Folding, 2, steps);
    EdgeOrder order = estimate_edge_order(run, 6, Rat(2));
    CHECK_FALSE(order.complete());
}

TEST_CASE("witness loops: single edge, gap scan, graph search, forbidden") {
    GammaGraph g = build_gamma(5);
    const MarkedGraph& G = *g.graph();
    // a single-edged loop witnesses itself
    auto self_loop = witness_loop(G, std::nullopt, g.b_edge(0), {});
    REQUIRE(self_loop.has_value());
    CHECK(self_loop->length() == 1);
    // gap scan over the expanded F-image of c at n = 5
    ConstructionParams params = ConstructionParams::uniform(5, 2, 2);
    Morphism F = big_F(g, params);
    EdgePath fc = F.apply(F.forward_image(g.c_edge()));
    auto through_a1 = witness_loop(G, fc, g.a_edge(1), {});
    REQUIRE(through_a1.has_value());
    CHECK(through_a1->crossings(g.a_edge(1)) > 0);
    // graph-search fallback
    auto through_a0 = witness_loop(G, std::nullopt, g.a_edge(0), {g.c_edge()});
    REQUIRE(through_a0.has_value());
    CHECK(through_a0->crossings(g.c_edge()) == 0);
    CHECK(through_a0->crossings(g.a_edge(0)) > 0);
    // every other edge forbidden and e not a loop: no witness
    std::vector<int> all_but;
    for (int e = 0; e < G.edge_count(); ++e)
        if (e != g.a_edge(0)) all_but.push_back(e);
    CHECK_FALSE(witness_loop(G, std::nullopt, g.a_edge(0), all_but).has_value());
}

TEST_CASE("audit: trivial decomposition of a rose holds with slack") {
    MarkedGraph rose = MarkedGraph::rose(4);
    std::vector<std::vector<int>> decomposition{{}, {0, 1, 2, 3}};
    EdgeOrder order;
    order.classes = {{0, 1, 2, 3}};
    AuditReport rep = upper_bound_audit(rose, decomposition, order);
    CHECK(rep.holds);
    CHECK(rep.k == 1);
    CHECK(rep.s == 4);  // all petals are single-edged loops
    CHECK(rep.bound <= 2 * 4 - 1);
}

TEST_CASE("audit: the loop-chain equality branch realizes k = 2n-1") {
    int n = 4;
    MarkedGraph g = loop_chain(n);
    CHECK(g.rank() == n);
    // decomposition: every edge its own measure class H^1..H^{2n-1}
    std::vector<std::vector<int>> decomposition{{}};
    for (int e = 0; e < g.edge_count(); ++e) decomposition.push_back({e});
    // order: loops first, then path edges left to right
    EdgeOrder order;
    order.classes.push_back({0, 1, 2, 3});
    for (int j = 0; j + 1 < n; ++j) order.classes.push_back({static_cast<std::size_t>(n + j)});
    AuditReport rep = upper_bound_audit(g, decomposition, order);
    CHECK(rep.holds);
    CHECK(rep.s == n);
    CHECK(rep.m == 0);
    CHECK(rep.k == 2 * n - 1);
    CHECK(rep.bound == 2 * n - 1);
    CHECK(static_cast<int>(rep.additions.size()) == n - 1);
    for (const auto& add : rep.additions) CHECK(add.chi_after == add.chi_before + 1);
}

TEST_CASE("audit rejects an order that fails to raise complexity") {
    // two loops at one vertex plus an isolated-vertex edge: adding the edge
    // between the same component twice cannot raise chi twice
    MarkedGraph g(2, {{0, 0, "l"}, {0, 1, "p"}, {0, 1, "q"}});
    std::vector<std::vector<int>> decomposition{{}, {1}, {2}, {0}};
    EdgeOrder order;
    order.classes = {{0}, {1}, {2}};
    // p alone is contractible: attaching it raises nothing
    CHECK_THROWS_AS(upper_bound_audit(g, decomposition, order), OrderViolation);
}

TEST_CASE("audit blocked on incomplete order") {
    MarkedGraph rose = MarkedGraph::rose(2);
    std::vector<std::vector<int>> decomposition{{}, {0}, {1}};
    EdgeOrder order;
    order.classes = {{0}, {1}};
    order.unclassified.push_back({0, 1});
    CHECK_THROWS_AS(upper_bound_audit(rose, decomposition, order), OrderViolation);
}

TEST_CASE("audit accepts the measure-lab decomposition of the n = 5 run") {
    GameResult res = run_game(5, 4, Direction::Folding, 8);
    DecompositionReport dec = approximate_retraction(res.run, 8, Rat(1));
    REQUIRE(dec.blocks.size() >= 4);
    // translate into the audit's shape over the gamma graph's natural ids
    GammaGraph g = build_gamma(5);
    auto order_edges = folding_edge_order(g);
    std::vector<std::vector<int>> decomposition;
    decomposition.push_back({});
    for (std::size_t e : dec.h0) decomposition[0].push_back(order_edges[e]);
    for (const auto& block : dec.blocks) {
        std::vector<int> part;
        for (std::size_t e : block) part.push_back(order_edges[e]);
        decomposition.push_back(part);
    }
    for (std::size_t e : dec.unresolved) decomposition[0].push_back(order_edges[e]);
    EdgeOrder order = estimate_edge_order(res.run, 8, Rat(2));
    // map order classes from run positions to edge ids
    for (auto& cls : order.classes)
        for (auto& e : cls) e = static_cast<std::size_t>(order_edges[e]);
    AuditReport rep = upper_bound_audit(*g.graph(), decomposition, order);
    CHECK(rep.holds);
    CHECK(rep.k >= 4);
    CHECK(rep.k <= 2 * 5 - 1);
}

TEST_CASE("unfolding edge order compares pulled-back lengths") {
    // lengths are column sums: block growth 5^s vs 2^s, shorter edge first
    ExactMatrix step(2, 2);
    step.at(0, 0) = 5;
    step.at(1, 1) = 2;
    SequenceRun run = synthetic_run(Direction::Unfolding, 2, std::vector<ExactMatrix>(8, step),
                                    {"long", "short"});
    EdgeOrder order = estimate_edge_order(run, 8, Rat(3, 2));
    REQUIRE(order.complete());
    REQUIRE(order.classes.size() == 2);
    CHECK(order.classes[0] == std::vector<std::size_t>{1});  // slower length growth first
    CHECK(order.classes[1] == std::vector<std::size_t>{0});
}

TEST_CASE("audit additions carry corroborating witness loops") {
    int n = 4;
    std::vector<MarkedGraph::Edge> edges;
    for (int i = 0; i < n; ++i) edges.push_back({i, i, "l_" + std::to_string(i)});
    for (int i = 0; i + 1 < n; ++i) edges.push_back({i, i + 1, "p_" + std::to_string(i)});
    MarkedGraph chain(n, std::move(edges));
    std::vector<std::vector<int>> decomposition{{}};
    for (int e = 0; e < chain.edge_count(); ++e) decomposition.push_back({e});
    EdgeOrder order;
    order.classes.push_back({0, 1, 2, 3});
    for (int j = 0; j + 1 < n; ++j) order.classes.push_back({static_cast<std::size_t>(n + j)});
    AuditReport rep = upper_bound_audit(chain, decomposition, order);
    for (const auto& add : rep.additions) {
        REQUIRE(add.witness.has_value());
        bool through = false;
        for (int e : add.edges)
            if (add.witness->crossings(e) > 0) through = true;
        CHECK(through);
    }
}
