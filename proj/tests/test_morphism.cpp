#include <doctest.h>

#include "outertrack/construction.hpp"
#include "outertrack/morphism.hpp"

#include <memory>
#include <random>

using namespace outertrack;

namespace {

// Random free-group automorphism of a rose as a morphism, built by composing
// Nielsen moves x -> xy; compositions that would cancel are skipped.
Morphism random_rose_automorphism(std::mt19937_64& rng, int petals, int moves) {
    auto rose = std::make_shared<MarkedGraph>(MarkedGraph::rose(petals));
    Morphism acc = Morphism::identity(rose);
    std::uniform_int_distribution<int> pick(0, petals - 1), coin(0, 1);
    for (int k = 0; k < moves; ++k) {
        int x = pick(rng), y = pick(rng);
        if (x == y) continue;
        HalfEdge hy = coin(rng) ? forward_half(y) : reversed(forward_half(y));
        std::vector<EdgePath> imgs;
        for (int e = 0; e < petals; ++e) {
            if (e == x)
                imgs.push_back(EdgePath::of(*rose, {forward_half(x), hy}));
            else
                imgs.push_back(EdgePath::of(*rose, {forward_half(e)}));
        }
        Morphism nielsen(rose, rose, {0}, std::move(imgs));
        try {
            acc = compose(acc, nielsen);
        } catch (const BacktrackError&) {
            // the sampled move cancels against the current images; skip it
        }
    }
    return acc;
}

}  // namespace

TEST_CASE("compose with the identity") {
    auto rose = std::make_shared<MarkedGraph>(MarkedGraph::rose(3));
    Morphism id = Morphism::identity(rose);
    std::mt19937_64 rng(1);
    Morphism f = random_rose_automorphism(rng, 3, 6);
    Morphism left = compose(id, f), right = compose(f, id);
    for (int e = 0; e < 3; ++e) {
        CHECK(left.forward_image(e) == f.forward_image(e));
        CHECK(right.forward_image(e) == f.forward_image(e));
    }
}

TEST_CASE("transition matrices are functorial under composition") {
    std::mt19937_64 rng(77);
    auto rose = std::make_shared<MarkedGraph>(MarkedGraph::rose(4));
    for (int trial = 0; trial < 40; ++trial) {
        Morphism f = random_rose_automorphism(rng, 4, 5);
        Morphism g = random_rose_automorphism(rng, 4, 5);
        Morphism gf;
        try {
            gf = compose(f, g);
        } catch (const BacktrackError&) {
            continue;
        }
        CHECK(transition_matrix(gf) == transition_matrix(g) * transition_matrix(f));
        CHECK(abelianized_matrix(gf) == abelianized_matrix(g) * abelianized_matrix(f));
    }
}

TEST_CASE("fold of two rose petals is type II and drops rank") {
    auto r2 = std::make_shared<MarkedGraph>(MarkedGraph::rose(2));
    FoldResult fr = fold_once(r2, forward_half(0), forward_half(1));
    CHECK(fr.type == FoldType::II);
    CHECK(fr.graph->rank() == 1);
    CHECK(fr.graph->edge_count() == 1);
}

TEST_CASE("fold of two edges sharing only the initial vertex is type I") {
    // two edges from vertex 0 to distinct vertices
    auto g = std::make_shared<MarkedGraph>(
        MarkedGraph(3, {{0, 1, "x"}, {0, 2, "y"}, {1, 1, "l"}, {2, 2, "m"}}));
    int rank_before = g->rank();
    FoldResult fr = fold_once(g, forward_half(0), forward_half(1));
    CHECK(fr.type == FoldType::I);
    CHECK(fr.graph->rank() == rank_before);
    CHECK(fr.graph->vertex_count() == 2);
}

TEST_CASE("fold preconditions") {
    auto r2 = std::make_shared<MarkedGraph>(MarkedGraph::rose(2));
    CHECK_THROWS_AS(fold_once(r2, forward_half(0), forward_half(0)), InvalidFold);
    CHECK_THROWS_AS(fold_once(r2, forward_half(0), reversed(forward_half(0))), InvalidFold);
}

TEST_CASE("identity decomposes into no folds") {
    auto rose = std::make_shared<MarkedGraph>(MarkedGraph::rose(3));
    FoldDecomposition d = fold_decomposition(Morphism::identity(rose));
    CHECK(d.folds.empty());
}

TEST_CASE("a single coincidence of direction images gives exactly one type I fold") {
    // x, y from 0 to 1 and 2; map both onto the single edge of the target
    auto src = std::make_shared<MarkedGraph>(
        MarkedGraph(3, {{0, 1, "x"}, {0, 2, "y"}, {1, 1, "l"}, {2, 2, "m"}}));
    auto dst = std::make_shared<MarkedGraph>(MarkedGraph(2, {{0, 1, "e"}, {1, 1, "l"}, {1, 1, "m"}}));
    std::vector<EdgePath> imgs{EdgePath::of(*dst, {forward_half(0)}),
                               EdgePath::of(*dst, {forward_half(0)}),
                               EdgePath::of(*dst, {forward_half(1)}),
                               EdgePath::of(*dst, {forward_half(2)})};
    Morphism f(src, dst, {0, 1, 1}, std::move(imgs));
    FoldDecomposition d = fold_decomposition(f);
    CHECK(d.folds.size() == 1);
    CHECK(d.folds[0].type == FoldType::I);
    CHECK(transition_matrix(recompose(d)) == transition_matrix(f));
}

TEST_CASE("fold decomposition recomposes 200 random homotopy equivalences") {
    std::mt19937_64 rng(4096);
    int done = 0;
    while (done < 200) {
        int petals = 2 + static_cast<int>(rng() % 3);
        Morphism f = random_rose_automorphism(rng, petals, 4 + static_cast<int>(rng() % 5));
        FoldDecomposition d = fold_decomposition(f);
        Morphism back = recompose(d);
        CHECK(transition_matrix(back) == transition_matrix(f));
        // edge images agree after un-subdivision
        for (int e = 0; e < petals; ++e)
            CHECK(back.forward_image(e).expand() == f.forward_image(e).expand());
        ++done;
    }
}

TEST_CASE("rank mismatch is rejected") {
    auto r2 = std::make_shared<MarkedGraph>(MarkedGraph::rose(2));
    auto r1 = std::make_shared<MarkedGraph>(MarkedGraph::rose(1));
    std::vector<EdgePath> imgs{EdgePath::of(*r1, {forward_half(0)}),
                               EdgePath::of(*r1, {forward_half(0)})};
    Morphism collapse(r2, r1, {0}, std::move(imgs));
    CHECK_THROWS_AS(fold_decomposition(collapse), NotHomotopyEquivalence);
}

TEST_CASE("identity induces all-singleton gates") {
    auto rose = std::make_shared<MarkedGraph>(MarkedGraph::rose(3));
    TrainTrack tt = induced_train_track(Morphism::identity(rose));
    for (const auto& gate : tt.gates()) CHECK(gate.size() == 1);
    CHECK(illegal_turn_count(*rose, tt) == 0);
}

TEST_CASE("legality: single edges and subpaths") {
    auto rose = std::make_shared<MarkedGraph>(MarkedGraph::rose(2));
    TrainTrack tt = TrainTrack::discrete(*rose);
    EdgePath single = EdgePath::of(*rose, {forward_half(0)});
    CHECK(is_legal_path(single, *rose, tt));
    // grouping a with ~b makes the turn from a into b illegal
    TrainTrack grouped =
        TrainTrack::with_gates(*rose, {{reversed(forward_half(0)), forward_half(1)}});
    EdgePath ab = EdgePath::of(*rose, {forward_half(0), forward_half(1)});
    CHECK_FALSE(is_legal_path(ab, *rose, grouped));
    CHECK(is_legal_path(ab, *rose, tt));
}

TEST_CASE("legality is monotone under taking subpaths") {
    GammaGraph g = build_gamma(5);
    ConstructionParams params = ConstructionParams::uniform(5, 2, 3);
    Morphism F = big_F(g, params);
    std::mt19937_64 rng(99);
    for (int e = 0; e < g.graph()->edge_count(); ++e) {
        std::vector<HalfEdge> word = F.forward_image(e).expand();
        REQUIRE(is_legal_path(F.forward_image(e), *g.graph(), g.train_track()));
        for (int trial = 0; trial < 10; ++trial) {
            std::size_t lo = rng() % word.size();
            std::size_t hi = lo + 1 + rng() % (word.size() - lo);
            std::vector<HalfEdge> sub(word.begin() + lo, word.begin() + hi);
            CHECK(is_legal_path(EdgePath::of(*g.graph(), sub), *g.graph(), g.train_track()));
        }
    }
}

TEST_CASE("the rank-4 construction map decomposes into folds and recomposes") {
    GammaGraph g = build_gamma(4);
    ConstructionParams params = ConstructionParams::uniform(4, 1, 1);
    Morphism F = big_F(g, params);
    FoldDecomposition d = fold_decomposition(F);
    CHECK(!d.folds.empty());
    for (const FoldResult& fr : d.folds) CHECK(fr.type == FoldType::I);
    Morphism back = recompose(d);
    CHECK(transition_matrix(back) == transition_matrix(F));
    for (int e = 0; e < g.graph()->edge_count(); ++e)
        CHECK(back.forward_image(e).expand() == F.forward_image(e).expand());
}
