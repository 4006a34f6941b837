// Acceptance suite: one line per criterion, exact comparisons throughout.
// Exits nonzero when any criterion fails.

#include "outertrack/bound.hpp"
#include "outertrack/core_graph.hpp"
#include "outertrack/game.hpp"
#include "outertrack/measure.hpp"

#include <chrono>
#include <functional>
#include <iostream>
#include <random>

using namespace outertrack;
using Clock = std::chrono::steady_clock;

namespace {

int failures = 0;

void criterion(int number, const std::string& label, const std::function<bool()>& body) {
    auto t0 = Clock::now();
    bool ok = false;
    std::string note;
    try {
        ok = body();
    } catch (const std::exception& ex) {
        note = std::string(" (") + ex.what() + ")";
    }
    double secs = std::chrono::duration<double>(Clock::now() - t0).count();
    std::printf("[%s] criterion %2d: %s%s (%.1fs)\n", ok ? "PASS" : "FAIL", number, label.c_str(),
                note.c_str(), secs);
    std::fflush(stdout);
    if (!ok) ++failures;
}

ConstructionParams grid_params(int n, int which) {
    ConstructionParams p;
    p.n = n;
    for (int i = 1; i <= n - 3; ++i) {
        switch (which) {
            case 0:
                p.alphas.push_back(1);
                p.betas.push_back(1);
                break;
            case 1:
                p.alphas.push_back(1 + (i % 3));
                p.betas.push_back(2 + (i % 2));
                break;
            default:
                p.alphas.push_back(5 + i);
                p.betas.push_back(3);
        }
    }
    return p;
}

std::size_t pos_of(const std::vector<int>& order, int edge) {
    for (std::size_t i = 0; i < order.size(); ++i)
        if (order[i] == edge) return i;
    throw std::logic_error("edge not in order");
}

ExactMatrix random_positive_diag(std::mt19937_64& rng, std::size_t n) {
    std::uniform_int_distribution<int> off(0, 6), diag(1, 20);
    ExactMatrix m(n, n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) m.at(i, j) = i == j ? diag(rng) : off(rng);
    return m;
}

ExactMatrix random_cascade(std::mt19937_64& rng, std::size_t n, std::size_t m) {
    std::uniform_int_distribution<int> noise(0, 4), grow(6, 12);
    ExactMatrix a(n, n);
    Int diag = 1;
    for (std::size_t j = m; j-- > 0;) {
        diag *= grow(rng);
        a.at(j, j) = diag;
    }
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            if (i != j || j >= m) a.at(i, j) = noise(rng);
    for (std::size_t j = m; j < n; ++j)
        if (a.at(j, j) == 0) a.at(j, j) = 1;
    return a;
}

Morphism random_rose_automorphism(std::mt19937_64& rng, int petals, int moves,
                                  const std::shared_ptr<const MarkedGraph>& rose) {
    Morphism acc = Morphism::identity(rose);
    std::uniform_int_distribution<int> pick(0, petals - 1), coin(0, 1);
    for (int k = 0; k < moves; ++k) {
        int x = pick(rng), y = pick(rng);
        if (x == y) continue;
        HalfEdge hy = coin(rng) ? forward_half(y) : reversed(forward_half(y));
        std::vector<EdgePath> imgs;
        for (int e = 0; e < petals; ++e)
            imgs.push_back(e == x ? EdgePath::of(*rose, {forward_half(x), hy})
                                  : EdgePath::of(*rose, {forward_half(e)}));
        Morphism nielsen(rose, rose, {0}, std::move(imgs));
        try {
            acc = compose(acc, nielsen);
        } catch (const BacktrackError&) {
        }
    }
    return acc;
}

std::vector<HalfEdge> random_loop(std::mt19937_64& rng, const GammaGraph& g, int len) {
    const MarkedGraph& G = *g.graph();
    while (true) {
        std::vector<HalfEdge> w;
        int at = 0;
        for (int k = 0; k < len; ++k) {
            std::vector<HalfEdge> options;
            for (HalfEdge d : G.directions_at(at))
                if (w.empty() || d != reversed(w.back())) options.push_back(d);
            HalfEdge pickd = options[rng() % options.size()];
            w.push_back(pickd);
            at = G.term_vertex(pickd);
        }
        if (at != 0 || w.back() == reversed(w.front())) continue;
        return w;
    }
}

ExactMatrix block2(int a00, int a01, int a10, int a11) {
    ExactMatrix m(2, 2);
    m.at(0, 0) = a00;
    m.at(0, 1) = a01;
    m.at(1, 0) = a10;
    m.at(1, 1) = a11;
    return m;
}

}  // namespace

int main() {
    criterion(1, "construction identity over n in {4..8} and the parameter grid", [] {
        for (int n = 4; n <= 8; ++n) {
            GammaGraph gamma = build_gamma(n);
            auto order = folding_edge_order(gamma);
            for (int which = 0; which < 3; ++which) {
                ConstructionParams p = grid_params(n, which);
                if (transition_matrix(big_F(gamma, p), order, order) !=
                    closed_form_M(p, Direction::Folding))
                    return false;
            }
        }
        return true;
    });

    criterion(2, "spot entries of the n = 6 transition matrix", [] {
        GammaGraph gamma = build_gamma(6);
        ConstructionParams p = grid_params(6, 1);
        auto order = folding_edge_order(gamma);
        ExactMatrix m = transition_matrix(big_F(gamma, p), order, order);
        auto at = [&](int r, int c) { return m.at(pos_of(order, r), pos_of(order, c)); };
        return at(gamma.b_edge(2), gamma.c_edge()) == 3 && at(gamma.b_edge(0), gamma.c_edge()) == 3 &&
               at(gamma.a_edge(1), gamma.a_edge(0)) == 1 && at(gamma.c_edge(), gamma.c_edge()) == 1;
    });

    criterion(3, "folding game envelope: n=5, m=4, 12 steps, eps_{r,s} < 2^{-r}", [] {
        GameResult res = run_game(5, 4, Direction::Folding, 12);
        std::size_t checked = 0;
        for (const auto& rec : res.report.pairs) {
            Frac envelope = fpow2(-static_cast<long>(rec.r));
            if (!(rec.eps < envelope)) return false;
            ++checked;
        }
        return checked == 78 && res.report.all_pass;  // all 0 <= r < s <= 12
    });

    criterion(4, "unfolding game envelope: n=5, m=4, p=2, 10 steps, delta and p bounds", [] {
        GameResult res = run_game(5, 4, Direction::Unfolding, 10);
        std::size_t checked = 0;
        for (const auto& rec : res.report.pairs) {
            // game-inclusive index t = s - 1: delta_{r,t} < 2^{-t}
            Frac endpoint_bound = fpow2(-(static_cast<long>(rec.s) - 1));
            if (!(rec.delta < endpoint_bound)) return false;
            if (!(rec.p < p_bar_bound(rec.r, 5, Frac(2)))) return false;
            ++checked;
        }
        return checked == 55 && res.report.all_pass;
    });

    criterion(5, "ergodic lower bound: rank 4 at n=5 and rank 6 at n=6, defects monotone", [] {
        GameResult r5 = run_game(5, 4, Direction::Folding, 12);
        ErgodicBound e5 = ergodic_lower_bound(r5.run, 4, 12);
        if (e5.rank != 4 || !e5.defects_monotone) return false;
        GameResult r6 = run_game(6, 6, Direction::Folding, 12);
        ErgodicBound e6 = ergodic_lower_bound(r6.run, 6, 12);
        return e6.rank == 6 && e6.defects_monotone;
    });

    criterion(6, "product bound predictions over 1000 random certified pairs per direction", [] {
        std::mt19937_64 rng(20240517);
        for (int trial = 0; trial < 1000; ++trial) {
            ExactMatrix a = random_positive_diag(rng, 5), b = random_positive_diag(rng, 5);
            FoldingCert ca = certify_folding(a, 3), cb = certify_folding(b, 3);
            if (!(certify_folding(a * b, 3).eps <= predict_product_cert_folding(ca, cb, 5)))
                return false;
        }
        for (int trial = 0; trial < 1000; ++trial) {
            ExactMatrix a = random_cascade(rng, 6, 4), b = random_cascade(rng, 6, 4);
            UnfoldingCert ca = certify_unfolding(a, 4), cb = certify_unfolding(b, 4);
            UnfoldingPrediction pred = predict_product_cert_unfolding(ca, cb, 6);
            UnfoldingCert cab = certify_unfolding(a * b, 4);
            if (!(cab.eps <= pred.eps && cab.delta_folded() <= pred.delta && cab.p <= pred.p &&
                  cab.tier2 <= pred.p * pred.delta))
                return false;
        }
        return true;
    });

    criterion(7, "transverse decomposition: synthetic k=2 under 1e-6, rein run k >= 4", [] {
        SequenceRun fib = synthetic_run(Direction::Folding, 1,
                                        std::vector<ExactMatrix>(40, block2(1, 1, 1, 0)),
                                        {"x_0", "x_1"});
        SequenceRun tri = synthetic_run(Direction::Folding, 1,
                                        std::vector<ExactMatrix>(40, block2(2, 1, 1, 1)),
                                        {"y_0", "y_1"});
        SequenceRun sum = direct_sum_run(fib, tri);
        DecompositionReport rep = approximate_retraction(sum, 40, Rat(1, 1000000));
        if (!(rep.defect < Rat(1, 1000000))) return false;
        if (rep.blocks.size() != 2 || !rep.h0.empty() || !rep.unresolved.empty()) return false;
        bool split = (rep.blocks[0] == std::vector<std::size_t>{0, 2} &&
                      rep.blocks[1] == std::vector<std::size_t>{1, 3}) ||
                     (rep.blocks[0] == std::vector<std::size_t>{1, 3} &&
                      rep.blocks[1] == std::vector<std::size_t>{0, 2});
        if (!split) return false;
        GameResult res = run_game(5, 4, Direction::Folding, 12);
        DecompositionReport deep = approximate_retraction(res.run, 8, Rat(1));
        return deep.blocks.size() >= 4 && deep.unresolved.empty();
    });

    criterion(8, "fold decomposition recomposes 200 random homotopy equivalences", [] {
        std::mt19937_64 rng(777);
        for (int done = 0; done < 200; ++done) {
            int petals = 2 + static_cast<int>(rng() % 3);
            auto rose = std::make_shared<MarkedGraph>(MarkedGraph::rose(petals));
            Morphism f =
                random_rose_automorphism(rng, petals, 4 + static_cast<int>(rng() % 5), rose);
            FoldDecomposition d = fold_decomposition(f);
            if (transition_matrix(recompose(d)) != transition_matrix(f)) return false;
        }
        return true;
    });

    criterion(9, "core monitoring: <b_0> at zero, <c> case-3 drop, 10x8 monotonicity", [] {
        GammaGraph g = build_gamma(5);
        std::vector<ConstructionParams> schedule(8, ConstructionParams::uniform(5, 1, 1));
        SequenceRun run = run_sequence(5, schedule, Direction::Folding, true);
        auto word = [&](const char* w) { return EdgePath::parse(*g.graph(), w).expand(); };
        MonitorReport base =
            monitor(run, g, {{word("b_0")}, {word("c")}}, MonitorPolicy::Greedy, false);
        for (int c : base.trajectories[0].counts)
            if (c != 0) return false;
        const auto& c_traj = base.trajectories[1];
        if (c_traj.counts.front() != 1 || c_traj.counts[1] != 0 || !c_traj.reached_zero)
            return false;
        if (c_traj.insertions[0].find("case3") == std::string::npos) return false;
        // direct Fig-6 check: the spliced move alone drops the count 1 -> 0
        CoreGraph c_core = CoreGraph::from_generators(*g.graph(), {word("c")});
        InsertionMove mv = propose_insertion(c_core, g, g.train_track());
        if (core_illegal_turns(c_core.pushforward(mv.splice), g.train_track()).count != 0)
            return false;
        std::mt19937_64 rng(12345);
        for (int i = 0; i < 10; ++i) {
            std::vector<std::vector<std::vector<HalfEdge>>> sub{
                {random_loop(rng, g, 4), random_loop(rng, g, 6)}};
            MonitorReport rep = monitor(run, g, sub, MonitorPolicy::Manual, true);
            if (!rep.all_monotone) return false;
        }
        return true;
    });

    criterion(10, "upper-bound audit: equality branch k = 2n-1 and chi_- unit values", [] {
        if (chi_minus(MarkedGraph::rose(5)).total != 4) return false;
        MarkedGraph theta(2, {{0, 1, "x"}, {0, 1, "y"}, {0, 1, "z"}});
        if (chi_minus(theta).total != 1) return false;
        MarkedGraph circles(2, {{0, 0, "x"}, {1, 1, "y"}});
        if (chi_minus(circles).total != 0) return false;

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
        if (!(rep.holds && rep.k == 2 * n - 1 && rep.bound == 2 * n - 1 && rep.s + rep.m == n))
            return false;

        // audited measure-lab decomposition of the n = 5 run stays within 2n-1
        GameResult res = run_game(5, 4, Direction::Folding, 8);
        DecompositionReport dec = approximate_retraction(res.run, 8, Rat(1));
        GammaGraph g = build_gamma(5);
        auto order_edges = folding_edge_order(g);
        std::vector<std::vector<int>> run_dec{{}};
        for (std::size_t e : dec.h0) run_dec[0].push_back(order_edges[e]);
        for (std::size_t e : dec.unresolved) run_dec[0].push_back(order_edges[e]);
        for (const auto& block : dec.blocks) {
            std::vector<int> part;
            for (std::size_t e : block) part.push_back(order_edges[e]);
            run_dec.push_back(std::move(part));
        }
        EdgeOrder run_order = estimate_edge_order(res.run, 8, Rat(2));
        if (!run_order.complete()) return false;
        for (auto& cls : run_order.classes)
            for (auto& e : cls) e = static_cast<std::size_t>(order_edges[e]);
        AuditReport run_rep = upper_bound_audit(*g.graph(), run_dec, run_order);
        return run_rep.holds && run_rep.k >= 4 && run_rep.k <= 2 * 5 - 1;
    });

    std::printf("%d/10 criteria passed\n", 10 - failures);
    return failures == 0 ? 0 : 1;
}
