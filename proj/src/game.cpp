#include "outertrack/game.hpp"

#include <thread>

namespace outertrack {

namespace {

// Smallest integer strictly greater than q (q >= 0).
Int int_above(const Frac& q) { return q.num / q.den + 1; }

Frac tier_eps(const ExactMatrix& mt, const std::vector<std::size_t>& cols) {
    // max off-diagonal ratio over the listed Tier 1 columns of mt
    Frac best;
    for (std::size_t j : cols) {
        Int col_max = 0;
        for (std::size_t i = 0; i < mt.rows(); ++i)
            if (i != j && mt.at(i, j) > col_max) col_max = mt.at(i, j);
        best = frac_max(best, Frac(col_max, mt.at(j, j)));
    }
    return best;
}

void parallel_rows(std::size_t count, int jobs, const std::function<void(std::size_t)>& fn) {
    unsigned hw = std::thread::hardware_concurrency();
    std::size_t workers = jobs > 0 ? static_cast<std::size_t>(jobs) : (hw ? hw : 1);
    if (workers <= 1 || count <= 1) {
        for (std::size_t i = 0; i < count; ++i) fn(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    for (std::size_t w = 0; w < std::min(workers, count); ++w)
        pool.emplace_back([&] {
            for (std::size_t i = next.fetch_add(1); i < count; i = next.fetch_add(1)) fn(i);
        });
    for (auto& t : pool) t.join();
}

}  // namespace

Frac alice_move_folding(const GameState& state) {
    std::size_t s = state.step();
    if (s == 0) return Frac(Int(1), Int(2));
    return fpow2(-static_cast<long>(s) - 2) / (Frac(Int(state.n)) * state.P);
}

AliceUnfoldingMove alice_move_unfolding(const GameState& state) {
    std::size_t s = state.step();
    Frac nP = Frac(Int(state.n)) * state.P;
    AliceUnfoldingMove mv;
    mv.eps = fpow2(-static_cast<long>(s) - 2) / nP;
    mv.delta = s == 0 ? Frac(1) : fpow2(-static_cast<long>(s) - 1) / (nP * state.p);
    return mv;
}

ConstructionParams bob_move_folding(int n, std::size_t m, const Frac& eps) {
    if (m != static_cast<std::size_t>(2 * n - 6)) throw std::invalid_argument("m must equal 2n-6");
    if (!(eps > Frac(0))) throw std::invalid_argument("eps must be positive");
    std::vector<std::size_t> a_cols, b_cols;
    for (int i = 0; i < n - 3; ++i) b_cols.push_back(i);
    for (int i = 0; i < n - 3; ++i) a_cols.push_back(n - 3 + i);

    auto transposed = [&](const Int& alpha, const Int& beta) {
        return closed_form_M(ConstructionParams::uniform(n, alpha, beta), Direction::Folding)
            .transpose();
    };
    // The searched parameter appears only as the uniform diagonal of the
    // columns it controls, so the tight ratio scales as (value at 1) / alpha:
    // the smallest satisfying integer is exact, no search needed.
    Frac a_at_1 = tier_eps(transposed(1, 1), a_cols);  // = max numerator / 2
    Int alpha = int_above(a_at_1 / eps);
    if (alpha < 1) alpha = 1;
    Frac b_at_1 = tier_eps(transposed(alpha, 1), b_cols);  // = max numerator given alpha
    Int beta = int_above(b_at_1 / eps);
    if (beta < 1) beta = 1;

    for (int attempt = 0; attempt < 64; ++attempt) {
        ConstructionParams params = ConstructionParams::uniform(n, alpha, beta);
        FoldingCert cert = certify_folding(closed_form_M(params, Direction::Folding).transpose(), m);
        if (cert.satisfies(eps)) return params;
        alpha *= 2;
        beta *= 2;
    }
    throw std::logic_error("bob_move_folding: search failed to certify");
}

ConstructionParams bob_move_unfolding(int n, std::size_t m, const Frac& eps, const Frac& delta,
                                      const Frac& p) {
    if (m != static_cast<std::size_t>(2 * n - 6)) throw std::invalid_argument("m must equal 2n-6");
    if (!(eps > Frac(0)) || !(delta > Frac(0)) || !(p > Frac(1)))
        throw std::invalid_argument("bad tolerances");
    Frac e = eps, d = delta;
    for (int attempt = 0; attempt < 64; ++attempt) {
        // Cascade beta_1 < ... < beta_{n-3} < 2 alpha_1 < ... < 2 alpha_{n-3},
        // each diagonal ratio below d, greedily smallest-first.
        std::vector<Int> betas(n - 3), alphas(n - 3);
        Int b1 = int_above(Frac(4) / e);         // above-diagonal entries over beta_1
        Int b1d = int_above(Frac(3) / (p * d));  // tier-2 entries over the smallest diagonal
        betas[0] = b1 > b1d ? b1 : b1d;
        if (betas[0] < 5) betas[0] = 5;
        for (int k = 1; k < n - 3; ++k) betas[k] = int_above(Frac(betas[k - 1]) / d);
        Int a1 = int_above(Frac(betas[n - 4]) / (Frac(2) * d));  // beta_{n-3}/(2 alpha_1) < d
        Int a1e = int_above(Frac(3) / (Frac(2) * e));
        alphas[0] = a1 > a1e ? a1 : a1e;
        for (int k = 1; k < n - 3; ++k) alphas[k] = int_above(Frac(alphas[k - 1]) / d);
        ConstructionParams params;
        params.n = n;
        params.alphas = alphas;
        params.betas = betas;
        UnfoldingCert cert = certify_unfolding(closed_form_M(params, Direction::Unfolding), m);
        if (cert.satisfies(p, eps, delta)) return params;
        e = e / Frac(2);
        d = d / Frac(2);
    }
    throw std::logic_error("bob_move_unfolding: search failed to certify");
}

Frac p_bar_bound(std::size_t r, int n, const Frac& p) {
    Frac np = Frac(Int(n)) * p;
    Frac prod = p;
    for (std::size_t k = r; k < r + 64; ++k) prod = prod * (Frac(1) + np * fpow2(-static_cast<long>(k)));
    Frac tail_sum = np * fpow2(-static_cast<long>(r) - 63);
    if (!(tail_sum < Frac(1))) throw std::logic_error("p_bar_bound: tail estimate out of range");
    // divide by (1 - tail_sum) staying in nonnegative fractions
    Frac one_minus(tail_sum.den - tail_sum.num, tail_sum.den);
    return prod / one_minus;
}

GameResult run_game(int n, std::size_t m, Direction dir, std::size_t steps, bool with_morphisms,
                    const Frac& p, int jobs) {
    if (steps < 1) throw std::invalid_argument("run_game needs at least one step");
    GameState state;
    state.n = n;
    state.m = m;
    state.direction = dir;
    state.p = p;

    std::vector<ConstructionParams> schedule;
    // Game matrices: folding plays transposed step matrices, unfolding plays
    // them as-is; products A_{r,t} = A_r ... A_t grow on the right.
    std::vector<std::vector<ExactMatrix>> products;  // products[r][t-r] = A_{r,t}
    GameReport report;

    for (std::size_t s = 0; s < steps; ++s) {
        Frac eps_s, delta_s;
        ConstructionParams params;
        if (dir == Direction::Folding) {
            eps_s = alice_move_folding(state);
            params = bob_move_folding(n, m, eps_s);
        } else {
            AliceUnfoldingMove mv = alice_move_unfolding(state);
            eps_s = mv.eps;
            delta_s = mv.delta;
            params = bob_move_unfolding(n, m, eps_s, delta_s, p);
        }
        report.alice_eps.push_back(eps_s);
        report.alice_delta.push_back(delta_s);
        schedule.push_back(params);
        state.history.push_back({eps_s, delta_s, params});

        ExactMatrix game_matrix = closed_form_M(params, dir);
        if (dir == Direction::Folding) game_matrix = game_matrix.transpose();
        parallel_rows(products.size(), jobs,
                      [&](std::size_t r) { products[r].push_back(products[r].back() * game_matrix); });
        products.push_back({game_matrix});
        // P_{s+1} = max K over all certified A_{r,t} with t <= s
        for (std::size_t r = 0; r < products.size(); ++r) {
            const ExactMatrix& prod = products[r].back();
            Int min_diag = prod.at(0, 0);
            for (std::size_t j = 1; j < m; ++j)
                if (prod.at(j, j) < min_diag) min_diag = prod.at(j, j);
            Frac K(prod.max_entry(), min_diag);
            if (K > state.P) state.P = K;
        }
    }

    // steps from the schedule; cumulative matrices adopted from the game
    // products to avoid recomputing them.
    GammaGraph gamma = build_gamma(n);
    auto order = dir == Direction::Folding ? folding_edge_order(gamma) : unfolding_edge_order(gamma);
    std::vector<SequenceRun::Step> run_steps;
    for (const ConstructionParams& prm : schedule) {
        SequenceRun::Step st;
        st.params = prm;
        st.matrix = closed_form_M(prm, dir);
        if (with_morphisms) {
            Morphism f = big_F(gamma, prm);
            if (transition_matrix(f, order, order) != st.matrix)
                throw std::logic_error("construction mismatch: transition_matrix(big_F) "
                                       "differs from the closed form");
            st.morphism = std::move(f);
        }
        run_steps.push_back(std::move(st));
    }
    std::map<std::pair<std::size_t, std::size_t>, ExactMatrix> cumulative;
    for (std::size_t r = 0; r < steps; ++r)
        for (std::size_t t = r; t < steps; ++t) {
            const ExactMatrix& prod = products[r][t - r];
            cumulative[{r, t + 1}] = dir == Direction::Folding ? prod.transpose() : prod;
        }
    SequenceRun run(dir, m, std::move(run_steps), edge_order_labels(gamma, dir),
                    std::move(cumulative));

    std::vector<GameReport::PairRecord> pairs;
    std::vector<std::pair<std::size_t, std::size_t>> keys;
    for (std::size_t r = 0; r < steps; ++r)
        for (std::size_t s = r + 1; s <= steps; ++s) keys.push_back({r, s});
    pairs.resize(keys.size());
    parallel_rows(keys.size(), jobs, [&](std::size_t idx) {
        auto [r, s] = keys[idx];
        GameReport::PairRecord rec;
        rec.r = r;
        rec.s = s;
        if (dir == Direction::Folding) {
            FoldingCert cert = certify_folding(run.cumulative(r, s).transpose(), m);
            rec.eps = cert.eps;
            rec.eps_envelope = fpow2(-static_cast<long>(r));
            rec.pass = rec.eps < rec.eps_envelope;
        } else {
            UnfoldingCert cert = certify_unfolding(run.cumulative(r, s), m);
            rec.has_unfolding = true;
            rec.eps = cert.eps;
            rec.delta = cert.delta_diag;
            rec.p = cert.p;
            rec.delta_envelope = fpow2(-(static_cast<long>(s) - 1));
            rec.p_envelope = p_bar_bound(r, n, p);
            rec.eps_envelope = report.alice_eps[r] +
                               Frac(2) * Frac(Int(n)) * p * rec.p_envelope * fpow2(-static_cast<long>(r));
            rec.pass = rec.delta < rec.delta_envelope && rec.p < rec.p_envelope &&
                       rec.eps <= rec.eps_envelope;
        }
        pairs[idx] = std::move(rec);
    });
    report.max_eps_per_r.assign(steps, Frac(0));
    for (auto& rec : pairs) {
        if (!rec.pass) report.all_pass = false;
        report.max_eps_per_r[rec.r] = frac_max(report.max_eps_per_r[rec.r], rec.eps);
        report.pairs.push_back(std::move(rec));
    }
    if (!report.all_pass)
        throw CertificateViolation("a cumulative certificate exceeded its theoretical envelope");
    return {std::move(run), std::move(report), std::move(state)};
}

}  // namespace outertrack
