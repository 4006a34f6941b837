#include "outertrack/measure.hpp"

#include <algorithm>

namespace outertrack {

namespace {

std::vector<Rat> ones(std::size_t n) { return std::vector<Rat>(n, Rat(1)); }

std::vector<Rat> apply_exact(const ExactMatrix& m, const std::vector<Rat>& v, bool transpose) {
    std::size_t rows = m.rows(), cols = m.cols();
    std::vector<Rat> out(transpose ? cols : rows, Rat(0));
    for (std::size_t i = 0; i < rows; ++i)
        for (std::size_t j = 0; j < cols; ++j) {
            if (m.at(i, j) == 0) continue;
            if (transpose)
                out[j] += Rat(m.at(i, j)) * v[i];
            else
                out[i] += Rat(m.at(i, j)) * v[j];
        }
    return out;
}

}  // namespace

std::vector<MeasureVector> normalization_measures(const SequenceRun& run) {
    std::size_t h = run.size(), d = run.dim();
    std::vector<MeasureVector> out(h + 1);
    if (run.direction() == Direction::Folding) {
        // frequency current mu_0 = 1 pushed forward: mu_s = M^{0,s} mu_0
        for (std::size_t s = 0; s <= h; ++s) {
            out[s].kind = MeasureVector::Kind::Current;
            out[s].values = s == 0 ? ones(d) : apply_exact(run.cumulative(0, s), ones(d), false);
        }
    } else {
        // simplicial length ell = 1 at index 0 (sequence time 0) pulled back:
        // ell at index s is (M^{0,s})^T * 1 in storage indices.
        for (std::size_t s = 0; s <= h; ++s) {
            out[s].kind = MeasureVector::Kind::Length;
            out[s].values = s == 0 ? ones(d) : apply_exact(run.cumulative(0, s), ones(d), true);
        }
    }
    return out;
}

NormalizedTransition normalized_transition(const SequenceRun& run, std::size_t r, std::size_t s) {
    if (!(r < s) || s > run.size()) throw std::out_of_range("normalized_transition needs r < s <= size");
    auto measures = normalization_measures(run);
    for (std::size_t k : {r, s})
        for (const Rat& v : measures[k].values)
            if (v <= 0)
                throw std::invalid_argument(
                    "normalized_transition: a normalizing measure entry vanishes at index " +
                    std::to_string(k));
    std::size_t d = run.dim();
    RatMatrix m(d, d);
    const ExactMatrix& base = run.cumulative(r, s);
    if (run.direction() == Direction::Folding) {
        // diag(mu_r) (M^{r,s})^T diag(1/mu_s)
        const auto& mu_r = measures[r].values;
        const auto& mu_s = measures[s].values;
        for (std::size_t i = 0; i < d; ++i)
            for (std::size_t j = 0; j < d; ++j)
                m.at(i, j) = mu_r[i] * Rat(base.at(j, i)) / mu_s[j];
    } else {
        // diag(ell_r) M^{r,s} diag(1/ell_s); storage index r is the shallower
        // sequence time, s the deeper one.
        const auto& ell_r = measures[r].values;
        const auto& ell_s = measures[s].values;
        for (std::size_t i = 0; i < d; ++i)
            for (std::size_t j = 0; j < d; ++j)
                m.at(i, j) = ell_r[i] * Rat(base.at(i, j)) / ell_s[j];
    }
    // Affine simplex map: columns sum to one exactly.
    for (std::size_t j = 0; j < d; ++j) {
        Rat sum(0);
        for (std::size_t i = 0; i < d; ++i) sum += m.at(i, j);
        if (sum != 1) throw std::logic_error("normalized transition column sum differs from 1");
    }
    return {r, s, std::move(m)};
}

std::vector<NormalizedTransition> build_normalized_system(const SequenceRun& run) {
    std::vector<NormalizedTransition> out;
    for (std::size_t r = 0; r < run.size(); ++r)
        for (std::size_t s = r + 1; s <= run.size(); ++s) out.push_back(normalized_transition(run, r, s));
    return out;
}

std::vector<std::vector<Rat>> normalized_tier1_columns(const SequenceRun& run, std::size_t r,
                                                       std::size_t s, std::size_t m) {
    ExactMatrix mat = run.cumulative(r, s);
    if (run.direction() == Direction::Folding) mat = mat.transpose();
    std::vector<std::vector<Rat>> cols;
    for (std::size_t j = 0; j < m; ++j) {
        if (mat.at(j, j) == 0) throw ZeroDiagonal(j);
        std::vector<Rat> col(mat.rows());
        for (std::size_t i = 0; i < mat.rows(); ++i) col[i] = Rat(mat.at(i, j), mat.at(j, j));
        cols.push_back(std::move(col));
    }
    return cols;
}

ErgodicBound ergodic_lower_bound(const SequenceRun& run, std::size_t m, std::size_t horizon) {
    if (horizon == 0 || horizon > run.size()) throw std::out_of_range("horizon outside run");
    ErgodicBound out;
    out.rank = rank_of_columns(normalized_tier1_columns(run, 0, horizon, m));
    out.cauchy_defects.clear();
    for (std::size_t s = 1; s + 1 <= horizon; ++s) {
        auto a = normalized_tier1_columns(run, 0, s, m);
        auto b = normalized_tier1_columns(run, 0, s + 1, m);
        Rat defect(0);
        for (std::size_t j = 0; j < m; ++j)
            for (std::size_t i = 0; i < a[j].size(); ++i) {
                Rat d = rat_abs(a[j][i] - b[j][i]);
                if (d > defect) defect = d;
            }
        out.cauchy_defects.push_back(defect);
    }
    out.defects_monotone = true;
    std::size_t k = out.cauchy_defects.size();
    for (std::size_t i = (k > 3 ? k - 3 : 0); i + 1 < k; ++i)
        if (out.cauchy_defects[i + 1] > out.cauchy_defects[i]) out.defects_monotone = false;
    return out;
}

DecompositionReport approximate_retraction(const SequenceRun& run, std::size_t depth,
                                           const Rat& defect_bound, Rat tau_squared) {
    if (depth < 2 || depth > run.size())
        throw std::out_of_range("approximate_retraction needs 2 <= depth <= run size");
    DecompositionReport rep;
    rep.depth_r = depth / 2;
    rep.depth_s = depth;
    RatMatrix S = normalized_transition(run, rep.depth_r, rep.depth_s).m;
    std::size_t d = S.rows();
    rep.defect = (S * S - S).max_abs();
    if (rep.defect > defect_bound)
        throw InsufficientDepth("idempotency defect " + rat_to_string(rep.defect) +
                                " exceeds bound " + rat_to_string(defect_bound));
    rep.tau_squared = tau_squared < 0 ? rep.defect : tau_squared;
    for (std::size_t i = 0; i < d; ++i) rep.diagonal_products.push_back(S.at(i, i));

    // entry "above tau" means entry^2 > tau^2 (entries are nonnegative).
    auto above_tau = [&](const Rat& v) { return v > 0 && v * v > rep.tau_squared; };

    std::vector<char> in_h0(d, 0);
    for (std::size_t i = 0; i < d; ++i) {
        bool small_row = true;
        for (std::size_t j = 0; j < d; ++j)
            if (above_tau(S.at(i, j))) {
                small_row = false;
                break;
            }
        if (small_row) {
            in_h0[i] = 1;
            rep.h0.push_back(i);
        }
    }
    // Cluster the remaining edges by the support pattern of their S-columns.
    std::vector<std::vector<std::size_t>> supports(d);
    for (std::size_t j = 0; j < d; ++j) {
        if (in_h0[j]) continue;
        for (std::size_t i = 0; i < d; ++i)
            if (!in_h0[i] && above_tau(S.at(i, j))) supports[j].push_back(i);
    }
    std::vector<char> assigned(d, 0);
    for (std::size_t j = 0; j < d; ++j) {
        if (in_h0[j] || assigned[j]) continue;
        std::vector<std::size_t> cluster;
        for (std::size_t k = j; k < d; ++k)
            if (!in_h0[k] && !assigned[k] && supports[k] == supports[j]) cluster.push_back(k);
        // A clean block supports exactly itself and is entrywise positive.
        bool clean = supports[j] == cluster;
        if (clean) {
            for (std::size_t k : cluster) assigned[k] = 1;
            rep.blocks.push_back(std::move(cluster));
        } else {
            for (std::size_t k : cluster) {
                assigned[k] = 1;
                rep.unresolved.push_back(k);
            }
        }
    }
    std::sort(rep.unresolved.begin(), rep.unresolved.end());
    return rep;
}

}  // namespace outertrack
