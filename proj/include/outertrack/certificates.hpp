#ifndef OUTERTRACK_CERTIFICATES_HPP
#define OUTERTRACK_CERTIFICATES_HPP

#include "outertrack/matrix.hpp"
#include "outertrack/rational.hpp"

#include <cstddef>
#include <stdexcept>

namespace outertrack {

struct ZeroDiagonal : std::runtime_error {
    explicit ZeroDiagonal(std::size_t col)
        : std::runtime_error("zero diagonal entry in Tier 1 column " + std::to_string(col)),
          column(col) {}
    std::size_t column;
};

// Tight folding certificate: eps is the exact maximum of a_ij/a_jj over Tier 1
// columns j <= m, i != j, and K the exact maximum of any entry over the
// smallest Tier 1 diagonal. A candidate bound eps' certifies iff eps < eps'.
// eps = 0 (diagonal Tier 1 columns) is legal and satisfies every eps' > 0.
struct FoldingCert {
    std::size_t m = 0;
    Frac eps;
    Frac K;

    bool satisfies(const Frac& eps_bound) const { return eps < eps_bound; }
};

// Tight unfolding certificate. The four condition maxima are stored separately:
//   delta_diag  max a_jj/a_ii           (i < j <= m)          condition (a)
//   eps         max a_ij/a_jj           (i < j <= m)          condition (b)
//   p           max a_ji/a_ii           (i <= m, j > i, any row)  condition (c)
//   tier2       max a_ij/a_kk           (k <= m < j, any i)   condition (d) numerator
// p ranges over every row below the diagonal of a Tier 1 column, not only rows
// <= m; the product bounds use that range. tier2 is reported on its own so the
// (d) predicate can be checked against any candidate (p', delta') pair.
struct UnfoldingCert {
    std::size_t m = 0;
    Frac eps;
    Frac delta_diag;
    Frac p;
    Frac tier2;
    Frac K;

    // Smallest p-floor for which the quadruple predicate is satisfiable.
    Frac p_eff() const { return frac_max(frac_max(Frac(1), p), eps); }

    // Condition (d) folded into the reported delta: the smallest delta such
    // that tier2 <= p_eff * delta alongside the diagonal condition.
    Frac delta_folded() const { return frac_max(delta_diag, tier2 / p_eff()); }

    bool satisfies(const Frac& p_bound, const Frac& eps_bound, const Frac& delta_bound) const {
        if (!(p_bound > Frac(1))) return false;
        return delta_diag < delta_bound && eps < eps_bound && p < p_bound &&
               tier2 < p_bound * delta_bound;
    }
};

struct UnfoldingPrediction {
    Frac p;
    Frac eps;
    Frac delta;
};

FoldingCert certify_folding(const ExactMatrix& a, std::size_t m);
UnfoldingCert certify_unfolding(const ExactMatrix& a, std::size_t m);

// eps_{AA'} = eps_A + n K_A eps_{A'}; the tight certificate of A A' is
// dominated by this value whenever both inputs are tight certificates.
Frac predict_product_cert_folding(const FoldingCert& ca, const FoldingCert& cb, std::size_t n);

// The three product formulas, evaluated with the canonical readings
// p -> p_eff and delta -> delta_folded so that domination is unconditional:
//   p_AA'     = p_A + n K_A eps' + n p_A delta_A p'
//   eps_AA'   = eps_A + n K_A eps' + n p_A delta_A p'
//   delta_AA' = n K_A p' delta'
UnfoldingPrediction predict_product_cert_unfolding(const UnfoldingCert& ca,
                                                   const UnfoldingCert& cb, std::size_t n);

}  // namespace outertrack

#endif
