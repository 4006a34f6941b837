#include "outertrack/certificates.hpp"

namespace outertrack {

namespace {

void check_tier1_diagonals(const ExactMatrix& a, std::size_t m) {
    if (a.rows() != a.cols()) throw std::invalid_argument("certificate requires a square matrix");
    if (m == 0 || m > a.cols()) throw std::invalid_argument("tier width m out of range");
    if (!a.all_nonnegative()) throw std::invalid_argument("certificate requires a nonnegative matrix");
    for (std::size_t j = 0; j < m; ++j)
        if (a.at(j, j) == 0) throw ZeroDiagonal(j);
}

struct RatioMax {
    Frac best;
    void update(const Int& n, const Int& d) {
        Frac cand(n, d);
        if (best < cand) best = cand;
    }
};

}  // namespace

FoldingCert certify_folding(const ExactMatrix& a, std::size_t m) {
    check_tier1_diagonals(a, m);
    std::size_t n = a.rows();
    FoldingCert cert;
    cert.m = m;
    Int min_diag = a.at(0, 0);
    for (std::size_t j = 1; j < m; ++j)
        if (a.at(j, j) < min_diag) min_diag = a.at(j, j);
    cert.K = Frac(a.max_entry(), min_diag);
    RatioMax eps;
    for (std::size_t j = 0; j < m; ++j) {
        Int col_max = 0;
        for (std::size_t i = 0; i < n; ++i)
            if (i != j && a.at(i, j) > col_max) col_max = a.at(i, j);
        eps.update(col_max, a.at(j, j));
    }
    cert.eps = eps.best;
    return cert;
}

UnfoldingCert certify_unfolding(const ExactMatrix& a, std::size_t m) {
    check_tier1_diagonals(a, m);
    std::size_t n = a.rows();
    UnfoldingCert cert;
    cert.m = m;
    Int min_diag = a.at(0, 0);
    for (std::size_t j = 1; j < m; ++j)
        if (a.at(j, j) < min_diag) min_diag = a.at(j, j);
    cert.K = Frac(a.max_entry(), min_diag);
    RatioMax delta, eps, p;
    {
        // (a): running minimum over earlier diagonals
        Int min_prefix = a.at(0, 0);
        for (std::size_t j = 1; j < m; ++j) {
            delta.update(a.at(j, j), min_prefix);
            if (a.at(j, j) < min_prefix) min_prefix = a.at(j, j);
        }
    }
    for (std::size_t j = 0; j < m; ++j) {
        Int above = 0, below = 0;
        for (std::size_t i = 0; i < j; ++i)
            if (a.at(i, j) > above) above = a.at(i, j);
        for (std::size_t i = j + 1; i < n; ++i)
            if (a.at(i, j) > below) below = a.at(i, j);
        eps.update(above, a.at(j, j));  // (b)
        p.update(below, a.at(j, j));    // (c), every row below the diagonal
    }
    Int t2max = 0;
    for (std::size_t j = m; j < n; ++j)
        for (std::size_t i = 0; i < n; ++i)
            if (a.at(i, j) > t2max) t2max = a.at(i, j);
    cert.delta_diag = delta.best;
    cert.eps = eps.best;
    cert.p = p.best;
    cert.tier2 = Frac(t2max, min_diag);
    return cert;
}

Frac predict_product_cert_folding(const FoldingCert& ca, const FoldingCert& cb, std::size_t n) {
    if (ca.m != cb.m) throw std::invalid_argument("predict: tier widths differ");
    return ca.eps + Frac(Int(n)) * ca.K * cb.eps;
}

UnfoldingPrediction predict_product_cert_unfolding(const UnfoldingCert& ca, const UnfoldingCert& cb,
                                                   std::size_t n) {
    if (ca.m != cb.m) throw std::invalid_argument("predict: tier widths differ");
    Frac nn = Frac(Int(n));
    Frac growth = nn * ca.K * cb.eps + nn * ca.p_eff() * ca.delta_folded() * cb.p_eff();
    UnfoldingPrediction out;
    out.p = ca.p_eff() + growth;
    out.eps = ca.eps + growth;
    out.delta = nn * ca.K * cb.p_eff() * cb.delta_folded();
    return out;
}

}  // namespace outertrack
