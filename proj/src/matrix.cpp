#include "outertrack/matrix.hpp"

#include <stdexcept>

namespace outertrack {

ExactMatrix ExactMatrix::identity(std::size_t n) {
    ExactMatrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m.at(i, i) = 1;
    return m;
}

ExactMatrix ExactMatrix::operator*(const ExactMatrix& rhs) const {
    if (cols_ != rhs.rows_) throw std::invalid_argument("matrix product: shape mismatch");
    ExactMatrix out(rows_, rhs.cols_);
    for (std::size_t i = 0; i < rows_; ++i) {
        for (std::size_t k = 0; k < cols_; ++k) {
            const Int& a = at(i, k);
            if (a == 0) continue;
            for (std::size_t j = 0; j < rhs.cols_; ++j) {
                const Int& b = rhs.at(k, j);
                if (b != 0) out.at(i, j) += a * b;
            }
        }
    }
    return out;
}

ExactMatrix ExactMatrix::transpose() const {
    ExactMatrix out(cols_, rows_);
    for (std::size_t i = 0; i < rows_; ++i)
        for (std::size_t j = 0; j < cols_; ++j) out.at(j, i) = at(i, j);
    return out;
}

ExactMatrix ExactMatrix::permuted(const std::vector<std::size_t>& row_perm,
                                  const std::vector<std::size_t>& col_perm) const {
    if (row_perm.size() != rows_ || col_perm.size() != cols_)
        throw std::invalid_argument("permuted: permutation size mismatch");
    ExactMatrix out(rows_, cols_);
    for (std::size_t i = 0; i < rows_; ++i)
        for (std::size_t j = 0; j < cols_; ++j) out.at(i, j) = at(row_perm[i], col_perm[j]);
    return out;
}

ExactMatrix ExactMatrix::direct_sum(const ExactMatrix& a, const ExactMatrix& b) {
    ExactMatrix out(a.rows() + b.rows(), a.cols() + b.cols());
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < a.cols(); ++j) out.at(i, j) = a.at(i, j);
    for (std::size_t i = 0; i < b.rows(); ++i)
        for (std::size_t j = 0; j < b.cols(); ++j) out.at(a.rows() + i, a.cols() + j) = b.at(i, j);
    return out;
}

bool ExactMatrix::all_nonnegative() const {
    for (const Int& v : entries_)
        if (v < 0) return false;
    return true;
}

Int ExactMatrix::min_entry() const {
    if (entries_.empty()) throw std::logic_error("min_entry of empty matrix");
    Int m = entries_[0];
    for (const Int& v : entries_)
        if (v < m) m = v;
    return m;
}

Int ExactMatrix::max_entry() const {
    if (entries_.empty()) throw std::logic_error("max_entry of empty matrix");
    Int m = entries_[0];
    for (const Int& v : entries_)
        if (v > m) m = v;
    return m;
}

bool ExactMatrix::entrywise_greater_than(const Int& bound) const {
    for (const Int& v : entries_)
        if (v <= bound) return false;
    return true;
}

bool ExactMatrix::entrywise_leq(const ExactMatrix& o) const {
    if (rows_ != o.rows_ || cols_ != o.cols_) return false;
    for (std::size_t i = 0; i < entries_.size(); ++i)
        if (entries_[i] > o.entries_[i]) return false;
    return true;
}

std::vector<Int> ExactMatrix::apply(const std::vector<Int>& v) const {
    if (v.size() != cols_) throw std::invalid_argument("apply: size mismatch");
    std::vector<Int> out(rows_, Int(0));
    for (std::size_t i = 0; i < rows_; ++i)
        for (std::size_t j = 0; j < cols_; ++j)
            if (at(i, j) != 0) out[i] += at(i, j) * v[j];
    return out;
}

std::vector<Int> ExactMatrix::apply_transpose(const std::vector<Int>& v) const {
    if (v.size() != rows_) throw std::invalid_argument("apply_transpose: size mismatch");
    std::vector<Int> out(cols_, Int(0));
    for (std::size_t i = 0; i < rows_; ++i)
        for (std::size_t j = 0; j < cols_; ++j)
            if (at(i, j) != 0) out[j] += at(i, j) * v[i];
    return out;
}

Int ExactMatrix::determinant() const {
    if (rows_ != cols_) throw std::invalid_argument("determinant of non-square matrix");
    std::size_t n = rows_;
    if (n == 0) return 1;
    std::vector<Int> a(entries_);
    auto e = [&](std::size_t i, std::size_t j) -> Int& { return a[i * n + j]; };
    Int prev = 1;
    int sign = 1;
    for (std::size_t k = 0; k + 1 < n; ++k) {
        if (e(k, k) == 0) {
            std::size_t pivot = k + 1;
            while (pivot < n && e(pivot, k) == 0) ++pivot;
            if (pivot == n) return 0;
            for (std::size_t j = 0; j < n; ++j) std::swap(e(k, j), e(pivot, j));
            sign = -sign;
        }
        for (std::size_t i = k + 1; i < n; ++i) {
            for (std::size_t j = k + 1; j < n; ++j)
                e(i, j) = (e(k, k) * e(i, j) - e(i, k) * e(k, j)) / prev;
            e(i, k) = 0;
        }
        prev = e(k, k);
    }
    return sign > 0 ? e(n - 1, n - 1) : Int(-e(n - 1, n - 1));
}

RatMatrix RatMatrix::identity(std::size_t n) {
    RatMatrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m.at(i, i) = 1;
    return m;
}

RatMatrix RatMatrix::from_exact(const ExactMatrix& m) {
    RatMatrix out(m.rows(), m.cols());
    for (std::size_t i = 0; i < m.rows(); ++i)
        for (std::size_t j = 0; j < m.cols(); ++j) out.at(i, j) = Rat(m.at(i, j));
    return out;
}

RatMatrix RatMatrix::operator*(const RatMatrix& rhs) const {
    if (cols_ != rhs.rows_) throw std::invalid_argument("matrix product: shape mismatch");
    RatMatrix out(rows_, rhs.cols_);
    for (std::size_t i = 0; i < rows_; ++i)
        for (std::size_t k = 0; k < cols_; ++k) {
            const Rat& a = at(i, k);
            if (a == 0) continue;
            for (std::size_t j = 0; j < rhs.cols_; ++j) {
                const Rat& b = rhs.at(k, j);
                if (b != 0) out.at(i, j) += a * b;
            }
        }
    return out;
}

RatMatrix RatMatrix::operator-(const RatMatrix& rhs) const {
    if (rows_ != rhs.rows_ || cols_ != rhs.cols_)
        throw std::invalid_argument("matrix difference: shape mismatch");
    RatMatrix out(rows_, cols_);
    for (std::size_t i = 0; i < entries_.size(); ++i) out.entries_[i] = entries_[i] - rhs.entries_[i];
    return out;
}

RatMatrix RatMatrix::transpose() const {
    RatMatrix out(cols_, rows_);
    for (std::size_t i = 0; i < rows_; ++i)
        for (std::size_t j = 0; j < cols_; ++j) out.at(j, i) = at(i, j);
    return out;
}

Rat RatMatrix::max_abs() const {
    Rat m(0);
    for (const Rat& v : entries_) {
        Rat a = rat_abs(v);
        if (a > m) m = a;
    }
    return m;
}

std::vector<Rat> RatMatrix::column(std::size_t j) const {
    std::vector<Rat> out(rows_);
    for (std::size_t i = 0; i < rows_; ++i) out[i] = at(i, j);
    return out;
}

std::size_t RatMatrix::rank() const {
    std::vector<std::vector<Rat>> cols(cols_);
    for (std::size_t j = 0; j < cols_; ++j) cols[j] = column(j);
    return rank_of_columns(cols);
}

std::size_t rank_of_columns(const std::vector<std::vector<Rat>>& columns) {
    if (columns.empty()) return 0;
    std::size_t nrows = columns[0].size();
    // Clear denominators per column; rank is invariant under column scaling.
    std::vector<std::vector<Int>> cols;
    cols.reserve(columns.size());
    for (const auto& c : columns) {
        if (c.size() != nrows) throw std::invalid_argument("rank: ragged columns");
        Int lcm = 1;
        for (const Rat& q : c) {
            Int d = den(q);
            lcm = boost::multiprecision::lcm(lcm, d);
        }
        std::vector<Int> ic(nrows);
        for (std::size_t i = 0; i < nrows; ++i) ic[i] = num(c[i]) * (lcm / den(c[i]));
        cols.push_back(std::move(ic));
    }
    // Fraction-free elimination over the columns-as-rows.
    std::size_t nr = cols.size(), nc = nrows, rank = 0;
    Int prev = 1;
    for (std::size_t col = 0; col < nc && rank < nr; ++col) {
        std::size_t pivot = rank;
        while (pivot < nr && cols[pivot][col] == 0) ++pivot;
        if (pivot == nr) continue;
        std::swap(cols[rank], cols[pivot]);
        for (std::size_t i = rank + 1; i < nr; ++i) {
            for (std::size_t j = col + 1; j < nc; ++j)
                cols[i][j] = (cols[rank][col] * cols[i][j] - cols[i][col] * cols[rank][j]) / prev;
            cols[i][col] = 0;
        }
        prev = cols[rank][col];
        ++rank;
    }
    return rank;
}

}  // namespace outertrack
