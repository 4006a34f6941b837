#ifndef OUTERTRACK_MATRIX_HPP
#define OUTERTRACK_MATRIX_HPP

#include "outertrack/rational.hpp"

#include <cstddef>
#include <vector>

namespace outertrack {

// Nonnegative integer matrix with arbitrary-precision entries, row-major.
// Transition matrices of morphisms and their products live here; entries are
// crossing counts and therefore never negative.
class ExactMatrix {
public:
    ExactMatrix() : rows_(0), cols_(0) {}
    ExactMatrix(std::size_t rows, std::size_t cols)
        : rows_(rows), cols_(cols), entries_(rows * cols, Int(0)) {}

    static ExactMatrix identity(std::size_t n);

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }

    Int& at(std::size_t i, std::size_t j) { return entries_[i * cols_ + j]; }
    const Int& at(std::size_t i, std::size_t j) const { return entries_[i * cols_ + j]; }

    bool operator==(const ExactMatrix& o) const {
        return rows_ == o.rows_ && cols_ == o.cols_ && entries_ == o.entries_;
    }
    bool operator!=(const ExactMatrix& o) const { return !(*this == o); }

    ExactMatrix operator*(const ExactMatrix& rhs) const;
    ExactMatrix transpose() const;

    // Rows and columns reordered by the same index list (perm[k] = old index
    // appearing at new position k); used to move between edge orderings.
    ExactMatrix permuted(const std::vector<std::size_t>& row_perm,
                         const std::vector<std::size_t>& col_perm) const;

    // Block diagonal assembly.
    static ExactMatrix direct_sum(const ExactMatrix& a, const ExactMatrix& b);

    bool all_nonnegative() const;
    Int min_entry() const;
    Int max_entry() const;
    bool entrywise_greater_than(const Int& bound) const;
    bool entrywise_leq(const ExactMatrix& o) const;

    std::vector<Int> apply(const std::vector<Int>& v) const;              // M v
    std::vector<Int> apply_transpose(const std::vector<Int>& v) const;    // M^T v

    // Determinant over the integers (Bareiss, fraction-free).
    Int determinant() const;

private:
    std::size_t rows_, cols_;
    std::vector<Int> entries_;
};

// Dense rational matrix for normalized transitions, retractions and rank work.
class RatMatrix {
public:
    RatMatrix() : rows_(0), cols_(0) {}
    RatMatrix(std::size_t rows, std::size_t cols)
        : rows_(rows), cols_(cols), entries_(rows * cols, Rat(0)) {}

    static RatMatrix identity(std::size_t n);
    static RatMatrix from_exact(const ExactMatrix& m);

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }

    Rat& at(std::size_t i, std::size_t j) { return entries_[i * cols_ + j]; }
    const Rat& at(std::size_t i, std::size_t j) const { return entries_[i * cols_ + j]; }

    bool operator==(const RatMatrix& o) const {
        return rows_ == o.rows_ && cols_ == o.cols_ && entries_ == o.entries_;
    }

    RatMatrix operator*(const RatMatrix& rhs) const;
    RatMatrix operator-(const RatMatrix& rhs) const;
    RatMatrix transpose() const;

    Rat max_abs() const;
    std::vector<Rat> column(std::size_t j) const;

    // Rank over the rationals; exact, invariant under column rescaling.
    std::size_t rank() const;

private:
    std::size_t rows_, cols_;
    std::vector<Rat> entries_;
};

std::size_t rank_of_columns(const std::vector<std::vector<Rat>>& columns);

}  // namespace outertrack

#endif
