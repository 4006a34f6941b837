#include <doctest.h>

#include "outertrack/matrix.hpp"

#include <random>

using namespace outertrack;

namespace {

ExactMatrix random_matrix(std::mt19937_64& rng, std::size_t n, int lo, int hi) {
    std::uniform_int_distribution<int> dist(lo, hi);
    ExactMatrix m(n, n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) m.at(i, j) = dist(rng);
    return m;
}

}  // namespace

TEST_CASE("matrix product and transpose basics") {
    ExactMatrix a(2, 3), b(3, 2);
    int v = 1;
    for (std::size_t i = 0; i < 2; ++i)
        for (std::size_t j = 0; j < 3; ++j) a.at(i, j) = v++;
    for (std::size_t i = 0; i < 3; ++i)
        for (std::size_t j = 0; j < 2; ++j) b.at(i, j) = v++;
    ExactMatrix ab = a * b;
    CHECK(ab.rows() == 2);
    CHECK(ab.cols() == 2);
    CHECK(ab.at(0, 0) == 1 * 7 + 2 * 9 + 3 * 11);
    CHECK(ab.at(1, 1) == 4 * 8 + 5 * 10 + 6 * 12);
    CHECK(a.transpose().transpose() == a);
    CHECK((a * ExactMatrix::identity(3)) == a);
}

TEST_CASE("transpose reverses products") {
    std::mt19937_64 rng(7);
    for (int trial = 0; trial < 50; ++trial) {
        ExactMatrix a = random_matrix(rng, 4, 0, 9), b = random_matrix(rng, 4, 0, 9);
        CHECK((a * b).transpose() == b.transpose() * a.transpose());
    }
}

TEST_CASE("determinant by Bareiss matches a hand expansion") {
    ExactMatrix m(3, 3);
    int vals[3][3] = {{2, 0, 1}, {3, 5, 2}, {1, 4, 1}};
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) m.at(i, j) = vals[i][j];
    CHECK(m.determinant() == 1);
    CHECK(ExactMatrix::identity(5).determinant() == 1);
    ExactMatrix sing(2, 2);
    sing.at(0, 0) = 1;
    sing.at(0, 1) = 2;
    sing.at(1, 0) = 2;
    sing.at(1, 1) = 4;
    CHECK(sing.determinant() == 0);
}

TEST_CASE("rational rank is exact and column-scaling invariant") {
    RatMatrix m(3, 3);
    m.at(0, 0) = 1;
    m.at(0, 1) = 2;
    m.at(0, 2) = 3;
    m.at(1, 0) = 2;
    m.at(1, 1) = 4;
    m.at(1, 2) = 6;
    m.at(2, 1) = 1;
    m.at(2, 2) = 1;
    CHECK(m.rank() == 2);

    auto cols = std::vector<std::vector<Rat>>{m.column(0), m.column(1), m.column(2)};
    for (auto& c : cols)
        for (auto& x : c) x *= Rat(7, 3);
    CHECK(rank_of_columns(cols) == 2);
}

TEST_CASE("rank of a square never grows") {
    std::mt19937_64 rng(99);
    for (int trial = 0; trial < 20; ++trial) {
        ExactMatrix a = random_matrix(rng, 5, 0, 3);
        RatMatrix ra = RatMatrix::from_exact(a);
        std::size_t r = ra.rank();
        CHECK(r <= 5);
        CHECK((ra * ra).rank() <= r);
    }
}

TEST_CASE("direct sum and permutation") {
    ExactMatrix a = ExactMatrix::identity(2), b(1, 1);
    b.at(0, 0) = 5;
    ExactMatrix s = ExactMatrix::direct_sum(a, b);
    CHECK(s.rows() == 3);
    CHECK(s.at(2, 2) == 5);
    std::vector<std::size_t> perm{2, 0, 1};
    ExactMatrix p = s.permuted(perm, perm);
    CHECK(p.at(0, 0) == 5);
    CHECK(p.at(1, 1) == 1);
}
