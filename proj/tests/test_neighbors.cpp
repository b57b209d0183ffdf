#include <doctest.h>

#include <algorithm>
#include <numeric>
#include <random>

#include "atlas/neighbors.hpp"
#include "oracles.hpp"

using namespace atlas;

TEST_CASE("knn on collinear points") {
    Matrix pts(3, 1);
    pts << 0, 1, 3;
    const NeighborTable t = knn(pts, 1);
    CHECK(t.lists[0][0].index == 1);
    CHECK(t.lists[1][0].index == 0);
    CHECK(t.lists[2][0].index == 1);
    CHECK(t.lists[2][0].distance == doctest::Approx(2.0));
}

TEST_CASE("knn with q = N-1 is a permutation of the other indices") {
    const Matrix pts = oracles::random_cloud(30, 4, 17);
    const NeighborTable t = knn(pts, 29);
    for (Eigen::Index i = 0; i < 30; ++i) {
        std::vector<Eigen::Index> got;
        for (const auto& nb : t.lists[i]) got.push_back(nb.index);
        std::sort(got.begin(), got.end());
        std::vector<Eigen::Index> want;
        for (Eigen::Index j = 0; j < 30; ++j) {
            if (j != i) want.push_back(j);
        }
        CHECK(got == want);
    }
}

TEST_CASE("duplicated points name each other first at distance zero") {
    Matrix pts(4, 2);
    pts << 5, 5, 0, 0, 5, 5, 9, 9;
    const NeighborTable t = knn(pts, 2);
    CHECK(t.lists[0][0].index == 2);
    CHECK(t.lists[0][0].distance == 0.0);
    CHECK(t.lists[2][0].index == 0);
    CHECK(t.lists[2][0].distance == 0.0);
}

TEST_CASE("knn matches the naive reference on random instances") {
    for (std::uint64_t seed : {1ull, 2ull, 3ull}) {
        const Eigen::Index n = 150 + 25 * static_cast<Eigen::Index>(seed);
        const Matrix pts = oracles::random_cloud(n, 6, seed);
        const int q = 12;
        const NeighborTable t = knn(pts, q);
        const auto ref = oracles::naive_knn(pts, q);
        for (Eigen::Index i = 0; i < n; ++i) {
            for (int r = 0; r < q; ++r) CHECK(t.lists[i][r].index == ref[i][r]);
        }
    }
}

TEST_CASE("knn is stable under point permutation when no ties exist") {
    const Eigen::Index n = 80;
    const Matrix pts = oracles::random_cloud(n, 3, 5);
    const NeighborTable base = knn(pts, 7);

    std::vector<Eigen::Index> perm(n);
    std::iota(perm.begin(), perm.end(), 0);
    std::mt19937_64 rng(123);
    std::shuffle(perm.begin(), perm.end(), rng);

    Matrix shuffled(n, 3);
    for (Eigen::Index i = 0; i < n; ++i) shuffled.row(perm[i]) = pts.row(i);
    const NeighborTable moved = knn(shuffled, 7);

    for (Eigen::Index i = 0; i < n; ++i) {
        for (int r = 0; r < 7; ++r) {
            CHECK(moved.lists[perm[i]][r].index == perm[base.lists[i][r].index]);
        }
    }
}

TEST_CASE("knn rejects out-of-range q") {
    const Matrix pts = oracles::random_cloud(10, 2, 1);
    CHECK_THROWS_AS(knn(pts, 0), std::invalid_argument);
    CHECK_THROWS_AS(knn(pts, 10), std::invalid_argument);
}

TEST_CASE("pairwise extremes") {
    Matrix pts(3, 1);
    pts << 0, 1, 3;
    const auto [lo, hi] = pairwise_extremes(pts);
    CHECK(lo == doctest::Approx(1.0));
    CHECK(hi == doctest::Approx(3.0));

    Matrix dup(3, 1);
    dup << 2, 2, 7;
    const auto [lo2, hi2] = pairwise_extremes(dup);
    CHECK(lo2 == doctest::Approx(5.0));

    // translation invariance
    Matrix shifted = pts;
    shifted.array() += 17.5;
    const auto [lo3, hi3] = pairwise_extremes(shifted);
    CHECK(lo3 == doctest::Approx(lo));
    CHECK(hi3 == doctest::Approx(hi));

    Matrix same(2, 2);
    same << 4, 4, 4, 4;
    CHECK_THROWS_AS(pairwise_extremes(same), std::invalid_argument);
}
