#include <doctest.h>

#include <algorithm>
#include <set>

#include "atlas/clustering.hpp"
#include "atlas/neighbors.hpp"
#include "oracles.hpp"

using namespace atlas;

namespace {

Matrix two_blobs(Eigen::Index per_blob, std::uint64_t seed) {
    Matrix pts = oracles::random_cloud(2 * per_blob, 2, seed);
    for (Eigen::Index i = per_blob; i < 2 * per_blob; ++i) pts.row(i).array() += 100.0;
    return pts;
}

double wcss_of(const Matrix& pts, const ClusterCover& cover) {
    double s = 0.0;
    for (Eigen::Index i = 0; i < pts.rows(); ++i) {
        s += (pts.row(i) - cover.centroids.row(cover.assignment[i])).squaredNorm();
    }
    return s;
}

}  // namespace

TEST_CASE("kmeans with k=1 returns the data mean") {
    const Matrix pts = oracles::random_cloud(50, 3, 2);
    const ClusterCover cover = kmeans(pts, 1);
    CHECK((cover.centroids.row(0).transpose() - pts.colwise().mean().transpose()).norm() < 1e-12);
    CHECK(cover.expanded_members[0].size() == 50);
}

TEST_CASE("kmeans with k=N gives singleton clusters with zero WCSS") {
    const Matrix pts = oracles::random_cloud(12, 2, 3);
    const ClusterCover cover = kmeans(pts, 12);
    CHECK(wcss_of(pts, cover) == doctest::Approx(0.0));
    const auto sizes = cover.cluster_sizes();
    for (auto s : sizes) CHECK(s == 1);
}

TEST_CASE("kmeans separates two far blobs exactly") {
    const Matrix pts = two_blobs(50, 4);
    const ClusterCover cover = kmeans(pts, 2);
    const int first = cover.assignment[0];
    for (Eigen::Index i = 0; i < 50; ++i) CHECK(cover.assignment[i] == first);
    for (Eigen::Index i = 50; i < 100; ++i) CHECK(cover.assignment[i] == 1 - first);
}

TEST_CASE("kmeans WCSS history is non-increasing") {
    const Matrix pts = oracles::random_cloud(300, 4, 9);
    const ClusterCover cover = kmeans(pts, 6);
    REQUIRE(cover.wcss_history.size() >= 2);
    for (std::size_t i = 1; i < cover.wcss_history.size(); ++i) {
        CHECK(cover.wcss_history[i] <= cover.wcss_history[i - 1] + 1e-9);
    }
}

TEST_CASE("kmeans is deterministic given a seed") {
    const Matrix pts = oracles::random_cloud(200, 3, 10);
    KMeansOptions opts;
    opts.seed = 77;
    const ClusterCover a = kmeans(pts, 5, opts);
    const ClusterCover b = kmeans(pts, 5, opts);
    CHECK(a.assignment == b.assignment);
    CHECK(a.centroids == b.centroids);
    CHECK_THROWS_AS(kmeans(pts, 0), std::invalid_argument);
    CHECK_THROWS_AS(kmeans(pts, 201), std::invalid_argument);
}

TEST_CASE("expansion is the identity for far-separated blobs") {
    const Matrix pts = two_blobs(40, 6);
    const ClusterCover cover = kmeans(pts, 2);
    const ClusterCover expanded = expand_transitions(cover, knn(pts, 5));
    CHECK(expanded.transition_points.empty());
    CHECK(expanded.expanded_members == cover.expanded_members);
    CHECK(expanded.l == 5);
}

// Ten equally spaced collinear points, clusters {0..4} and {5..9}. With l=4
// the 4-NN lists of 3,4,5,6 cross the border: cluster 0 adopts {5,6},
// cluster 1 adopts {3,4}, and exactly those four points are transitional.
TEST_CASE("expansion on the collinear fixture, l=4") {
    Matrix pts(10, 1);
    for (int i = 0; i < 10; ++i) pts(i, 0) = i;
    ClusterCover cover;
    cover.k = 2;
    cover.assignment = {0, 0, 0, 0, 0, 1, 1, 1, 1, 1};
    cover.centroids.resize(2, 1);
    cover.centroids << 2, 7;
    cover.expanded_members = {{0, 1, 2, 3, 4}, {5, 6, 7, 8, 9}};

    const ClusterCover out = expand_transitions(cover, knn(pts, 4));
    CHECK(out.transition_points == std::vector<Eigen::Index>{3, 4, 5, 6});
    CHECK(out.expanded_members[0] == std::vector<Eigen::Index>{0, 1, 2, 3, 4, 5, 6});
    CHECK(out.expanded_members[1] == std::vector<Eigen::Index>{3, 4, 5, 6, 7, 8, 9});
}

TEST_CASE("expansion on the collinear fixture, l=2") {
    Matrix pts(10, 1);
    for (int i = 0; i < 10; ++i) pts(i, 0) = i;
    ClusterCover cover;
    cover.k = 2;
    cover.assignment = {0, 0, 0, 0, 0, 1, 1, 1, 1, 1};
    cover.centroids.resize(2, 1);
    cover.centroids << 2, 7;
    cover.expanded_members = {{0, 1, 2, 3, 4}, {5, 6, 7, 8, 9}};

    // Only 4 and 5 see each other across the border at l=2.
    const ClusterCover out = expand_transitions(cover, knn(pts, 2));
    CHECK(out.transition_points == std::vector<Eigen::Index>{4, 5});
    CHECK(out.expanded_members[0] == std::vector<Eigen::Index>{0, 1, 2, 3, 4, 5});
    CHECK(out.expanded_members[1] == std::vector<Eigen::Index>{4, 5, 6, 7, 8, 9});
}

TEST_CASE("expansion invariants on random data") {
    const Matrix pts = oracles::random_cloud(200, 3, 21);
    const ClusterCover cover = kmeans(pts, 6);
    const ClusterCover out = expand_transitions(cover, knn(pts, 10));

    // monotone: every expanded cluster contains its raw members
    Eigen::Index adopted_total = 0;
    for (int c = 0; c < 6; ++c) {
        const auto raw = cover.raw_members(c);
        CHECK(std::includes(out.expanded_members[c].begin(), out.expanded_members[c].end(),
                            raw.begin(), raw.end()));
        adopted_total += static_cast<Eigen::Index>(out.expanded_members[c].size() - raw.size());
    }
    CHECK(adopted_total >= 0);

    // every adopted point is transitional; every transition point is in >= 2 clusters
    const std::set<Eigen::Index> trans(out.transition_points.begin(), out.transition_points.end());
    std::vector<int> membership_count(200, 0);
    for (int c = 0; c < 6; ++c) {
        for (auto p : out.expanded_members[c]) {
            ++membership_count[p];
            if (out.assignment[p] != c) CHECK(trans.count(p) == 1);
        }
    }
    for (auto p : out.transition_points) CHECK(membership_count[p] >= 2);

    // determinism
    const ClusterCover again = expand_transitions(cover, knn(pts, 10));
    CHECK(again.expanded_members == out.expanded_members);
    CHECK(again.transition_points == out.transition_points);
}

TEST_CASE("expand_transitions rejects a table built on a different cloud") {
    const Matrix pts = oracles::random_cloud(50, 2, 22);
    const ClusterCover cover = kmeans(pts, 3);
    const Matrix other = oracles::random_cloud(40, 2, 23);
    CHECK_THROWS_AS(expand_transitions(cover, knn(other, 5)), std::invalid_argument);
}

TEST_CASE("assign_new_point") {
    Matrix pts(4, 2);
    pts << 0, 0, 0, 1, 10, 10, 10, 11;
    const ClusterCover cover = kmeans(pts, 2);

    Vector near_c0 = cover.centroids.row(0).transpose();
    CHECK(assign_new_point(cover, near_c0) == 0);

    // midpoint of the two centroids: tie goes to the lower id
    Vector mid = 0.5 * (cover.centroids.row(0) + cover.centroids.row(1)).transpose();
    CHECK(assign_new_point(cover, mid) == 0);

    // every training point maps to its nearest centroid
    for (Eigen::Index i = 0; i < pts.rows(); ++i) {
        const int c = assign_new_point(cover, pts.row(i).transpose());
        const double own = (pts.row(i) - cover.centroids.row(c)).norm();
        for (int other = 0; other < 2; ++other) {
            CHECK(own <= (pts.row(i) - cover.centroids.row(other)).norm() + 1e-12);
        }
    }

    Vector wrong_dim(3);
    wrong_dim << 1, 2, 3;
    CHECK_THROWS_AS(assign_new_point(cover, wrong_dim), std::invalid_argument);
}
