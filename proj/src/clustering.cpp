#include "atlas/clustering.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <stdexcept>

namespace atlas {

namespace {

// Nearest centroid with ties to the lower id.
int nearest_centroid(const Matrix& centroids, const Eigen::RowVectorXd& x) {
    int best = 0;
    double best_d = (centroids.row(0) - x).squaredNorm();
    for (Eigen::Index c = 1; c < centroids.rows(); ++c) {
        const double d = (centroids.row(c) - x).squaredNorm();
        if (d < best_d) {
            best_d = d;
            best = static_cast<int>(c);
        }
    }
    return best;
}

Matrix farthest_point_seeds(const Matrix& points, int k, std::uint64_t seed) {
    const Eigen::Index n = points.rows();
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<Eigen::Index> pick(0, n - 1);

    Matrix centroids(k, points.cols());
    std::vector<double> min_d2(n, std::numeric_limits<double>::infinity());
    Eigen::Index chosen = pick(rng);
    centroids.row(0) = points.row(chosen);
    for (int c = 1; c < k; ++c) {
        Eigen::Index far = 0;
        double far_d2 = -1.0;
        for (Eigen::Index i = 0; i < n; ++i) {
            const double d2 = (points.row(i) - centroids.row(c - 1)).squaredNorm();
            if (d2 < min_d2[i]) min_d2[i] = d2;
            if (min_d2[i] > far_d2) {
                far_d2 = min_d2[i];
                far = i;
            }
        }
        centroids.row(c) = points.row(far);
    }
    return centroids;
}

}  // namespace

std::vector<Eigen::Index> ClusterCover::raw_members(int cluster) const {
    std::vector<Eigen::Index> out;
    for (Eigen::Index i = 0; i < n_points(); ++i) {
        if (assignment[i] == cluster) out.push_back(i);
    }
    return out;
}

std::vector<Eigen::Index> ClusterCover::cluster_sizes() const {
    std::vector<Eigen::Index> sizes(k, 0);
    for (int a : assignment) ++sizes[a];
    return sizes;
}

ClusterCover kmeans(const Matrix& points, int k, const KMeansOptions& opts) {
    const Eigen::Index n = points.rows();
    if (k < 1 || k > n) throw std::invalid_argument("kmeans requires 1 <= k <= N");

    ClusterCover cover;
    cover.k = k;
    cover.centroids = farthest_point_seeds(points, k, opts.seed);
    cover.assignment.assign(n, 0);

    std::vector<Eigen::Index> sizes(k, 0);
    for (int iter = 0; iter < opts.max_iters; ++iter) {
        // Assignment step.
        double wcss = 0.0;
#pragma omp parallel for schedule(static) reduction(+ : wcss)
        for (Eigen::Index i = 0; i < n; ++i) {
            const int c = nearest_centroid(cover.centroids, points.row(i));
            cover.assignment[i] = c;
            wcss += (points.row(i) - cover.centroids.row(c)).squaredNorm();
        }
        std::fill(sizes.begin(), sizes.end(), 0);
        for (int a : cover.assignment) ++sizes[a];

        // Empty-cluster repair: reseed at the point farthest from its assigned
        // centroid (taken from a cluster that keeps at least one point).
        bool repaired = false;
        for (int c = 0; c < k; ++c) {
            if (sizes[c] > 0) continue;
            Eigen::Index far = -1;
            double far_d2 = -1.0;
            for (Eigen::Index i = 0; i < n; ++i) {
                if (sizes[cover.assignment[i]] < 2) continue;
                const double d2 = (points.row(i) - cover.centroids.row(cover.assignment[i])).squaredNorm();
                if (d2 > far_d2) {
                    far_d2 = d2;
                    far = i;
                }
            }
            if (far < 0) throw std::runtime_error("kmeans: cannot repair empty cluster");
            --sizes[cover.assignment[far]];
            cover.assignment[far] = c;
            sizes[c] = 1;
            cover.centroids.row(c) = points.row(far);
            repaired = true;
        }
        if (!repaired) cover.wcss_history.push_back(wcss);

        // Update step; accumulation stays serial so results are schedule-independent.
        Matrix next = Matrix::Zero(k, points.cols());
        for (Eigen::Index i = 0; i < n; ++i) next.row(cover.assignment[i]) += points.row(i);
        double shift = 0.0;
        for (int c = 0; c < k; ++c) {
            next.row(c) /= static_cast<double>(sizes[c]);
            shift = std::max(shift, (next.row(c) - cover.centroids.row(c)).norm());
        }
        cover.centroids = next;
        if (shift < opts.tol) break;
    }

    // Final labels consistent with the final centroids.
    double wcss = 0.0;
#pragma omp parallel for schedule(static) reduction(+ : wcss)
    for (Eigen::Index i = 0; i < n; ++i) {
        const int c = nearest_centroid(cover.centroids, points.row(i));
        cover.assignment[i] = c;
        wcss += (points.row(i) - cover.centroids.row(c)).squaredNorm();
    }
    cover.wcss_history.push_back(wcss);

    cover.expanded_members.resize(k);
    for (Eigen::Index i = 0; i < n; ++i) cover.expanded_members[cover.assignment[i]].push_back(i);
    for (auto& members : cover.expanded_members) {
        if (members.empty()) throw std::runtime_error("kmeans produced an empty cluster");
    }
    return cover;
}

ClusterCover kmeans(const PointCloud& pc, int k, const KMeansOptions& opts) {
    return kmeans(pc.points, k, opts);
}

ClusterCover expand_transitions(const ClusterCover& cover, const NeighborTable& nbrs) {
    const Eigen::Index n = cover.n_points();
    if (nbrs.n_points() != n) throw std::invalid_argument("expand_transitions: table size mismatch");
    if (nbrs.q < 1) throw std::invalid_argument("expand_transitions: l must be >= 1");

    ClusterCover out = cover;
    out.l = nbrs.q;

    std::vector<std::vector<char>> member(cover.k, std::vector<char>(n, 0));
    for (Eigen::Index i = 0; i < n; ++i) member[cover.assignment[i]][i] = 1;

    std::vector<char> is_transition(n, 0);
    for (Eigen::Index i = 0; i < n; ++i) {
        const int c = cover.assignment[i];
        for (const Neighbor& nb : nbrs.lists[i]) {
            const int nc = cover.assignment[nb.index];
            if (nc == c) continue;
            // i sees a foreign neighbor: both ends are transition points, the
            // neighbor is adopted into i's cluster and i into the neighbor's,
            // so the overlap is present on both sides of the border.
            is_transition[i] = 1;
            is_transition[nb.index] = 1;
            member[c][nb.index] = 1;
            member[nc][i] = 1;
        }
    }

    out.expanded_members.assign(cover.k, {});
    for (int c = 0; c < cover.k; ++c) {
        for (Eigen::Index i = 0; i < n; ++i) {
            if (member[c][i]) out.expanded_members[c].push_back(i);
        }
    }
    out.transition_points.clear();
    for (Eigen::Index i = 0; i < n; ++i) {
        if (is_transition[i]) out.transition_points.push_back(i);
    }
    return out;
}

int assign_new_point(const ClusterCover& cover, const Vector& x) {
    if (x.size() != cover.centroids.cols()) {
        throw std::invalid_argument("assign_new_point: dimension mismatch");
    }
    if (!x.allFinite()) throw std::invalid_argument("assign_new_point: non-finite input");
    return nearest_centroid(cover.centroids, x.transpose());
}

}  // namespace atlas
