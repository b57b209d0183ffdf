#include "atlas/neighbors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace atlas {

NeighborTable knn(const Matrix& points, int q) {
    const Eigen::Index n = points.rows();
    if (n < 2) throw std::invalid_argument("knn requires at least 2 points");
    if (q < 1 || q > n - 1) throw std::invalid_argument("knn requires 1 <= q <= N-1");

    NeighborTable table;
    table.q = q;
    table.lists.resize(n);

#pragma omp parallel
    {
        std::vector<std::pair<double, Eigen::Index>> cand;
        cand.reserve(n - 1);
#pragma omp for schedule(static)
        for (Eigen::Index i = 0; i < n; ++i) {
            cand.clear();
            for (Eigen::Index j = 0; j < n; ++j) {
                if (j == i) continue;
                cand.emplace_back((points.row(j) - points.row(i)).squaredNorm(), j);
            }
            auto lex = [](const auto& a, const auto& b) {
                return a.first != b.first ? a.first < b.first : a.second < b.second;
            };
            std::nth_element(cand.begin(), cand.begin() + (q - 1), cand.end(), lex);
            std::sort(cand.begin(), cand.begin() + q, lex);

            auto& list = table.lists[i];
            list.resize(q);
            for (int r = 0; r < q; ++r) list[r] = Neighbor{cand[r].second, std::sqrt(cand[r].first)};
        }
    }
    return table;
}

NeighborTable knn(const PointCloud& pc, int q) { return knn(pc.points, q); }

std::pair<double, double> pairwise_extremes(const Matrix& points) {
    const Eigen::Index n = points.rows();
    if (n < 2) throw std::invalid_argument("pairwise_extremes requires N >= 2");

    double min_nonzero = std::numeric_limits<double>::infinity();
    double max_dist = 0.0;
#pragma omp parallel for schedule(dynamic, 16) reduction(min : min_nonzero) reduction(max : max_dist)
    for (Eigen::Index i = 0; i < n; ++i) {
        for (Eigen::Index j = i + 1; j < n; ++j) {
            const double d2 = (points.row(i) - points.row(j)).squaredNorm();
            if (d2 > 0.0 && d2 < min_nonzero) min_nonzero = d2;
            if (d2 > max_dist) max_dist = d2;
        }
    }
    if (!std::isfinite(min_nonzero)) {
        throw std::invalid_argument("pairwise_extremes: all points are identical");
    }
    return {std::sqrt(min_nonzero), std::sqrt(max_dist)};
}

std::pair<double, double> pairwise_extremes(const PointCloud& pc) {
    return pairwise_extremes(pc.points);
}

}  // namespace atlas
