#ifndef ATLAS_NEIGHBORS_HPP
#define ATLAS_NEIGHBORS_HPP

#include <utility>
#include <vector>

#include "atlas/point_cloud.hpp"

namespace atlas {

struct Neighbor {
    Eigen::Index index;
    double distance;
};

/// For each point, its q nearest neighbors (self excluded) under Euclidean
/// distance, sorted ascending by distance with ties broken by ascending index.
struct NeighborTable {
    int q = 0;
    std::vector<std::vector<Neighbor>> lists;

    Eigen::Index n_points() const { return static_cast<Eigen::Index>(lists.size()); }
};

/// Exact brute-force kNN. Requires 1 <= q <= N-1.
NeighborTable knn(const Matrix& points, int q);
NeighborTable knn(const PointCloud& pc, int q);

/// (min nonzero pairwise distance, max pairwise distance). Requires N >= 2 and
/// at least one nonzero pair for the minimum to exist (all-identical input is
/// rejected).
std::pair<double, double> pairwise_extremes(const Matrix& points);
std::pair<double, double> pairwise_extremes(const PointCloud& pc);

}  // namespace atlas

#endif
