#ifndef ATLAS_CLUSTERING_HPP
#define ATLAS_CLUSTERING_HPP

#include <cstdint>
#include <vector>

#include "atlas/neighbors.hpp"
#include "atlas/point_cloud.hpp"

namespace atlas {

/// A k-means partition, optionally expanded so that neighboring clusters share
/// their border points. expanded_members[c] always contains c's own members;
/// after expansion it also contains adopted points from adjacent clusters.
struct ClusterCover {
    int k = 0;
    std::vector<int> assignment;                    // per point, in [0, k)
    Matrix centroids;                               // k x m
    std::vector<std::vector<Eigen::Index>> expanded_members;  // sorted ascending
    std::vector<Eigen::Index> transition_points;    // sorted ascending
    int l = 0;                                      // neighbor count used for expansion (0 = not expanded)
    std::vector<double> wcss_history;               // within-cluster sum of squares per Lloyd iteration

    Eigen::Index n_points() const { return static_cast<Eigen::Index>(assignment.size()); }
    std::vector<Eigen::Index> raw_members(int cluster) const;
    std::vector<Eigen::Index> cluster_sizes() const;  // raw assignment counts
};

struct KMeansOptions {
    std::uint64_t seed = 0;
    int max_iters = 300;
    double tol = 1e-8;  // centroid shift threshold
};

/// Lloyd's algorithm from greedy farthest-point seeding. Empty clusters are
/// repaired by reseeding at the point farthest from its assigned centroid.
/// Returns a pre-expansion cover (expanded_members = raw members).
ClusterCover kmeans(const Matrix& points, int k, const KMeansOptions& opts = {});
ClusterCover kmeans(const PointCloud& pc, int k, const KMeansOptions& opts = {});

/// Marks every point with an l-NN in a different cluster as a transition point
/// and adopts each point's foreign l-NNs into that point's cluster. `nbrs`
/// must be built on the same cloud with q = l.
ClusterCover expand_transitions(const ClusterCover& cover, const NeighborTable& nbrs);

/// Nearest-centroid assignment for a new point; ties go to the lower id.
int assign_new_point(const ClusterCover& cover, const Vector& x);

}  // namespace atlas

#endif
