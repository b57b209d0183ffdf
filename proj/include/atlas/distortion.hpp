#ifndef ATLAS_DISTORTION_HPP
#define ATLAS_DISTORTION_HPP

#include <vector>

#include "atlas/neighbors.hpp"
#include "atlas/point_cloud.hpp"

namespace atlas {

/// Per-point Jaccard distances between h-NN sets in two row-aligned spaces,
/// plus their mean (the average Jaccard distance).
struct JaccardReport {
    int h = 0;
    std::vector<double> per_point;  // each in [0, 1]
    double ajd = 0.0;               // arithmetic mean of per_point
};

/// Jaccard distance (|a u b| - |a n b|) / |a u b| between two nonempty index
/// sets (passed as sorted unique vectors).
double jaccard_point(const std::vector<Eigen::Index>& a, const std::vector<Eigen::Index>& b);

/// Average Jaccard distance between a cloud and a row-aligned representation:
/// A_i = h-NN of point i in `high`, B_i = h-NN of i in `low`.
JaccardReport ajd(const Matrix& high, const Matrix& low, int h);
JaccardReport ajd(const PointCloud& high, const PointCloud& low, int h);

/// Same, from precomputed neighbor tables of equal size and q.
JaccardReport ajd_tables(const NeighborTable& a, const NeighborTable& b);

}  // namespace atlas

#endif
