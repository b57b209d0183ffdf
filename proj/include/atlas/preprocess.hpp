#ifndef ATLAS_PREPROCESS_HPP
#define ATLAS_PREPROCESS_HPP

#include "atlas/point_cloud.hpp"

namespace atlas {

/// Counts-per-million: x_ij -> x_ij / row_sum_i * 1e6. Requires nonnegative
/// entries; a zero-sum row is rejected with its row id.
PointCloud cpm_normalize(const PointCloud& pc);

/// Keeps the n_genes columns of highest sample variance (ties broken by lower
/// column index); original column order is preserved.
PointCloud select_hvg(const PointCloud& pc, Eigen::Index n_genes);

/// Entry-wise log(1 + x). Negative entries are rejected.
PointCloud log_transform(const PointCloud& pc);

}  // namespace atlas

#endif
