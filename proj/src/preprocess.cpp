#include "atlas/preprocess.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace atlas {

PointCloud cpm_normalize(const PointCloud& pc) {
    if ((pc.points.array() < 0.0).any()) {
        throw std::invalid_argument("cpm_normalize requires nonnegative entries");
    }
    PointCloud out = pc;
    for (Eigen::Index i = 0; i < out.points.rows(); ++i) {
        const double sum = out.points.row(i).sum();
        if (sum <= 0.0) {
            throw std::invalid_argument("cpm_normalize: zero-sum row '" + pc.row_ids[i] + "'");
        }
        out.points.row(i) *= 1e6 / sum;
    }
    return out;
}

PointCloud select_hvg(const PointCloud& pc, Eigen::Index n_genes) {
    const Eigen::Index m = pc.points.cols();
    if (n_genes < 1 || n_genes > m) throw std::invalid_argument("n_genes must be in [1, m]");

    std::vector<double> variance(m);
    const double n = static_cast<double>(pc.points.rows());
    for (Eigen::Index j = 0; j < m; ++j) {
        const double mean = pc.points.col(j).mean();
        variance[j] = n > 1 ? (pc.points.col(j).array() - mean).square().sum() / (n - 1.0) : 0.0;
    }

    std::vector<Eigen::Index> order(m);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](Eigen::Index a, Eigen::Index b) {
        return variance[a] != variance[b] ? variance[a] > variance[b] : a < b;
    });
    std::vector<Eigen::Index> keep(order.begin(), order.begin() + n_genes);
    std::sort(keep.begin(), keep.end());  // preserve original column order

    PointCloud out;
    out.points.resize(pc.points.rows(), n_genes);
    out.column_names.reserve(n_genes);
    for (Eigen::Index jj = 0; jj < n_genes; ++jj) {
        out.points.col(jj) = pc.points.col(keep[jj]);
        out.column_names.push_back(pc.column_names[keep[jj]]);
    }
    out.row_ids = pc.row_ids;
    out.validate();
    return out;
}

PointCloud log_transform(const PointCloud& pc) {
    if ((pc.points.array() < 0.0).any()) {
        throw std::invalid_argument("log_transform requires nonnegative entries");
    }
    PointCloud out = pc;
    out.points = out.points.array().log1p();
    return out;
}

}  // namespace atlas
