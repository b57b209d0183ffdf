#ifndef ATLAS_POINT_CLOUD_HPP
#define ATLAS_POINT_CLOUD_HPP

#include <Eigen/Dense>
#include <filesystem>
#include <string>
#include <vector>

namespace atlas {

// Points are stored one per row; row-major keeps per-point access contiguous.
using Matrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using Vector = Eigen::VectorXd;

/// An N x m numeric matrix with one data point per row. All entries must be
/// finite; labels are unique within their list.
struct PointCloud {
    Matrix points;
    std::vector<std::string> column_names;
    std::vector<std::string> row_ids;

    PointCloud() = default;
    PointCloud(Matrix pts, std::vector<std::string> cols, std::vector<std::string> rows);

    /// Wraps a raw matrix, generating default labels (c0..c{m-1}, r0..r{N-1}).
    static PointCloud from_matrix(Matrix pts);

    Eigen::Index n_points() const { return points.rows(); }
    Eigen::Index dim() const { return points.cols(); }

    /// Throws std::invalid_argument on any violated invariant (empty matrix,
    /// non-finite entry, label count/uniqueness mismatch).
    void validate() const;
};

/// Parses a delimiter-separated (comma or tab, auto-detected) numeric matrix.
/// The first row is treated as a header when any of its cells is non-numeric.
/// Parse failures report the offending row and column; ragged rows and
/// non-finite cells are rejected.
PointCloud load_matrix(const std::filesystem::path& path);

/// Writes a header row followed by one row per point. Values are printed in
/// shortest round-trip form, so save/load reproduces the matrix bit-for-bit.
void save_matrix(const PointCloud& pc, const std::filesystem::path& path, char delimiter = '\t');

}  // namespace atlas

#endif
