#ifndef ATLAS_EMBEDDING_HPP
#define ATLAS_EMBEDDING_HPP

#include <map>
#include <utility>
#include <vector>

#include "atlas/clustering.hpp"
#include "atlas/point_cloud.hpp"

namespace atlas {

/// Per-cluster PCA chart: the forward map x -> basis^T (x - mean).
struct PcaChart {
    int cluster_id = -1;
    Vector mean;             // m
    Matrix basis;            // m x n, column-orthonormal, non-increasing spectrum
    Vector singular_values;  // n
    int n = 0;               // embedding dimension

    Eigen::Index ambient_dim() const { return mean.size(); }
};

/// Fits a chart on one cluster's points. Requires size >= 2 and
/// 1 <= n <= min(size-1, m); n above the numerical rank is an error.
/// Sign convention: the largest-magnitude entry of each basis column is
/// made positive.
PcaChart fit_pca(const Matrix& points, int n, int cluster_id = -1);

Vector project(const PcaChart& chart, const Vector& x);
Matrix project_all(const PcaChart& chart, const Matrix& points);
Vector reconstruct(const PcaChart& chart, const Vector& y);
Matrix reconstruct_all(const PcaChart& chart, const Matrix& embedded);

/// Numerical rank of the centered matrix (singular values above
/// max(rows, cols) * eps * sv_max).
int numerical_rank(const Matrix& points);

/// Per-cluster AJD-versus-dimension curves. Clusters smaller than h+1 points
/// are skipped (their ids land in `skipped`).
struct AjdSweep {
    int h = 0;
    int d_max = 0;
    std::map<int, std::vector<std::pair<int, double>>> curves;  // cluster -> [(d, ajd)]
    std::vector<int> skipped;

    /// Mean over clusters at each dimension (the usual "black line").
    std::vector<std::pair<int, double>> mean_curve() const;
};

/// For each expanded cluster and each d in 1..min(d_max, size-1, rank):
/// fit PCA at d, project the members, and compute the within-cluster AJD at
/// neighbor count h (neighbors restricted to the cluster's member set).
AjdSweep ajd_sweep(const ClusterCover& cover, const Matrix& points, int h, int d_max);
AjdSweep ajd_sweep(const ClusterCover& cover, const PointCloud& pc, int h, int d_max);

enum class Verdict { Manifold, NoManifold, Inconclusive };

struct DimensionEstimate {
    Verdict verdict = Verdict::Inconclusive;
    int dimension = 0;                 // meaningful when verdict == Manifold
    std::map<int, int> crossing;       // cluster -> smallest d with ajd <= tau (-1 if never)
    double tau = 0.1;
    int delta = 2;
};

/// Per cluster, the smallest d with ajd <= tau. Manifold(max crossing) when
/// the crossings spread at most delta; NoManifold when they spread more;
/// Inconclusive when any curve never crosses tau (or the sweep is empty).
DimensionEstimate estimate_dimension(const AjdSweep& sweep, double tau = 0.1, int delta = 2);

const char* to_string(Verdict v);

}  // namespace atlas

#endif
