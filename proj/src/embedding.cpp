#include "atlas/embedding.hpp"

#include <Eigen/SVD>
#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "atlas/distortion.hpp"
#include "atlas/neighbors.hpp"

namespace atlas {

namespace {

int rank_from_singular_values(const Vector& sv, Eigen::Index rows, Eigen::Index cols) {
    if (sv.size() == 0) return 0;
    const double tol = static_cast<double>(std::max(rows, cols)) *
                       std::numeric_limits<double>::epsilon() * sv[0];
    int rank = 0;
    for (Eigen::Index i = 0; i < sv.size(); ++i) {
        if (sv[i] > tol) ++rank;
    }
    return rank;
}

void apply_sign_convention(Matrix& basis) {
    for (Eigen::Index j = 0; j < basis.cols(); ++j) {
        Eigen::Index arg = 0;
        double best = std::abs(basis(0, j));
        for (Eigen::Index i = 1; i < basis.rows(); ++i) {
            const double a = std::abs(basis(i, j));
            if (a > best) {
                best = a;
                arg = i;
            }
        }
        if (basis(arg, j) < 0.0) basis.col(j) = -basis.col(j);
    }
}

}  // namespace

int numerical_rank(const Matrix& points) {
    Matrix centered = points.rowwise() - points.colwise().mean();
    Eigen::BDCSVD<Matrix> svd(centered);
    return rank_from_singular_values(svd.singularValues(), centered.rows(), centered.cols());
}

PcaChart fit_pca(const Matrix& points, int n, int cluster_id) {
    const Eigen::Index size = points.rows();
    const Eigen::Index m = points.cols();
    if (size < 2) throw std::invalid_argument("fit_pca requires at least 2 points");
    if (n < 1 || n > std::min<Eigen::Index>(size - 1, m)) {
        throw std::invalid_argument("fit_pca requires 1 <= n <= min(size-1, m)");
    }

    PcaChart chart;
    chart.cluster_id = cluster_id;
    chart.n = n;
    chart.mean = points.colwise().mean();
    Matrix centered = points.rowwise() - chart.mean.transpose();

    Eigen::BDCSVD<Matrix> svd(centered, Eigen::ComputeThinV);
    const Vector& sv = svd.singularValues();
    const int rank = rank_from_singular_values(sv, size, m);
    if (n > rank) {
        throw std::invalid_argument("fit_pca: requested dimension " + std::to_string(n) +
                                    " exceeds numerical rank " + std::to_string(rank));
    }

    chart.basis = svd.matrixV().leftCols(n);
    chart.singular_values = sv.head(n);
    apply_sign_convention(chart.basis);
    return chart;
}

Vector project(const PcaChart& chart, const Vector& x) {
    if (x.size() != chart.mean.size()) throw std::invalid_argument("project: dimension mismatch");
    return chart.basis.transpose() * (x - chart.mean);
}

Matrix project_all(const PcaChart& chart, const Matrix& points) {
    if (points.cols() != chart.mean.size()) {
        throw std::invalid_argument("project_all: dimension mismatch");
    }
    return (points.rowwise() - chart.mean.transpose()) * chart.basis;
}

Vector reconstruct(const PcaChart& chart, const Vector& y) {
    if (y.size() != chart.n) throw std::invalid_argument("reconstruct: dimension mismatch");
    return chart.basis * y + chart.mean;
}

Matrix reconstruct_all(const PcaChart& chart, const Matrix& embedded) {
    if (embedded.cols() != chart.n) throw std::invalid_argument("reconstruct_all: dimension mismatch");
    return (embedded * chart.basis.transpose()).rowwise() + chart.mean.transpose();
}

std::vector<std::pair<int, double>> AjdSweep::mean_curve() const {
    std::map<int, std::pair<double, int>> acc;  // d -> (sum, count)
    for (const auto& [cluster, curve] : curves) {
        for (const auto& [d, value] : curve) {
            acc[d].first += value;
            acc[d].second += 1;
        }
    }
    std::vector<std::pair<int, double>> mean;
    mean.reserve(acc.size());
    for (const auto& [d, sc] : acc) mean.emplace_back(d, sc.first / sc.second);
    return mean;
}

AjdSweep ajd_sweep(const ClusterCover& cover, const Matrix& points, int h, int d_max) {
    if (h < 1) throw std::invalid_argument("ajd_sweep: h must be >= 1");
    if (d_max < 1 || d_max > points.cols()) {
        throw std::invalid_argument("ajd_sweep: d_max must be in [1, m]");
    }

    AjdSweep sweep;
    sweep.h = h;
    sweep.d_max = d_max;

    for (int c = 0; c < cover.k; ++c) {
        const auto& members = cover.expanded_members[c];
        const Eigen::Index size = static_cast<Eigen::Index>(members.size());
        if (size < h + 1) {
            sweep.skipped.push_back(c);
            continue;
        }
        Matrix sub(size, points.cols());
        for (Eigen::Index r = 0; r < size; ++r) sub.row(r) = points.row(members[r]);

        const int d_hi = static_cast<int>(
            std::min<Eigen::Index>({d_max, size - 1, numerical_rank(sub)}));
        if (d_hi < 1) {
            sweep.skipped.push_back(c);
            continue;
        }

        const PcaChart chart = fit_pca(sub, d_hi, c);
        const Matrix embedded_full = project_all(chart, sub);
        const NeighborTable high_table = knn(sub, h);

        std::vector<std::pair<int, double>> curve;
        curve.reserve(d_hi);
        for (int d = 1; d <= d_hi; ++d) {
            const Matrix low = embedded_full.leftCols(d);
            curve.emplace_back(d, ajd_tables(high_table, knn(low, h)).ajd);
        }
        sweep.curves[c] = std::move(curve);
    }
    return sweep;
}

AjdSweep ajd_sweep(const ClusterCover& cover, const PointCloud& pc, int h, int d_max) {
    return ajd_sweep(cover, pc.points, h, d_max);
}

DimensionEstimate estimate_dimension(const AjdSweep& sweep, double tau, int delta) {
    DimensionEstimate est;
    est.tau = tau;
    est.delta = delta;
    if (sweep.curves.empty()) {
        est.verdict = Verdict::Inconclusive;
        return est;
    }

    bool any_missing = false;
    int lo = std::numeric_limits<int>::max();
    int hi = std::numeric_limits<int>::min();
    for (const auto& [cluster, curve] : sweep.curves) {
        int crossing = -1;
        for (const auto& [d, value] : curve) {
            if (value <= tau) {
                crossing = d;
                break;
            }
        }
        est.crossing[cluster] = crossing;
        if (crossing < 0) {
            any_missing = true;
        } else {
            lo = std::min(lo, crossing);
            hi = std::max(hi, crossing);
        }
    }

    if (any_missing) {
        est.verdict = Verdict::Inconclusive;
    } else if (hi - lo <= delta) {
        est.verdict = Verdict::Manifold;
        est.dimension = hi;
    } else {
        est.verdict = Verdict::NoManifold;
    }
    return est;
}

const char* to_string(Verdict v) {
    switch (v) {
        case Verdict::Manifold: return "manifold";
        case Verdict::NoManifold: return "no-manifold";
        case Verdict::Inconclusive: return "inconclusive";
    }
    return "unknown";
}

}  // namespace atlas
