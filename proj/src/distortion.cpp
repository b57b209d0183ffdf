#include "atlas/distortion.hpp"

#include <algorithm>
#include <stdexcept>

#include "atlas/neighbors.hpp"

namespace atlas {

double jaccard_point(const std::vector<Eigen::Index>& a, const std::vector<Eigen::Index>& b) {
    if (a.empty() || b.empty()) throw std::invalid_argument("jaccard_point: empty set");
    std::size_t inter = 0;
    std::size_t ia = 0, ib = 0;
    while (ia < a.size() && ib < b.size()) {
        if (a[ia] == b[ib]) {
            ++inter;
            ++ia;
            ++ib;
        } else if (a[ia] < b[ib]) {
            ++ia;
        } else {
            ++ib;
        }
    }
    const std::size_t uni = a.size() + b.size() - inter;
    return static_cast<double>(uni - inter) / static_cast<double>(uni);
}

JaccardReport ajd_tables(const NeighborTable& ta, const NeighborTable& tb) {
    if (ta.n_points() != tb.n_points()) throw std::invalid_argument("ajd: table size mismatch");
    if (ta.q != tb.q) throw std::invalid_argument("ajd: neighbor counts differ");
    const Eigen::Index n = ta.n_points();
    const int h = ta.q;

    JaccardReport report;
    report.h = h;
    report.per_point.resize(n);

    std::vector<Eigen::Index> a(h), b(h);
    double sum = 0.0;
    for (Eigen::Index i = 0; i < n; ++i) {
        for (int r = 0; r < h; ++r) {
            a[r] = ta.lists[i][r].index;
            b[r] = tb.lists[i][r].index;
        }
        std::sort(a.begin(), a.end());
        std::sort(b.begin(), b.end());
        report.per_point[i] = jaccard_point(a, b);
        sum += report.per_point[i];
    }
    report.ajd = sum / static_cast<double>(n);
    return report;
}

JaccardReport ajd(const Matrix& high, const Matrix& low, int h) {
    if (high.rows() != low.rows()) throw std::invalid_argument("ajd: row-count mismatch");
    const Eigen::Index n = high.rows();
    if (h < 1 || h > n - 1) throw std::invalid_argument("ajd: requires 1 <= h <= N-1");
    return ajd_tables(knn(high, h), knn(low, h));
}

JaccardReport ajd(const PointCloud& high, const PointCloud& low, int h) {
    return ajd(high.points, low.points, h);
}

}  // namespace atlas
