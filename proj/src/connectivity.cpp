#include "atlas/connectivity.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>
#include <cstdint>
#include <map>
#include <stdexcept>

#include "atlas/neighbors.hpp"

namespace atlas {

namespace {

struct UnionFind {
    std::vector<Eigen::Index> parent;
    std::vector<Eigen::Index> size;
    Eigen::Index max_size = 1;
    Eigen::Index n_components;

    explicit UnionFind(Eigen::Index n) : parent(n), size(n, 1), n_components(n) {
        for (Eigen::Index i = 0; i < n; ++i) parent[i] = i;
        if (n == 0) max_size = 0;
    }

    Eigen::Index find(Eigen::Index x) {
        while (parent[x] != x) {
            parent[x] = parent[parent[x]];
            x = parent[x];
        }
        return x;
    }

    void unite(Eigen::Index a, Eigen::Index b) {
        a = find(a);
        b = find(b);
        if (a == b) return;
        if (size[a] < size[b]) std::swap(a, b);
        parent[b] = a;
        size[a] += size[b];
        max_size = std::max(max_size, size[a]);
        --n_components;
    }
};

}  // namespace

TransitionGraph transition_graph(const ClusterCover& cover) {
    TransitionGraph graph;
    graph.node_sizes = cover.cluster_sizes();

    std::map<std::pair<int, int>, long long> weights;
    for (int c = 0; c < cover.k; ++c) {
        for (Eigen::Index p : cover.expanded_members[c]) {
            const int owner = cover.assignment[p];
            if (owner == c) continue;
            weights[{std::min(c, owner), std::max(c, owner)}] += 1;
        }
    }

    UnionFind uf(cover.k);
    graph.edges.reserve(weights.size());
    for (const auto& [key, w] : weights) {
        graph.edges.push_back({key.first, key.second, w});
        uf.unite(key.first, key.second);
    }

    graph.component_of.resize(cover.k);
    std::map<Eigen::Index, int> relabel;
    for (int c = 0; c < cover.k; ++c) {
        const Eigen::Index root = uf.find(c);
        auto [it, inserted] = relabel.try_emplace(root, static_cast<int>(relabel.size()));
        graph.component_of[c] = it->second;
    }
    graph.n_components = static_cast<int>(relabel.size());
    return graph;
}

EpsilonCurve epsilon_curve(const Matrix& points, int grid_size) {
    const Eigen::Index n = points.rows();
    if (n < 2) throw std::invalid_argument("epsilon_curve requires N >= 2");
    if (grid_size < 2) throw std::invalid_argument("epsilon_curve requires grid_size >= 2");

    const auto [lo, hi] = pairwise_extremes(points);

    EpsilonCurve curve;
    curve.grid.resize(grid_size);
    for (int g = 0; g < grid_size; ++g) {
        curve.grid[g] = lo + (hi - lo) * static_cast<double>(g) / (grid_size - 1);
    }
    curve.grid.back() = hi;

    // Each pair is bucketed by the first grid value at or above its distance,
    // then united exactly once during the ascending sweep.
    const std::size_t n_pairs = static_cast<std::size_t>(n) * (n - 1) / 2;
    std::vector<std::uint16_t> bucket;
    const bool cache_buckets = grid_size <= 65535 && n_pairs <= (500u << 20) / sizeof(std::uint16_t);
    if (cache_buckets) {
        bucket.resize(n_pairs);
        std::size_t idx = 0;
        for (Eigen::Index i = 0; i < n; ++i) {
            for (Eigen::Index j = i + 1; j < n; ++j, ++idx) {
                const double d = std::sqrt((points.row(i) - points.row(j)).squaredNorm());
                const auto it = std::lower_bound(curve.grid.begin(), curve.grid.end(), d);
                bucket[idx] = static_cast<std::uint16_t>(it - curve.grid.begin());
            }
        }
    }

    UnionFind uf(n);
    curve.gcc_fraction.resize(grid_size);
    for (int g = 0; g < grid_size; ++g) {
        std::size_t idx = 0;
        for (Eigen::Index i = 0; i < n; ++i) {
            for (Eigen::Index j = i + 1; j < n; ++j, ++idx) {
                if (cache_buckets) {
                    if (bucket[idx] == g) uf.unite(i, j);
                } else if (g == 0 || curve.grid[g - 1] <
                                         std::sqrt((points.row(i) - points.row(j)).squaredNorm())) {
                    if (std::sqrt((points.row(i) - points.row(j)).squaredNorm()) <= curve.grid[g]) {
                        uf.unite(i, j);
                    }
                }
            }
        }
        curve.gcc_fraction[g] = static_cast<double>(uf.max_size) / static_cast<double>(n);
        assert(g == 0 || curve.gcc_fraction[g] >= curve.gcc_fraction[g - 1]);
    }
    return curve;
}

EpsilonCurve epsilon_curve(const PointCloud& pc, int grid_size) {
    return epsilon_curve(pc.points, grid_size);
}

std::pair<int, double> epsilon_components(const Matrix& points, double eps) {
    const Eigen::Index n = points.rows();
    if (n < 1) throw std::invalid_argument("epsilon_components requires N >= 1");
    UnionFind uf(n);
    const double eps2 = eps * eps;
    for (Eigen::Index i = 0; i < n; ++i) {
        for (Eigen::Index j = i + 1; j < n; ++j) {
            if ((points.row(i) - points.row(j)).squaredNorm() <= eps2) uf.unite(i, j);
        }
    }
    return {static_cast<int>(uf.n_components), static_cast<double>(uf.max_size) / n};
}

ComponentReport classify_components(const EpsilonCurve& curve, double jump_threshold) {
    ComponentReport report;
    int jumps = 0;
    for (std::size_t t = 1; t < curve.gcc_fraction.size(); ++t) {
        if (curve.gcc_fraction[t - 1] > 0.2 &&
            curve.gcc_fraction[t] - curve.gcc_fraction[t - 1] > jump_threshold) {
            ++jumps;
        }
    }
    report.verdict = jumps > 0 ? ComponentVerdict::Multiple : ComponentVerdict::Single;
    report.component_lower_bound = 1 + jumps;
    return report;
}

const char* to_string(ComponentVerdict v) {
    return v == ComponentVerdict::Single ? "single" : "multiple";
}

}  // namespace atlas
