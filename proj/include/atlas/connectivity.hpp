#ifndef ATLAS_CONNECTIVITY_HPP
#define ATLAS_CONNECTIVITY_HPP

#include <vector>

#include "atlas/clustering.hpp"
#include "atlas/point_cloud.hpp"

namespace atlas {

/// Clusters as nodes, with an edge wherever two clusters share transition
/// points. Edge weight counts adoptions in both directions.
struct TransitionGraph {
    struct Edge {
        int a = 0;
        int b = 0;  // a < b
        long long weight = 0;
    };
    std::vector<Eigen::Index> node_sizes;  // raw cluster sizes
    std::vector<Edge> edges;
    std::vector<int> component_of;  // per cluster
    int n_components = 0;
};

TransitionGraph transition_graph(const ClusterCover& cover);

/// Giant-connected-component fraction as a function of the edge threshold
/// epsilon, on a linear grid from the minimum nonzero pairwise distance to the
/// maximum pairwise distance.
struct EpsilonCurve {
    std::vector<double> grid;
    std::vector<double> gcc_fraction;  // non-decreasing; ends at 1
};

EpsilonCurve epsilon_curve(const Matrix& points, int grid_size = 100);
EpsilonCurve epsilon_curve(const PointCloud& pc, int grid_size = 100);

/// Connected components of the graph with an edge (p, q) iff dist(p, q) <= eps.
/// Returns (component count, gcc fraction).
std::pair<int, double> epsilon_components(const Matrix& points, double eps);

enum class ComponentVerdict { Single, Multiple };

struct ComponentReport {
    ComponentVerdict verdict = ComponentVerdict::Single;
    int component_lower_bound = 1;  // 1 + number of detected joins
};

/// Flags the dataset as multiple components iff some single grid step raises
/// the gcc fraction by more than jump_threshold after the curve has already
/// exceeded 0.2.
ComponentReport classify_components(const EpsilonCurve& curve, double jump_threshold = 0.2);

const char* to_string(ComponentVerdict v);

}  // namespace atlas

#endif
