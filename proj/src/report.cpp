#include "atlas/report.hpp"

#include <fstream>
#include <stdexcept>

namespace atlas {

namespace {

std::ofstream open_out(const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    return out;
}

}  // namespace

void write_sweep_table(const AjdSweep& sweep, const std::filesystem::path& path) {
    auto out = open_out(path);
    out << "cluster_id\tdimension\tajd\n";
    for (const auto& [cluster, curve] : sweep.curves) {
        for (const auto& [d, value] : curve) out << cluster << '\t' << d << '\t' << value << '\n';
    }
    for (const auto& [d, value] : sweep.mean_curve()) out << -1 << '\t' << d << '\t' << value << '\n';
}

void write_epsilon_table(const EpsilonCurve& curve, const std::filesystem::path& path) {
    auto out = open_out(path);
    out << "epsilon\tgcc_fraction\n";
    for (std::size_t i = 0; i < curve.grid.size(); ++i) {
        out << curve.grid[i] << '\t' << curve.gcc_fraction[i] << '\n';
    }
}

void write_graph_file(const TransitionGraph& graph, const std::filesystem::path& path) {
    auto out = open_out(path);
    out << "node\tsize\tcomponent\n";
    for (std::size_t c = 0; c < graph.node_sizes.size(); ++c) {
        out << c << '\t' << graph.node_sizes[c] << '\t' << graph.component_of[c] << '\n';
    }
    out << "edge_a\tedge_b\tweight\n";
    for (const auto& edge : graph.edges) {
        out << edge.a << '\t' << edge.b << '\t' << edge.weight << '\n';
    }
}

void write_cover_report(const ClusterCover& cover, const std::filesystem::path& path) {
    auto out = open_out(path);
    out << "cluster\traw_size\texpanded_size\tadopted\n";
    const auto sizes = cover.cluster_sizes();
    for (int c = 0; c < cover.k; ++c) {
        const auto expanded = static_cast<Eigen::Index>(cover.expanded_members[c].size());
        out << c << '\t' << sizes[c] << '\t' << expanded << '\t' << expanded - sizes[c] << '\n';
    }
    out << "# transition_points\t" << cover.transition_points.size() << "\tl\t" << cover.l << '\n';
}

void write_jaccard_table(const JaccardReport& report, const std::filesystem::path& path) {
    auto out = open_out(path);
    out << "point\tjaccard\n";
    for (std::size_t i = 0; i < report.per_point.size(); ++i) {
        out << i << '\t' << report.per_point[i] << '\n';
    }
    out << "# ajd\t" << report.ajd << "\th\t" << report.h << '\n';
}

}  // namespace atlas
