#ifndef ATLAS_REPORT_HPP
#define ATLAS_REPORT_HPP

#include <filesystem>
#include <string>

#include "atlas/connectivity.hpp"
#include "atlas/distortion.hpp"
#include "atlas/embedding.hpp"

namespace atlas {

/// Long-format table: cluster_id, dimension, ajd. The across-cluster mean
/// curve is appended with cluster_id = -1.
void write_sweep_table(const AjdSweep& sweep, const std::filesystem::path& path);

/// Two columns: epsilon, gcc_fraction.
void write_epsilon_table(const EpsilonCurve& curve, const std::filesystem::path& path);

/// Node list (id, size) followed by an edge list (a, b, weight), plus the
/// component id of each node.
void write_graph_file(const TransitionGraph& graph, const std::filesystem::path& path);

/// Per-cluster raw size, expanded size, and adopted transition count.
void write_cover_report(const ClusterCover& cover, const std::filesystem::path& path);

/// One row per point (index, jaccard) plus a summary line with the mean.
void write_jaccard_table(const JaccardReport& report, const std::filesystem::path& path);

}  // namespace atlas

#endif
