#ifndef ATLAS_ATLAS_MODEL_HPP
#define ATLAS_ATLAS_MODEL_HPP

#include <cstdint>
#include <filesystem>
#include <random>
#include <vector>

#include "atlas/clustering.hpp"
#include "atlas/mlp.hpp"

namespace atlas {

/// One chart pair: the PCA forward map, its trained neural inverse, and the
/// cluster's embedded training points (the sampling substrate for generation).
struct ChartModel {
    PcaChart chart;
    MlpInverse inverse;
    Matrix embedded;  // expanded-cluster projections, one row per point
    double final_mse = 0.0;
    int epochs = 0;
};

struct Atlas {
    ClusterCover cover;
    int embed_dim = 0;
    std::vector<ChartModel> charts;  // one per cluster, indexed by cluster id
    std::uint64_t seed = 0;
};

/// Fits per-cluster PCA at dimension n and trains every inverse chart.
/// Training seeds derive from cfg.seed and the cluster id, so the result is
/// deterministic regardless of scheduling.
Atlas train_atlas(const Matrix& points, const ClusterCover& cover, int n, const TrainConfig& cfg);

/// Inverse chart evaluation: de-standardize(net(standardize(y))).
Vector map_inverse(const Atlas& atlas, int cluster_id, const Vector& y);

/// Draws one point from the ball around a random embedded training point; the
/// radius is the distance to that point's r_rank-th nearest neighbor in the
/// embedding. Uniform in the ball: uniform direction, radius r * u^(1/n).
Vector sample_ball(const Matrix& embedded, int r_rank, std::mt19937_64& rng);

struct GeneratedCloud {
    PointCloud cloud;
    std::vector<int> provenance;  // source cluster per generated row
};

/// Samples n_per_cluster points per chart via sample_ball and maps them back
/// through the inverse charts. n_per_cluster <= 0 matches each cluster's
/// original size.
GeneratedCloud generate(const Atlas& atlas, Eigen::Index n_per_cluster, int r_rank,
                        std::uint64_t seed);

/// Self-describing JSON container; load round-trips every parameter
/// bit-exactly.
void save_atlas(const Atlas& atlas, const std::filesystem::path& path);
Atlas load_atlas(const std::filesystem::path& path);

}  // namespace atlas

#endif
