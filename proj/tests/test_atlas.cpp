#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <random>

#include "atlas/atlas_model.hpp"
#include "atlas/distortion.hpp"
#include "atlas/generators.hpp"
#include "oracles.hpp"

using namespace atlas;

namespace {

// Small S-curve atlas shared by the cases below (2D charts, short training).
struct Fixture {
    PointCloud cloud;
    ClusterCover cover;
    Atlas atlas;

    Fixture() {
        cloud = gen_s_curve({500, 21}).cloud;
        cover = expand_transitions(kmeans(cloud.points, 4, {21}), knn(cloud.points, 10));
        TrainConfig cfg;
        cfg.epochs = 2500;
        cfg.hidden_layers = 3;
        cfg.hidden_width = 32;
        cfg.seed = 21;
        atlas = train_atlas(cloud.points, cover, 2, cfg);
    }
};

const Fixture& fixture() {
    static Fixture f;
    return f;
}

}  // namespace

TEST_CASE("trained atlas reconstructs training points") {
    const auto& f = fixture();
    REQUIRE(f.atlas.charts.size() == 4);
    for (const auto& chart : f.atlas.charts) {
        CHECK(chart.final_mse < 5e-3);
        CHECK(chart.inverse.is_smooth());

        // map_inverse of a training projection lands near the training point
        const auto& members = f.cover.expanded_members[chart.chart.cluster_id];
        double worst = 0.0;
        for (std::size_t r = 0; r < members.size(); ++r) {
            const Vector y = chart.embedded.row(static_cast<Eigen::Index>(r)).transpose();
            const Vector back = map_inverse(f.atlas, chart.chart.cluster_id, y);
            worst = std::max(worst, (back - f.cloud.points.row(members[r]).transpose()).norm());
        }
        CHECK(worst < 0.5);  // bounded by training error on a unit-scale cloud
    }
    CHECK_THROWS_AS(map_inverse(f.atlas, 99, Vector::Zero(2)), std::invalid_argument);
}

TEST_CASE("neural inverse does not substantially underperform the linear baseline") {
    const auto& f = fixture();
    for (const auto& chart : f.atlas.charts) {
        const auto& members = f.cover.expanded_members[chart.chart.cluster_id];
        Matrix sub(static_cast<Eigen::Index>(members.size()), 3);
        for (std::size_t r = 0; r < members.size(); ++r) {
            sub.row(static_cast<Eigen::Index>(r)) = f.cloud.points.row(members[r]);
        }
        const Matrix net_out = chart.inverse.predict_all(chart.embedded);
        const Matrix lin_out = reconstruct_all(chart.chart, chart.embedded);
        const int h = 20;
        const double net_ajd = ajd(sub, net_out, h).ajd;
        const double lin_ajd = ajd(sub, lin_out, h).ajd;
        CHECK(net_ajd <= lin_ajd + 0.05);
    }
}

TEST_CASE("sample_ball stays inside the ball and hits the right radius") {
    const auto& f = fixture();
    const Matrix& emb = f.atlas.charts[0].embedded;
    std::mt19937_64 rng(5);

    for (int r_rank : {1, 5}) {
        for (int trial = 0; trial < 200; ++trial) {
            std::mt19937_64 probe = rng;  // copy: replay the center draw
            std::uniform_int_distribution<Eigen::Index> pick(0, emb.rows() - 1);
            const Eigen::Index center = pick(probe);

            const Vector s = sample_ball(emb, r_rank, rng);
            // radius bound: distance to the r_rank-th neighbor of the center
            std::vector<double> d;
            for (Eigen::Index j = 0; j < emb.rows(); ++j) {
                if (j != center) d.push_back((emb.row(j) - emb.row(center)).norm());
            }
            std::nth_element(d.begin(), d.begin() + (r_rank - 1), d.end());
            CHECK((s - emb.row(center).transpose()).norm() <= d[r_rank - 1] + 1e-12);
        }
    }
    std::mt19937_64 rng2(6);
    CHECK_THROWS_AS(sample_ball(emb, static_cast<int>(emb.rows()), rng2), std::invalid_argument);
}

TEST_CASE("ball sampling is uniform: 1D offsets pass a KS test at 1%") {
    // n=1 chart: offsets from the center must be uniform on [-r, r].
    Matrix line(60, 1);
    for (int i = 0; i < 60; ++i) line(i, 0) = i;  // unit spacing: r_rank=1 radius is 1
    std::mt19937_64 rng(7);
    std::vector<double> offsets;
    const int draws = 10000;
    for (int i = 0; i < draws; ++i) {
        std::mt19937_64 probe = rng;
        std::uniform_int_distribution<Eigen::Index> pick(0, 59);
        const Eigen::Index center = pick(probe);
        const Vector s = sample_ball(line, 1, rng);
        offsets.push_back(s[0] - line(center, 0));
    }
    const double ks = oracles::ks_statistic(
        offsets, [](double x) { return std::clamp((x + 1.0) / 2.0, 0.0, 1.0); });
    // critical value at alpha = 0.01: 1.628 / sqrt(n)
    CHECK(ks < 1.628 / std::sqrt(static_cast<double>(draws)));
}

TEST_CASE("generate defaults to original cluster sizes and is deterministic") {
    const auto& f = fixture();
    const GeneratedCloud a = generate(f.atlas, 0, 1, 77);
    const GeneratedCloud b = generate(f.atlas, 0, 1, 77);
    CHECK(a.cloud.points == b.cloud.points);
    CHECK(a.provenance == b.provenance);

    CHECK(a.cloud.n_points() == 500);
    const auto sizes = f.cover.cluster_sizes();
    std::vector<Eigen::Index> counts(4, 0);
    for (int p : a.provenance) ++counts[p];
    for (int c = 0; c < 4; ++c) CHECK(counts[c] == sizes[c]);

    const GeneratedCloud fixed = generate(f.atlas, 12, 1, 77);
    CHECK(fixed.cloud.n_points() == 48);
}

TEST_CASE("generated points stay near the s-curve surface") {
    const auto& f = fixture();
    const GeneratedCloud gen = generate(f.atlas, 0, 1, 31);
    double mean_dist = 0.0;
    for (Eigen::Index i = 0; i < gen.cloud.n_points(); ++i) {
        mean_dist += oracles::s_curve_surface_distance(gen.cloud.points(i, 0),
                                                       gen.cloud.points(i, 1),
                                                       gen.cloud.points(i, 2));
    }
    mean_dist /= static_cast<double>(gen.cloud.n_points());
    CHECK(mean_dist < 0.25);  // coarse surface proximity at this training budget
}

TEST_CASE("atlas round-trips through its JSON container bit-exactly") {
    const auto& f = fixture();
    const auto path = std::filesystem::temp_directory_path() / "atlas_test_model.json";
    save_atlas(f.atlas, path);
    const Atlas back = load_atlas(path);

    REQUIRE(back.charts.size() == f.atlas.charts.size());
    CHECK(back.embed_dim == f.atlas.embed_dim);
    CHECK(back.seed == f.atlas.seed);
    CHECK(back.cover.assignment == f.atlas.cover.assignment);
    CHECK(back.cover.centroids == f.atlas.cover.centroids);
    CHECK(back.cover.expanded_members == f.atlas.cover.expanded_members);
    for (std::size_t c = 0; c < back.charts.size(); ++c) {
        const auto& x = back.charts[c];
        const auto& y = f.atlas.charts[c];
        CHECK(x.chart.mean == y.chart.mean);
        CHECK(x.chart.basis == y.chart.basis);
        CHECK(x.chart.singular_values == y.chart.singular_values);
        CHECK(x.embedded == y.embedded);
        CHECK(x.final_mse == y.final_mse);
        REQUIRE(x.inverse.layers().size() == y.inverse.layers().size());
        for (std::size_t l = 0; l < x.inverse.layers().size(); ++l) {
            CHECK(x.inverse.layers()[l].weights == y.inverse.layers()[l].weights);
            CHECK(x.inverse.layers()[l].bias == y.inverse.layers()[l].bias);
        }
        CHECK(x.inverse.input_mean() == y.inverse.input_mean());
        CHECK(x.inverse.target_scale() == y.inverse.target_scale());
    }

    // generation through the reloaded atlas is identical
    CHECK(generate(back, 10, 1, 5).cloud.points == generate(f.atlas, 10, 1, 5).cloud.points);
}

TEST_CASE("load_atlas rejects corrupt files") {
    const auto path = std::filesystem::temp_directory_path() / "atlas_test_bad.json";
    {
        std::ofstream out(path);
        out << "{\"format\": \"something-else\"}";
    }
    CHECK_THROWS_AS(load_atlas(path), std::runtime_error);
    CHECK_THROWS_AS(load_atlas("/nonexistent/path.json"), std::runtime_error);
}

TEST_CASE("train_atlas propagates per-chart dimension errors") {
    const auto& f = fixture();
    TrainConfig cfg;
    cfg.epochs = 1;
    // n far above any cluster rank (3D data): fit_pca must refuse
    CHECK_THROWS_AS(train_atlas(f.cloud.points, f.cover, 7, cfg), std::invalid_argument);
}
