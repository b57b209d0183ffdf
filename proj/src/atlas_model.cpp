#include "atlas/atlas_model.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <fstream>
#include <stdexcept>
#include <utility>

#include <json.hpp>

namespace atlas {

namespace {

using nlohmann::json;

std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t tag) {
    std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (tag + 1);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

json mat_to_json(const Matrix& m) {
    json rows = json::array();
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        json row = json::array();
        for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
        rows.push_back(std::move(row));
    }
    return rows;
}

Matrix mat_from_json(const json& rows) {
    if (!rows.is_array() || rows.empty()) throw std::runtime_error("atlas file: bad matrix");
    const Eigen::Index r = static_cast<Eigen::Index>(rows.size());
    const Eigen::Index c = static_cast<Eigen::Index>(rows[0].size());
    Matrix m(r, c);
    for (Eigen::Index i = 0; i < r; ++i) {
        if (static_cast<Eigen::Index>(rows[i].size()) != c) {
            throw std::runtime_error("atlas file: ragged matrix");
        }
        for (Eigen::Index j = 0; j < c; ++j) m(i, j) = rows[i][j].get<double>();
    }
    return m;
}

json vec_to_json(const Vector& v) {
    json out = json::array();
    for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(v[i]);
    return out;
}

Vector vec_from_json(const json& arr) {
    Vector v(arr.size());
    for (Eigen::Index i = 0; i < v.size(); ++i) v[i] = arr[i].get<double>();
    return v;
}

}  // namespace

Atlas train_atlas(const Matrix& points, const ClusterCover& cover, int n, const TrainConfig& cfg) {
    if (n < 1) throw std::invalid_argument("train_atlas: dimension must be >= 1");
    Atlas atlas;
    atlas.cover = cover;
    atlas.embed_dim = n;
    atlas.seed = cfg.seed;
    atlas.charts.resize(cover.k);

    std::exception_ptr error;
#pragma omp parallel for schedule(dynamic)
    for (int c = 0; c < cover.k; ++c) {
        try {
            const auto& members = cover.expanded_members[c];
            Matrix sub(static_cast<Eigen::Index>(members.size()), points.cols());
            for (std::size_t r = 0; r < members.size(); ++r) sub.row(r) = points.row(members[r]);

            TrainConfig chart_cfg = cfg;
            chart_cfg.seed = mix_seed(cfg.seed, static_cast<std::uint64_t>(c));

            ChartModel model;
            model.chart = fit_pca(sub, n, c);
            TrainResult result = train_inverse(model.chart, sub, chart_cfg);
            model.inverse = std::move(result.net);
            model.embedded = project_all(model.chart, sub);
            model.final_mse = result.final_mse;
            model.epochs = chart_cfg.epochs;
            atlas.charts[c] = std::move(model);
        } catch (...) {
#pragma omp critical
            if (!error) error = std::current_exception();
        }
    }
    if (error) std::rethrow_exception(error);
    return atlas;
}

Vector map_inverse(const Atlas& atlas, int cluster_id, const Vector& y) {
    if (cluster_id < 0 || cluster_id >= static_cast<int>(atlas.charts.size())) {
        throw std::invalid_argument("map_inverse: unknown cluster id " + std::to_string(cluster_id));
    }
    return atlas.charts[cluster_id].inverse.predict(y);
}

Vector sample_ball(const Matrix& embedded, int r_rank, std::mt19937_64& rng) {
    const Eigen::Index n_pts = embedded.rows();
    const Eigen::Index dim = embedded.cols();
    if (r_rank < 1 || r_rank > n_pts - 1) {
        throw std::invalid_argument("sample_ball: r_rank must be in [1, points-1]");
    }

    std::uniform_int_distribution<Eigen::Index> pick(0, n_pts - 1);
    const Eigen::Index center = pick(rng);

    std::vector<std::pair<double, Eigen::Index>> d2;
    d2.reserve(n_pts - 1);
    for (Eigen::Index j = 0; j < n_pts; ++j) {
        if (j != center) d2.emplace_back((embedded.row(j) - embedded.row(center)).squaredNorm(), j);
    }
    std::nth_element(d2.begin(), d2.begin() + (r_rank - 1), d2.end());
    const double r = std::sqrt(d2[r_rank - 1].first);

    std::normal_distribution<double> normal(0.0, 1.0);
    Vector dir(dim);
    double norm = 0.0;
    do {
        for (Eigen::Index j = 0; j < dim; ++j) dir[j] = normal(rng);
        norm = dir.norm();
    } while (norm < 1e-12);
    dir /= norm;

    std::uniform_real_distribution<double> unit(0.0, 1.0);
    const double radius = r * std::pow(unit(rng), 1.0 / static_cast<double>(dim));
    return embedded.row(center).transpose() + radius * dir;
}

GeneratedCloud generate(const Atlas& atlas, Eigen::Index n_per_cluster, int r_rank,
                        std::uint64_t seed) {
    if (atlas.charts.empty()) throw std::invalid_argument("generate: atlas has no charts");
    const auto sizes = atlas.cover.cluster_sizes();

    std::vector<Eigen::Index> counts(atlas.charts.size());
    Eigen::Index total = 0;
    for (std::size_t c = 0; c < atlas.charts.size(); ++c) {
        counts[c] = n_per_cluster > 0 ? n_per_cluster : sizes[c];
        total += counts[c];
    }

    const Eigen::Index m = atlas.charts[0].chart.mean.size();
    Matrix out(total, m);
    GeneratedCloud result;
    result.provenance.reserve(total);
    std::vector<std::string> row_ids;
    row_ids.reserve(total);

    Eigen::Index row = 0;
    for (std::size_t c = 0; c < atlas.charts.size(); ++c) {
        const ChartModel& model = atlas.charts[c];
        if (model.embedded.rows() == 0) throw std::runtime_error("generate: untrained chart");
        std::mt19937_64 rng(mix_seed(seed, static_cast<std::uint64_t>(c)));
        for (Eigen::Index s = 0; s < counts[c]; ++s, ++row) {
            const Vector y = sample_ball(model.embedded, r_rank, rng);
            out.row(row) = model.inverse.predict(y).transpose();
            result.provenance.push_back(static_cast<int>(c));
            row_ids.push_back("gen_c" + std::to_string(c) + "_" + std::to_string(s));
        }
    }

    result.cloud = PointCloud::from_matrix(std::move(out));
    result.cloud.row_ids = std::move(row_ids);
    result.cloud.validate();
    return result;
}

void save_atlas(const Atlas& atlas, const std::filesystem::path& path) {
    json doc;
    doc["format"] = "atlas";
    doc["version"] = 1;
    doc["embed_dim"] = atlas.embed_dim;
    doc["seed"] = atlas.seed;

    json cover;
    cover["k"] = atlas.cover.k;
    cover["l"] = atlas.cover.l;
    cover["assignment"] = atlas.cover.assignment;
    cover["centroids"] = mat_to_json(atlas.cover.centroids);
    cover["expanded_members"] = atlas.cover.expanded_members;
    cover["transition_points"] = atlas.cover.transition_points;
    doc["cover"] = std::move(cover);

    json charts = json::array();
    for (const ChartModel& model : atlas.charts) {
        json chart;
        chart["cluster"] = model.chart.cluster_id;
        chart["pca"] = {{"mean", vec_to_json(model.chart.mean)},
                        {"basis", mat_to_json(model.chart.basis)},
                        {"singular_values", vec_to_json(model.chart.singular_values)},
                        {"n", model.chart.n}};
        chart["standardization"] = {{"x_mean", vec_to_json(model.inverse.input_mean())},
                                    {"x_scale", vec_to_json(model.inverse.input_scale())},
                                    {"y_mean", vec_to_json(model.inverse.target_mean())},
                                    {"y_scale", vec_to_json(model.inverse.target_scale())}};
        json layers = json::array();
        for (const DenseLayer& layer : model.inverse.layers()) {
            layers.push_back({{"activation", layer.activation == Activation::Tanh ? "tanh" : "identity"},
                              {"weights", mat_to_json(layer.weights)},
                              {"bias", vec_to_json(layer.bias)}});
        }
        chart["layers"] = std::move(layers);
        chart["embedded"] = mat_to_json(model.embedded);
        chart["final_mse"] = model.final_mse;
        chart["epochs"] = model.epochs;
        charts.push_back(std::move(chart));
    }
    doc["charts"] = std::move(charts);

    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    out << doc.dump();
    if (!out) throw std::runtime_error("write failed for " + path.string());
}

Atlas load_atlas(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path.string());
    json doc;
    try {
        in >> doc;
    } catch (const json::exception& e) {
        throw std::runtime_error(path.string() + ": not a valid atlas file: " + e.what());
    }
    if (doc.value("format", "") != "atlas") {
        throw std::runtime_error(path.string() + ": not an atlas file");
    }
    if (doc.value("version", 0) != 1) {
        throw std::runtime_error(path.string() + ": unsupported atlas version");
    }

    Atlas atlas;
    atlas.embed_dim = doc.at("embed_dim").get<int>();
    atlas.seed = doc.at("seed").get<std::uint64_t>();

    const json& cover = doc.at("cover");
    atlas.cover.k = cover.at("k").get<int>();
    atlas.cover.l = cover.at("l").get<int>();
    atlas.cover.assignment = cover.at("assignment").get<std::vector<int>>();
    atlas.cover.centroids = mat_from_json(cover.at("centroids"));
    atlas.cover.expanded_members =
        cover.at("expanded_members").get<std::vector<std::vector<Eigen::Index>>>();
    atlas.cover.transition_points = cover.at("transition_points").get<std::vector<Eigen::Index>>();

    for (const json& chart : doc.at("charts")) {
        ChartModel model;
        model.chart.cluster_id = chart.at("cluster").get<int>();
        const json& pca = chart.at("pca");
        model.chart.mean = vec_from_json(pca.at("mean"));
        model.chart.basis = mat_from_json(pca.at("basis"));
        model.chart.singular_values = vec_from_json(pca.at("singular_values"));
        model.chart.n = pca.at("n").get<int>();

        std::vector<DenseLayer> layers;
        for (const json& jl : chart.at("layers")) {
            DenseLayer layer;
            layer.activation =
                jl.at("activation").get<std::string>() == "tanh" ? Activation::Tanh : Activation::Identity;
            layer.weights = mat_from_json(jl.at("weights"));
            layer.bias = vec_from_json(jl.at("bias"));
            layers.push_back(std::move(layer));
        }
        const int n_in = static_cast<int>(layers.front().weights.cols());
        const int n_out = static_cast<int>(layers.back().weights.rows());
        model.inverse = MlpInverse(n_in, n_out, std::move(layers));
        const json& st = chart.at("standardization");
        model.inverse.set_standardization(vec_from_json(st.at("x_mean")), vec_from_json(st.at("x_scale")),
                                          vec_from_json(st.at("y_mean")), vec_from_json(st.at("y_scale")));
        if (!model.inverse.is_smooth()) {
            throw std::runtime_error(path.string() + ": corrupt chart parameters");
        }
        model.embedded = mat_from_json(chart.at("embedded"));
        model.final_mse = chart.at("final_mse").get<double>();
        model.epochs = chart.at("epochs").get<int>();
        atlas.charts.push_back(std::move(model));
    }
    std::sort(atlas.charts.begin(), atlas.charts.end(),
              [](const ChartModel& a, const ChartModel& b) { return a.chart.cluster_id < b.chart.cluster_id; });
    return atlas;
}

}  // namespace atlas
