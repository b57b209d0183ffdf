// Command-line surface for the manifold diagnostics and chart-learning
// pipeline: generate synthetic datasets, diagnose manifold structure,
// train inverse charts, sample generatively, and score representations.

#include <CLI11.hpp>
#include <json.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "atlas/atlas_model.hpp"
#include "atlas/clustering.hpp"
#include "atlas/connectivity.hpp"
#include "atlas/distortion.hpp"
#include "atlas/embedding.hpp"
#include "atlas/generators.hpp"
#include "atlas/neighbors.hpp"
#include "atlas/point_cloud.hpp"
#include "atlas/preprocess.hpp"
#include "atlas/report.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct Manifest {
    json doc;
    fs::path dir;
    std::string stage = "startup";

    explicit Manifest(const std::string& command) {
        doc["tool"] = "atlas";
        doc["version"] = ATLAS_VERSION;
        doc["command"] = command;
        doc["status"] = "incomplete";
        doc["outputs"] = json::array();
    }

    void record_output(const fs::path& path) { doc["outputs"].push_back(path.filename().string()); }

    void write(const std::string& status, const std::string& message = "") {
        if (dir.empty()) return;
        doc["status"] = status;
        if (!message.empty()) {
            doc["error"] = message;
            doc["failed_stage"] = stage;
        }
        std::ofstream out(dir / "manifest.json");
        out << doc.dump(2) << '\n';
    }
};

fs::path ensure_dir(const std::string& out_dir) {
    fs::path dir(out_dir);
    fs::create_directories(dir);
    return dir;
}

atlas::PointCloud apply_preprocess(atlas::PointCloud pc, const std::string& stages) {
    if (stages.empty()) return pc;
    std::stringstream ss(stages);
    std::string stage;
    while (std::getline(ss, stage, ',')) {
        if (stage == "cpm") {
            pc = atlas::cpm_normalize(pc);
        } else if (stage == "log") {
            pc = atlas::log_transform(pc);
        } else if (stage.rfind("hvg:", 0) == 0) {
            pc = atlas::select_hvg(pc, std::stoll(stage.substr(4)));
        } else {
            throw std::invalid_argument("unknown preprocess stage '" + stage + "'");
        }
    }
    return pc;
}

struct PipelineParams {
    std::string input;
    std::string preprocess;
    int k = 10;
    int l = 10;
    int h = 20;
    int d_max = 0;  // 0 = ambient dimension
    double tau = 0.1;
    int delta = 2;
    int eps_grid = 100;
    std::uint64_t seed = 0;
};

void add_pipeline_options(CLI::App* cmd, PipelineParams& p, bool with_sweep) {
    cmd->set_help_flag("--help", "print help");
    cmd->add_option("--input", p.input, "input matrix (delimited text)")->required();
    cmd->add_option("--preprocess", p.preprocess,
                    "comma-separated stage list applied in order, e.g. hvg:2000,cpm,log");
    cmd->add_option("--k", p.k, "number of k-means clusters")->required();
    cmd->add_option("--l", p.l, "neighbor count for transition expansion")->capture_default_str();
    cmd->add_option("--h", p.h, "neighborhood size for the Jaccard distance")->capture_default_str();
    cmd->add_option("--seed", p.seed, "random seed")->capture_default_str();
    if (with_sweep) {
        cmd->add_option("--d-max", p.d_max, "largest embedding dimension to sweep (0 = ambient)")->capture_default_str();
        cmd->add_option("--tau", p.tau, "AJD threshold for the dimension estimate")->capture_default_str();
        cmd->add_option("--delta", p.delta, "allowed crossing spread between clusters")->capture_default_str();
        cmd->add_option("--eps-grid", p.eps_grid, "epsilon-network grid resolution")->capture_default_str();
    }
}

atlas::ClusterCover cluster_and_expand(const atlas::PointCloud& pc, const PipelineParams& p,
                                       Manifest& manifest) {
    manifest.stage = "clustering";
    atlas::KMeansOptions opts;
    opts.seed = p.seed;
    atlas::ClusterCover cover = atlas::kmeans(pc, p.k, opts);
    const auto sizes = cover.cluster_sizes();
    const auto min_size = *std::min_element(sizes.begin(), sizes.end());
    if (min_size < 50) {
        std::cerr << "warning: smallest cluster has " << min_size
                  << " points (< 50); consider a smaller k\n";
    }
    manifest.stage = "transition expansion";
    return atlas::expand_transitions(cover, atlas::knn(pc, p.l));
}

json sweep_summary(const atlas::AjdSweep& sweep, const atlas::DimensionEstimate& est) {
    json out;
    out["verdict"] = atlas::to_string(est.verdict);
    if (est.verdict == atlas::Verdict::Manifold) out["dimension"] = est.dimension;
    out["tau"] = est.tau;
    out["delta"] = est.delta;
    json crossings;
    for (const auto& [cluster, d] : est.crossing) crossings[std::to_string(cluster)] = d;
    out["crossing_dimension"] = std::move(crossings);
    out["skipped_clusters"] = sweep.skipped;
    return out;
}

int cmd_generate(const std::string& kind, Eigen::Index n, std::uint64_t seed, int dim, int ambient,
                 Eigen::Index n_sphere, Eigen::Index n_circle, double offset,
                 const std::string& out_dir) {
    Manifest manifest("generate");
    manifest.dir = ensure_dir(out_dir);
    manifest.doc["params"] = {{"kind", kind},   {"n", n},           {"seed", seed},
                              {"dim", dim},     {"ambient", ambient}, {"n_sphere", n_sphere},
                              {"n_circle", n_circle}, {"offset", offset}};
    try {
        manifest.stage = "generation";
        if (kind == "s-curve") {
            const auto data = atlas::gen_s_curve({n, seed});
            atlas::save_matrix(data.cloud, manifest.dir / "cloud.tsv");
            manifest.record_output("cloud.tsv");
            atlas::save_matrix(data.latent, manifest.dir / "latent.tsv");
            manifest.record_output("latent.tsv");
        } else if (kind == "swiss-roll") {
            atlas::save_matrix(atlas::gen_swiss_roll(n, seed), manifest.dir / "cloud.tsv");
            manifest.record_output("cloud.tsv");
        } else if (kind == "hypersphere") {
            atlas::HypersphereParams params;
            params.intrinsic_dim = dim;
            params.ambient_dim = ambient;
            params.n_points = n;
            params.seed = seed;
            atlas::save_matrix(atlas::sample_hypersphere(params), manifest.dir / "cloud.tsv");
            manifest.record_output("cloud.tsv");
        } else if (kind == "sphere-circle") {
            atlas::save_matrix(atlas::gen_sphere_circle_union(n_sphere, n_circle, offset, seed),
                               manifest.dir / "cloud.tsv");
            manifest.record_output("cloud.tsv");
        } else {
            throw std::invalid_argument("unknown generator '" + kind + "'");
        }
        manifest.write("ok");
        return 0;
    } catch (const std::exception& e) {
        std::cerr << "error in " << manifest.stage << ": " << e.what() << '\n';
        manifest.write("error", e.what());
        return 1;
    }
}

int cmd_diagnose(const PipelineParams& p, const std::string& out_dir) {
    Manifest manifest("diagnose");
    manifest.dir = ensure_dir(out_dir);
    manifest.doc["params"] = {{"input", p.input}, {"preprocess", p.preprocess}, {"k", p.k},
                              {"l", p.l},         {"h", p.h},
                              {"d_max", p.d_max}, {"tau", p.tau},
                              {"delta", p.delta}, {"eps_grid", p.eps_grid},
                              {"seed", p.seed}};
    try {
        manifest.stage = "ingest";
        atlas::PointCloud pc = apply_preprocess(atlas::load_matrix(p.input), p.preprocess);

        const atlas::ClusterCover cover = cluster_and_expand(pc, p, manifest);
        atlas::write_cover_report(cover, manifest.dir / "clusters.tsv");
        manifest.record_output("clusters.tsv");

        manifest.stage = "ajd sweep";
        const int d_max = p.d_max > 0 ? p.d_max : static_cast<int>(pc.dim());
        const atlas::AjdSweep sweep = atlas::ajd_sweep(cover, pc, p.h, d_max);
        for (int c : sweep.skipped) {
            std::cerr << "warning: cluster " << c << " smaller than h+1 points, skipped\n";
        }
        atlas::write_sweep_table(sweep, manifest.dir / "ajd_sweep.tsv");
        manifest.record_output("ajd_sweep.tsv");

        manifest.stage = "dimension estimate";
        const atlas::DimensionEstimate est = atlas::estimate_dimension(sweep, p.tau, p.delta);

        manifest.stage = "transition graph";
        const atlas::TransitionGraph graph = atlas::transition_graph(cover);
        atlas::write_graph_file(graph, manifest.dir / "transition_graph.tsv");
        manifest.record_output("transition_graph.tsv");

        manifest.stage = "epsilon networks";
        const atlas::EpsilonCurve curve = atlas::epsilon_curve(pc, p.eps_grid);
        atlas::write_epsilon_table(curve, manifest.dir / "epsilon_curve.tsv");
        manifest.record_output("epsilon_curve.tsv");
        const atlas::ComponentReport components = atlas::classify_components(curve);

        manifest.stage = "summary";
        json summary = sweep_summary(sweep, est);
        summary["transition_graph_components"] = graph.n_components;
        summary["epsilon_verdict"] = atlas::to_string(components.verdict);
        summary["epsilon_component_lower_bound"] = components.component_lower_bound;
        {
            std::ofstream out(manifest.dir / "summary.json");
            out << summary.dump(2) << '\n';
        }
        manifest.record_output("summary.json");
        manifest.doc["summary"] = summary;
        manifest.write("ok");

        std::cout << "verdict: " << atlas::to_string(est.verdict);
        if (est.verdict == atlas::Verdict::Manifold) std::cout << " (dimension " << est.dimension << ")";
        std::cout << "\ntransition-graph components: " << graph.n_components
                  << "\nepsilon-network verdict: " << atlas::to_string(components.verdict) << '\n';
        return 0;
    } catch (const std::exception& e) {
        std::cerr << "error in " << manifest.stage << ": " << e.what() << '\n';
        manifest.write("error", e.what());
        return 1;
    }
}

int cmd_train(const PipelineParams& p, int force_dim, const atlas::TrainConfig& base_cfg, bool cv,
              int cv_folds, int cv_epochs, const std::string& out_dir) {
    Manifest manifest("train");
    manifest.dir = ensure_dir(out_dir);
    manifest.doc["params"] = {{"input", p.input}, {"preprocess", p.preprocess},
                              {"k", p.k},         {"l", p.l},
                              {"h", p.h},         {"seed", p.seed},
                              {"force_dim", force_dim}, {"epochs", base_cfg.epochs},
                              {"batch", base_cfg.batch}, {"learning_rate", base_cfg.learning_rate},
                              {"hidden_layers", base_cfg.hidden_layers},
                              {"hidden_width", base_cfg.hidden_width},
                              {"cv", cv},         {"cv_folds", cv_folds},
                              {"cv_epochs", cv_epochs}};
    try {
        manifest.stage = "ingest";
        atlas::PointCloud pc = apply_preprocess(atlas::load_matrix(p.input), p.preprocess);

        const atlas::ClusterCover cover = cluster_and_expand(pc, p, manifest);

        int n = force_dim;
        if (n <= 0) {
            manifest.stage = "dimension estimate";
            const int d_max = p.d_max > 0 ? p.d_max : static_cast<int>(pc.dim());
            const atlas::AjdSweep sweep = atlas::ajd_sweep(cover, pc, p.h, d_max);
            const atlas::DimensionEstimate est = atlas::estimate_dimension(sweep, p.tau, p.delta);
            manifest.doc["diagnosis"] = sweep_summary(sweep, est);
            if (est.verdict != atlas::Verdict::Manifold) {
                throw std::runtime_error(std::string("no manifold detected (verdict ") +
                                         atlas::to_string(est.verdict) +
                                         "); pass --force-dim to train anyway");
            }
            n = est.dimension;
        }
        manifest.doc["embed_dim"] = n;

        manifest.stage = "atlas training";
        atlas::TrainConfig cfg = base_cfg;
        cfg.seed = p.seed;
        const atlas::Atlas model = atlas::train_atlas(pc.points, cover, n, cfg);
        atlas::save_atlas(model, manifest.dir / "atlas.json");
        manifest.record_output("atlas.json");

        std::ofstream report(manifest.dir / "training_report.tsv");
        report << "cluster\texpanded_size\tepochs\tfinal_mse\n";
        for (const auto& chart : model.charts) {
            report << chart.chart.cluster_id << '\t' << chart.embedded.rows() << '\t' << chart.epochs
                   << '\t' << chart.final_mse << '\n';
        }
        manifest.record_output("training_report.tsv");

        if (cv) {
            manifest.stage = "cross validation";
            atlas::TrainConfig cv_cfg = cfg;
            if (cv_epochs > 0) cv_cfg.epochs = cv_epochs;
            std::ofstream cv_out(manifest.dir / "cv_report.tsv");
            cv_out << "cluster\tfold\tmse\n";
            for (int c = 0; c < cover.k; ++c) {
                const auto& members = cover.expanded_members[c];
                atlas::Matrix sub(static_cast<Eigen::Index>(members.size()), pc.points.cols());
                for (std::size_t r = 0; r < members.size(); ++r) sub.row(r) = pc.points.row(members[r]);
                cv_cfg.seed = p.seed + static_cast<std::uint64_t>(c) * 977;
                const auto scores = atlas::cross_validate(model.charts[c].chart, sub, cv_folds, cv_cfg);
                for (std::size_t f = 0; f < scores.size(); ++f) {
                    cv_out << c << '\t' << f << '\t' << scores[f] << '\n';
                }
            }
            manifest.record_output("cv_report.tsv");
        }

        manifest.write("ok");
        std::cout << "trained " << model.charts.size() << " charts at dimension " << n << '\n';
        return 0;
    } catch (const std::exception& e) {
        std::cerr << "error in " << manifest.stage << ": " << e.what() << '\n';
        manifest.write("error", e.what());
        return 1;
    }
}

int cmd_sample(const std::string& atlas_file, int r_rank, Eigen::Index n_per_cluster,
               std::uint64_t seed, const std::string& out_dir) {
    Manifest manifest("sample");
    manifest.dir = ensure_dir(out_dir);
    manifest.doc["params"] = {{"atlas", atlas_file},
                              {"r_rank", r_rank},
                              {"n_per_cluster", n_per_cluster},
                              {"seed", seed}};
    try {
        manifest.stage = "atlas load";
        const atlas::Atlas model = atlas::load_atlas(atlas_file);

        manifest.stage = "generation";
        atlas::GeneratedCloud generated = atlas::generate(model, n_per_cluster, r_rank, seed);

        // The cloud plus a provenance column recording the source cluster.
        atlas::PointCloud with_cluster;
        with_cluster.points.resize(generated.cloud.points.rows(), generated.cloud.points.cols() + 1);
        with_cluster.points.leftCols(generated.cloud.points.cols()) = generated.cloud.points;
        for (Eigen::Index i = 0; i < with_cluster.points.rows(); ++i) {
            with_cluster.points(i, generated.cloud.points.cols()) = generated.provenance[i];
        }
        with_cluster.column_names = generated.cloud.column_names;
        with_cluster.column_names.push_back("cluster");
        with_cluster.row_ids = generated.cloud.row_ids;
        atlas::save_matrix(with_cluster, manifest.dir / "generated.tsv");
        manifest.record_output("generated.tsv");

        manifest.write("ok");
        std::cout << "generated " << with_cluster.points.rows() << " points\n";
        return 0;
    } catch (const std::exception& e) {
        std::cerr << "error in " << manifest.stage << ": " << e.what() << '\n';
        manifest.write("error", e.what());
        return 1;
    }
}

int cmd_ajd(const std::string& high_file, const std::string& low_file, int h,
            const std::string& out_dir) {
    Manifest manifest("ajd");
    if (!out_dir.empty()) manifest.dir = ensure_dir(out_dir);
    manifest.doc["params"] = {{"high", high_file}, {"low", low_file}, {"h", h}};
    try {
        manifest.stage = "ingest";
        const atlas::PointCloud high = atlas::load_matrix(high_file);
        const atlas::PointCloud low = atlas::load_matrix(low_file);

        manifest.stage = "ajd";
        const atlas::JaccardReport report = atlas::ajd(high, low, h);
        if (!out_dir.empty()) {
            atlas::write_jaccard_table(report, manifest.dir / "jaccard.tsv");
            manifest.record_output("jaccard.tsv");
        }
        manifest.doc["ajd"] = report.ajd;
        manifest.write("ok");
        std::cout << "AJD " << report.ajd << '\n';
        return 0;
    } catch (const std::exception& e) {
        std::cerr << "error in " << manifest.stage << ": " << e.what() << '\n';
        manifest.write("error", e.what());
        return 1;
    }
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Manifold diagnostics and generative chart learning for point clouds"};
    app.require_subcommand(1);
    // --h is a pipeline parameter, so help stays on --help alone.
    app.set_help_flag("--help", "print help");

    // generate
    std::string gen_kind, gen_out;
    Eigen::Index gen_n = 1000, gen_n_sphere = 1200, gen_n_circle = 800;
    std::uint64_t gen_seed = 0;
    int gen_dim = 9, gen_ambient = 20;
    double gen_offset = 5.0;
    auto* generate = app.add_subcommand("generate", "write a synthetic dataset");
    generate->add_option("kind", gen_kind, "s-curve | swiss-roll | hypersphere | sphere-circle")
        ->required();
    generate->add_option("--n", gen_n, "number of points")->capture_default_str();
    generate->add_option("--seed", gen_seed, "random seed")->capture_default_str();
    generate->add_option("--dim", gen_dim, "hypersphere intrinsic dimension")->capture_default_str();
    generate->add_option("--ambient", gen_ambient, "hypersphere ambient dimension")->capture_default_str();
    generate->add_option("--n-sphere", gen_n_sphere, "sphere-circle: sphere points")->capture_default_str();
    generate->add_option("--n-circle", gen_n_circle, "sphere-circle: circle points")->capture_default_str();
    generate->add_option("--offset", gen_offset, "sphere-circle: circle center offset")->capture_default_str();
    generate->add_option("--out", gen_out, "output directory")->required();

    // diagnose
    PipelineParams diag;
    std::string diag_out;
    auto* diagnose = app.add_subcommand("diagnose", "test the manifold hypothesis on a dataset");
    add_pipeline_options(diagnose, diag, true);
    diagnose->add_option("--out", diag_out, "output directory")->required();

    // train
    PipelineParams tr;
    std::string train_out;
    int force_dim = 0, cv_folds = 10, cv_epochs = 0;
    bool cv = false;
    atlas::TrainConfig cfg;
    auto* train = app.add_subcommand("train", "learn an atlas of inverse charts");
    add_pipeline_options(train, tr, true);
    train->add_option("--force-dim", force_dim, "train at this dimension without a manifold verdict");
    train->add_option("--epochs", cfg.epochs, "training epochs")->capture_default_str();
    train->add_option("--batch", cfg.batch, "mini-batch size")->capture_default_str();
    train->add_option("--lr", cfg.learning_rate, "Adam learning rate")->capture_default_str();
    train->add_option("--hidden-layers", cfg.hidden_layers, "hidden layer count")->capture_default_str();
    train->add_option("--hidden-width", cfg.hidden_width, "hidden width (0 = max(64, 2m))")->capture_default_str();
    train->add_flag("--cv", cv, "run k-fold cross validation per chart");
    train->add_option("--cv-folds", cv_folds, "cross-validation folds")->capture_default_str();
    train->add_option("--cv-epochs", cv_epochs, "override epochs for CV runs (0 = same)")->capture_default_str();
    train->add_option("--out", train_out, "output directory")->required();

    // sample
    std::string sample_atlas, sample_out;
    int r_rank = 1;
    Eigen::Index n_per_cluster = 0;
    std::uint64_t sample_seed = 0;
    auto* sample = app.add_subcommand("sample", "generate new points from a trained atlas");
    sample->add_option("--atlas", sample_atlas, "atlas file from `train`")->required();
    sample->add_option("--r-rank", r_rank, "ball radius = distance to this nearest neighbor")->capture_default_str();
    sample->add_option("--n-per-cluster", n_per_cluster, "samples per cluster (0 = original sizes)")
        ->capture_default_str();
    sample->add_option("--seed", sample_seed, "random seed")->capture_default_str();
    sample->add_option("--out", sample_out, "output directory")->required();

    // ajd
    std::string ajd_high, ajd_low, ajd_out;
    int ajd_h = 20;
    auto* ajd_cmd = app.add_subcommand("ajd", "score a representation against the original data");
    ajd_cmd->add_option("--high", ajd_high, "original dataset")->required();
    ajd_cmd->add_option("--low", ajd_low, "row-aligned representation")->required();
    ajd_cmd->add_option("--h", ajd_h, "neighborhood size")->capture_default_str();
    ajd_cmd->add_option("--out", ajd_out, "optional output directory for the per-point table");

    CLI11_PARSE(app, argc, argv);

    if (generate->parsed()) {
        return cmd_generate(gen_kind, gen_n, gen_seed, gen_dim, gen_ambient, gen_n_sphere,
                            gen_n_circle, gen_offset, gen_out);
    }
    if (diagnose->parsed()) return cmd_diagnose(diag, diag_out);
    if (train->parsed()) return cmd_train(tr, force_dim, cfg, cv, cv_folds, cv_epochs, train_out);
    if (sample->parsed()) return cmd_sample(sample_atlas, r_rank, n_per_cluster, sample_seed, sample_out);
    if (ajd_cmd->parsed()) return cmd_ajd(ajd_high, ajd_low, ajd_h, ajd_out);
    return 1;
}
