#include "atlas/generators.hpp"

#include <cmath>
#include <random>
#include <stdexcept>

namespace atlas {

namespace {

double sign(double t) { return t > 0 ? 1.0 : (t < 0 ? -1.0 : 0.0); }

constexpr double kPi = 3.14159265358979323846;

}  // namespace

SCurveData gen_s_curve(const SCurveParams& params) {
    if (params.n_points < 1) throw std::invalid_argument("n_points must be >= 1");
    std::mt19937_64 rng(params.seed);
    std::uniform_real_distribution<double> t_dist(-1.5 * kPi, 1.5 * kPi);
    std::uniform_real_distribution<double> h_dist(0.0, 2.0);

    Matrix cloud(params.n_points, 3);
    Matrix latent(params.n_points, 2);
    for (Eigen::Index i = 0; i < params.n_points; ++i) {
        const double t = t_dist(rng);
        const double height = h_dist(rng);
        cloud(i, 0) = std::sin(t);
        cloud(i, 1) = height;
        cloud(i, 2) = sign(t) * (std::cos(t) - 1.0);
        latent(i, 0) = t;
        latent(i, 1) = height;
    }
    SCurveData out;
    out.cloud = PointCloud::from_matrix(std::move(cloud));
    out.cloud.column_names = {"x", "y", "z"};
    out.latent = PointCloud::from_matrix(std::move(latent));
    out.latent.column_names = {"t", "height"};
    return out;
}

PointCloud gen_swiss_roll(Eigen::Index n_points, std::uint64_t seed) {
    if (n_points < 1) throw std::invalid_argument("n_points must be >= 1");
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> t_dist(1.5 * kPi, 4.5 * kPi);
    std::uniform_real_distribution<double> h_dist(0.0, 21.0);

    Matrix m(n_points, 3);
    for (Eigen::Index i = 0; i < n_points; ++i) {
        const double t = t_dist(rng);
        m(i, 0) = t * std::cos(t);
        m(i, 1) = h_dist(rng);
        m(i, 2) = t * std::sin(t);
    }
    PointCloud pc = PointCloud::from_matrix(std::move(m));
    pc.column_names = {"x", "y", "z"};
    return pc;
}

PointCloud sample_hypersphere(const HypersphereParams& params) {
    if (params.n_points < 1) throw std::invalid_argument("n_points must be >= 1");
    if (params.intrinsic_dim < 1) throw std::invalid_argument("intrinsic_dim must be >= 1");
    if (params.ambient_dim < params.intrinsic_dim + 1) {
        throw std::invalid_argument("ambient_dim must be >= intrinsic_dim + 1");
    }
    const int sphere_dim = params.intrinsic_dim + 1;
    std::mt19937_64 rng(params.seed);
    std::normal_distribution<double> normal(0.0, 1.0);

    Matrix m = Matrix::Zero(params.n_points, params.ambient_dim);
    Vector v(sphere_dim);
    for (Eigen::Index i = 0; i < params.n_points; ++i) {
        double norm = 0.0;
        do {
            for (int j = 0; j < sphere_dim; ++j) v[j] = normal(rng);
            norm = v.norm();
        } while (norm < 1e-12);  // degenerate draw: resample
        m.row(i).head(sphere_dim) = v.transpose() / norm;
    }
    return PointCloud::from_matrix(std::move(m));
}

PointCloud gen_sphere_circle_union(Eigen::Index n_sphere, Eigen::Index n_circle, double offset,
                                   std::uint64_t seed) {
    if (n_sphere < 1 || n_circle < 1) throw std::invalid_argument("component sizes must be >= 1");
    if (!(offset > 2.0)) throw std::invalid_argument("offset must exceed 2 (disjoint components)");
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> normal(0.0, 1.0);
    std::uniform_real_distribution<double> angle(0.0, 2.0 * kPi);

    Matrix m(n_sphere + n_circle, 3);
    std::vector<std::string> row_ids;
    row_ids.reserve(m.rows());
    Vector v(3);
    for (Eigen::Index i = 0; i < n_sphere; ++i) {
        double norm = 0.0;
        do {
            for (int j = 0; j < 3; ++j) v[j] = normal(rng);
            norm = v.norm();
        } while (norm < 1e-12);
        m.row(i) = v.transpose() / norm;
        row_ids.push_back("sphere" + std::to_string(i));
    }
    for (Eigen::Index i = 0; i < n_circle; ++i) {
        const double a = angle(rng);
        m(n_sphere + i, 0) = offset + std::cos(a);
        m(n_sphere + i, 1) = std::sin(a);
        m(n_sphere + i, 2) = 0.0;
        row_ids.push_back("circle" + std::to_string(i));
    }
    PointCloud pc = PointCloud::from_matrix(std::move(m));
    pc.row_ids = std::move(row_ids);
    pc.column_names = {"x", "y", "z"};
    pc.validate();
    return pc;
}

}  // namespace atlas
