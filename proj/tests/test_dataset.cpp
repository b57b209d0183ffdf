#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <random>

#include "atlas/generators.hpp"
#include "atlas/point_cloud.hpp"
#include "atlas/preprocess.hpp"

using namespace atlas;
namespace fs = std::filesystem;

namespace {

fs::path temp_file(const std::string& name) {
    return fs::temp_directory_path() / ("atlas_test_" + name);
}

void write_file(const fs::path& p, const std::string& contents) {
    std::ofstream out(p);
    out << contents;
}

}  // namespace

TEST_CASE("load_matrix parses plain numeric files") {
    const auto p = temp_file("plain.csv");
    write_file(p, "1,2\n3,4\n5,6\n");
    const PointCloud pc = load_matrix(p);
    CHECK(pc.n_points() == 3);
    CHECK(pc.dim() == 2);
    CHECK(pc.points(2, 1) == 6.0);
}

TEST_CASE("load_matrix detects header rows") {
    const auto p = temp_file("header.csv");
    write_file(p, "a,b\n1,2\n3,4\n");
    const PointCloud pc = load_matrix(p);
    CHECK(pc.n_points() == 2);
    CHECK(pc.column_names == std::vector<std::string>{"a", "b"});
}

TEST_CASE("load_matrix rejects bad cells with location") {
    const auto p = temp_file("nan.csv");
    write_file(p, "1,2\n3,NaN\n");
    CHECK_THROWS_WITH_AS(load_matrix(p), doctest::Contains("row 2"), std::runtime_error);

    const auto ragged = temp_file("ragged.csv");
    write_file(ragged, "1,2\n3\n");
    CHECK_THROWS_AS(load_matrix(ragged), std::runtime_error);
}

TEST_CASE("save/load round trip is bit exact") {
    std::mt19937_64 rng(99);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    Matrix m(40, 5);
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        for (Eigen::Index j = 0; j < m.cols(); ++j) m(i, j) = u(rng) * std::pow(10.0, (int)(j) - 2);
    }
    m(0, 0) = 1.0 / 3.0;
    m(1, 1) = -0.0;
    PointCloud pc = PointCloud::from_matrix(m);

    const auto p = temp_file("roundtrip.tsv");
    save_matrix(pc, p);
    const PointCloud back = load_matrix(p);
    REQUIRE(back.n_points() == pc.n_points());
    REQUIRE(back.dim() == pc.dim());
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        for (Eigen::Index j = 0; j < m.cols(); ++j) CHECK(back.points(i, j) == m(i, j));
    }
    CHECK(back.column_names == pc.column_names);
}

TEST_CASE("s-curve generator is deterministic and index-aligned") {
    const SCurveData a = gen_s_curve({500, 42});
    const SCurveData b = gen_s_curve({500, 42});
    CHECK(a.cloud.points == b.cloud.points);
    CHECK(a.latent.points == b.latent.points);

    for (Eigen::Index i = 0; i < a.cloud.n_points(); ++i) {
        const double t = a.latent.points(i, 0);
        const double height = a.latent.points(i, 1);
        const double sign = t > 0 ? 1.0 : (t < 0 ? -1.0 : 0.0);
        CHECK(std::abs(a.cloud.points(i, 0) - std::sin(t)) < 1e-12);
        CHECK(std::abs(a.cloud.points(i, 1) - height) < 1e-12);
        CHECK(std::abs(a.cloud.points(i, 2) - sign * (std::cos(t) - 1.0)) < 1e-12);
        CHECK(t >= -4.71238898038469);
        CHECK(t <= 4.71238898038469);
        CHECK(height >= 0.0);
        CHECK(height <= 2.0);
    }
}

TEST_CASE("s-curve generator formula spot values") {
    // f(0, 1) = (0, 1, 0); f(pi/2, 0) = (1, 0, -1); f(-pi/2, 2) = (-1, 2, 1)
    const double pi = 3.14159265358979323846;
    auto f = [](double t, double h) {
        const double s = t > 0 ? 1.0 : (t < 0 ? -1.0 : 0.0);
        return Eigen::Vector3d(std::sin(t), h, s * (std::cos(t) - 1.0));
    };
    CHECK(f(0, 1).isApprox(Eigen::Vector3d(0, 1, 0), 1e-15));
    CHECK(f(pi / 2, 0).isApprox(Eigen::Vector3d(1, 0, -1), 1e-12));
    CHECK(f(-pi / 2, 2).isApprox(Eigen::Vector3d(-1, 2, 1), 1e-12));
}

TEST_CASE("swiss roll respects parameter ranges") {
    const PointCloud pc = gen_swiss_roll(400, 1);
    const double pi = 3.14159265358979323846;
    for (Eigen::Index i = 0; i < pc.n_points(); ++i) {
        const double t = std::hypot(pc.points(i, 0), pc.points(i, 2));
        CHECK(t >= 1.5 * pi - 1e-9);
        CHECK(t <= 4.5 * pi + 1e-9);
        CHECK(pc.points(i, 1) >= 0.0);
        CHECK(pc.points(i, 1) <= 21.0);
    }
    // t = 2pi, height = 0 maps to (2pi, 0, 0)
    const double t = 2.0 * pi;
    CHECK(std::abs(t * std::cos(t) - t) < 1e-9);
    CHECK(std::abs(t * std::sin(t)) < 1e-9);
}

TEST_CASE("hypersphere rows have unit norm and zero padding") {
    HypersphereParams params;
    params.intrinsic_dim = 9;
    params.ambient_dim = 20;
    params.n_points = 2000;
    params.seed = 3;
    const PointCloud pc = sample_hypersphere(params);
    for (Eigen::Index i = 0; i < pc.n_points(); ++i) {
        CHECK(std::abs(pc.points.row(i).norm() - 1.0) < 1e-12);
        for (int j = 10; j < 20; ++j) CHECK(pc.points(i, j) == 0.0);
    }
    CHECK_THROWS_AS(sample_hypersphere({9, 9, 10, 0}), std::invalid_argument);
}

TEST_CASE("hypersphere sample mean is near the origin") {
    HypersphereParams params;
    params.intrinsic_dim = 9;
    params.ambient_dim = 20;
    params.n_points = 5000;
    params.seed = 7;
    const PointCloud pc = sample_hypersphere(params);
    const double bound = 5.0 / std::sqrt(5000.0);
    for (int j = 0; j < 20; ++j) CHECK(std::abs(pc.points.col(j).mean()) < bound);
}

TEST_CASE("hypersphere octant uniformity smoke test (d=2)") {
    HypersphereParams params;
    params.intrinsic_dim = 2;
    params.ambient_dim = 3;
    params.n_points = 4096;
    params.seed = 5;
    const PointCloud pc = sample_hypersphere(params);
    int counts[8] = {0};
    for (Eigen::Index i = 0; i < pc.n_points(); ++i) {
        const int octant = (pc.points(i, 0) > 0 ? 1 : 0) | (pc.points(i, 1) > 0 ? 2 : 0) |
                           (pc.points(i, 2) > 0 ? 4 : 0);
        ++counts[octant];
    }
    const double expect = 4096.0 / 8.0;
    const double slack = 4.0 * std::sqrt(4096.0);
    for (int o = 0; o < 8; ++o) CHECK(std::abs(counts[o] - expect) < slack);
}

TEST_CASE("sphere-circle union geometry") {
    const PointCloud pc = gen_sphere_circle_union(300, 200, 5.0, 11);
    REQUIRE(pc.n_points() == 500);
    for (Eigen::Index i = 300; i < 500; ++i) CHECK(pc.points(i, 2) == 0.0);
    CHECK(pc.row_ids[0].rfind("sphere", 0) == 0);
    CHECK(pc.row_ids[499].rfind("circle", 0) == 0);

    double min_cross = 1e300;
    for (Eigen::Index i = 0; i < 300; ++i) {
        for (Eigen::Index j = 300; j < 500; ++j) {
            min_cross = std::min(min_cross, (pc.points.row(i) - pc.points.row(j)).norm());
        }
    }
    CHECK(min_cross >= 3.0);
    CHECK_THROWS_AS(gen_sphere_circle_union(10, 10, 2.0, 0), std::invalid_argument);
}

TEST_CASE("cpm_normalize") {
    Matrix m(2, 3);
    m << 1, 1, 2, 5, 5, 5;
    const PointCloud out = cpm_normalize(PointCloud::from_matrix(m));
    CHECK(out.points(0, 0) == doctest::Approx(250000.0));
    CHECK(out.points(0, 1) == doctest::Approx(250000.0));
    CHECK(out.points(0, 2) == doctest::Approx(500000.0));
    for (int j = 0; j < 3; ++j) CHECK(out.points(1, j) == doctest::Approx(1e6 / 3.0));
    for (int i = 0; i < 2; ++i) {
        CHECK(out.points.row(i).sum() == doctest::Approx(1e6).epsilon(1e-6));
    }

    Matrix zero_row(2, 2);
    zero_row << 1, 2, 0, 0;
    CHECK_THROWS_WITH_AS(cpm_normalize(PointCloud::from_matrix(zero_row)),
                         doctest::Contains("r1"), std::invalid_argument);
}

TEST_CASE("select_hvg keeps highest-variance columns in original order") {
    Matrix m(4, 3);
    m << 1, 0, 0,
         1, 1, 2,
         1, 0, 4,
         1, 1, 6;
    const PointCloud pc = PointCloud::from_matrix(m);
    const PointCloud top2 = select_hvg(pc, 2);
    CHECK(top2.column_names == std::vector<std::string>{"c1", "c2"});
    CHECK(top2.points.col(1) == m.col(2));

    const PointCloud all = select_hvg(pc, 3);
    CHECK(all.points == m);

    const PointCloud top1 = select_hvg(pc, 1);
    CHECK(top1.column_names == std::vector<std::string>{"c2"});
}

TEST_CASE("log_transform") {
    Matrix m(1, 3);
    m << 0.0, std::exp(1.0) - 1.0, 10.0;
    const PointCloud out = log_transform(PointCloud::from_matrix(m));
    CHECK(out.points(0, 0) == 0.0);
    CHECK(out.points(0, 1) == doctest::Approx(1.0));
    CHECK(out.points(0, 1) < out.points(0, 2));

    Matrix bad(1, 1);
    bad << -0.5;
    CHECK_THROWS_AS(log_transform(PointCloud::from_matrix(bad)), std::invalid_argument);
}

TEST_CASE("every generator is deterministic given its seed") {
    CHECK(gen_swiss_roll(100, 9).points == gen_swiss_roll(100, 9).points);
    HypersphereParams hp;
    hp.seed = 9;
    hp.n_points = 100;
    CHECK(sample_hypersphere(hp).points == sample_hypersphere(hp).points);
    CHECK(gen_sphere_circle_union(50, 50, 5.0, 9).points ==
          gen_sphere_circle_union(50, 50, 5.0, 9).points);
}

TEST_CASE("PointCloud invariants") {
    Matrix ok(2, 2);
    ok << 1, 2, 3, 4;
    PointCloud pc = PointCloud::from_matrix(ok);
    pc.row_ids = {"a", "a"};
    CHECK_THROWS_AS(pc.validate(), std::invalid_argument);

    pc = PointCloud::from_matrix(ok);
    pc.points(0, 0) = std::numeric_limits<double>::infinity();
    CHECK_THROWS_AS(pc.validate(), std::invalid_argument);
}
