#ifndef ATLAS_GENERATORS_HPP
#define ATLAS_GENERATORS_HPP

#include <cstdint>

#include "atlas/point_cloud.hpp"

namespace atlas {

struct SCurveParams {
    Eigen::Index n_points = 1000;
    std::uint64_t seed = 0;
};

struct SCurveData {
    PointCloud cloud;   // 3D points (sin t, height, sign(t) * (cos t - 1))
    PointCloud latent;  // the (t, height) ground-truth embedding, row-aligned
};

/// S-curve sampler: t uniform on [-3pi/2, 3pi/2], height uniform on [0, 2].
SCurveData gen_s_curve(const SCurveParams& params);

/// Swiss roll: t uniform on [1.5pi, 4.5pi], height uniform on [0, 21],
/// point = (t cos t, height, t sin t).
PointCloud gen_swiss_roll(Eigen::Index n_points, std::uint64_t seed);

struct HypersphereParams {
    int intrinsic_dim = 2;   // S^d lives in R^{d+1}
    int ambient_dim = 3;     // >= d+1; extra coordinates are zero-padded
    Eigen::Index n_points = 1000;
    std::uint64_t seed = 0;
};

/// Uniform points on S^d: normalized standard normal (d+1)-vectors, then
/// zero-padded to the ambient dimension.
PointCloud sample_hypersphere(const HypersphereParams& params);

/// Unit sphere at the origin plus a unit circle in the z=0 plane centered at
/// (offset, 0, 0). Requires offset > 2 so the components are disjoint. Row ids
/// record component membership ("sphere..." / "circle...").
PointCloud gen_sphere_circle_union(Eigen::Index n_sphere, Eigen::Index n_circle, double offset,
                                   std::uint64_t seed);

}  // namespace atlas

#endif
