// Copyright 2026 The mvgeo Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <vector>

#include "mvgeo/geometry.hpp"
#include "mvgeo/plane.hpp"

namespace mvgeo {

using Color = std::array<double, 3>;

/// Isotropic 3D Gaussian primitive.
struct Gaussian3D {
    Vec3 center = Vec3::Zero();
    double sigma = 1.0;
    double opacity = 1.0;
    Color color{0.0, 0.0, 0.0};
};

struct GaussianScene {
    std::vector<Gaussian3D> gaussians;
    Color background{0.0, 0.0, 0.0};

    /// Throws DomainError on sigma <= 0, opacity or color outside [0, 1].
    void validate() const;
};

// Compositing constants.
inline constexpr double kAlphaMin = 1.0 / 255.0;  ///< contributions below this are culled
inline constexpr double kAlphaMax = 0.9999;       ///< clamp applied to primitive alphas
inline constexpr double kZNear = 1e-4;            ///< frustum clip on camera-space z

/// One primitive's contribution along a ray.
struct Contribution {
    double alpha = 0.0;
    Color color{0.0, 0.0, 0.0};
    double z = 0.0;  ///< camera-space z of the primitive center
};

/// Contributions of all primitives to the ray through `pixel`, sorted by
/// ascending z (ties by primitive index). alpha = o * exp(-r^2 / (2 sigma^2))
/// with r the perpendicular distance from the ray to the center, clamped to
/// kAlphaMax; entries below kAlphaMin and centers with z <= kZNear are dropped.
std::vector<Contribution> ray_contributions(const GaussianScene& scene, const CameraModel& camera, const Vec2& pixel);

struct CompositeResult {
    Color color{0.0, 0.0, 0.0};
    /// T_1 .. T_{M+1}; T_1 = 1 and T_{i+1} = T_i (1 - alpha_i).
    std::vector<double> transmittance;
};

/// Front-to-back alpha compositing with the background weighted by T_{M+1}.
CompositeResult composite(std::span<const Contribution> contributions, const Color& background = {0.0, 0.0, 0.0});

struct MedianDepth {
    double depth = 0.0;
    bool covered = false;
};

/// Depth of the first contribution i whose incoming transmittance T_i is
/// below 0.5. Rays where no such i <= M exists are uncovered with depth 0.
MedianDepth median_depth(std::span<const Contribution> contributions);

/// sum(T_i alpha_i z_i) / sum(T_i alpha_i); 0 when the weights vanish.
double weighted_avg_depth(std::span<const Contribution> contributions);

struct RenderOutput {
    Image color;
    DepthMap median_depth;
    DepthMap weighted_depth;
    MaskMap coverage;
};

/// Per-pixel evaluation of the three operations above at every pixel center.
/// Parallel over rows; output is independent of the thread count.
RenderOutput render_view(const GaussianScene& scene, const CameraModel& camera);

struct BoundingBox {
    Vec3 min = Vec3::Constant(-1.0);
    Vec3 max = Vec3::Constant(1.0);
    Vec3 center() const { return 0.5 * (min + max); }
    Vec3 extent() const { return max - min; }
};

/// Cameras on a horizontal circular arc around the bounding-box center, all
/// looking at it. Angles are in degrees.
struct CameraArc {
    double radius = 4.0;
    double spacing_deg = 10.0;
    int count = 8;
    double start_deg = 0.0;
    double elevation = 0.0;  ///< vertical offset of the eyes from the center
    int width = 64;
    int height = 64;
    double focal = 64.0;
};

struct SyntheticScene {
    GaussianScene scene;
    std::vector<CameraModel> cameras;
};

/// Deterministic test scene: textured spheres sampled with Gaussians inside
/// `bbox`, cameras on `arc`. Throws DomainError for a degenerate box or
/// n_gaussians <= 0.
SyntheticScene synthesize_scene(std::uint64_t seed, int n_gaussians, const BoundingBox& bbox, const CameraArc& arc);

/// Cameras of an arc around `target`.
std::vector<CameraModel> arc_cameras(const Vec3& target, const CameraArc& arc);

/// Two parallel textured walls facing the cameras: a front wall at z = front_z
/// covering the left `front_extent` of the view and an opaque back wall at
/// z = back_z. The Gaussian falloff leaves the front wall semi-transparent near
/// its edge. Two cameras: the first at the origin looking down +z, the second
/// translated by `baseline` along x.
struct TwoWallSpec {
    double front_z = 1.0;
    double back_z = 2.0;
    double baseline = 0.1;
    int width = 64;
    int height = 64;
    double focal = 64.0;
    double front_opacity = 0.9;
    double front_extent = 0.5;  ///< fraction of the wall width covered, from the left
};
SyntheticScene two_wall_scene(std::uint64_t seed, const TwoWallSpec& spec = {});

} // namespace mvgeo
