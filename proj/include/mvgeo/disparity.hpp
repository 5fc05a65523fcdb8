// Copyright 2026 The mvgeo Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include "mvgeo/geometry.hpp"
#include "mvgeo/plane.hpp"

namespace mvgeo {

/// Default occlusion slack relative to the scene depth scale.
inline constexpr double kDefaultRelativeOcclusionEps = 1e-3;

struct DisparityResult {
    DisparityMap disparity;
    /// Depth of each back-projected point in the reference camera (d'),
    /// valid where the disparity is valid.
    DepthMap projected_depth;
};

/// Back-projects every valid pixel center of `depth` (seen by `camera`) and
/// projects it into `reference`. Pixels with invalid or non-positive depth, or
/// whose reference-space z is exactly 0, are invalid. Throws DimensionError
/// when the depth map does not match the camera size.
DisparityResult estimate_disparity(const DepthMap& depth, const CameraModel& camera, const CameraModel& reference);

/// Bilinear sample of channel `c` at continuous pixel coordinates (x, y), with
/// edge clamping. Pixel centers sit at half-integers.
double bilinear_sample(const Plane<float>& plane, double x, double y, int c = 0);

/// output(i, j) = input sampled at (i + 0.5 + dx, j + 0.5 + dy), channel-wise.
Plane<float> warp(const Plane<float>& plane, const DisparityMap& disparity);

/// Validity/occlusion mask: 1 iff the source pixel is valid, its reference
/// position is strictly inside the image, d' > 0, and
/// d' < warp(reference_depth, disparity) + occlusion_eps.
MaskMap estimate_mask(const DisparityMap& disparity, const DepthMap& projected_depth, const DepthMap& reference_depth,
                      double occlusion_eps);

struct DisparityAndMask {
    DisparityMap disparity;
    DepthMap projected_depth;
    MaskMap mask;
    double occlusion_eps = 0.0;  ///< absolute slack actually used
};

/// Mean of the valid depths, or 1 when none are valid.
double depth_scale(const DepthMap& depth);

/// estimate_disparity followed by estimate_mask. The absolute occlusion slack
/// is relative_eps * depth_scale(depth).
DisparityAndMask disparity_and_mask(const DepthMap& depth, const DepthMap& reference_depth, const CameraModel& camera,
                                    const CameraModel& reference,
                                    double relative_eps = kDefaultRelativeOcclusionEps);

} // namespace mvgeo
