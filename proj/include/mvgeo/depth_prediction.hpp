// Copyright 2026 The mvgeo Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <span>

#include "mvgeo/geometry.hpp"
#include "mvgeo/plane.hpp"

namespace mvgeo {

/// Nearest-integer rounding with ties away from zero.
double round_half_away(double v);

/// Grid cell receiving a splat at continuous pixel position `coord`:
/// round_half_away(coord - 0.5).
long splat_cell(double coord);

struct DepthPrediction {
    /// Predicted depth; 0 where no reference pixel landed.
    Plane<float> depth;
    /// 1 where at least one reference pixel landed.
    MaskMap hit;
};

/// Cross-view depth prediction: forward-splats every valid pixel of
/// `reference_depth` (seen by `reference`) into `target`, keeping the minimum
/// projected depth per cell. Projections with d' <= 0 or outside the target
/// grid are dropped.
DepthPrediction cvdp(const DepthMap& reference_depth, const CameraModel& reference, const CameraModel& target);

/// Same as cvdp(), visiting reference pixels in the given order of flat
/// indices (y * W + x). Used to check order independence.
DepthPrediction cvdp_ordered(const DepthMap& reference_depth, const CameraModel& reference, const CameraModel& target,
                             std::span<const std::size_t> visit_order);

} // namespace mvgeo
