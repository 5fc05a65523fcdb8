// Copyright 2026 The mvgeo Authors
// SPDX-License-Identifier: Apache-2.0

#include "mvgeo/depth_prediction.hpp"

#include <cmath>
#include <numeric>
#include <vector>

namespace mvgeo {

double round_half_away(double v) { return std::round(v); }

long splat_cell(double coord) {
    const double cell = round_half_away(coord - 0.5);
    if (!(std::abs(cell) < 1e15)) return -1;
    return static_cast<long>(cell);
}

DepthPrediction cvdp_ordered(const DepthMap& reference_depth, const CameraModel& reference, const CameraModel& target,
                             std::span<const std::size_t> visit_order) {
    reference.validate();
    target.validate();
    const int rw = reference_depth.width();
    const int rh = reference_depth.height();
    require_same_shape(reference.width(), reference.height(), rw, rh, "cvdp: reference depth vs reference camera");
    const int tw = target.width();
    const int th = target.height();

    DepthPrediction out{Plane<float>(tw, th, 1, 0.0f), MaskMap(tw, th, 1, 0)};
    for (std::size_t flat : visit_order) {
        const int x = static_cast<int>(flat % rw);
        const int y = static_cast<int>(flat / rw);
        const double d = reference_depth.depth.at(x, y);
        if (!reference_depth.is_valid(x, y) || !(d > 0.0)) continue;
        const Vec3 world = backproject({x + 0.5, y + 0.5}, d, reference.intrinsics, reference.extrinsics);
        Projection p;
        if (!try_project(world, target.intrinsics, target.extrinsics, p)) continue;
        if (!(p.depth > 0.0)) continue;
        const long cx = splat_cell(p.pixel.x());
        const long cy = splat_cell(p.pixel.y());
        if (cx < 0 || cy < 0 || cx >= tw || cy >= th) continue;
        const float predicted = static_cast<float>(p.depth);
        if (!(predicted > 0.0f)) continue;
        float& cell = out.depth.at(static_cast<int>(cx), static_cast<int>(cy));
        std::uint8_t& hit = out.hit.at(static_cast<int>(cx), static_cast<int>(cy));
        if (!hit || predicted < cell) cell = predicted;
        hit = 1;
    }
    return out;
}

DepthPrediction cvdp(const DepthMap& reference_depth, const CameraModel& reference, const CameraModel& target) {
    std::vector<std::size_t> order(reference_depth.depth.pixel_count());
    std::iota(order.begin(), order.end(), std::size_t{0});
    return cvdp_ordered(reference_depth, reference, target, order);
}

} // namespace mvgeo
