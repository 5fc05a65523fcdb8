// Copyright 2026 The mvgeo Authors
// SPDX-License-Identifier: Apache-2.0

#include "mvgeo/disparity.hpp"

#include <algorithm>
#include <cmath>

#include "mvgeo/parallel.hpp"

namespace mvgeo {

DisparityResult estimate_disparity(const DepthMap& depth, const CameraModel& camera, const CameraModel& reference) {
    camera.validate();
    reference.validate();
    const int w = depth.width();
    const int h = depth.height();
    require_same_shape(camera.width(), camera.height(), w, h, "estimate_disparity: depth map vs camera");
    require_same_shape(w, h, depth.valid.width(), depth.valid.height(), "estimate_disparity: validity plane");

    DisparityResult out{DisparityMap(w, h), DepthMap(w, h)};
    parallel_for(h, [&](int row_begin, int row_end) {
        for (int y = row_begin; y < row_end; ++y) {
            for (int x = 0; x < w; ++x) {
                const double d = depth.depth.at(x, y);
                if (!depth.is_valid(x, y) || !(d > 0.0)) continue;
                const Vec2 center(x + 0.5, y + 0.5);
                const Vec3 world = backproject(center, d, camera.intrinsics, camera.extrinsics);
                Projection p;
                if (!try_project(world, reference.intrinsics, reference.extrinsics, p)) continue;
                const float dx = static_cast<float>(p.pixel.x() - center.x());
                const float dy = static_cast<float>(p.pixel.y() - center.y());
                if (!std::isfinite(dx) || !std::isfinite(dy)) continue;
                out.disparity.shift.at(x, y, 0) = dx;
                out.disparity.shift.at(x, y, 1) = dy;
                out.disparity.valid.at(x, y) = 1;
                out.projected_depth.depth.at(x, y) = static_cast<float>(p.depth);
                out.projected_depth.valid.at(x, y) = 1;
            }
        }
    });
    return out;
}

double bilinear_sample(const Plane<float>& plane, double x, double y, int c) {
    const int w = plane.width();
    const int h = plane.height();
    const double u = std::clamp(x - 0.5, 0.0, static_cast<double>(w - 1));
    const double v = std::clamp(y - 0.5, 0.0, static_cast<double>(h - 1));
    const int x0 = static_cast<int>(std::floor(u));
    const int y0 = static_cast<int>(std::floor(v));
    const int x1 = std::min(x0 + 1, w - 1);
    const int y1 = std::min(y0 + 1, h - 1);
    const double a = u - x0;
    const double b = v - y0;
    const double top = plane.at(x0, y0, c) * (1.0 - a) + plane.at(x1, y0, c) * a;
    const double bottom = plane.at(x0, y1, c) * (1.0 - a) + plane.at(x1, y1, c) * a;
    return top * (1.0 - b) + bottom * b;
}

Plane<float> warp(const Plane<float>& plane, const DisparityMap& disparity) {
    const int w = disparity.width();
    const int h = disparity.height();
    require_same_shape(w, h, plane.width(), plane.height(), "warp: plane vs disparity");
    Plane<float> out(w, h, plane.channels());
    parallel_for(h, [&](int row_begin, int row_end) {
        for (int y = row_begin; y < row_end; ++y) {
            for (int x = 0; x < w; ++x) {
                const double sx = x + 0.5 + disparity.shift.at(x, y, 0);
                const double sy = y + 0.5 + disparity.shift.at(x, y, 1);
                for (int c = 0; c < plane.channels(); ++c) {
                    out.at(x, y, c) = static_cast<float>(bilinear_sample(plane, sx, sy, c));
                }
            }
        }
    });
    return out;
}

MaskMap estimate_mask(const DisparityMap& disparity, const DepthMap& projected_depth, const DepthMap& reference_depth,
                      double occlusion_eps) {
    const int w = disparity.width();
    const int h = disparity.height();
    require_same_shape(w, h, projected_depth.width(), projected_depth.height(), "estimate_mask: projected depth");
    require_same_shape(w, h, reference_depth.width(), reference_depth.height(), "estimate_mask: reference depth");
    const double ref_w = reference_depth.width();
    const double ref_h = reference_depth.height();
    MaskMap mask(w, h, 1, 0);
    parallel_for(h, [&](int row_begin, int row_end) {
        for (int y = row_begin; y < row_end; ++y) {
            for (int x = 0; x < w; ++x) {
                if (!disparity.valid.at(x, y) || !projected_depth.is_valid(x, y)) continue;
                const double sx = static_cast<double>(disparity.shift.at(x, y, 0)) + x + 0.5;
                const double sy = static_cast<double>(disparity.shift.at(x, y, 1)) + y + 0.5;
                if (!(0.0 < sx && sx < ref_w && 0.0 < sy && sy < ref_h)) continue;
                const double d = projected_depth.depth.at(x, y);
                if (!(0.0 < d)) continue;
                const double along_ray = bilinear_sample(reference_depth.depth, sx, sy);
                if (d < along_ray + occlusion_eps) mask.at(x, y) = 1;
            }
        }
    });
    return mask;
}

double depth_scale(const DepthMap& depth) {
    double sum = 0.0;
    std::size_t n = 0;
    for (std::size_t i = 0; i < depth.depth.size(); ++i) {
        if (depth.valid.data()[i]) {
            sum += depth.depth.data()[i];
            ++n;
        }
    }
    return n == 0 ? 1.0 : sum / static_cast<double>(n);
}

DisparityAndMask disparity_and_mask(const DepthMap& depth, const DepthMap& reference_depth, const CameraModel& camera,
                                    const CameraModel& reference, double relative_eps) {
    require_same_shape(reference.width(), reference.height(), reference_depth.width(), reference_depth.height(),
                       "disparity_and_mask: reference depth vs reference camera");
    DisparityResult d = estimate_disparity(depth, camera, reference);
    DisparityAndMask out;
    out.occlusion_eps = relative_eps * depth_scale(depth);
    out.mask = estimate_mask(d.disparity, d.projected_depth, reference_depth, out.occlusion_eps);
    out.disparity = std::move(d.disparity);
    out.projected_depth = std::move(d.projected_depth);
    return out;
}

} // namespace mvgeo
