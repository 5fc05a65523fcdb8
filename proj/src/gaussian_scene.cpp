// Copyright 2026 The mvgeo Authors
// SPDX-License-Identifier: Apache-2.0

#include "mvgeo/gaussian_scene.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "mvgeo/parallel.hpp"
#include "mvgeo/rng.hpp"

namespace mvgeo {
namespace {

constexpr int kTileSize = 16;

bool in_unit_range(double v) { return v >= 0.0 && v <= 1.0; }

Vec3 ray_direction(const CameraIntrinsics& k, const Vec2& pixel) {
    return {(pixel.x() - k.cx) / k.fx, (pixel.y() - k.cy) / k.fy, 1.0};
}

// Alpha of a primitive whose camera-space center is q, for the ray along dir.
double falloff_alpha(const Gaussian3D& g, const Vec3& q, const Vec3& dir) {
    const double along = q.dot(dir) / dir.squaredNorm();
    const double r2 = (q - along * dir).squaredNorm();
    return g.opacity * std::exp(-r2 / (2.0 * g.sigma * g.sigma));
}

struct Candidate {
    double z;
    std::size_t index;
    double alpha;
};

std::vector<Contribution> sorted_contributions(const GaussianScene& scene, std::vector<Candidate>& candidates) {
    std::sort(candidates.begin(), candidates.end(), [](const Candidate& a, const Candidate& b) {
        return a.z < b.z || (a.z == b.z && a.index < b.index);
    });
    std::vector<Contribution> out;
    out.reserve(candidates.size());
    for (const Candidate& c : candidates) {
        out.push_back({c.alpha, scene.gaussians[c.index].color, c.z});
    }
    return out;
}

void consider(const GaussianScene& scene, std::size_t index, const Vec3& q, const Vec3& dir,
              std::vector<Candidate>& candidates) {
    if (!(q.z() > kZNear)) return;
    const double alpha = falloff_alpha(scene.gaussians[index], q, dir);
    if (alpha < kAlphaMin) return;
    candidates.push_back({q.z(), index, std::min(alpha, kAlphaMax)});
}

// Pixel-space footprint of a primitive: the pixel rectangle outside of which
// its alpha is below kAlphaMin.
struct Footprint {
    int x0, y0, x1, y1;  // inclusive
    bool empty() const { return x1 < x0 || y1 < y0; }
};

Footprint footprint(const Gaussian3D& g, const Vec3& q, const CameraIntrinsics& k) {
    const Footprint full{0, 0, k.width - 1, k.height - 1};
    if (!(q.z() > kZNear) || g.opacity < kAlphaMin) return {0, 0, -1, -1};
    const double cutoff = g.sigma * std::sqrt(2.0 * std::log(g.opacity / kAlphaMin)) * (1.0 + 1e-9) + 1e-12;
    const double z_lo = q.z() - cutoff;
    const double z_hi = q.z() + cutoff;
    if (!(z_lo > kZNear)) return full;
    // The cutoff sphere lies inside the box [q - c, q + c]; x/z over the box is
    // extremal at its corners.
    auto ratio_range = [&](double center) {
        const double a = (center - cutoff) / z_lo, b = (center - cutoff) / z_hi;
        const double c = (center + cutoff) / z_lo, d = (center + cutoff) / z_hi;
        return std::pair{std::min({a, b, c, d}), std::max({a, b, c, d})};
    };
    const auto [rx_lo, rx_hi] = ratio_range(q.x());
    const auto [ry_lo, ry_hi] = ratio_range(q.y());
    constexpr double margin = 0.5;
    const double px_lo = k.fx * rx_lo + k.cx - margin, px_hi = k.fx * rx_hi + k.cx + margin;
    const double py_lo = k.fy * ry_lo + k.cy - margin, py_hi = k.fy * ry_hi + k.cy + margin;
    // Pixel i is inside when its center i + 0.5 lies in [lo, hi].
    auto to_index = [](double v, int limit, bool upper) {
        const double idx = upper ? std::floor(v - 0.5) : std::ceil(v - 0.5);
        return static_cast<int>(std::clamp(idx, -1.0, static_cast<double>(limit)));
    };
    Footprint f{to_index(px_lo, k.width, false), to_index(py_lo, k.height, false), to_index(px_hi, k.width, true),
                to_index(py_hi, k.height, true)};
    f.x0 = std::max(f.x0, 0);
    f.y0 = std::max(f.y0, 0);
    f.x1 = std::min(f.x1, k.width - 1);
    f.y1 = std::min(f.y1, k.height - 1);
    return f;
}

Color lerp_color(const Color& a, const Color& b, double t) {
    return {a[0] + (b[0] - a[0]) * t, a[1] + (b[1] - a[1]) * t, a[2] + (b[2] - a[2]) * t};
}

double clamp01(double v) { return std::clamp(v, 0.0, 1.0); }

} // namespace

void GaussianScene::validate() const {
    for (std::size_t i = 0; i < gaussians.size(); ++i) {
        const Gaussian3D& g = gaussians[i];
        const std::string where = "gaussian " + std::to_string(i) + ": ";
        if (!g.center.allFinite()) throw DomainError(where + "center is not finite");
        if (!(g.sigma > 0.0) || !std::isfinite(g.sigma)) throw DomainError(where + "sigma must be positive");
        if (!in_unit_range(g.opacity)) throw DomainError(where + "opacity outside [0, 1]");
        for (double c : g.color) {
            if (!in_unit_range(c)) throw DomainError(where + "color outside [0, 1]");
        }
    }
    for (double c : background) {
        if (!in_unit_range(c)) throw DomainError("background color outside [0, 1]");
    }
}

std::vector<Contribution> ray_contributions(const GaussianScene& scene, const CameraModel& camera, const Vec2& pixel) {
    const Vec3 dir = ray_direction(camera.intrinsics, pixel);
    std::vector<Candidate> candidates;
    for (std::size_t i = 0; i < scene.gaussians.size(); ++i) {
        consider(scene, i, world_to_camera(scene.gaussians[i].center, camera.extrinsics), dir, candidates);
    }
    return sorted_contributions(scene, candidates);
}

CompositeResult composite(std::span<const Contribution> contributions, const Color& background) {
    CompositeResult out;
    out.transmittance.reserve(contributions.size() + 1);
    double t = 1.0;
    for (const Contribution& c : contributions) {
        out.transmittance.push_back(t);
        const double w = t * c.alpha;
        for (int ch = 0; ch < 3; ++ch) out.color[ch] += w * c.color[ch];
        t *= 1.0 - c.alpha;
    }
    out.transmittance.push_back(t);
    for (int ch = 0; ch < 3; ++ch) out.color[ch] += t * background[ch];
    return out;
}

MedianDepth median_depth(std::span<const Contribution> contributions) {
    double t = 1.0;
    for (const Contribution& c : contributions) {
        if (t < 0.5) return {c.z, true};
        t *= 1.0 - c.alpha;
    }
    return {0.0, false};
}

double weighted_avg_depth(std::span<const Contribution> contributions) {
    double t = 1.0;
    double weight_sum = 0.0;
    double depth_sum = 0.0;
    for (const Contribution& c : contributions) {
        const double w = t * c.alpha;
        weight_sum += w;
        depth_sum += w * c.z;
        t *= 1.0 - c.alpha;
    }
    return weight_sum > 0.0 ? depth_sum / weight_sum : 0.0;
}

RenderOutput render_view(const GaussianScene& scene, const CameraModel& camera) {
    camera.validate();
    const CameraIntrinsics& k = camera.intrinsics;
    const int w = k.width;
    const int h = k.height;

    std::vector<Vec3> camera_space(scene.gaussians.size());
    const int tiles_x = (w + kTileSize - 1) / kTileSize;
    const int tiles_y = (h + kTileSize - 1) / kTileSize;
    std::vector<std::vector<std::size_t>> tiles(static_cast<std::size_t>(tiles_x) * tiles_y);
    for (std::size_t i = 0; i < scene.gaussians.size(); ++i) {
        camera_space[i] = world_to_camera(scene.gaussians[i].center, camera.extrinsics);
        const Footprint f = footprint(scene.gaussians[i], camera_space[i], k);
        if (f.empty()) continue;
        for (int ty = f.y0 / kTileSize; ty <= f.y1 / kTileSize; ++ty) {
            for (int tx = f.x0 / kTileSize; tx <= f.x1 / kTileSize; ++tx) {
                tiles[static_cast<std::size_t>(ty) * tiles_x + tx].push_back(i);
            }
        }
    }

    RenderOutput out;
    out.color = Image(w, h, 3, 0.0f);
    out.median_depth = DepthMap(w, h);
    out.weighted_depth = DepthMap(w, h);
    out.coverage = MaskMap(w, h, 1, 0);

    parallel_for(h, [&](int row_begin, int row_end) {
        std::vector<Candidate> candidates;
        for (int y = row_begin; y < row_end; ++y) {
            for (int x = 0; x < w; ++x) {
                const Vec3 dir = ray_direction(k, {x + 0.5, y + 0.5});
                candidates.clear();
                for (std::size_t i : tiles[static_cast<std::size_t>(y / kTileSize) * tiles_x + x / kTileSize]) {
                    consider(scene, i, camera_space[i], dir, candidates);
                }
                const std::vector<Contribution> contribs = sorted_contributions(scene, candidates);
                const CompositeResult c = composite(contribs, scene.background);
                for (int ch = 0; ch < 3; ++ch) out.color.at(x, y, ch) = static_cast<float>(c.color[ch]);
                const MedianDepth md = median_depth(contribs);
                if (md.covered) {
                    out.median_depth.depth.at(x, y) = static_cast<float>(md.depth);
                    out.median_depth.valid.at(x, y) = 1;
                    out.coverage.at(x, y) = 1;
                }
                const double wd = weighted_avg_depth(contribs);
                if (wd > 0.0) {
                    out.weighted_depth.depth.at(x, y) = static_cast<float>(wd);
                    out.weighted_depth.valid.at(x, y) = 1;
                }
            }
        }
    });
    return out;
}

std::vector<CameraModel> arc_cameras(const Vec3& target, const CameraArc& arc) {
    if (arc.count < 1) throw DomainError("camera arc: count must be at least 1");
    if (!(arc.radius > 0.0)) throw DomainError("camera arc: radius must be positive");
    CameraIntrinsics k{arc.focal, arc.focal, arc.width / 2.0, arc.height / 2.0, arc.width, arc.height};
    k.validate();
    std::vector<CameraModel> cameras;
    cameras.reserve(arc.count);
    for (int i = 0; i < arc.count; ++i) {
        const double theta = (arc.start_deg + i * arc.spacing_deg) * M_PI / 180.0;
        const Vec3 eye = target + Vec3(arc.radius * std::sin(theta), arc.elevation, -arc.radius * std::cos(theta));
        cameras.push_back({k, look_at(eye, target)});
    }
    return cameras;
}

SyntheticScene synthesize_scene(std::uint64_t seed, int n_gaussians, const BoundingBox& bbox, const CameraArc& arc) {
    if (n_gaussians <= 0) throw DomainError("synthesize_scene: n_gaussians must be positive");
    const Vec3 extent = bbox.extent();
    if (!extent.allFinite() || extent.minCoeff() <= 0.0) {
        throw DomainError("synthesize_scene: degenerate bounding box");
    }
    Rng rng(seed);
    SyntheticScene out;
    out.scene.background = {0.08, 0.08, 0.1};

    struct Blob {
        Vec3 center;
        double radius;
        Color base;
        Color accent;
        Vec3 stripe_dir;
        double stripe_freq;
    };
    const int n_blobs = std::min(n_gaussians, 3 + static_cast<int>(rng.below(3)));
    const double min_extent = extent.minCoeff();
    std::vector<Blob> blobs;
    for (int b = 0; b < n_blobs; ++b) {
        Blob blob;
        blob.radius = min_extent * rng.uniform(0.15, 0.28);
        for (int a = 0; a < 3; ++a) {
            blob.center[a] = rng.uniform(bbox.min[a] + blob.radius, bbox.max[a] - blob.radius);
        }
        blob.base = {rng.uniform(0.2, 0.9), rng.uniform(0.2, 0.9), rng.uniform(0.2, 0.9)};
        blob.accent = {rng.uniform(0.0, 1.0), rng.uniform(0.0, 1.0), rng.uniform(0.0, 1.0)};
        blob.stripe_dir = rng.unit_vector();
        blob.stripe_freq = rng.uniform(2.0, 5.0) / blob.radius;
        blobs.push_back(blob);
    }
    std::vector<double> area(n_blobs);
    double total_area = 0.0;
    for (int b = 0; b < n_blobs; ++b) total_area += area[b] = blobs[b].radius * blobs[b].radius;

    out.scene.gaussians.reserve(n_gaussians);
    int assigned = 0;
    for (int b = 0; b < n_blobs; ++b) {
        const int count = b + 1 == n_blobs ? n_gaussians - assigned
                                           : static_cast<int>(std::lround(n_gaussians * area[b] / total_area));
        assigned += count;
        const Blob& blob = blobs[b];
        const double spacing = std::sqrt(4.0 * M_PI * blob.radius * blob.radius / std::max(count, 1));
        for (int i = 0; i < count; ++i) {
            Gaussian3D g;
            g.center = blob.center + blob.radius * rng.unit_vector();
            g.sigma = spacing * rng.uniform(0.55, 0.8);
            g.opacity = rng.uniform(0.6, 1.0);
            const double stripe = 0.5 + 0.5 * std::sin(blob.stripe_freq * blob.stripe_dir.dot(g.center));
            const Color c = lerp_color(blob.base, blob.accent, stripe);
            for (int ch = 0; ch < 3; ++ch) g.color[ch] = clamp01(c[ch] + rng.uniform(-0.06, 0.06));
            out.scene.gaussians.push_back(g);
        }
    }
    out.cameras = arc_cameras(bbox.center(), arc);
    return out;
}

SyntheticScene two_wall_scene(std::uint64_t seed, const TwoWallSpec& spec) {
    if (!(spec.front_z > 0.0) || !(spec.back_z > spec.front_z)) {
        throw DomainError("two_wall_scene: walls must satisfy 0 < front_z < back_z");
    }
    Rng rng(seed);
    SyntheticScene out;
    out.scene.background = {0.0, 0.0, 0.0};

    const double half_fov_x = (spec.width / 2.0) / spec.focal;
    const double half_fov_y = (spec.height / 2.0) / spec.focal;
    auto add_wall = [&](double z, double spacing, double sigma_scale, double opacity, double period, double extent) {
        const double half_w = half_fov_x * z + spec.baseline + 4.0 * spacing;
        // Right edge of the wall; extent 1 spans the whole view.
        const double right = -half_w + extent * 2.0 * half_w;
        const double half_h = half_fov_y * z + 4.0 * spacing;
        const double angle = rng.uniform(0.0, M_PI);
        const Vec3 stripe_dir(std::cos(angle), std::sin(angle), 0.0);
        const double freq = 2.0 * M_PI / period;
        const double phase = rng.uniform(0.0, 2.0 * M_PI);
        const Color a{rng.uniform(0.0, 1.0), rng.uniform(0.0, 1.0), rng.uniform(0.0, 1.0)};
        const Color b{rng.uniform(0.0, 1.0), rng.uniform(0.0, 1.0), rng.uniform(0.0, 1.0)};
        const int nx = static_cast<int>(std::ceil(2.0 * half_w / spacing));
        const int ny = static_cast<int>(std::ceil(2.0 * half_h / spacing));
        for (int iy = 0; iy <= ny; ++iy) {
            for (int ix = 0; ix <= nx; ++ix) {
                Gaussian3D g;
                g.center = {-half_w + ix * spacing, -half_h + iy * spacing, z};
                if (g.center.x() > right) break;
                g.sigma = spacing * sigma_scale;
                g.opacity = opacity;
                const double s = 0.5 + 0.5 * std::sin(freq * stripe_dir.dot(g.center) + phase);
                const Color c = lerp_color(a, b, s);
                for (int ch = 0; ch < 3; ++ch) g.color[ch] = clamp01(c[ch] + rng.uniform(-0.03, 0.03));
                out.scene.gaussians.push_back(g);
            }
        }
    };
    // Pattern periods span roughly 8-12 pixels at each wall's depth.
    add_wall(spec.front_z, spec.front_z / spec.focal * 1.5, 1.5, spec.front_opacity,
             spec.front_z / spec.focal * rng.uniform(8.0, 12.0), spec.front_extent);
    add_wall(spec.back_z, spec.back_z / spec.focal * 1.5, 1.2, 0.9, spec.back_z / spec.focal * rng.uniform(8.0, 12.0), 1.0);

    const CameraIntrinsics k{spec.focal, spec.focal, spec.width / 2.0, spec.height / 2.0, spec.width, spec.height};
    CameraExtrinsics shifted;
    shifted.translation = {-spec.baseline, 0.0, 0.0};
    out.cameras = {{k, CameraExtrinsics::identity()}, {k, shifted}};
    return out;
}

} // namespace mvgeo
