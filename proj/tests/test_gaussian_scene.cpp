// Copyright 2026 The mvgeo Authors
// SPDX-License-Identifier: Apache-2.0

#include <gtest/gtest.h>

#include <cmath>
#include <cstdlib>

#include "mvgeo/gaussian_scene.hpp"
#include "test_support.hpp"

namespace mvgeo {
namespace {

CameraModel pinhole(int w = 16, int h = 16, double f = 16.0) {
    return {{f, f, w / 2.0, h / 2.0, w, h}, CameraExtrinsics::identity()};
}

std::vector<Contribution> stack(std::initializer_list<double> alphas, std::initializer_list<double> zs = {}) {
    std::vector<Contribution> out;
    auto z = zs.begin();
    for (double a : alphas) {
        Contribution c;
        c.alpha = a;
        c.z = z != zs.end() ? *z++ : 1.0;
        out.push_back(c);
    }
    return out;
}

GaussianScene one_gaussian(const Vec3& center, double sigma, double opacity) {
    GaussianScene s;
    s.gaussians.push_back({center, sigma, opacity, {0.5, 0.5, 0.5}});
    return s;
}

TEST(RayContributions, GaussianOnTheRayKeepsItsOpacity) {
    // Pixel center (8.5, 8.5) with principal point 8 is not on the optical
    // axis; place the Gaussian on that pixel's ray instead.
    const CameraModel cam = pinhole();
    const Vec2 px(8.5, 8.5);
    const Vec3 on_ray = backproject(px, 3.0, cam.intrinsics, cam.extrinsics);
    const auto c = ray_contributions(one_gaussian(on_ray, 0.1, 0.8), cam, px);
    ASSERT_EQ(c.size(), 1u);
    EXPECT_NEAR(c[0].alpha, 0.8, 1e-15);
    EXPECT_NEAR(c[0].z, 3.0, 1e-15);
}

TEST(RayContributions, BehindCameraIsExcluded) {
    const CameraModel cam = pinhole();
    EXPECT_TRUE(ray_contributions(one_gaussian({0, 0, -2}, 1.0, 1.0), cam, {8, 8}).empty());
    EXPECT_TRUE(ray_contributions(one_gaussian({0, 0, kZNear / 2}, 1.0, 1.0), cam, {8, 8}).empty());
}

TEST(RayContributions, FalloffAtOneSigma) {
    const CameraModel cam = pinhole();
    // Ray through the principal point is the z axis; offset by sigma in x.
    const auto c = ray_contributions(one_gaussian({0.25, 0, 2}, 0.25, 1.0), cam, {8, 8});
    ASSERT_EQ(c.size(), 1u);
    EXPECT_NEAR(c[0].alpha, std::exp(-0.5), 1e-12);
    EXPECT_NEAR(c[0].alpha, 0.6065, 1e-4);
}

TEST(RayContributions, CullsFaintAndClampsOpaque) {
    const CameraModel cam = pinhole();
    EXPECT_TRUE(ray_contributions(one_gaussian({0, 0, 2}, 1.0, 0.5 / 255.0), cam, {8, 8}).empty());
    const auto c = ray_contributions(one_gaussian({0, 0, 2}, 1.0, 1.0), cam, {8, 8});
    ASSERT_EQ(c.size(), 1u);
    EXPECT_EQ(c[0].alpha, kAlphaMax);
}

TEST(RayContributions, SortedByDepth) {
    GaussianScene s;
    for (double z : {3.0, 1.0, 2.0, 1.0}) s.gaussians.push_back({{0, 0, z}, 1.0, 0.5, {0, 0, 0}});
    const auto c = ray_contributions(s, pinhole(), {8, 8});
    ASSERT_EQ(c.size(), 4u);
    for (std::size_t i = 1; i < c.size(); ++i) EXPECT_LE(c[i - 1].z, c[i].z);
}

TEST(Composite, HandEvaluatedGray) {
    auto c = stack({0.5, 1.0});
    c[0].color = {1, 1, 1};
    c[1].color = {0, 0, 0};
    const CompositeResult r = composite(c, {0, 0, 0});
    for (double ch : r.color) EXPECT_DOUBLE_EQ(ch, 0.5);
}

TEST(Composite, EmptyGivesBackground) {
    const CompositeResult r = composite({}, {0.1, 0.2, 0.3});
    EXPECT_EQ(r.color, (Color{0.1, 0.2, 0.3}));
    EXPECT_EQ(r.transmittance, std::vector<double>{1.0});
}

TEST(Composite, FullOpacity) {
    auto c = stack({1.0});
    c[0].color = {0.3, 0.3, 0.3};
    const CompositeResult r = composite(c, {0.9, 0.9, 0.9});
    EXPECT_DOUBLE_EQ(r.color[0], 0.3);
    ASSERT_EQ(r.transmittance.size(), 2u);
    EXPECT_EQ(r.transmittance[1], 0.0);
}

TEST(Composite, TransmittanceMonotoneAndPartitionOfUnity) {
    Rng rng(3);
    for (int trial = 0; trial < 2000; ++trial) {
        std::vector<Contribution> c(rng.below(40));
        for (auto& e : c) e.alpha = rng.uniform();
        const CompositeResult r = composite(c, {1, 1, 1});
        ASSERT_EQ(r.transmittance.size(), c.size() + 1);
        EXPECT_EQ(r.transmittance[0], 1.0);
        double sum = r.transmittance.back();
        for (std::size_t i = 0; i < c.size(); ++i) {
            EXPECT_LE(r.transmittance[i + 1], r.transmittance[i]);
            EXPECT_GE(r.transmittance[i + 1], 0.0);
            sum += r.transmittance[i] * c[i].alpha;
        }
        EXPECT_NEAR(sum, 1.0, 1e-12);
    }
}

TEST(MedianDepth, HandEvaluatedExamples) {
    const MedianDepth a = median_depth(stack({0.6, 0.9, 1.0}, {1, 2, 3}));
    EXPECT_TRUE(a.covered);
    EXPECT_EQ(a.depth, 2.0);

    const MedianDepth b = median_depth(stack({0.3}, {5}));
    EXPECT_FALSE(b.covered);
    EXPECT_EQ(b.depth, 0.0);

    const MedianDepth c = median_depth(stack({1.0, 0.2}, {1.5, 4.0}));
    EXPECT_TRUE(c.covered);
    EXPECT_EQ(c.depth, 4.0);
}

TEST(MedianDepth, SingleOpaqueElementIsUncovered) {
    // T_2 < 0.5 but i* = 2 exceeds M = 1.
    EXPECT_FALSE(median_depth(stack({1.0}, {2.0})).covered);
}

TEST(MedianDepth, IgnoresColors) {
    Rng rng(5);
    for (int trial = 0; trial < 200; ++trial) {
        std::vector<Contribution> c(1 + rng.below(10));
        double z = 0.0;
        for (auto& e : c) {
            e.alpha = rng.uniform();
            e.z = z += rng.uniform(0.1, 1.0);
            e.color = {rng.uniform(), rng.uniform(), rng.uniform()};
        }
        const MedianDepth before = median_depth(c);
        for (auto& e : c) e.color = {e.color[0] * 0.3, e.color[1] * 0.3, e.color[2] * 0.3};
        const MedianDepth after = median_depth(c);
        EXPECT_EQ(before.depth, after.depth);
        EXPECT_EQ(before.covered, after.covered);
    }
}

TEST(WeightedDepth, HandEvaluatedExamples) {
    EXPECT_DOUBLE_EQ(weighted_avg_depth(stack({1.0}, {2})), 2.0);
    EXPECT_DOUBLE_EQ(weighted_avg_depth(stack({0.5, 1.0}, {1, 3})), 2.0);
    EXPECT_EQ(weighted_avg_depth({}), 0.0);
}

GaussianScene opaque_sheet(double z, double spacing, double sigma, double half) {
    GaussianScene s;
    for (double y = -half; y <= half + 1e-9; y += spacing) {
        for (double x = -half; x <= half + 1e-9; x += spacing) s.gaussians.push_back({{x, y, z}, sigma, 1.0, {1, 1, 1}});
    }
    return s;
}

TEST(RenderView, OpaqueSheetGivesConstantDepth) {
    const CameraModel cam = pinhole();
    const RenderOutput r = render_view(opaque_sheet(2.0, 0.05, 0.06, 1.6), cam);
    for (int y = 0; y < 16; ++y) {
        for (int x = 0; x < 16; ++x) {
            ASSERT_EQ(r.coverage.at(x, y), 1);
            EXPECT_EQ(r.median_depth.depth.at(x, y), 2.0f);
            EXPECT_FLOAT_EQ(r.weighted_depth.depth.at(x, y), 2.0f);
        }
    }
}

TEST(RenderView, SingleOpaqueGaussianLeavesPixelsUncovered) {
    const RenderOutput r = render_view(one_gaussian({0, 0, 2}, 50.0, 1.0), pinhole());
    for (std::uint8_t v : r.coverage.data()) EXPECT_EQ(v, 0);
}

TEST(RenderView, EmptySceneShowsBackground) {
    GaussianScene s;
    s.background = {0.2, 0.4, 0.6};
    const RenderOutput r = render_view(s, pinhole());
    for (int y = 0; y < 16; ++y) {
        for (int x = 0; x < 16; ++x) {
            EXPECT_EQ(r.coverage.at(x, y), 0);
            EXPECT_EQ(r.median_depth.valid.at(x, y), 0);
            EXPECT_EQ(r.color.at(x, y, 0), 0.2f);
            EXPECT_EQ(r.color.at(x, y, 2), 0.6f);
        }
    }
}

TEST(RenderView, MatchesPerPixelEvaluation) {
    CameraArc arc;
    arc.count = 2;
    arc.width = arc.height = 40;
    arc.focal = 40;
    const SyntheticScene s = synthesize_scene(9, 600, {}, arc);
    const CameraModel& cam = s.cameras[1];
    const RenderOutput r = render_view(s.scene, cam);
    for (int y = 0; y < 40; ++y) {
        for (int x = 0; x < 40; ++x) {
            const auto c = ray_contributions(s.scene, cam, {x + 0.5, y + 0.5});
            const CompositeResult comp = composite(c, s.scene.background);
            const MedianDepth md = median_depth(c);
            for (int ch = 0; ch < 3; ++ch) ASSERT_EQ(r.color.at(x, y, ch), static_cast<float>(comp.color[ch]));
            ASSERT_EQ(r.coverage.at(x, y), md.covered ? 1 : 0);
            ASSERT_EQ(r.median_depth.depth.at(x, y), md.covered ? static_cast<float>(md.depth) : 0.0f);
        }
    }
}

TEST(RenderView, DeterministicAcrossThreadCounts) {
    const SyntheticScene s = synthesize_scene(4, 1500, {}, CameraArc{});
    ::setenv("MVGEO_THREADS", "1", 1);
    const RenderOutput a = render_view(s.scene, s.cameras[3]);
    ::setenv("MVGEO_THREADS", "4", 1);
    const RenderOutput b = render_view(s.scene, s.cameras[3]);
    ::unsetenv("MVGEO_THREADS");
    const RenderOutput c = render_view(s.scene, s.cameras[3]);
    EXPECT_EQ(a.color, b.color);
    EXPECT_EQ(a.median_depth, b.median_depth);
    EXPECT_EQ(a.weighted_depth, c.weighted_depth);
    EXPECT_EQ(a.coverage, c.coverage);
}

TEST(RenderView, CoveredDepthsArePositive) {
    const SyntheticScene s = synthesize_scene(2, 2000, {}, CameraArc{});
    const RenderOutput r = render_view(s.scene, s.cameras[0]);
    for (std::size_t i = 0; i < r.coverage.size(); ++i) {
        if (r.coverage.data()[i]) {
            EXPECT_GT(r.median_depth.depth.data()[i], 0.0f);
        }
    }
}

TEST(TwoWalls, MedianSelectsFrontSurface) {
    TwoWallSpec spec;
    spec.front_extent = 1.0;
    const SyntheticScene s = two_wall_scene(1, spec);
    const RenderOutput r = render_view(s.scene, s.cameras[0]);
    for (int y = 0; y < spec.height; ++y) {
        for (int x = 0; x < spec.width; ++x) {
            ASSERT_EQ(r.coverage.at(x, y), 1);
            EXPECT_EQ(r.median_depth.depth.at(x, y), 1.0f);
            EXPECT_GE(r.weighted_depth.depth.at(x, y), 1.0f);
            EXPECT_LT(r.weighted_depth.depth.at(x, y), 2.0f);
        }
    }
}

TEST(TwoWalls, TranslucentFrontBlendsWeightedDepth) {
    TwoWallSpec spec;
    spec.front_extent = 1.0;
    spec.front_opacity = 0.05;
    const SyntheticScene s = two_wall_scene(1, spec);
    const RenderOutput r = render_view(s.scene, s.cameras[0]);
    int blended = 0;
    for (int y = 0; y < spec.height; ++y) {
        for (int x = 0; x < spec.width; ++x) {
            const float wd = r.weighted_depth.depth.at(x, y);
            EXPECT_GE(wd, 1.0f);
            EXPECT_LE(wd, 2.0f);
            blended += wd > 1.05f && wd < 1.95f;
        }
    }
    EXPECT_GT(blended, spec.width * spec.height / 2);
}

TEST(TwoWalls, PartialFrontWallLeavesBackVisible) {
    const SyntheticScene s = two_wall_scene(2);
    const RenderOutput r = render_view(s.scene, s.cameras[0]);
    // Left columns see the front wall, right columns the back wall.
    EXPECT_EQ(r.median_depth.depth.at(2, 30), 1.0f);
    EXPECT_EQ(r.median_depth.depth.at(61, 30), 2.0f);
}

TEST(SynthesizeScene, DeterministicAndSized) {
    const SyntheticScene a = synthesize_scene(42, 100, {}, CameraArc{});
    const SyntheticScene b = synthesize_scene(42, 100, {}, CameraArc{});
    ASSERT_EQ(a.scene.gaussians.size(), 100u);
    for (std::size_t i = 0; i < 100; ++i) {
        EXPECT_EQ(a.scene.gaussians[i].center, b.scene.gaussians[i].center);
        EXPECT_EQ(a.scene.gaussians[i].sigma, b.scene.gaussians[i].sigma);
        EXPECT_EQ(a.scene.gaussians[i].color, b.scene.gaussians[i].color);
    }
    EXPECT_NO_THROW(a.scene.validate());
    const BoundingBox box;
    for (const auto& g : a.scene.gaussians) {
        EXPECT_TRUE((g.center.array() >= box.min.array()).all());
        EXPECT_TRUE((g.center.array() <= box.max.array()).all());
    }
}

TEST(SynthesizeScene, ZeroSpacingGivesIdenticalCameras) {
    CameraArc arc;
    arc.spacing_deg = 0.0;
    arc.count = 5;
    const SyntheticScene s = synthesize_scene(1, 10, {}, arc);
    ASSERT_EQ(s.cameras.size(), 5u);
    for (const auto& c : s.cameras) EXPECT_EQ(c.extrinsics, s.cameras[0].extrinsics);
}

TEST(SynthesizeScene, RejectsDegenerateInput) {
    BoundingBox flat;
    flat.max.z() = flat.min.z();
    EXPECT_THROW(synthesize_scene(1, 10, flat, CameraArc{}), DomainError);
    EXPECT_THROW(synthesize_scene(1, 0, {}, CameraArc{}), DomainError);
}

TEST(SceneValidate, RejectsOutOfRangeFields) {
    GaussianScene s = one_gaussian({0, 0, 1}, 1.0, 0.5);
    EXPECT_NO_THROW(s.validate());
    s.gaussians[0].sigma = 0.0;
    EXPECT_THROW(s.validate(), DomainError);
    s = one_gaussian({0, 0, 1}, 1.0, 1.5);
    EXPECT_THROW(s.validate(), DomainError);
}

} // namespace
} // namespace mvgeo
