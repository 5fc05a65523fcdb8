// Copyright 2026 The mvgeo Authors
// SPDX-License-Identifier: Apache-2.0

#include <gtest/gtest.h>

#include "mvgeo/geometry.hpp"
#include "test_support.hpp"

namespace mvgeo {
namespace {

CameraIntrinsics k100() { return {100.0, 100.0, 32.0, 32.0, 64, 64}; }

TEST(Augment, AppendsAndDropsHomogeneousCoordinate) {
    EXPECT_EQ(aug(Vec3(1, 2, 3)), Vec4(1, 2, 3, 1));
    EXPECT_EQ(deaug(Vec4(1, 2, 3, 1)), Vec3(1, 2, 3));
    EXPECT_EQ(deaug(aug(Vec3::Zero())), Vec3::Zero());
}

TEST(Backproject, HandEvaluatedPoint) {
    const Vec3 p = backproject({32, 32}, 2.0, k100(), CameraExtrinsics::identity());
    EXPECT_EQ(p, Vec3(0, 0, 2));
}

TEST(Backproject, PrincipalPointRayLiesOnAxis) {
    const CameraIntrinsics k{80, 90, 17.25, 40.5, 64, 64};
    const Vec3 p = backproject({k.cx, k.cy}, 1.0, k, CameraExtrinsics::identity());
    EXPECT_EQ(p, Vec3(0, 0, 1));
    const Vec3 q = backproject({k.cx, k.cy}, 7.5, k, CameraExtrinsics::identity());
    EXPECT_EQ(q.x(), 0.0);
    EXPECT_EQ(q.y(), 0.0);
}

TEST(Backproject, RejectsNonPositiveDepth) {
    EXPECT_THROW(backproject({1, 1}, 0.0, k100(), {}), DomainError);
    EXPECT_THROW(backproject({1, 1}, -1.0, k100(), {}), DomainError);
}

TEST(Project, TranslatedCameraHandEvaluation) {
    CameraExtrinsics v;
    v.translation = {1, 0, 0};
    const Projection p = project({1, 0, 2}, k100(), v);
    EXPECT_DOUBLE_EQ(p.pixel.x(), 132.0);
    EXPECT_DOUBLE_EQ(p.pixel.y(), 32.0);
    EXPECT_DOUBLE_EQ(p.depth, 2.0);
}

TEST(Project, AxisPointHitsPrincipalPoint) {
    const Projection p = project({0, 0, 1}, k100(), {});
    EXPECT_EQ(p.pixel, Vec2(32, 32));
    EXPECT_EQ(p.depth, 1.0);
}

TEST(Project, PointInCameraPlaneIsAnError) {
    EXPECT_THROW(project({1, 1, 0}, k100(), {}), DomainError);
    Projection out;
    EXPECT_FALSE(try_project({1, 1, 0}, k100(), {}, out));
    EXPECT_THROW(project({std::nan(""), 0, 1}, k100(), {}), DomainError);
}

TEST(Project, InvertsBackprojectionOnRandomCameras) {
    Rng rng(7);
    for (int trial = 0; trial < 2000; ++trial) {
        CameraIntrinsics k{rng.uniform(20, 500), rng.uniform(20, 500), rng.uniform(0, 64), rng.uniform(0, 64), 64, 64};
        const CameraExtrinsics v = testing::random_se3(rng);
        const Vec2 px(rng.uniform(0, 64), rng.uniform(0, 64));
        const double d = rng.uniform(0.1, 50.0);
        const Projection p = project(backproject(px, d, k, v), k, v);
        EXPECT_LT((p.pixel - px).norm(), 1e-6);
        EXPECT_LT(std::abs(p.depth - d), 1e-6);
    }
}

TEST(Extrinsics, MatrixAssemblyRoundTrip) {
    Rng rng(11);
    for (int trial = 0; trial < 200; ++trial) {
        const CameraExtrinsics v = testing::random_se3(rng);
        const CameraExtrinsics back = CameraExtrinsics::from_matrix(v.matrix());
        EXPECT_EQ(back.rotation, v.rotation);
        EXPECT_EQ(back.translation, v.translation);
        EXPECT_LT((back.rotation.transpose() * back.rotation - Mat3::Identity()).cwiseAbs().maxCoeff(), 1e-12);
        EXPECT_LT((v.matrix() * v.inverse_matrix() - Mat4::Identity()).cwiseAbs().maxCoeff(), 1e-12);
    }
}

TEST(Extrinsics, ValidateRejectsNonRotations) {
    CameraExtrinsics v;
    v.rotation(0, 0) = 1.1;
    EXPECT_THROW(v.validate(), DomainError);
    CameraExtrinsics mirror;
    mirror.rotation(2, 2) = -1.0;
    EXPECT_THROW(mirror.validate(), DomainError);
    EXPECT_NO_THROW(CameraExtrinsics::identity().validate());
}

TEST(Intrinsics, ValidateRejectsBadValues) {
    CameraIntrinsics k = k100();
    EXPECT_NO_THROW(k.validate());
    k.fx = 0.0;
    EXPECT_THROW(k.validate(), DomainError);
    k = k100();
    k.width = 0;
    EXPECT_THROW(k.validate(), DomainError);
    k = k100();
    EXPECT_LT((k.matrix() * k.inverse_matrix() - Mat3::Identity()).cwiseAbs().maxCoeff(), 1e-15);
}

TEST(LookAt, CameraSeesTargetOnAxis) {
    const Vec3 eye(3, 1, -4), target(0.5, -0.2, 0.3);
    const CameraExtrinsics v = look_at(eye, target);
    EXPECT_NO_THROW(v.validate());
    const Vec3 q = world_to_camera(target, v);
    EXPECT_NEAR(q.x(), 0.0, 1e-12);
    EXPECT_NEAR(q.y(), 0.0, 1e-12);
    EXPECT_NEAR(q.z(), (target - eye).norm(), 1e-12);
    EXPECT_LT((v.center() - eye).norm(), 1e-12);
    EXPECT_THROW(look_at(eye, eye), DomainError);
}

} // namespace
} // namespace mvgeo
