// Copyright 2026 The mvgeo Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <Eigen/Core>

#include "mvgeo/errors.hpp"

namespace mvgeo {

using Vec2 = Eigen::Vector2d;
using Vec3 = Eigen::Vector3d;
using Vec4 = Eigen::Vector4d;
using Mat3 = Eigen::Matrix3d;
using Mat4 = Eigen::Matrix4d;

/// Pinhole intrinsics without skew. Pixel coordinates are continuous, the
/// center of pixel (i, j) being (i + 0.5, j + 0.5).
struct CameraIntrinsics {
    double fx = 1.0;
    double fy = 1.0;
    double cx = 0.0;
    double cy = 0.0;
    int width = 1;
    int height = 1;

    /// Throws DomainError unless fx, fy, width, height are positive and finite.
    void validate() const;
    Mat3 matrix() const;
    Mat3 inverse_matrix() const;

    friend bool operator==(const CameraIntrinsics&, const CameraIntrinsics&) = default;
};

/// Rigid world-to-camera transform V = [[R, t], [0, 1]].
struct CameraExtrinsics {
    Mat3 rotation = Mat3::Identity();
    Vec3 translation = Vec3::Zero();

    static CameraExtrinsics identity() { return {}; }
    static CameraExtrinsics from_matrix(const Mat4& v);

    Mat4 matrix() const;
    /// Closed-form inverse [[R^T, -R^T t], [0, 1]].
    Mat4 inverse_matrix() const;
    /// Camera center in world coordinates, -R^T t.
    Vec3 center() const;

    /// Throws DomainError unless R^T R = I and det R = 1 within tolerance.
    void validate(double tolerance = 1e-9) const;

    friend bool operator==(const CameraExtrinsics& a, const CameraExtrinsics& b) {
        return a.rotation == b.rotation && a.translation == b.translation;
    }
};

struct CameraModel {
    CameraIntrinsics intrinsics;
    CameraExtrinsics extrinsics;

    int width() const noexcept { return intrinsics.width; }
    int height() const noexcept { return intrinsics.height; }
    void validate() const {
        intrinsics.validate();
        extrinsics.validate();
    }
};

/// Appends a homogeneous 1.
inline Vec4 aug(const Vec3& v) { return {v.x(), v.y(), v.z(), 1.0}; }
/// Drops the last component.
inline Vec3 deaug(const Vec4& v) { return {v.x(), v.y(), v.z()}; }

/// Camera-space point of pixel `px` at depth `depth`: K^-1 * depth * (x, y, 1).
/// Evaluated as ((x - cx) / fx * d, (y - cy) / fy * d, d).
Vec3 pixel_to_camera(const Vec2& px, double depth, const CameraIntrinsics& k);

/// World point of pixel `px` at depth `depth`: deaug(V^-1 * aug(K^-1 * depth * (x, y, 1))).
/// Throws DomainError for depth <= 0.
Vec3 backproject(const Vec2& px, double depth, const CameraIntrinsics& k, const CameraExtrinsics& v);

/// World-to-camera transform deaug(V * aug(p)).
Vec3 world_to_camera(const Vec3& p, const CameraExtrinsics& v);

struct Projection {
    Vec2 pixel;
    double depth = 0.0;
};

/// Projects a world point; `depth` is the camera-space z. Throws DomainError
/// when the camera-space z is exactly 0 or the point is not finite.
Projection project(const Vec3& p, const CameraIntrinsics& k, const CameraExtrinsics& v);

/// Same as project() but reports failure instead of throwing.
bool try_project(const Vec3& p, const CameraIntrinsics& k, const CameraExtrinsics& v, Projection& out) noexcept;

/// Camera at `eye` looking at `target`, x right, y down, z forward; `up` is the
/// world direction that appears upward in the image.
CameraExtrinsics look_at(const Vec3& eye, const Vec3& target, const Vec3& up = Vec3::UnitY());

/// Rotation of `radians` about `axis`.
Mat3 axis_angle(const Vec3& axis, double radians);

} // namespace mvgeo
