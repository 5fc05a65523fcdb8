// Copyright 2026 The mvgeo Authors
// SPDX-License-Identifier: Apache-2.0

#include "mvgeo/geometry.hpp"

#include <Eigen/Geometry>
#include <cmath>
#include <string>

namespace mvgeo {

void CameraIntrinsics::validate() const {
    if (!(fx > 0.0) || !(fy > 0.0) || !std::isfinite(fx) || !std::isfinite(fy)) {
        throw DomainError("intrinsics: focal lengths must be positive and finite");
    }
    if (!std::isfinite(cx) || !std::isfinite(cy)) {
        throw DomainError("intrinsics: principal point must be finite");
    }
    if (width <= 0 || height <= 0) {
        throw DomainError("intrinsics: image size must be positive, got " + std::to_string(width) + "x" +
                          std::to_string(height));
    }
}

Mat3 CameraIntrinsics::matrix() const {
    Mat3 k;
    k << fx, 0.0, cx, 0.0, fy, cy, 0.0, 0.0, 1.0;
    return k;
}

Mat3 CameraIntrinsics::inverse_matrix() const {
    Mat3 k;
    k << 1.0 / fx, 0.0, -cx / fx, 0.0, 1.0 / fy, -cy / fy, 0.0, 0.0, 1.0;
    return k;
}

CameraExtrinsics CameraExtrinsics::from_matrix(const Mat4& v) {
    CameraExtrinsics e;
    e.rotation = v.topLeftCorner<3, 3>();
    e.translation = v.topRightCorner<3, 1>();
    return e;
}

Mat4 CameraExtrinsics::matrix() const {
    Mat4 v = Mat4::Identity();
    v.topLeftCorner<3, 3>() = rotation;
    v.topRightCorner<3, 1>() = translation;
    return v;
}

Mat4 CameraExtrinsics::inverse_matrix() const {
    Mat4 v = Mat4::Identity();
    const Mat3 rt = rotation.transpose();
    v.topLeftCorner<3, 3>() = rt;
    v.topRightCorner<3, 1>() = -(rt * translation);
    return v;
}

Vec3 CameraExtrinsics::center() const { return -(rotation.transpose() * translation); }

void CameraExtrinsics::validate(double tolerance) const {
    if (!rotation.allFinite() || !translation.allFinite()) {
        throw DomainError("extrinsics: non-finite rotation or translation");
    }
    const double ortho = (rotation.transpose() * rotation - Mat3::Identity()).cwiseAbs().maxCoeff();
    if (ortho > tolerance) {
        throw DomainError("extrinsics: rotation is not orthogonal (max |R^T R - I| = " + std::to_string(ortho) + ")");
    }
    const double det = rotation.determinant();
    if (std::abs(det - 1.0) > tolerance) {
        throw DomainError("extrinsics: rotation determinant is " + std::to_string(det) + ", expected 1");
    }
}

Vec3 pixel_to_camera(const Vec2& px, double depth, const CameraIntrinsics& k) {
    return {(px.x() - k.cx) / k.fx * depth, (px.y() - k.cy) / k.fy * depth, depth};
}

// The matrix-vector products below are spelled out term by term so that the
// evaluation order is fixed; the disparity and splatting oracles rely on it.

Vec3 backproject(const Vec2& px, double depth, const CameraIntrinsics& k, const CameraExtrinsics& v) {
    if (!(depth > 0.0)) {
        throw DomainError("backproject: depth must be positive, got " + std::to_string(depth));
    }
    const Vec3 c = pixel_to_camera(px, depth, k);
    const Mat3& r = v.rotation;
    const double a = c.x() - v.translation.x();
    const double b = c.y() - v.translation.y();
    const double d = c.z() - v.translation.z();
    return {r(0, 0) * a + r(1, 0) * b + r(2, 0) * d,
            r(0, 1) * a + r(1, 1) * b + r(2, 1) * d,
            r(0, 2) * a + r(1, 2) * b + r(2, 2) * d};
}

Vec3 world_to_camera(const Vec3& p, const CameraExtrinsics& v) {
    const Mat3& r = v.rotation;
    return {r(0, 0) * p.x() + r(0, 1) * p.y() + r(0, 2) * p.z() + v.translation.x(),
            r(1, 0) * p.x() + r(1, 1) * p.y() + r(1, 2) * p.z() + v.translation.y(),
            r(2, 0) * p.x() + r(2, 1) * p.y() + r(2, 2) * p.z() + v.translation.z()};
}

bool try_project(const Vec3& p, const CameraIntrinsics& k, const CameraExtrinsics& v, Projection& out) noexcept {
    if (!p.allFinite()) return false;
    const Vec3 q = world_to_camera(p, v);
    if (q.z() == 0.0) return false;
    out.depth = q.z();
    out.pixel = {k.fx * q.x() / q.z() + k.cx, k.fy * q.y() / q.z() + k.cy};
    return true;
}

Projection project(const Vec3& p, const CameraIntrinsics& k, const CameraExtrinsics& v) {
    if (!p.allFinite()) throw DomainError("project: point is not finite");
    Projection out;
    if (!try_project(p, k, v, out)) {
        throw DomainError("project: point lies in the camera plane (z = 0), projection at infinity");
    }
    return out;
}

CameraExtrinsics look_at(const Vec3& eye, const Vec3& target, const Vec3& up) {
    const Vec3 forward = target - eye;
    if (forward.norm() == 0.0) throw DomainError("look_at: eye and target coincide");
    const Vec3 z = forward.normalized();
    Vec3 down = -up + up.dot(z) * z;
    if (down.norm() < 1e-12) throw DomainError("look_at: up vector is parallel to the viewing direction");
    const Vec3 y = down.normalized();
    const Vec3 x = y.cross(z);
    CameraExtrinsics e;
    e.rotation.row(0) = x;
    e.rotation.row(1) = y;
    e.rotation.row(2) = z;
    e.translation = -(e.rotation * eye);
    return e;
}

Mat3 axis_angle(const Vec3& axis, double radians) {
    return Eigen::AngleAxisd(radians, axis.normalized()).toRotationMatrix();
}

} // namespace mvgeo
