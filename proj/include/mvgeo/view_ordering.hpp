// Copyright 2026 The mvgeo Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <Eigen/Core>
#include <span>
#include <string_view>
#include <vector>

#include "mvgeo/geometry.hpp"

namespace mvgeo {

enum class MatrixNorm { kFrobenius, kSpectral };

MatrixNorm parse_norm(std::string_view name);
std::string_view norm_name(MatrixNorm norm);

/// V_i V_j^-1 - I, with V_j^-1 in closed form.
Mat4 relative_pose_deviation(const CameraExtrinsics& vi, const CameraExtrinsics& vj);

struct PowerIterationOptions {
    double tolerance = 1e-12;
    int max_iterations = 10000;
};

/// Largest singular value of `a` via power iteration on A^T A, starting from
/// the normalized all-ones vector. Stops when the Rayleigh quotient changes by
/// at most tolerance (relative).
double spectral_norm(const Mat4& a, const PowerIterationOptions& options = {});

/// Inter-view distance ||V_i V_j^-1 - I|| under the chosen norm.
double view_distance(const CameraExtrinsics& vi, const CameraExtrinsics& vj,
                     MatrixNorm norm = MatrixNorm::kFrobenius);

using DistanceMatrix = Eigen::MatrixXd;

/// Pairwise view distances. Each off-diagonal pair is evaluated in both
/// directions; a disagreement above 1e-9 throws DomainError.
DistanceMatrix distance_matrix(std::span<const CameraExtrinsics> views, MatrixNorm norm = MatrixNorm::kFrobenius);

/// Nearest-neighbour chain from `start`: each step appends the unvisited view
/// closest to the last one, ties going to the smallest index.
std::vector<int> greedy_order(const DistanceMatrix& distances, int start = 0);

/// Sum of consecutive distances along `order`.
double path_length(const DistanceMatrix& distances, std::span<const int> order);

/// greedy_order from every start; keeps the shortest path (ties: smallest start).
std::vector<int> best_start_order(const DistanceMatrix& distances);

} // namespace mvgeo
