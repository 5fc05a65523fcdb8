// Copyright 2026 The mvgeo Authors
// SPDX-License-Identifier: Apache-2.0

#include "mvgeo/view_ordering.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "mvgeo/parallel.hpp"

namespace mvgeo {

MatrixNorm parse_norm(std::string_view name) {
    if (name == "frobenius" || name == "fro") return MatrixNorm::kFrobenius;
    if (name == "spectral" || name == "2") return MatrixNorm::kSpectral;
    throw std::invalid_argument("unknown norm '" + std::string(name) + "' (expected frobenius or spectral)");
}

std::string_view norm_name(MatrixNorm norm) {
    return norm == MatrixNorm::kFrobenius ? "frobenius" : "spectral";
}

Mat4 relative_pose_deviation(const CameraExtrinsics& vi, const CameraExtrinsics& vj) {
    return vi.matrix() * vj.inverse_matrix() - Mat4::Identity();
}

double spectral_norm(const Mat4& a, const PowerIterationOptions& options) {
    const Mat4 ata = a.transpose() * a;
    Vec4 v = Vec4::Ones().normalized();
    double lambda = v.dot(ata * v);
    for (int it = 0; it < options.max_iterations; ++it) {
        const Vec4 next = ata * v;
        const double n = next.norm();
        if (n == 0.0) return 0.0;
        v = next / n;
        const double updated = v.dot(ata * v);
        const bool converged = std::abs(updated - lambda) <= options.tolerance * std::abs(updated);
        lambda = updated;
        if (converged) break;
    }
    return std::sqrt(std::max(lambda, 0.0));
}

double view_distance(const CameraExtrinsics& vi, const CameraExtrinsics& vj, MatrixNorm norm) {
    // Equal poses are at distance 0 exactly, not up to R R^T round-off.
    if (vi == vj) return 0.0;
    const Mat4 diff = relative_pose_deviation(vi, vj);
    return norm == MatrixNorm::kFrobenius ? diff.norm() : spectral_norm(diff);
}

DistanceMatrix distance_matrix(std::span<const CameraExtrinsics> views, MatrixNorm norm) {
    const int n = static_cast<int>(views.size());
    DistanceMatrix d = DistanceMatrix::Zero(n, n);
    parallel_for(n, [&](int begin, int end) {
        for (int i = begin; i < end; ++i) {
            for (int j = 0; j < n; ++j) {
                if (i != j) d(i, j) = view_distance(views[i], views[j], norm);
            }
        }
    });
    for (int i = 0; i < n; ++i) {
        for (int j = i + 1; j < n; ++j) {
            if (std::abs(d(i, j) - d(j, i)) > 1e-9) {
                throw DomainError("distance_matrix: asymmetric distance between views " + std::to_string(i) + " and " +
                                  std::to_string(j) + " (are the rotations orthonormal?)");
            }
            d(j, i) = d(i, j);
        }
    }
    return d;
}

std::vector<int> greedy_order(const DistanceMatrix& distances, int start) {
    const int n = static_cast<int>(distances.rows());
    if (distances.cols() != n) throw DimensionError("greedy_order: distance matrix must be square");
    if (start < 0 || start >= n) throw std::out_of_range("greedy_order: start view out of range");
    std::vector<int> order{start};
    std::vector<bool> visited(n, false);
    visited[start] = true;
    while (static_cast<int>(order.size()) < n) {
        const int last = order.back();
        int best = -1;
        double best_distance = std::numeric_limits<double>::infinity();
        for (int j = 0; j < n; ++j) {
            if (visited[j]) continue;
            if (best < 0 || distances(last, j) < best_distance) {
                best = j;
                best_distance = distances(last, j);
            }
        }
        visited[best] = true;
        order.push_back(best);
    }
    return order;
}

double path_length(const DistanceMatrix& distances, std::span<const int> order) {
    double total = 0.0;
    for (std::size_t i = 1; i < order.size(); ++i) total += distances(order[i - 1], order[i]);
    return total;
}

std::vector<int> best_start_order(const DistanceMatrix& distances) {
    std::vector<int> best;
    double best_length = std::numeric_limits<double>::infinity();
    for (int s = 0; s < distances.rows(); ++s) {
        std::vector<int> candidate = greedy_order(distances, s);
        const double length = path_length(distances, candidate);
        if (length < best_length) {
            best_length = length;
            best = std::move(candidate);
        }
    }
    return best;
}

} // namespace mvgeo
