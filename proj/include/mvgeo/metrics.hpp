// Copyright 2026 The mvgeo Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>

#include "mvgeo/plane.hpp"

namespace mvgeo {

/// PSNR reported for identical inputs.
inline constexpr double kPsnrCap = 99.0;

/// Mean squared difference over all channels of the pixels selected by
/// `mask` (all pixels when null). Returns 0 for an empty selection. Throws
/// DimensionError on shape mismatch.
double mse(const Plane<float>& a, const Plane<float>& b, const MaskMap* mask = nullptr);

/// 10 log10(peak^2 / mse), kPsnrCap when mse = 0.
double psnr_from_mse(double mse_value, double peak);
double psnr(const Plane<float>& a, const Plane<float>& b, double peak = 1.0, const MaskMap* mask = nullptr);

/// Largest absolute sample difference over the selected pixels.
double max_abs_error(const Plane<float>& a, const Plane<float>& b, const MaskMap* mask = nullptr);

struct RatePoint {
    double bpp = 0.0;
    double psnr = kPsnrCap;
    double mse = 0.0;
};

RatePoint make_rate_point(std::uint64_t total_bits, int width, int height, double mse_value, double peak);

} // namespace mvgeo
