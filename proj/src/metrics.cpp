// Copyright 2026 The mvgeo Authors
// SPDX-License-Identifier: Apache-2.0

#include "mvgeo/metrics.hpp"

#include <algorithm>
#include <cmath>

namespace mvgeo {
namespace {

void check_shapes(const Plane<float>& a, const Plane<float>& b, const MaskMap* mask, const char* what) {
    require_same_shape(a.width(), a.height(), b.width(), b.height(), what);
    if (a.channels() != b.channels()) throw DimensionError(std::string(what) + ": channel counts differ");
    if (mask) require_same_shape(a.width(), a.height(), mask->width(), mask->height(), std::string(what) + " mask");
}

template <typename F>
void for_selected(const Plane<float>& a, const MaskMap* mask, F&& f) {
    const int c = a.channels();
    for (std::size_t p = 0; p < a.pixel_count(); ++p) {
        if (mask && !mask->data()[p]) continue;
        for (int ch = 0; ch < c; ++ch) f(p * c + ch);
    }
}

} // namespace

double mse(const Plane<float>& a, const Plane<float>& b, const MaskMap* mask) {
    check_shapes(a, b, mask, "mse");
    double sum = 0.0;
    std::size_t n = 0;
    for_selected(a, mask, [&](std::size_t i) {
        const double d = static_cast<double>(a.data()[i]) - b.data()[i];
        sum += d * d;
        ++n;
    });
    return n == 0 ? 0.0 : sum / static_cast<double>(n);
}

double psnr_from_mse(double mse_value, double peak) {
    if (mse_value <= 0.0) return kPsnrCap;
    return std::min(kPsnrCap, 10.0 * std::log10(peak * peak / mse_value));
}

double psnr(const Plane<float>& a, const Plane<float>& b, double peak, const MaskMap* mask) {
    return psnr_from_mse(mse(a, b, mask), peak);
}

double max_abs_error(const Plane<float>& a, const Plane<float>& b, const MaskMap* mask) {
    check_shapes(a, b, mask, "max_abs_error");
    double worst = 0.0;
    for_selected(a, mask, [&](std::size_t i) {
        worst = std::max(worst, std::abs(static_cast<double>(a.data()[i]) - b.data()[i]));
    });
    return worst;
}

RatePoint make_rate_point(std::uint64_t total_bits, int width, int height, double mse_value, double peak) {
    RatePoint r;
    r.bpp = static_cast<double>(total_bits) / (static_cast<double>(width) * height);
    r.mse = mse_value;
    r.psnr = psnr_from_mse(mse_value, peak);
    return r;
}

} // namespace mvgeo
