// Copyright 2026 The mvgeo Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "mvgeo/errors.hpp"

namespace mvgeo {

/// Dense W x H x C raster, row-major with interleaved channels.
///
/// Pixel (x, y) covers the continuous square [x, x+1) x [y, y+1); its center
/// is (x + 0.5, y + 0.5).
template <typename T>
class Plane {
public:
    Plane() = default;
    Plane(int width, int height, int channels = 1, T fill = T{})
        : width_(width), height_(height), channels_(channels) {
        if (width < 0 || height < 0 || channels <= 0) {
            throw DimensionError("plane dimensions must be non-negative with at least one channel");
        }
        data_.assign(static_cast<std::size_t>(width) * height * channels, fill);
    }

    int width() const noexcept { return width_; }
    int height() const noexcept { return height_; }
    int channels() const noexcept { return channels_; }
    std::size_t pixel_count() const noexcept { return static_cast<std::size_t>(width_) * height_; }
    std::size_t size() const noexcept { return data_.size(); }
    bool empty() const noexcept { return data_.empty(); }

    std::size_t index(int x, int y, int c = 0) const noexcept {
        return (static_cast<std::size_t>(y) * width_ + x) * channels_ + c;
    }
    T& at(int x, int y, int c = 0) noexcept { return data_[index(x, y, c)]; }
    const T& at(int x, int y, int c = 0) const noexcept { return data_[index(x, y, c)]; }

    std::span<T> data() noexcept { return data_; }
    std::span<const T> data() const noexcept { return data_; }
    std::vector<T>& storage() noexcept { return data_; }
    const std::vector<T>& storage() const noexcept { return data_; }

    bool same_shape(int width, int height) const noexcept {
        return width_ == width && height_ == height;
    }
    template <typename U>
    bool same_shape(const Plane<U>& other) const noexcept {
        return width_ == other.width() && height_ == other.height();
    }

    friend bool operator==(const Plane&, const Plane&) = default;

private:
    int width_ = 0;
    int height_ = 0;
    int channels_ = 1;
    std::vector<T> data_;
};

/// Color image, three channels in [0, 1].
using Image = Plane<float>;

/// Binary plane with values in {0, 1}.
using MaskMap = Plane<std::uint8_t>;

/// Per-pixel depth in scene units with a validity plane; depth > 0 wherever valid.
struct DepthMap {
    Plane<float> depth;
    MaskMap valid;

    DepthMap() = default;
    DepthMap(int width, int height) : depth(width, height, 1, 0.0f), valid(width, height, 1, 0) {}

    int width() const noexcept { return depth.width(); }
    int height() const noexcept { return depth.height(); }
    bool is_valid(int x, int y) const noexcept { return valid.at(x, y) != 0; }

    friend bool operator==(const DepthMap&, const DepthMap&) = default;
};

/// Per-pixel 2D shift (dx, dy) in pixels toward the reference view.
/// Invalid entries hold (0, 0).
struct DisparityMap {
    Plane<float> shift;
    MaskMap valid;

    DisparityMap() = default;
    DisparityMap(int width, int height) : shift(width, height, 2, 0.0f), valid(width, height, 1, 0) {}

    int width() const noexcept { return shift.width(); }
    int height() const noexcept { return shift.height(); }

    friend bool operator==(const DisparityMap&, const DisparityMap&) = default;
};

inline void require_same_shape(int w0, int h0, int w1, int h1, const std::string& what) {
    if (w0 != w1 || h0 != h1) {
        throw DimensionError(what + ": expected " + std::to_string(w0) + "x" + std::to_string(h0) +
                             ", got " + std::to_string(w1) + "x" + std::to_string(h1));
    }
}

} // namespace mvgeo
