// Copyright 2026 The mvgeo Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <vector>

#include "mvgeo/plane.hpp"

namespace mvgeo {

/// Adaptive binary frequency model. Counts start at 1/1 and are halved once
/// their sum exceeds kMaxTotal.
class BitModel {
public:
    static constexpr std::uint32_t kMaxTotal = 1u << 16;

    std::uint32_t zeros() const noexcept { return zeros_; }
    std::uint32_t ones() const noexcept { return ones_; }
    std::uint32_t total() const noexcept { return zeros_ + ones_; }
    void update(int bit) noexcept;

private:
    std::uint32_t zeros_ = 1;
    std::uint32_t ones_ = 1;
};

/// Byte-oriented range encoder with carry propagation (32-bit range, 64-bit
/// low). Every symbol is coded as a (start, size, total) slice.
class RangeEncoder {
public:
    void encode(std::uint32_t start, std::uint32_t size, std::uint32_t total);
    void encode_bit(BitModel& model, int bit);
    /// Equiprobable bit.
    void encode_bypass(int bit) { encode(static_cast<std::uint32_t>(bit), 1, 2); }
    /// Flushes the coder state; the encoder must not be reused afterwards.
    std::vector<std::uint8_t> finish();

private:
    void shift_low();

    std::uint64_t low_ = 0;
    std::uint32_t range_ = 0xFFFFFFFFu;
    std::uint8_t cache_ = 0;
    std::uint64_t cache_size_ = 1;
    std::vector<std::uint8_t> out_;
};

class RangeDecoder {
public:
    /// Throws DecodeError if fewer than 5 bytes are available.
    explicit RangeDecoder(std::span<const std::uint8_t> bytes);

    int decode_bit(BitModel& model);
    int decode_bypass();
    /// Bytes consumed so far; equals the encoded length after the last symbol.
    std::size_t consumed() const noexcept { return pos_; }
    /// Throws DecodeError unless every byte was consumed.
    void expect_end() const;

private:
    std::uint32_t frequency(std::uint32_t total);
    void consume(std::uint32_t start, std::uint32_t size);
    std::uint8_t next_byte();

    std::span<const std::uint8_t> bytes_;
    std::size_t pos_ = 0;
    std::uint32_t code_ = 0;
    std::uint32_t range_ = 0xFFFFFFFFu;
    std::uint32_t step_ = 0;
};

/// Binarized adaptive model for signed integers: a zero flag, a sign bit, the
/// bucket index of |s| (unary, one model per position) and the bits below the
/// bucket's leading one (adaptive for small buckets, bypass above).
class SignedSymbolModel {
public:
    static constexpr int kMaxBucket = 31;
    static constexpr int kAdaptiveSuffixBuckets = 12;

    void encode(RangeEncoder& enc, std::int32_t symbol);
    std::int32_t decode(RangeDecoder& dec);

private:
    BitModel zero_;
    BitModel sign_;
    std::array<BitModel, kMaxBucket + 1> bucket_{};
    std::array<std::array<BitModel, kAdaptiveSuffixBuckets>, kAdaptiveSuffixBuckets> suffix_{};
};

/// Number of context classes supported by range_encode (masked / unmasked).
inline constexpr int kContextClasses = 2;

/// Lossless adaptive coding of a symbol sequence. `contexts` is either empty
/// (one shared model) or holds one class in [0, kContextClasses) per symbol;
/// each class adapts its own model. Output: little-endian u32 symbol count
/// followed by the range-coded bytes. Symbols must lie in
/// [-(2^31 - 1), 2^31 - 1].
std::vector<std::uint8_t> range_encode(std::span<const std::int32_t> symbols,
                                       std::span<const std::uint8_t> contexts = {});

/// Inverse of range_encode. Throws DecodeError on a count mismatch, a
/// truncated payload or trailing bytes.
std::vector<std::int32_t> range_decode(std::span<const std::uint8_t> bytes, std::size_t count,
                                       std::span<const std::uint8_t> contexts = {});

/// Context classes from a mask plane for `count` planar symbols: symbol i uses
/// the mask value at pixel i mod (W * H). An empty mask yields no contexts.
std::vector<std::uint8_t> planar_contexts(const MaskMap* mask, std::size_t count);

/// Causal neighbour activity classes used by the plane coder.
inline constexpr int kActivityClasses = 8;

/// Layout of a planar symbol stream: `channels` planes of width x height in
/// raster order. Only pixels set in `present` carry a symbol (all when null).
/// `context` adds a masked / unmasked split (none when null).
struct PlaneLayout {
    int width = 0;
    int height = 0;
    int channels = 1;
    const MaskMap* present = nullptr;
    const MaskMap* context = nullptr;
};

/// Adaptive coding of planar symbols. Each symbol is coded with the model of
/// its mask class and of min(bit_width(|left| + |top|), 7), where left and
/// top are the causal neighbours in the same plane (0 when absent). Output
/// format matches range_encode.
std::vector<std::uint8_t> plane_encode(std::span<const std::int32_t> symbols, const PlaneLayout& layout);

/// Inverse of plane_encode. Throws DecodeError like range_decode.
std::vector<std::int32_t> plane_decode(std::span<const std::uint8_t> bytes, const PlaneLayout& layout);

} // namespace mvgeo
