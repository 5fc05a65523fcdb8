// Copyright 2026 The mvgeo Authors
// SPDX-License-Identifier: Apache-2.0

#include "mvgeo/range_coder.hpp"

#include <algorithm>
#include <bit>
#include <cstdlib>
#include <limits>
#include <string>

namespace mvgeo {
namespace {

constexpr std::uint32_t kTop = 1u << 24;

void put_u32(std::vector<std::uint8_t>& out, std::uint32_t v) {
    for (int i = 0; i < 4; ++i) out.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
}

std::uint32_t get_u32(std::span<const std::uint8_t> in) {
    std::uint32_t v = 0;
    for (int i = 0; i < 4; ++i) v |= static_cast<std::uint32_t>(in[i]) << (8 * i);
    return v;
}

} // namespace

void BitModel::update(int bit) noexcept {
    if (bit) {
        ++ones_;
    } else {
        ++zeros_;
    }
    if (total() > kMaxTotal) {
        zeros_ = (zeros_ + 1) / 2;
        ones_ = (ones_ + 1) / 2;
    }
}

void RangeEncoder::encode(std::uint32_t start, std::uint32_t size, std::uint32_t total) {
    const std::uint32_t r = range_ / total;
    low_ += static_cast<std::uint64_t>(start) * r;
    range_ = size * r;
    while (range_ < kTop) {
        range_ <<= 8;
        shift_low();
    }
}

void RangeEncoder::encode_bit(BitModel& model, int bit) {
    if (bit) {
        encode(model.zeros(), model.ones(), model.total());
    } else {
        encode(0, model.zeros(), model.total());
    }
    model.update(bit);
}

void RangeEncoder::shift_low() {
    if (static_cast<std::uint32_t>(low_) < 0xFF000000u || (low_ >> 32) != 0) {
        const auto carry = static_cast<std::uint8_t>(low_ >> 32);
        std::uint8_t pending = cache_;
        do {
            out_.push_back(static_cast<std::uint8_t>(pending + carry));
            pending = 0xFF;
        } while (--cache_size_ != 0);
        cache_ = static_cast<std::uint8_t>(static_cast<std::uint32_t>(low_) >> 24);
    }
    ++cache_size_;
    low_ = (low_ & 0x00FFFFFFu) << 8;
}

std::vector<std::uint8_t> RangeEncoder::finish() {
    for (int i = 0; i < 5; ++i) shift_low();
    return std::move(out_);
}

RangeDecoder::RangeDecoder(std::span<const std::uint8_t> bytes) : bytes_(bytes) {
    if (bytes.size() < 5) throw DecodeError("range decoder: payload shorter than the 5-byte preamble");
    for (int i = 0; i < 5; ++i) code_ = (code_ << 8) | next_byte();
}

std::uint8_t RangeDecoder::next_byte() {
    if (pos_ >= bytes_.size()) {
        throw DecodeError("range decoder: payload truncated at byte " + std::to_string(pos_));
    }
    return bytes_[pos_++];
}

std::uint32_t RangeDecoder::frequency(std::uint32_t total) {
    step_ = range_ / total;
    const std::uint32_t v = code_ / step_;
    if (v >= total) throw DecodeError("range decoder: corrupt payload near byte " + std::to_string(pos_));
    return v;
}

void RangeDecoder::consume(std::uint32_t start, std::uint32_t size) {
    code_ -= start * step_;
    range_ = size * step_;
    while (range_ < kTop) {
        code_ = (code_ << 8) | next_byte();
        range_ <<= 8;
    }
}

int RangeDecoder::decode_bit(BitModel& model) {
    const std::uint32_t v = frequency(model.total());
    const int bit = v >= model.zeros() ? 1 : 0;
    if (bit) {
        consume(model.zeros(), model.ones());
    } else {
        consume(0, model.zeros());
    }
    model.update(bit);
    return bit;
}

int RangeDecoder::decode_bypass() {
    const int bit = static_cast<int>(frequency(2));
    consume(static_cast<std::uint32_t>(bit), 1);
    return bit;
}

void RangeDecoder::expect_end() const {
    if (pos_ != bytes_.size()) {
        throw DecodeError("range decoder: " + std::to_string(bytes_.size() - pos_) + " trailing bytes after " +
                          std::to_string(pos_));
    }
}

void SignedSymbolModel::encode(RangeEncoder& enc, std::int32_t symbol) {
    enc.encode_bit(zero_, symbol == 0 ? 0 : 1);
    if (symbol == 0) return;
    enc.encode_bit(sign_, symbol < 0 ? 1 : 0);
    const auto magnitude = static_cast<std::uint32_t>(std::abs(symbol));  // >= 1
    const int bucket = std::bit_width(magnitude) - 1;                    // leading-one position
    for (int i = 0; i < bucket; ++i) enc.encode_bit(bucket_[i], 1);
    if (bucket < kMaxBucket) enc.encode_bit(bucket_[bucket], 0);
    for (int i = bucket - 1; i >= 0; --i) {
        const int bit = static_cast<int>((magnitude >> i) & 1u);
        if (bucket < kAdaptiveSuffixBuckets) {
            enc.encode_bit(suffix_[bucket][i], bit);
        } else {
            enc.encode_bypass(bit);
        }
    }
}

std::int32_t SignedSymbolModel::decode(RangeDecoder& dec) {
    if (!dec.decode_bit(zero_)) return 0;
    const bool negative = dec.decode_bit(sign_) != 0;
    int bucket = 0;
    while (bucket < kMaxBucket && dec.decode_bit(bucket_[bucket])) ++bucket;
    if (bucket == kMaxBucket) throw DecodeError("range decoder: symbol magnitude exceeds 31 bits");
    std::uint32_t magnitude = 1;
    for (int i = bucket - 1; i >= 0; --i) {
        const int bit = bucket < kAdaptiveSuffixBuckets ? dec.decode_bit(suffix_[bucket][i]) : dec.decode_bypass();
        magnitude = (magnitude << 1) | static_cast<std::uint32_t>(bit);
    }
    const auto value = static_cast<std::int32_t>(magnitude);
    return negative ? -value : value;
}

std::vector<std::uint8_t> range_encode(std::span<const std::int32_t> symbols, std::span<const std::uint8_t> contexts) {
    if (!contexts.empty() && contexts.size() != symbols.size()) {
        throw DimensionError("range_encode: " + std::to_string(contexts.size()) + " contexts for " +
                             std::to_string(symbols.size()) + " symbols");
    }
    if (symbols.size() > std::numeric_limits<std::uint32_t>::max()) {
        throw std::length_error("range_encode: too many symbols");
    }
    std::array<SignedSymbolModel, kContextClasses> models{};
    RangeEncoder enc;
    for (std::size_t i = 0; i < symbols.size(); ++i) {
        if (symbols[i] == std::numeric_limits<std::int32_t>::min()) {
            throw std::range_error("range_encode: symbol magnitude exceeds 2^31 - 1");
        }
        const int ctx = contexts.empty() ? 0 : contexts[i];
        if (ctx < 0 || ctx >= kContextClasses) throw std::out_of_range("range_encode: context class out of range");
        models[ctx].encode(enc, symbols[i]);
    }
    std::vector<std::uint8_t> out;
    put_u32(out, static_cast<std::uint32_t>(symbols.size()));
    const std::vector<std::uint8_t> body = enc.finish();
    out.insert(out.end(), body.begin(), body.end());
    return out;
}

std::vector<std::int32_t> range_decode(std::span<const std::uint8_t> bytes, std::size_t count,
                                       std::span<const std::uint8_t> contexts) {
    if (bytes.size() < 4) throw DecodeError("range_decode: payload truncated before the symbol count");
    const std::uint32_t stored = get_u32(bytes);
    if (stored != count) {
        throw DecodeError("range_decode: payload holds " + std::to_string(stored) + " symbols, expected " +
                          std::to_string(count));
    }
    if (!contexts.empty() && contexts.size() != count) {
        throw DimensionError("range_decode: context count does not match symbol count");
    }
    std::array<SignedSymbolModel, kContextClasses> models{};
    RangeDecoder dec(bytes.subspan(4));
    std::vector<std::int32_t> symbols(count);
    for (std::size_t i = 0; i < count; ++i) {
        const int ctx = contexts.empty() ? 0 : contexts[i];
        if (ctx < 0 || ctx >= kContextClasses) throw std::out_of_range("range_decode: context class out of range");
        symbols[i] = models[ctx].decode(dec);
    }
    dec.expect_end();
    return symbols;
}

namespace {

std::size_t plane_symbol_count(const PlaneLayout& layout, const char* who) {
    if (layout.width < 0 || layout.height < 0 || layout.channels < 1) {
        throw DimensionError(std::string(who) + ": invalid plane layout");
    }
    for (const MaskMap* m : {layout.present, layout.context}) {
        if (m != nullptr && (m->width() != layout.width || m->height() != layout.height)) {
            throw DimensionError(std::string(who) + ": mask plane does not match the layout");
        }
    }
    std::size_t per_plane = static_cast<std::size_t>(layout.width) * layout.height;
    if (layout.present != nullptr) {
        per_plane = 0;
        for (auto v : layout.present->storage()) per_plane += v ? 1 : 0;
    }
    return per_plane * layout.channels;
}

// Visits present pixels in coding order. `code(model)` returns the symbol
// coded at the current pixel.
template <typename Code>
void walk_planes(const PlaneLayout& layout, Code&& code) {
    const int w = layout.width;
    const int h = layout.height;
    std::array<SignedSymbolModel, kContextClasses * kActivityClasses> models{};
    std::vector<std::uint32_t> magnitude(static_cast<std::size_t>(w) * h);
    for (int c = 0; c < layout.channels; ++c) {
        std::fill(magnitude.begin(), magnitude.end(), 0u);
        for (int y = 0; y < h; ++y) {
            for (int x = 0; x < w; ++x) {
                if (layout.present != nullptr && !layout.present->at(x, y)) continue;
                const std::size_t i = static_cast<std::size_t>(y) * w + x;
                const std::uint64_t left = x > 0 ? magnitude[i - 1] : 0;
                const std::uint64_t top = y > 0 ? magnitude[i - w] : 0;
                const int activity = std::min(static_cast<int>(std::bit_width(left + top)), kActivityClasses - 1);
                const int mask_class = layout.context != nullptr && layout.context->at(x, y) ? 1 : 0;
                const std::int32_t s = code(models[mask_class * kActivityClasses + activity]);
                magnitude[i] = static_cast<std::uint32_t>(std::abs(s));
            }
        }
    }
}

} // namespace

std::vector<std::uint8_t> plane_encode(std::span<const std::int32_t> symbols, const PlaneLayout& layout) {
    const std::size_t count = plane_symbol_count(layout, "plane_encode");
    if (symbols.size() != count) {
        throw DimensionError("plane_encode: " + std::to_string(symbols.size()) + " symbols for a layout of " +
                             std::to_string(count));
    }
    if (count > std::numeric_limits<std::uint32_t>::max()) throw std::length_error("plane_encode: too many symbols");
    RangeEncoder enc;
    std::size_t k = 0;
    walk_planes(layout, [&](SignedSymbolModel& model) {
        const std::int32_t s = symbols[k++];
        if (s == std::numeric_limits<std::int32_t>::min()) {
            throw std::range_error("plane_encode: symbol magnitude exceeds 2^31 - 1");
        }
        model.encode(enc, s);
        return s;
    });
    std::vector<std::uint8_t> out;
    put_u32(out, static_cast<std::uint32_t>(count));
    const std::vector<std::uint8_t> body = enc.finish();
    out.insert(out.end(), body.begin(), body.end());
    return out;
}

std::vector<std::int32_t> plane_decode(std::span<const std::uint8_t> bytes, const PlaneLayout& layout) {
    const std::size_t count = plane_symbol_count(layout, "plane_decode");
    if (bytes.size() < 4) throw DecodeError("plane_decode: payload truncated before the symbol count");
    const std::uint32_t stored = get_u32(bytes);
    if (stored != count) {
        throw DecodeError("plane_decode: payload holds " + std::to_string(stored) + " symbols, expected " +
                          std::to_string(count));
    }
    RangeDecoder dec(bytes.subspan(4));
    std::vector<std::int32_t> symbols;
    symbols.reserve(count);
    walk_planes(layout, [&](SignedSymbolModel& model) {
        symbols.push_back(model.decode(dec));
        return symbols.back();
    });
    dec.expect_end();
    return symbols;
}

std::vector<std::uint8_t> planar_contexts(const MaskMap* mask, std::size_t count) {
    if (mask == nullptr) return {};
    const std::size_t pixels = mask->pixel_count();
    if (pixels == 0 || count % pixels != 0) {
        throw DimensionError("planar_contexts: symbol count is not a multiple of the mask size");
    }
    std::vector<std::uint8_t> out(count);
    for (std::size_t i = 0; i < count; ++i) out[i] = mask->data()[i % pixels] ? 1 : 0;
    return out;
}

} // namespace mvgeo
