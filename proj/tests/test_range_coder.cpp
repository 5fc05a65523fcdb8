// Copyright 2026 The mvgeo Authors
// SPDX-License-Identifier: Apache-2.0

#include <gtest/gtest.h>

#include <cstdint>
#include <cstdlib>
#include <limits>
#include <vector>

#include "mvgeo/range_coder.hpp"
#include "mvgeo/rng.hpp"

namespace mvgeo {
namespace {

std::vector<std::int32_t> random_symbols(Rng& rng, std::size_t n, int spread) {
    std::vector<std::int32_t> s(n);
    for (auto& v : s) v = static_cast<std::int32_t>(rng.integer(-spread, spread));
    return s;
}

TEST(RangeCoder, EmptyRoundTrip) {
    const auto bytes = range_encode({});
    EXPECT_TRUE(range_decode(bytes, 0).empty());
}

TEST(RangeCoder, RandomRoundTrips) {
    Rng rng(1);
    for (int trial = 0; trial < 500; ++trial) {
        const std::size_t n = rng.below(300);
        const int spread = 1 << rng.integer(0, 20);
        const auto s = random_symbols(rng, n, spread);
        std::vector<std::uint8_t> ctx;
        if (trial % 2) {
            ctx.resize(n);
            for (auto& c : ctx) c = static_cast<std::uint8_t>(rng.below(2));
        }
        const auto bytes = range_encode(s, ctx);
        ASSERT_EQ(range_decode(bytes, n, ctx), s) << "trial " << trial;
    }
}

TEST(RangeCoder, ExtremeSymbols) {
    const std::int32_t m = std::numeric_limits<std::int32_t>::max();
    const std::vector<std::int32_t> s{0, m, -m, 1, -1, m - 1, -(m - 1), 1 << 20, -(1 << 13)};
    EXPECT_EQ(range_decode(range_encode(s), s.size()), s);
}

TEST(RangeCoder, ZerosCompressWell) {
    const std::vector<std::int32_t> zeros(10000, 0);
    const auto bytes = range_encode(zeros);
    EXPECT_LE(bytes.size(), 64u);
    EXPECT_EQ(range_decode(bytes, zeros.size()), zeros);
}

TEST(RangeCoder, UniformBytesDoNotCompress) {
    Rng rng(2);
    std::vector<std::int32_t> s(20000);
    for (auto& v : s) v = rng.integer(-128, 127);
    const auto bytes = range_encode(s);
    EXPECT_GE(static_cast<double>(bytes.size()), 0.95 * s.size());
    EXPECT_EQ(range_decode(bytes, s.size()), s);
}

TEST(RangeCoder, ContextsSeparateStatistics) {
    // Masked symbols are zero, unmasked ones are noisy; with contexts the zeros
    // cost almost nothing.
    Rng rng(3);
    std::vector<std::int32_t> s(4000);
    std::vector<std::uint8_t> ctx(4000);
    for (std::size_t i = 0; i < s.size(); ++i) {
        ctx[i] = static_cast<std::uint8_t>(rng.below(2));
        s[i] = ctx[i] ? 0 : rng.integer(-30, 30);
    }
    EXPECT_LT(range_encode(s, ctx).size(), range_encode(s).size());
    EXPECT_EQ(range_decode(range_encode(s, ctx), s.size(), ctx), s);
}

TEST(RangeCoder, DecodeErrors) {
    Rng rng(4);
    const auto s = random_symbols(rng, 500, 100);
    auto bytes = range_encode(s);
    EXPECT_THROW(range_decode(bytes, 499), DecodeError);
    EXPECT_THROW(range_decode(bytes, 501), DecodeError);
    auto truncated = bytes;
    truncated.resize(bytes.size() / 2);
    EXPECT_THROW(range_decode(truncated, 500), DecodeError);
    auto trailing = bytes;
    trailing.push_back(0);
    EXPECT_THROW(range_decode(trailing, 500), DecodeError);
    EXPECT_THROW(range_decode(std::vector<std::uint8_t>{1, 0}, 1), DecodeError);
    const std::vector<std::uint8_t> wrong_ctx(10, 0);
    EXPECT_THROW(range_decode(bytes, 500, wrong_ctx), std::invalid_argument);
}

TEST(RangeCoder, OutOfRangeSymbolRejected) {
    const std::vector<std::int32_t> s{std::numeric_limits<std::int32_t>::min()};
    EXPECT_THROW(range_encode(s), std::range_error);
}

TEST(BitModel, HalvesCounts) {
    BitModel m;
    for (int i = 0; i < 200000; ++i) m.update(i % 3 == 0);
    EXPECT_LE(m.total(), BitModel::kMaxTotal);
    EXPECT_GT(m.zeros(), m.ones());
}

TEST(BinaryCoder, BitsAndBypassRoundTrip) {
    Rng rng(5);
    std::vector<int> bits(5000), bypass(5000);
    RangeEncoder enc;
    BitModel model;
    for (int i = 0; i < 5000; ++i) {
        bits[i] = rng.uniform() < 0.1;
        bypass[i] = static_cast<int>(rng.below(2));
        enc.encode_bit(model, bits[i]);
        enc.encode_bypass(bypass[i]);
    }
    const auto bytes = enc.finish();
    RangeDecoder dec(bytes);
    BitModel dmodel;
    for (int i = 0; i < 5000; ++i) {
        ASSERT_EQ(dec.decode_bit(dmodel), bits[i]);
        ASSERT_EQ(dec.decode_bypass(), bypass[i]);
    }
    EXPECT_NO_THROW(dec.expect_end());
}

TEST(PlanarContexts, RepeatPerChannel) {
    MaskMap m(2, 1);
    m.at(1, 0) = 1;
    EXPECT_EQ(planar_contexts(&m, 6), (std::vector<std::uint8_t>{0, 1, 0, 1, 0, 1}));
    EXPECT_TRUE(planar_contexts(nullptr, 6).empty());
}

MaskMap random_mask(Rng& rng, int w, int h, double p_one) {
    MaskMap m(w, h, 1, 0);
    for (auto& v : m.storage()) v = rng.uniform(0, 1) < p_one ? 1 : 0;
    return m;
}

// Scalar reference: rebuilds a dense symbol grid and codes each present pixel
// with the model picked from its left and top grid entries.
std::vector<std::uint8_t> plane_oracle(const std::vector<std::int32_t>& symbols, const PlaneLayout& layout) {
    const int w = layout.width;
    const int h = layout.height;
    std::vector<SignedSymbolModel> models(2 * 8);
    RangeEncoder enc;
    std::size_t k = 0;
    for (int c = 0; c < layout.channels; ++c) {
        std::vector<std::int64_t> grid(static_cast<std::size_t>(w) * h, 0);
        for (int y = 0; y < h; ++y) {
            for (int x = 0; x < w; ++x) {
                if (layout.present && !layout.present->at(x, y)) continue;
                const std::int64_t left = x > 0 ? std::abs(grid[y * w + x - 1]) : 0;
                const std::int64_t top = y > 0 ? std::abs(grid[(y - 1) * w + x]) : 0;
                int activity = 0;
                while (activity < 7 && (left + top) >> activity) ++activity;
                const int cls = layout.context && layout.context->at(x, y) ? 1 : 0;
                models[cls * 8 + activity].encode(enc, symbols[k]);
                grid[y * w + x] = symbols[k++];
            }
        }
    }
    std::vector<std::uint8_t> out;
    for (int i = 0; i < 4; ++i) out.push_back(static_cast<std::uint8_t>(k >> (8 * i)));
    const auto body = enc.finish();
    out.insert(out.end(), body.begin(), body.end());
    return out;
}

TEST(PlaneCoder, MatchesScalarReferenceAndRoundTrips) {
    Rng rng(11);
    for (int trial = 0; trial < 300; ++trial) {
        const int w = static_cast<int>(rng.integer(1, 12));
        const int h = static_cast<int>(rng.integer(1, 12));
        const int nc = static_cast<int>(rng.integer(1, 3));
        const MaskMap present = random_mask(rng, w, h, 0.7);
        const MaskMap context = random_mask(rng, w, h, 0.5);
        PlaneLayout layout{w, h, nc, trial % 2 ? &present : nullptr, trial % 3 ? &context : nullptr};
        std::size_t per_plane = static_cast<std::size_t>(w) * h;
        if (layout.present) {
            per_plane = 0;
            for (auto v : present.storage()) per_plane += v;
        }
        const auto s = random_symbols(rng, per_plane * nc, 1 << rng.integer(0, 16));
        const auto bytes = plane_encode(s, layout);
        ASSERT_EQ(bytes, plane_oracle(s, layout)) << "trial " << trial;
        ASSERT_EQ(plane_decode(bytes, layout), s) << "trial " << trial;
    }
}

TEST(PlaneCoder, ActivityContextsHelpOnMixedPlanes) {
    // Flat constant background with a noisy block.
    const int w = 64;
    const int h = 64;
    Rng rng(12);
    std::vector<std::int32_t> s(static_cast<std::size_t>(w) * h, 2);
    for (int y = 20; y < 44; ++y) {
        for (int x = 20; x < 44; ++x) s[y * w + x] = static_cast<std::int32_t>(rng.integer(-200, 200));
    }
    EXPECT_LT(plane_encode(s, {w, h, 1, nullptr, nullptr}).size(), range_encode(s).size());
}

TEST(PlaneCoder, Errors) {
    const MaskMap small(2, 2, 1, 1);
    const std::vector<std::int32_t> s(9, 0);
    EXPECT_THROW(plane_encode(s, {3, 3, 1, &small, nullptr}), DimensionError);
    EXPECT_THROW(plane_encode(s, {3, 2, 1, nullptr, nullptr}), DimensionError);
    EXPECT_THROW(plane_encode(s, {3, 3, 0, nullptr, nullptr}), DimensionError);
    const std::vector<std::int32_t> bad{std::numeric_limits<std::int32_t>::min()};
    EXPECT_THROW(plane_encode(bad, {1, 1, 1, nullptr, nullptr}), std::range_error);
    const auto bytes = plane_encode(s, {3, 3, 1, nullptr, nullptr});
    EXPECT_THROW(plane_decode(bytes, {3, 2, 1, nullptr, nullptr}), DecodeError);
    EXPECT_THROW(plane_decode(std::span(bytes).first(3), {3, 3, 1, nullptr, nullptr}), DecodeError);
    std::vector<std::uint8_t> trailing = bytes;
    trailing.push_back(0);
    EXPECT_THROW(plane_decode(trailing, {3, 3, 1, nullptr, nullptr}), DecodeError);
}

} // namespace
} // namespace mvgeo
