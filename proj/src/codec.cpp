// Copyright 2026 The mvgeo Authors
// SPDX-License-Identifier: Apache-2.0

#include "mvgeo/codec.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstring>
#include <limits>
#include <string>

#include "mvgeo/depth_prediction.hpp"
#include "mvgeo/range_coder.hpp"

namespace mvgeo {
namespace {

constexpr std::array<std::uint8_t, 4> kMagic{'M', 'V', 'G', 'C'};

double effective_step(double q) {
    if (!(q > 0.0) || !std::isfinite(q)) throw DomainError("quantizer step must be positive and finite");
    const float stored = static_cast<float>(q);
    if (!(stored > 0.0f) || !std::isfinite(stored)) throw DomainError("quantizer step not representable as f32");
    return stored;
}

void put_u16(std::vector<std::uint8_t>& out, std::uint16_t v) {
    out.push_back(static_cast<std::uint8_t>(v));
    out.push_back(static_cast<std::uint8_t>(v >> 8));
}

void put_u32(std::vector<std::uint8_t>& out, std::uint32_t v) {
    for (int i = 0; i < 4; ++i) out.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
}

std::uint32_t get_u32(std::span<const std::uint8_t> in, std::size_t at) {
    std::uint32_t v = 0;
    for (int i = 0; i < 4; ++i) v |= static_cast<std::uint32_t>(in[at + i]) << (8 * i);
    return v;
}

// Median edge detector over the causal neighbourhood. `available` (optional)
// excludes neighbours, e.g. invalid depth samples.
double spatial_prediction(const Plane<float>& recon, int c, int x, int y, const MaskMap* available) {
    auto usable = [&](int px, int py) {
        return px >= 0 && py >= 0 && (available == nullptr || available->at(px, py) != 0);
    };
    const bool has_a = usable(x - 1, y);
    const bool has_b = usable(x, y - 1);
    const bool has_c = usable(x - 1, y - 1);
    if (!has_a && !has_b) return 0.0;
    const double a = has_a ? recon.at(x - 1, y, c) : 0.0;
    const double b = has_b ? recon.at(x, y - 1, c) : 0.0;
    if (!has_b) return a;
    if (!has_a) return b;
    if (!has_c) return 0.5 * (a + b);
    const double n = recon.at(x - 1, y - 1, c);
    if (n >= std::max(a, b)) return std::min(a, b);
    if (n <= std::min(a, b)) return std::max(a, b);
    return a + b - n;
}

double intra_prediction(IntraPredictor intra, const Plane<float>& recon, int c, int x, int y,
                        const MaskMap* available) {
    return intra == IntraPredictor::kSpatial ? spatial_prediction(recon, c, x, y, available) : 0.0;
}

std::uint8_t tool_flags(const CodingTools& tools, bool inter, bool image) {
    std::uint8_t flags = 0;
    if (inter && tools.use_mask) flags |= stream_flags::kMaskGating;
    if (inter && image && !tools.align) flags |= stream_flags::kZeroDisparity;
    if (tools.intra == IntraPredictor::kSpatial) flags |= stream_flags::kSpatialIntra;
    return flags;
}

CodingTools tools_from_flags(std::uint8_t flags) {
    CodingTools tools;
    tools.use_mask = (flags & stream_flags::kMaskGating) != 0;
    tools.align = (flags & stream_flags::kZeroDisparity) == 0;
    tools.intra = (flags & stream_flags::kSpatialIntra) ? IntraPredictor::kSpatial : IntraPredictor::kZero;
    return tools;
}

void check_frame_size(int width, int height) {
    if (width <= 0 || height <= 0 || width > 0xFFFF || height > 0xFFFF) {
        throw DimensionError("bitstream: frame size must be within 1..65535, got " + std::to_string(width) + "x" +
                             std::to_string(height));
    }
}

// Inter prediction source for images: the warped reference and the gate.
struct ImagePredictionSource {
    Plane<float> warped;
    const MaskMap* gate = nullptr;  // null: every pixel is inter predicted
};

ImagePredictionSource image_prediction_source(const ImageReference& ref, int width, int height, int channels,
                                              const CodingTools& tools) {
    if (!ref.image || !ref.disparity || !ref.mask) throw DimensionError("image reference is incomplete");
    require_same_shape(width, height, ref.image->width(), ref.image->height(), "image reference");
    require_same_shape(width, height, ref.disparity->width(), ref.disparity->height(), "image reference disparity");
    require_same_shape(width, height, ref.mask->width(), ref.mask->height(), "image reference mask");
    if (ref.image->channels() != channels) throw DimensionError("image reference: channel count differs");
    ImagePredictionSource src;
    src.warped = tools.align ? warp(*ref.image, *ref.disparity) : warp(*ref.image, DisparityMap(width, height));
    src.gate = tools.use_mask ? ref.mask : nullptr;
    return src;
}

struct DepthPredictionSource {
    DepthPrediction prediction;
    bool gated = true;
};

DepthPredictionSource depth_prediction_source(const DepthReference& ref, int width, int height,
                                              const CodingTools& tools) {
    if (!ref.depth || !ref.reference_camera || !ref.target_camera) throw DimensionError("depth reference is incomplete");
    require_same_shape(width, height, ref.target_camera->width(), ref.target_camera->height(),
                       "depth reference target camera");
    return {cvdp(*ref.depth, *ref.reference_camera, *ref.target_camera), tools.use_mask};
}

std::vector<std::uint8_t> encode_validity(const MaskMap& valid) {
    std::array<BitModel, 4> models{};
    RangeEncoder enc;
    for (int y = 0; y < valid.height(); ++y) {
        for (int x = 0; x < valid.width(); ++x) {
            const int ctx = (x > 0 && valid.at(x - 1, y) ? 1 : 0) + (y > 0 && valid.at(x, y - 1) ? 2 : 0);
            enc.encode_bit(models[ctx], valid.at(x, y) ? 1 : 0);
        }
    }
    return enc.finish();
}

MaskMap decode_validity(std::span<const std::uint8_t> bytes, int width, int height) {
    std::array<BitModel, 4> models{};
    RangeDecoder dec(bytes);
    MaskMap valid(width, height, 1, 0);
    for (int y = 0; y < height; ++y) {
        for (int x = 0; x < width; ++x) {
            const int ctx = (x > 0 && valid.at(x - 1, y) ? 1 : 0) + (y > 0 && valid.at(x, y - 1) ? 2 : 0);
            valid.at(x, y) = static_cast<std::uint8_t>(dec.decode_bit(models[ctx]));
        }
    }
    dec.expect_end();
    return valid;
}

} // namespace

std::int32_t quantize(double residual, double q) {
    if (!(q > 0.0)) throw DomainError("quantize: step must be positive");
    const double s = round_half_away(residual / q);
    if (!(std::abs(s) <= static_cast<double>(std::numeric_limits<std::int32_t>::max()))) {
        throw std::range_error("quantize: symbol magnitude exceeds 2^31 - 1");
    }
    return static_cast<std::int32_t>(s);
}

double dequantize(std::int32_t symbol, double q) { return static_cast<double>(symbol) * q; }

std::vector<std::int32_t> quantize(std::span<const float> residuals, double q) {
    std::vector<std::int32_t> out(residuals.size());
    for (std::size_t i = 0; i < residuals.size(); ++i) out[i] = quantize(residuals[i], q);
    return out;
}

std::vector<float> dequantize(std::span<const std::int32_t> symbols, double q) {
    std::vector<float> out(symbols.size());
    for (std::size_t i = 0; i < symbols.size(); ++i) out[i] = static_cast<float>(dequantize(symbols[i], q));
    return out;
}

std::vector<std::uint8_t> Bitstream::serialize() const {
    check_frame_size(width, height);
    if (channels <= 0 || channels > 0xFF) throw DimensionError("bitstream: channel count out of range");
    if (payload.size() > std::numeric_limits<std::uint32_t>::max()) throw std::length_error("bitstream: payload too large");
    std::vector<std::uint8_t> out(kMagic.begin(), kMagic.end());
    out.reserve(kHeaderSize + payload.size());
    out.push_back(kVersion);
    out.push_back(static_cast<std::uint8_t>(mode));
    put_u16(out, static_cast<std::uint16_t>(width));
    put_u16(out, static_cast<std::uint16_t>(height));
    out.push_back(static_cast<std::uint8_t>(channels));
    std::uint32_t qbits = 0;
    std::memcpy(&qbits, &q, sizeof(qbits));
    put_u32(out, qbits);
    out.push_back(flags);
    put_u32(out, static_cast<std::uint32_t>(payload.size()));
    out.insert(out.end(), payload.begin(), payload.end());
    return out;
}

Bitstream Bitstream::parse(std::span<const std::uint8_t> bytes) {
    if (bytes.size() < kHeaderSize) {
        throw DecodeError("bitstream: truncated header (" + std::to_string(bytes.size()) + " of " +
                          std::to_string(kHeaderSize) + " bytes)");
    }
    if (!std::equal(kMagic.begin(), kMagic.end(), bytes.begin())) throw DecodeError("bitstream: bad magic at offset 0");
    if (bytes[4] != kVersion) throw DecodeError("bitstream: unsupported version " + std::to_string(bytes[4]));
    Bitstream bs;
    if (bytes[5] > static_cast<std::uint8_t>(StreamMode::kDepthInter)) {
        throw DecodeError("bitstream: unknown mode " + std::to_string(bytes[5]) + " at offset 5");
    }
    bs.mode = static_cast<StreamMode>(bytes[5]);
    bs.width = bytes[6] | (bytes[7] << 8);
    bs.height = bytes[8] | (bytes[9] << 8);
    bs.channels = bytes[10];
    const std::uint32_t qbits = get_u32(bytes, 11);
    std::memcpy(&bs.q, &qbits, sizeof(qbits));
    bs.flags = bytes[15];
    const std::uint32_t len = get_u32(bytes, 16);
    if (bs.width == 0 || bs.height == 0 || bs.channels == 0) throw DecodeError("bitstream: zero frame dimension");
    if (!(bs.q > 0.0f) || !std::isfinite(bs.q)) throw DecodeError("bitstream: invalid quantizer step at offset 11");
    if (bs.flags & ~stream_flags::kKnownBits) throw DecodeError("bitstream: unknown flag bits at offset 15");
    if (bytes.size() != kHeaderSize + len) {
        throw DecodeError("bitstream: payload length " + std::to_string(len) + " does not match the " +
                          std::to_string(bytes.size() - kHeaderSize) + " bytes present");
    }
    bs.payload.assign(bytes.begin() + kHeaderSize, bytes.end());
    return bs;
}

EncodedImage encode_image(const Image& image, const ImageReference* reference, double q, const CodingTools& tools) {
    const double step = effective_step(q);
    const int w = image.width();
    const int h = image.height();
    const int nc = image.channels();
    check_frame_size(w, h);
    const bool inter = reference != nullptr;
    std::optional<ImagePredictionSource> src;
    if (inter) src = image_prediction_source(*reference, w, h, nc, tools);

    EncodedImage out;
    out.reconstruction = Image(w, h, nc, 0.0f);
    std::vector<std::int32_t> symbols(image.size());
    const std::size_t plane_size = image.pixel_count();
    for (int c = 0; c < nc; ++c) {
        for (int y = 0; y < h; ++y) {
            for (int x = 0; x < w; ++x) {
                const bool predicted = inter && (src->gate == nullptr || src->gate->at(x, y));
                const double p = predicted ? static_cast<double>(src->warped.at(x, y, c))
                                           : intra_prediction(tools.intra, out.reconstruction, c, x, y, nullptr);
                const std::int32_t s = quantize(static_cast<double>(image.at(x, y, c)) - p, step);
                symbols[c * plane_size + static_cast<std::size_t>(y) * w + x] = s;
                out.reconstruction.at(x, y, c) = static_cast<float>(p + dequantize(s, step));
            }
        }
    }
    const PlaneLayout layout{w, h, nc, nullptr, inter && tools.use_mask ? reference->mask : nullptr};
    out.stream.mode = inter ? StreamMode::kImageInter : StreamMode::kImageIntra;
    out.stream.width = w;
    out.stream.height = h;
    out.stream.channels = nc;
    out.stream.q = static_cast<float>(step);
    out.stream.flags = tool_flags(tools, inter, true);
    out.stream.payload = plane_encode(symbols, layout);
    return out;
}

Image decode_image(const Bitstream& stream, const ImageReference* reference) {
    if (stream.is_depth()) throw DecodeError("decode_image: stream holds a depth map");
    const bool inter = stream.is_inter();
    if (inter && reference == nullptr) throw DecodeError("decode_image: inter stream requires a reference view");
    const CodingTools tools = tools_from_flags(stream.flags);
    const int w = stream.width;
    const int h = stream.height;
    const int nc = stream.channels;
    const double step = stream.q;
    std::optional<ImagePredictionSource> src;
    if (inter) src = image_prediction_source(*reference, w, h, nc, tools);

    const std::size_t plane_size = static_cast<std::size_t>(w) * h;
    const PlaneLayout layout{w, h, nc, nullptr, inter && tools.use_mask ? reference->mask : nullptr};
    const std::vector<std::int32_t> symbols = plane_decode(stream.payload, layout);

    Image out(w, h, nc, 0.0f);
    for (int c = 0; c < nc; ++c) {
        for (int y = 0; y < h; ++y) {
            for (int x = 0; x < w; ++x) {
                const bool predicted = inter && (src->gate == nullptr || src->gate->at(x, y));
                const double p = predicted ? static_cast<double>(src->warped.at(x, y, c))
                                           : intra_prediction(tools.intra, out, c, x, y, nullptr);
                const std::int32_t s = symbols[c * plane_size + static_cast<std::size_t>(y) * w + x];
                out.at(x, y, c) = static_cast<float>(p + dequantize(s, step));
            }
        }
    }
    return out;
}

EncodedDepth encode_depth(const DepthMap& depth, const DepthReference* reference, double q, const CodingTools& tools) {
    const double step = effective_step(q);
    const int w = depth.width();
    const int h = depth.height();
    check_frame_size(w, h);
    require_same_shape(w, h, depth.valid.width(), depth.valid.height(), "encode_depth: validity plane");
    const bool inter = reference != nullptr;
    std::optional<DepthPredictionSource> src;
    if (inter) src = depth_prediction_source(*reference, w, h, tools);

    EncodedDepth out;
    out.reconstruction = DepthMap(w, h);
    out.reconstruction.valid = depth.valid;
    for (auto& v : out.reconstruction.valid.storage()) v = v ? 1 : 0;
    const MaskMap& valid = out.reconstruction.valid;

    std::vector<std::int32_t> symbols;
    for (int y = 0; y < h; ++y) {
        for (int x = 0; x < w; ++x) {
            if (!valid.at(x, y)) continue;
            const bool hit = inter && src->prediction.hit.at(x, y);
            const bool predicted = inter && (!src->gated || hit);
            const double p = predicted ? static_cast<double>(src->prediction.depth.at(x, y))
                                       : intra_prediction(tools.intra, out.reconstruction.depth, 0, x, y, &valid);
            const std::int32_t s = quantize(static_cast<double>(depth.depth.at(x, y)) - p, step);
            symbols.push_back(s);
            out.reconstruction.depth.at(x, y) = static_cast<float>(p + dequantize(s, step));
        }
    }
    const std::vector<std::uint8_t> validity = encode_validity(valid);
    const PlaneLayout layout{w, h, 1, &valid, inter && src->gated ? &src->prediction.hit : nullptr};
    const std::vector<std::uint8_t> residuals = plane_encode(symbols, layout);

    out.stream.mode = inter ? StreamMode::kDepthInter : StreamMode::kDepthIntra;
    out.stream.width = w;
    out.stream.height = h;
    out.stream.channels = 1;
    out.stream.q = static_cast<float>(step);
    out.stream.flags = tool_flags(tools, inter, false);
    put_u32(out.stream.payload, static_cast<std::uint32_t>(validity.size()));
    out.stream.payload.insert(out.stream.payload.end(), validity.begin(), validity.end());
    out.stream.payload.insert(out.stream.payload.end(), residuals.begin(), residuals.end());
    return out;
}

DepthMap decode_depth(const Bitstream& stream, const DepthReference* reference) {
    if (!stream.is_depth()) throw DecodeError("decode_depth: stream holds an image");
    if (stream.channels != 1) throw DecodeError("decode_depth: depth streams have one channel");
    const bool inter = stream.is_inter();
    if (inter && reference == nullptr) throw DecodeError("decode_depth: inter stream requires a reference depth");
    const CodingTools tools = tools_from_flags(stream.flags);
    const int w = stream.width;
    const int h = stream.height;
    const double step = stream.q;
    std::optional<DepthPredictionSource> src;
    if (inter) src = depth_prediction_source(*reference, w, h, tools);

    const std::span<const std::uint8_t> payload(stream.payload);
    if (payload.size() < 4) throw DecodeError("decode_depth: payload truncated before the validity length");
    const std::uint32_t validity_len = get_u32(payload, 0);
    if (payload.size() < 4ull + validity_len) throw DecodeError("decode_depth: validity sub-stream truncated");
    DepthMap out(w, h);
    out.valid = decode_validity(payload.subspan(4, validity_len), w, h);

    const PlaneLayout layout{w, h, 1, &out.valid, inter && src->gated ? &src->prediction.hit : nullptr};
    const std::vector<std::int32_t> symbols = plane_decode(payload.subspan(4 + validity_len), layout);
    std::size_t k = 0;
    for (int y = 0; y < h; ++y) {
        for (int x = 0; x < w; ++x) {
            if (!out.valid.at(x, y)) continue;
            const bool hit = inter && src->prediction.hit.at(x, y);
            const bool predicted = inter && (!src->gated || hit);
            const double p = predicted ? static_cast<double>(src->prediction.depth.at(x, y))
                                       : intra_prediction(tools.intra, out.depth, 0, x, y, &out.valid);
            out.depth.at(x, y) = static_cast<float>(p + dequantize(symbols[k++], step));
        }
    }
    return out;
}

double depth_peak(const DepthMap& depth) {
    double peak = 0.0;
    for (std::size_t i = 0; i < depth.depth.size(); ++i) {
        if (depth.valid.data()[i]) peak = std::max(peak, static_cast<double>(depth.depth.data()[i]));
    }
    return peak > 0.0 ? peak : 1.0;
}

std::vector<ViewStreams> encode_sequence(std::span<const ViewInput> views, const SequenceOptions& options) {
    std::vector<ViewStreams> out;
    out.reserve(views.size());
    for (std::size_t n = 0; n < views.size(); ++n) {
        const ViewInput& view = views[n];
        const bool has_ref = n > 0 && !options.separate;
        ViewStreams vs;

        EncodedDepth depth;
        if (has_ref && options.depth_prediction) {
            const DepthReference ref{&out.back().depth_reconstruction, &views[n - 1].camera, &view.camera};
            depth = encode_depth(view.depth, &ref, options.q_depth, options.tools);
        } else {
            depth = encode_depth(view.depth, nullptr, options.q_depth, options.tools);
        }

        EncodedImage image;
        if (has_ref) {
            const DisparityAndMask dm = disparity_and_mask(depth.reconstruction, out.back().depth_reconstruction,
                                                           view.camera, views[n - 1].camera, options.occlusion_eps);
            const ImageReference ref{&out.back().image_reconstruction, &dm.disparity, &dm.mask};
            image = encode_image(view.image, &ref, options.q, options.tools);
        } else {
            image = encode_image(view.image, nullptr, options.q, options.tools);
        }

        vs.image = std::move(image.stream);
        vs.depth = std::move(depth.stream);
        vs.image_reconstruction = std::move(image.reconstruction);
        vs.depth_reconstruction = std::move(depth.reconstruction);
        const int w = view.image.width();
        const int h = view.image.height();
        vs.image_rate = make_rate_point(vs.image.size_bits(), w, h, mse(view.image, vs.image_reconstruction), 1.0);
        vs.depth_rate = make_rate_point(vs.depth.size_bits(), w, h,
                                        mse(view.depth.depth, vs.depth_reconstruction.depth, &view.depth.valid),
                                        depth_peak(view.depth));
        out.push_back(std::move(vs));
    }
    return out;
}

std::vector<DecodedView> decode_sequence(std::span<const Bitstream> image_streams,
                                         std::span<const Bitstream> depth_streams,
                                         std::span<const CameraModel> cameras, double occlusion_eps) {
    if (image_streams.size() != depth_streams.size() || image_streams.size() != cameras.size()) {
        throw DimensionError("decode_sequence: stream and camera counts differ");
    }
    std::vector<DecodedView> out;
    out.reserve(cameras.size());
    for (std::size_t n = 0; n < cameras.size(); ++n) {
        DecodedView view;
        if (depth_streams[n].is_inter()) {
            if (n == 0) throw DecodeError("decode_sequence: first depth stream cannot be inter coded");
            const DepthReference ref{&out.back().depth, &cameras[n - 1], &cameras[n]};
            view.depth = decode_depth(depth_streams[n], &ref);
        } else {
            view.depth = decode_depth(depth_streams[n], nullptr);
        }
        if (image_streams[n].is_inter()) {
            if (n == 0) throw DecodeError("decode_sequence: first image stream cannot be inter coded");
            const DisparityAndMask dm =
                disparity_and_mask(view.depth, out.back().depth, cameras[n], cameras[n - 1], occlusion_eps);
            const ImageReference ref{&out.back().image, &dm.disparity, &dm.mask};
            view.image = decode_image(image_streams[n], &ref);
        } else {
            view.image = decode_image(image_streams[n], nullptr);
        }
        out.push_back(std::move(view));
    }
    return out;
}

} // namespace mvgeo
