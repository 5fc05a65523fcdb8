// Copyright 2026 The mvgeo Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "mvgeo/disparity.hpp"
#include "mvgeo/geometry.hpp"
#include "mvgeo/metrics.hpp"
#include "mvgeo/plane.hpp"

namespace mvgeo {

// ---------------------------------------------------------------------------
// Quantization

/// round_half_away(residual / q). Throws std::range_error when the symbol
/// magnitude exceeds 2^31 - 1 and DomainError for q <= 0.
std::int32_t quantize(double residual, double q);
double dequantize(std::int32_t symbol, double q);

std::vector<std::int32_t> quantize(std::span<const float> residuals, double q);
std::vector<float> dequantize(std::span<const std::int32_t> symbols, double q);

// ---------------------------------------------------------------------------
// Bitstream container

enum class StreamMode : std::uint8_t {
    kImageIntra = 0,
    kImageInter = 1,
    kDepthIntra = 2,
    kDepthInter = 3,
};

/// Header flag bits.
namespace stream_flags {
inline constexpr std::uint8_t kMaskGating = 1u << 0;     ///< prediction gated by the mask, mask as context
inline constexpr std::uint8_t kZeroDisparity = 1u << 1;  ///< reference used without alignment
inline constexpr std::uint8_t kSpatialIntra = 1u << 2;   ///< causal spatial predictor where not inter-predicted
inline constexpr std::uint8_t kKnownBits = kMaskGating | kZeroDisparity | kSpatialIntra;
} // namespace stream_flags

/// Self-describing compressed plane:
/// [magic "MVGC"][version u8][mode u8][W u16][H u16][channels u8][q f32]
/// [flags u8][payload_len u32][payload], little-endian.
struct Bitstream {
    static constexpr std::uint8_t kVersion = 1;
    static constexpr std::size_t kHeaderSize = 20;

    StreamMode mode = StreamMode::kImageIntra;
    int width = 0;
    int height = 0;
    int channels = 1;
    float q = 1.0f;
    std::uint8_t flags = 0;
    std::vector<std::uint8_t> payload;

    bool is_inter() const noexcept { return mode == StreamMode::kImageInter || mode == StreamMode::kDepthInter; }
    bool is_depth() const noexcept { return mode == StreamMode::kDepthIntra || mode == StreamMode::kDepthInter; }
    bool has_flag(std::uint8_t bit) const noexcept { return (flags & bit) != 0; }

    std::vector<std::uint8_t> serialize() const;
    /// Throws DecodeError on bad magic, version, mode, flags or length.
    static Bitstream parse(std::span<const std::uint8_t> bytes);
    std::size_t size_bytes() const noexcept { return kHeaderSize + payload.size(); }
    std::uint64_t size_bits() const noexcept { return 8ull * size_bytes(); }

    friend bool operator==(const Bitstream&, const Bitstream&) = default;
};

// ---------------------------------------------------------------------------
// Plane coding

enum class IntraPredictor : std::uint8_t {
    kZero,     ///< prediction 0
    kSpatial,  ///< median edge detector over reconstructed causal neighbours
};

/// Coding tools shared by the image and depth coders.
struct CodingTools {
    bool use_mask = true;   ///< gate inter prediction by the mask and use it as entropy context
    bool align = true;      ///< warp the reference by the disparity (images only)
    IntraPredictor intra = IntraPredictor::kZero;
};

/// Decoded reference view for image prediction; disparity and mask map the
/// target view into the reference.
struct ImageReference {
    const Image* image = nullptr;
    const DisparityMap* disparity = nullptr;
    const MaskMap* mask = nullptr;
};

struct EncodedImage {
    Bitstream stream;
    Image reconstruction;
};

/// Predictive image coding. With a reference the prediction is
/// warp(ref, disparity) wherever the mask gates it in, and the intra predictor
/// (0 by default) elsewhere. Residuals are quantized with step q in closed loop, so the
/// reconstruction is within q/2 of the input, and range coded with the mask as
/// context.
EncodedImage encode_image(const Image& image, const ImageReference* reference, double q,
                          const CodingTools& tools = {});
/// Throws DecodeError on corrupt streams or a missing/mismatched reference.
Image decode_image(const Bitstream& stream, const ImageReference* reference);

/// Reference for depth prediction: a decoded depth map and the two cameras.
struct DepthReference {
    const DepthMap* depth = nullptr;
    const CameraModel* reference_camera = nullptr;
    const CameraModel* target_camera = nullptr;
};

struct EncodedDepth {
    Bitstream stream;
    DepthMap reconstruction;
};

/// Predictive depth coding. The validity plane is coded losslessly; valid
/// depths are predicted by CVDP of the reference where it hit (or everywhere
/// when the mask is disabled) and by the intra predictor elsewhere.
EncodedDepth encode_depth(const DepthMap& depth, const DepthReference* reference, double q,
                          const CodingTools& tools = {});
DepthMap decode_depth(const Bitstream& stream, const DepthReference* reference);

// ---------------------------------------------------------------------------
// Sequence coding

struct ViewInput {
    Image image;
    DepthMap depth;
    CameraModel camera;
};

struct SequenceOptions {
    double q = 1.0 / 32.0;
    double q_depth = 1.0 / 64.0;
    bool separate = false;          ///< code every view without cross-view references
    bool depth_prediction = true;   ///< CVDP for depth maps
    CodingTools tools{};
    double occlusion_eps = kDefaultRelativeOcclusionEps;  ///< relative to the view's depth scale
};

struct ViewStreams {
    Bitstream image;
    Bitstream depth;
    Image image_reconstruction;
    DepthMap depth_reconstruction;
    RatePoint image_rate;
    RatePoint depth_rate;
};

/// Codes views in the given order: view 0 intra, then each depth map from the
/// previous reconstructed depth and each image from the previous reconstructed
/// image aligned through the reconstructed depths.
std::vector<ViewStreams> encode_sequence(std::span<const ViewInput> views, const SequenceOptions& options);

struct DecodedView {
    Image image;
    DepthMap depth;
};

/// Mirror of encode_sequence driven only by the streams, cameras and the
/// relative occlusion slack.
std::vector<DecodedView> decode_sequence(std::span<const Bitstream> image_streams,
                                         std::span<const Bitstream> depth_streams,
                                         std::span<const CameraModel> cameras, double occlusion_eps);

/// Peak used for depth PSNR: the largest valid depth (1 when none).
double depth_peak(const DepthMap& depth);

} // namespace mvgeo
