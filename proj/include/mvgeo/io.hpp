// Copyright 2026 The mvgeo Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "mvgeo/gaussian_scene.hpp"
#include "mvgeo/geometry.hpp"
#include "mvgeo/plane.hpp"

namespace mvgeo {

std::vector<std::uint8_t> read_file_bytes(const std::filesystem::path& path);
void write_file_bytes(const std::filesystem::path& path, std::span<const std::uint8_t> bytes);
std::string read_text_file(const std::filesystem::path& path);
void write_text_file(const std::filesystem::path& path, std::string_view text);

// ---------------------------------------------------------------------------
// MVFD float planes:
// [magic "MVFD"][version u8][kind u8][W u32][H u32][channels u8][f32 LE data]

enum class PlaneKind : std::uint8_t {
    kDepth = 0,      ///< 0 marks an invalid pixel
    kDisparity = 1,  ///< two channels, NaN marks an invalid pixel
    kMask = 2,       ///< 0.0 / 1.0
    kImage = 3,      ///< color samples, stored exactly
};

std::string_view plane_kind_name(PlaneKind kind);

struct MvfdPlane {
    PlaneKind kind = PlaneKind::kDepth;
    Plane<float> plane;
};

inline constexpr std::uint8_t kMvfdVersion = 1;
inline constexpr std::size_t kMvfdHeaderSize = 15;

std::vector<std::uint8_t> serialize_mvfd(PlaneKind kind, const Plane<float>& plane);
/// Throws ParseError naming `source` and the failing offset.
MvfdPlane parse_mvfd(std::span<const std::uint8_t> bytes, const std::string& source = "<memory>");
void write_mvfd(const std::filesystem::path& path, PlaneKind kind, const Plane<float>& plane);
MvfdPlane read_mvfd(const std::filesystem::path& path);

Plane<float> depth_to_plane(const DepthMap& depth);
DepthMap depth_from_plane(const Plane<float>& plane);
Plane<float> disparity_to_plane(const DisparityMap& disparity);
DisparityMap disparity_from_plane(const Plane<float>& plane);
Plane<float> mask_to_plane(const MaskMap& mask);
MaskMap mask_from_plane(const Plane<float>& plane);

/// Typed readers; throw ParseError when the file holds another kind.
DepthMap read_depth(const std::filesystem::path& path);
DisparityMap read_disparity(const std::filesystem::path& path);
MaskMap read_mask(const std::filesystem::path& path);
void write_depth(const std::filesystem::path& path, const DepthMap& depth);
void write_disparity(const std::filesystem::path& path, const DisparityMap& disparity);
void write_mask(const std::filesystem::path& path, const MaskMap& mask);

// ---------------------------------------------------------------------------
// Binary PPM (P6, maxval 255)

std::vector<std::uint8_t> encode_p6(const Image& image);
Image decode_p6(std::span<const std::uint8_t> bytes, const std::string& source = "<memory>");
void write_p6(const std::filesystem::path& path, const Image& image);
Image read_p6(const std::filesystem::path& path);

/// Reads a color image from MVFD (kind image) or P6, by content.
Image read_image(const std::filesystem::path& path);

// ---------------------------------------------------------------------------
// JSON documents

/// Cameras with optional integer ids (defaulting to the array position).
struct CameraSet {
    std::vector<CameraModel> cameras;
    std::vector<int> ids;
};

/// Array of {fx, fy, cx, cy, width, height, R: [9 row-major], t: [3], id?}.
CameraSet parse_cameras(std::string_view json_text, const std::string& source = "<memory>");
std::string cameras_to_json(const CameraSet& set);
CameraSet read_cameras(const std::filesystem::path& path);
void write_cameras(const std::filesystem::path& path, const CameraSet& set);

/// {"background": [3], "gaussians": [{center: [3], sigma, opacity, color: [3]}]}.
GaussianScene parse_scene(std::string_view json_text, const std::string& source = "<memory>");
std::string scene_to_json(const GaussianScene& scene);
GaussianScene read_scene(const std::filesystem::path& path);
void write_scene(const std::filesystem::path& path, const GaussianScene& scene);

/// Coded sequence: stream files in coding order with their cameras and the
/// parameters the decoder needs. Paths are relative to the manifest.
struct ManifestView {
    int id = 0;
    std::string image_stream;
    std::string depth_stream;
    CameraModel camera;
};

struct Manifest {
    double q = 0.0;
    double q_depth = 0.0;
    double occlusion_eps = 0.0;
    std::vector<ManifestView> views;
};

Manifest parse_manifest(std::string_view json_text, const std::string& source = "<memory>");
std::string manifest_to_json(const Manifest& manifest);
Manifest read_manifest(const std::filesystem::path& path);
void write_manifest(const std::filesystem::path& path, const Manifest& manifest);

} // namespace mvgeo
