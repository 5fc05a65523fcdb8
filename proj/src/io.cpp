// Copyright 2026 The mvgeo Authors
// SPDX-License-Identifier: Apache-2.0

#include "mvgeo/io.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>
#include <iterator>
#include <limits>
#include <sstream>

#include <json.hpp>

namespace mvgeo {
namespace {

using nlohmann::json;

static_assert(std::endian::native == std::endian::little, "MVFD/MVGC I/O assumes a little-endian host");

constexpr std::array<std::uint8_t, 4> kMvfdMagic{'M', 'V', 'F', 'D'};

std::uint32_t read_u32(std::span<const std::uint8_t> b, std::size_t at) {
    std::uint32_t v = 0;
    for (int i = 0; i < 4; ++i) v |= static_cast<std::uint32_t>(b[at + i]) << (8 * i);
    return v;
}

void append_u32(std::vector<std::uint8_t>& out, std::uint32_t v) {
    for (int i = 0; i < 4; ++i) out.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
}

int expected_channels(PlaneKind kind) {
    switch (kind) {
        case PlaneKind::kDisparity: return 2;
        case PlaneKind::kImage: return 0;  // any
        default: return 1;
    }
}

MvfdPlane read_kind(const std::filesystem::path& path, PlaneKind kind) {
    MvfdPlane p = read_mvfd(path);
    if (p.kind != kind) {
        throw ParseError(path.string() + ": expected a " + std::string(plane_kind_name(kind)) + " plane, found " +
                         std::string(plane_kind_name(p.kind)));
    }
    return p;
}

// --- JSON field access with path-qualified errors ---------------------------

[[noreturn]] void fail(const std::string& source, const std::string& path, const std::string& what) {
    throw ParseError(source + ": field '" + path + "' " + what);
}

const json& member(const json& obj, const std::string& key, const std::string& source, const std::string& path) {
    if (!obj.is_object()) fail(source, path, "must be an object");
    auto it = obj.find(key);
    if (it == obj.end()) fail(source, path.empty() ? key : path + "." + key, "is missing");
    return *it;
}

double number(const json& obj, const std::string& key, const std::string& source, const std::string& path) {
    const json& v = member(obj, key, source, path);
    const std::string where = path.empty() ? key : path + "." + key;
    if (!v.is_number()) fail(source, where, "must be a number");
    const double d = v.get<double>();
    if (!std::isfinite(d)) fail(source, where, "must be finite");
    return d;
}

int integer(const json& obj, const std::string& key, const std::string& source, const std::string& path) {
    const json& v = member(obj, key, source, path);
    const std::string where = path.empty() ? key : path + "." + key;
    if (!v.is_number_integer()) fail(source, where, "must be an integer");
    const auto i = v.get<std::int64_t>();
    if (i < std::numeric_limits<int>::min() || i > std::numeric_limits<int>::max()) fail(source, where, "out of range");
    return static_cast<int>(i);
}

std::vector<double> numbers(const json& obj, const std::string& key, std::size_t n, const std::string& source,
                            const std::string& path) {
    const json& v = member(obj, key, source, path);
    const std::string where = path.empty() ? key : path + "." + key;
    if (!v.is_array() || v.size() != n) fail(source, where, "must be an array of " + std::to_string(n) + " numbers");
    std::vector<double> out;
    for (std::size_t i = 0; i < n; ++i) {
        if (!v[i].is_number() || !std::isfinite(v[i].get<double>())) {
            fail(source, where + "[" + std::to_string(i) + "]", "must be a finite number");
        }
        out.push_back(v[i].get<double>());
    }
    return out;
}

json parse_json(std::string_view text, const std::string& source) {
    try {
        return json::parse(text);
    } catch (const json::parse_error& e) {
        throw ParseError(source + ": invalid JSON at byte " + std::to_string(e.byte) + ": " + e.what());
    }
}

CameraModel camera_from(const json& j, const std::string& source, const std::string& path) {
    CameraModel cam;
    cam.intrinsics.fx = number(j, "fx", source, path);
    cam.intrinsics.fy = number(j, "fy", source, path);
    cam.intrinsics.cx = number(j, "cx", source, path);
    cam.intrinsics.cy = number(j, "cy", source, path);
    cam.intrinsics.width = integer(j, "width", source, path);
    cam.intrinsics.height = integer(j, "height", source, path);
    const std::vector<double> r = numbers(j, "R", 9, source, path);
    const std::vector<double> t = numbers(j, "t", 3, source, path);
    for (int row = 0; row < 3; ++row) {
        for (int col = 0; col < 3; ++col) cam.extrinsics.rotation(row, col) = r[row * 3 + col];
        cam.extrinsics.translation(row) = t[row];
    }
    try {
        cam.validate();
    } catch (const DomainError& e) {
        throw ParseError(source + ": " + path + ": " + e.what());
    }
    return cam;
}

json camera_to(const CameraModel& cam) {
    json j;
    j["fx"] = cam.intrinsics.fx;
    j["fy"] = cam.intrinsics.fy;
    j["cx"] = cam.intrinsics.cx;
    j["cy"] = cam.intrinsics.cy;
    j["width"] = cam.intrinsics.width;
    j["height"] = cam.intrinsics.height;
    json r = json::array();
    for (int row = 0; row < 3; ++row) {
        for (int col = 0; col < 3; ++col) r.push_back(cam.extrinsics.rotation(row, col));
    }
    j["R"] = r;
    j["t"] = {cam.extrinsics.translation.x(), cam.extrinsics.translation.y(), cam.extrinsics.translation.z()};
    return j;
}

Color color_from(const std::vector<double>& v) { return {v[0], v[1], v[2]}; }

// --- P6 header tokens --------------------------------------------------------

struct PnmCursor {
    std::span<const std::uint8_t> bytes;
    std::size_t pos = 0;
    const std::string& source;

    void skip_space_and_comments() {
        while (pos < bytes.size()) {
            if (bytes[pos] == '#') {
                while (pos < bytes.size() && bytes[pos] != '\n') ++pos;
            } else if (std::isspace(bytes[pos])) {
                ++pos;
            } else {
                break;
            }
        }
    }

    long number(const char* what) {
        skip_space_and_comments();
        const std::size_t start = pos;
        long v = 0;
        while (pos < bytes.size() && std::isdigit(bytes[pos])) {
            v = v * 10 + (bytes[pos] - '0');
            if (v > 1'000'000) throw ParseError(source + ": P6 " + what + " too large at offset " + std::to_string(start));
            ++pos;
        }
        if (pos == start) throw ParseError(source + ": P6 header: expected " + what + " at offset " + std::to_string(start));
        return v;
    }
};

} // namespace

std::vector<std::uint8_t> read_file_bytes(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ParseError(path.string() + ": cannot open for reading");
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

void write_file_bytes(const std::filesystem::path& path, std::span<const std::uint8_t> bytes) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error(path.string() + ": cannot open for writing");
    out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
    if (!out) throw std::runtime_error(path.string() + ": write failed");
}

std::string read_text_file(const std::filesystem::path& path) {
    const std::vector<std::uint8_t> bytes = read_file_bytes(path);
    return {bytes.begin(), bytes.end()};
}

void write_text_file(const std::filesystem::path& path, std::string_view text) {
    write_file_bytes(path, std::span(reinterpret_cast<const std::uint8_t*>(text.data()), text.size()));
}

std::string_view plane_kind_name(PlaneKind kind) {
    switch (kind) {
        case PlaneKind::kDepth: return "depth";
        case PlaneKind::kDisparity: return "disparity";
        case PlaneKind::kMask: return "mask";
        case PlaneKind::kImage: return "image";
    }
    return "unknown";
}

std::vector<std::uint8_t> serialize_mvfd(PlaneKind kind, const Plane<float>& plane) {
    const int want = expected_channels(kind);
    if (want != 0 && plane.channels() != want) {
        throw DimensionError(std::string(plane_kind_name(kind)) + " planes have " + std::to_string(want) + " channel(s)");
    }
    if (plane.channels() > 0xFF) throw DimensionError("MVFD: too many channels");
    std::vector<std::uint8_t> out(kMvfdMagic.begin(), kMvfdMagic.end());
    out.reserve(kMvfdHeaderSize + plane.size() * 4);
    out.push_back(kMvfdVersion);
    out.push_back(static_cast<std::uint8_t>(kind));
    append_u32(out, static_cast<std::uint32_t>(plane.width()));
    append_u32(out, static_cast<std::uint32_t>(plane.height()));
    out.push_back(static_cast<std::uint8_t>(plane.channels()));
    const std::size_t at = out.size();
    out.resize(at + plane.size() * 4);
    std::memcpy(out.data() + at, plane.data().data(), plane.size() * 4);
    return out;
}

MvfdPlane parse_mvfd(std::span<const std::uint8_t> bytes, const std::string& source) {
    auto need = [&](std::size_t end, const char* what) {
        if (bytes.size() < end) {
            throw ParseError(source + ": MVFD truncated at offset " + std::to_string(bytes.size()) + " while reading " +
                             what + " (needs " + std::to_string(end) + " bytes)");
        }
    };
    need(4, "magic");
    if (!std::equal(kMvfdMagic.begin(), kMvfdMagic.end(), bytes.begin())) {
        throw ParseError(source + ": bad MVFD magic at offset 0");
    }
    need(kMvfdHeaderSize, "header");
    if (bytes[4] != kMvfdVersion) {
        throw ParseError(source + ": unsupported MVFD version " + std::to_string(bytes[4]) + " at offset 4");
    }
    if (bytes[5] > static_cast<std::uint8_t>(PlaneKind::kImage)) {
        throw ParseError(source + ": unknown MVFD kind " + std::to_string(bytes[5]) + " at offset 5");
    }
    MvfdPlane out;
    out.kind = static_cast<PlaneKind>(bytes[5]);
    const std::uint32_t w = read_u32(bytes, 6);
    const std::uint32_t h = read_u32(bytes, 10);
    const int c = bytes[14];
    const int want = expected_channels(out.kind);
    if (c == 0 || (want != 0 && c != want)) {
        throw ParseError(source + ": channel count " + std::to_string(c) + " invalid for a " +
                         std::string(plane_kind_name(out.kind)) + " plane at offset 14");
    }
    if (w > (1u << 20) || h > (1u << 20)) throw ParseError(source + ": MVFD dimensions too large at offset 6");
    const std::size_t n = static_cast<std::size_t>(w) * h * c;
    need(kMvfdHeaderSize + 4 * n, "data");
    if (bytes.size() != kMvfdHeaderSize + 4 * n) {
        throw ParseError(source + ": " + std::to_string(bytes.size() - kMvfdHeaderSize - 4 * n) +
                         " trailing bytes after offset " + std::to_string(kMvfdHeaderSize + 4 * n));
    }
    out.plane = Plane<float>(static_cast<int>(w), static_cast<int>(h), c);
    std::memcpy(out.plane.data().data(), bytes.data() + kMvfdHeaderSize, 4 * n);
    return out;
}

void write_mvfd(const std::filesystem::path& path, PlaneKind kind, const Plane<float>& plane) {
    write_file_bytes(path, serialize_mvfd(kind, plane));
}

MvfdPlane read_mvfd(const std::filesystem::path& path) { return parse_mvfd(read_file_bytes(path), path.string()); }

Plane<float> depth_to_plane(const DepthMap& depth) {
    Plane<float> out(depth.width(), depth.height(), 1, 0.0f);
    for (std::size_t i = 0; i < out.size(); ++i) out.data()[i] = depth.valid.data()[i] ? depth.depth.data()[i] : 0.0f;
    return out;
}

DepthMap depth_from_plane(const Plane<float>& plane) {
    if (plane.channels() != 1) throw DimensionError("depth planes have one channel");
    DepthMap out(plane.width(), plane.height());
    for (std::size_t i = 0; i < plane.size(); ++i) {
        const float v = plane.data()[i];
        if (std::isfinite(v) && v > 0.0f) {
            out.depth.data()[i] = v;
            out.valid.data()[i] = 1;
        }
    }
    return out;
}

Plane<float> disparity_to_plane(const DisparityMap& disparity) {
    Plane<float> out = disparity.shift;
    const float nan = std::numeric_limits<float>::quiet_NaN();
    for (std::size_t p = 0; p < disparity.valid.size(); ++p) {
        if (!disparity.valid.data()[p]) out.data()[2 * p] = out.data()[2 * p + 1] = nan;
    }
    return out;
}

DisparityMap disparity_from_plane(const Plane<float>& plane) {
    if (plane.channels() != 2) throw DimensionError("disparity planes have two channels");
    DisparityMap out(plane.width(), plane.height());
    for (std::size_t p = 0; p < out.valid.size(); ++p) {
        const float dx = plane.data()[2 * p];
        const float dy = plane.data()[2 * p + 1];
        if (std::isfinite(dx) && std::isfinite(dy)) {
            out.shift.data()[2 * p] = dx;
            out.shift.data()[2 * p + 1] = dy;
            out.valid.data()[p] = 1;
        }
    }
    return out;
}

Plane<float> mask_to_plane(const MaskMap& mask) {
    Plane<float> out(mask.width(), mask.height(), 1, 0.0f);
    for (std::size_t i = 0; i < mask.size(); ++i) out.data()[i] = mask.data()[i] ? 1.0f : 0.0f;
    return out;
}

MaskMap mask_from_plane(const Plane<float>& plane) {
    if (plane.channels() != 1) throw DimensionError("mask planes have one channel");
    MaskMap out(plane.width(), plane.height(), 1, 0);
    for (std::size_t i = 0; i < plane.size(); ++i) out.data()[i] = plane.data()[i] != 0.0f ? 1 : 0;
    return out;
}

DepthMap read_depth(const std::filesystem::path& path) {
    return depth_from_plane(read_kind(path, PlaneKind::kDepth).plane);
}
DisparityMap read_disparity(const std::filesystem::path& path) {
    return disparity_from_plane(read_kind(path, PlaneKind::kDisparity).plane);
}
MaskMap read_mask(const std::filesystem::path& path) { return mask_from_plane(read_kind(path, PlaneKind::kMask).plane); }

void write_depth(const std::filesystem::path& path, const DepthMap& depth) {
    write_mvfd(path, PlaneKind::kDepth, depth_to_plane(depth));
}
void write_disparity(const std::filesystem::path& path, const DisparityMap& disparity) {
    write_mvfd(path, PlaneKind::kDisparity, disparity_to_plane(disparity));
}
void write_mask(const std::filesystem::path& path, const MaskMap& mask) {
    write_mvfd(path, PlaneKind::kMask, mask_to_plane(mask));
}

std::vector<std::uint8_t> encode_p6(const Image& image) {
    if (image.channels() != 3) throw DimensionError("P6 output needs a three-channel image");
    const std::string header =
        "P6\n" + std::to_string(image.width()) + " " + std::to_string(image.height()) + "\n255\n";
    std::vector<std::uint8_t> out(header.begin(), header.end());
    out.reserve(header.size() + image.size());
    for (float v : image.data()) {
        const double c = std::isfinite(v) ? std::clamp(static_cast<double>(v), 0.0, 1.0) : 0.0;
        out.push_back(static_cast<std::uint8_t>(std::lround(c * 255.0)));
    }
    return out;
}

Image decode_p6(std::span<const std::uint8_t> bytes, const std::string& source) {
    if (bytes.size() < 2 || bytes[0] != 'P' || bytes[1] != '6') {
        throw ParseError(source + ": not a binary PPM (expected magic 'P6' at offset 0)");
    }
    PnmCursor cur{bytes, 2, source};
    const long w = cur.number("width");
    const long h = cur.number("height");
    const std::size_t maxval_at = cur.pos;
    const long maxval = cur.number("maxval");
    if (maxval != 255) {
        throw ParseError(source + ": unsupported P6 format: maxval " + std::to_string(maxval) + " at offset " +
                         std::to_string(maxval_at) + " (only 255 is supported)");
    }
    if (w <= 0 || h <= 0) throw ParseError(source + ": P6 dimensions must be positive");
    if (cur.pos >= bytes.size() || !std::isspace(bytes[cur.pos])) {
        throw ParseError(source + ": P6 header must end with one whitespace byte at offset " + std::to_string(cur.pos));
    }
    ++cur.pos;
    const std::size_t n = static_cast<std::size_t>(w) * h * 3;
    if (bytes.size() - cur.pos < n) {
        throw ParseError(source + ": P6 data truncated at offset " + std::to_string(bytes.size()) + " (needs " +
                         std::to_string(cur.pos + n) + " bytes)");
    }
    Image out(static_cast<int>(w), static_cast<int>(h), 3);
    for (std::size_t i = 0; i < n; ++i) out.data()[i] = static_cast<float>(bytes[cur.pos + i] / 255.0);
    return out;
}

void write_p6(const std::filesystem::path& path, const Image& image) { write_file_bytes(path, encode_p6(image)); }

Image read_p6(const std::filesystem::path& path) { return decode_p6(read_file_bytes(path), path.string()); }

Image read_image(const std::filesystem::path& path) {
    const std::vector<std::uint8_t> bytes = read_file_bytes(path);
    if (bytes.size() >= 4 && std::equal(kMvfdMagic.begin(), kMvfdMagic.end(), bytes.begin())) {
        MvfdPlane p = parse_mvfd(bytes, path.string());
        if (p.kind != PlaneKind::kImage) {
            throw ParseError(path.string() + ": expected an image plane, found " + std::string(plane_kind_name(p.kind)));
        }
        return std::move(p.plane);
    }
    return decode_p6(bytes, path.string());
}

CameraSet parse_cameras(std::string_view json_text, const std::string& source) {
    const json doc = parse_json(json_text, source);
    if (!doc.is_array()) throw ParseError(source + ": camera file must hold a JSON array");
    CameraSet set;
    for (std::size_t i = 0; i < doc.size(); ++i) {
        const std::string path = "[" + std::to_string(i) + "]";
        set.cameras.push_back(camera_from(doc[i], source, path));
        set.ids.push_back(doc[i].contains("id") ? integer(doc[i], "id", source, path) : static_cast<int>(i));
    }
    return set;
}

std::string cameras_to_json(const CameraSet& set) {
    if (!set.ids.empty() && set.ids.size() != set.cameras.size()) {
        throw DimensionError("cameras_to_json: id count does not match camera count");
    }
    json doc = json::array();
    for (std::size_t i = 0; i < set.cameras.size(); ++i) {
        json j = camera_to(set.cameras[i]);
        j["id"] = set.ids.empty() ? static_cast<int>(i) : set.ids[i];
        doc.push_back(j);
    }
    return doc.dump(2) + "\n";
}

CameraSet read_cameras(const std::filesystem::path& path) { return parse_cameras(read_text_file(path), path.string()); }

void write_cameras(const std::filesystem::path& path, const CameraSet& set) {
    write_text_file(path, cameras_to_json(set));
}

GaussianScene parse_scene(std::string_view json_text, const std::string& source) {
    const json doc = parse_json(json_text, source);
    GaussianScene scene;
    if (doc.contains("background")) scene.background = color_from(numbers(doc, "background", 3, source, ""));
    const json& list = member(doc, "gaussians", source, "");
    if (!list.is_array()) fail(source, "gaussians", "must be an array");
    for (std::size_t i = 0; i < list.size(); ++i) {
        const std::string path = "gaussians[" + std::to_string(i) + "]";
        Gaussian3D g;
        const std::vector<double> c = numbers(list[i], "center", 3, source, path);
        g.center = Vec3(c[0], c[1], c[2]);
        g.sigma = number(list[i], "sigma", source, path);
        g.opacity = number(list[i], "opacity", source, path);
        g.color = color_from(numbers(list[i], "color", 3, source, path));
        scene.gaussians.push_back(g);
    }
    try {
        scene.validate();
    } catch (const DomainError& e) {
        throw ParseError(source + ": " + e.what());
    }
    return scene;
}

std::string scene_to_json(const GaussianScene& scene) {
    json doc;
    doc["background"] = scene.background;
    json list = json::array();
    for (const Gaussian3D& g : scene.gaussians) {
        list.push_back({{"center", {g.center.x(), g.center.y(), g.center.z()}},
                        {"sigma", g.sigma},
                        {"opacity", g.opacity},
                        {"color", g.color}});
    }
    doc["gaussians"] = list;
    return doc.dump() + "\n";
}

GaussianScene read_scene(const std::filesystem::path& path) { return parse_scene(read_text_file(path), path.string()); }

void write_scene(const std::filesystem::path& path, const GaussianScene& scene) {
    write_text_file(path, scene_to_json(scene));
}

Manifest parse_manifest(std::string_view json_text, const std::string& source) {
    const json doc = parse_json(json_text, source);
    Manifest m;
    m.q = number(doc, "q", source, "");
    m.q_depth = number(doc, "q_depth", source, "");
    m.occlusion_eps = number(doc, "occlusion_eps", source, "");
    if (!(m.q > 0.0)) fail(source, "q", "must be positive");
    if (!(m.q_depth > 0.0)) fail(source, "q_depth", "must be positive");
    if (!(m.occlusion_eps >= 0.0)) fail(source, "occlusion_eps", "must be non-negative");
    const json& views = member(doc, "views", source, "");
    if (!views.is_array()) fail(source, "views", "must be an array");
    for (std::size_t i = 0; i < views.size(); ++i) {
        const std::string path = "views[" + std::to_string(i) + "]";
        ManifestView v;
        v.id = integer(views[i], "id", source, path);
        const json& img = member(views[i], "image", source, path);
        const json& dep = member(views[i], "depth", source, path);
        if (!img.is_string()) fail(source, path + ".image", "must be a string");
        if (!dep.is_string()) fail(source, path + ".depth", "must be a string");
        v.image_stream = img.get<std::string>();
        v.depth_stream = dep.get<std::string>();
        v.camera = camera_from(member(views[i], "camera", source, path), source, path + ".camera");
        m.views.push_back(std::move(v));
    }
    return m;
}

std::string manifest_to_json(const Manifest& manifest) {
    json doc;
    doc["version"] = 1;
    doc["q"] = manifest.q;
    doc["q_depth"] = manifest.q_depth;
    doc["occlusion_eps"] = manifest.occlusion_eps;
    json views = json::array();
    for (const ManifestView& v : manifest.views) {
        views.push_back({{"id", v.id}, {"image", v.image_stream}, {"depth", v.depth_stream}, {"camera", camera_to(v.camera)}});
    }
    doc["views"] = views;
    return doc.dump(2) + "\n";
}

Manifest read_manifest(const std::filesystem::path& path) {
    return parse_manifest(read_text_file(path), path.string());
}

void write_manifest(const std::filesystem::path& path, const Manifest& manifest) {
    write_text_file(path, manifest_to_json(manifest));
}

} // namespace mvgeo
