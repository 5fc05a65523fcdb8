// Copyright 2026 The mvgeo Authors
// SPDX-License-Identifier: Apache-2.0

#include <pybind11/eigen.h>
#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <cstring>
#include <optional>
#include <string>
#include <vector>

#include "mvgeo/codec.hpp"
#include "mvgeo/depth_prediction.hpp"
#include "mvgeo/disparity.hpp"
#include "mvgeo/experiment.hpp"
#include "mvgeo/gaussian_scene.hpp"
#include "mvgeo/io.hpp"
#include "mvgeo/metrics.hpp"
#include "mvgeo/range_coder.hpp"
#include "mvgeo/view_ordering.hpp"

namespace py = pybind11;
using namespace mvgeo;

namespace {

template <typename T>
using Array = py::array_t<T, py::array::c_style | py::array::forcecast>;

// Planes map to (H, W) arrays for one channel and (H, W, C) otherwise.
template <typename T>
py::array_t<T> to_numpy(const Plane<T>& plane) {
    std::vector<py::ssize_t> shape{plane.height(), plane.width()};
    if (plane.channels() > 1) shape.push_back(plane.channels());
    py::array_t<T> out(shape);
    if (plane.size() > 0) std::memcpy(out.mutable_data(), plane.data().data(), plane.size() * sizeof(T));
    return out;
}

template <typename T>
Plane<T> from_numpy(const Array<T>& a, const char* what) {
    if (a.ndim() != 2 && a.ndim() != 3) {
        throw DimensionError(std::string(what) + ": expected a (H, W) or (H, W, C) array");
    }
    const int channels = a.ndim() == 3 ? static_cast<int>(a.shape(2)) : 1;
    Plane<T> p(static_cast<int>(a.shape(1)), static_cast<int>(a.shape(0)), channels);
    if (p.size() > 0) std::memcpy(p.data().data(), a.data(), p.size() * sizeof(T));
    return p;
}

py::array_t<bool> mask_to_numpy(const MaskMap& m) {
    py::array_t<bool> out({m.height(), m.width()});
    bool* dst = out.mutable_data();
    for (std::size_t i = 0; i < m.size(); ++i) dst[i] = m.data()[i] != 0;
    return out;
}

MaskMap mask_from_numpy(const Array<bool>& a, const char* what) {
    if (a.ndim() != 2) throw DimensionError(std::string(what) + ": expected a (H, W) boolean array");
    MaskMap m(static_cast<int>(a.shape(1)), static_cast<int>(a.shape(0)));
    for (std::size_t i = 0; i < m.size(); ++i) m.data()[i] = a.data()[i] ? 1 : 0;
    return m;
}

DepthMap depth_from_numpy(const Array<float>& depth, const Array<bool>& valid) {
    DepthMap d;
    d.depth = from_numpy(depth, "depth");
    d.valid = mask_from_numpy(valid, "valid");
    require_same_shape(d.depth.width(), d.depth.height(), d.valid.width(), d.valid.height(), "depth validity");
    if (d.depth.channels() != 1) throw DimensionError("depth: expected a (H, W) array");
    return d;
}

py::bytes as_bytes(std::span<const std::uint8_t> b) {
    return py::bytes(reinterpret_cast<const char*>(b.data()), b.size());
}

std::vector<std::uint8_t> from_bytes(const py::bytes& b) {
    const std::string s = b;
    return {s.begin(), s.end()};
}

SequenceOptions sequence_options(double q, double q_depth, bool separate, bool use_mask, bool depth_prediction,
                                 bool align, const std::string& intra, double eps) {
    SequenceOptions o;
    o.q = q;
    o.q_depth = q_depth;
    o.separate = separate;
    o.depth_prediction = depth_prediction;
    o.tools.use_mask = use_mask;
    o.tools.align = align;
    if (intra == "zero") {
        o.tools.intra = IntraPredictor::kZero;
    } else if (intra == "spatial") {
        o.tools.intra = IntraPredictor::kSpatial;
    } else {
        throw std::invalid_argument("unknown intra predictor '" + intra + "' (expected zero or spatial)");
    }
    o.occlusion_eps = eps;
    return o;
}

} // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Geometry-guided multi-view image and depth coding";

    py::register_exception<DomainError>(m, "DomainError", PyExc_ValueError);
    py::register_exception<DimensionError>(m, "DimensionError", PyExc_ValueError);
    py::register_exception<ParseError>(m, "ParseError", PyExc_RuntimeError);
    py::register_exception<DecodeError>(m, "DecodeError", PyExc_RuntimeError);

    py::class_<CameraModel>(m, "Camera")
        .def(py::init([](double fx, double fy, double cx, double cy, int width, int height, const Mat3& rotation,
                         const Vec3& translation) {
                 CameraModel c;
                 c.intrinsics = {fx, fy, cx, cy, width, height};
                 c.extrinsics.rotation = rotation;
                 c.extrinsics.translation = translation;
                 c.validate();
                 return c;
             }),
             py::arg("fx"), py::arg("fy"), py::arg("cx"), py::arg("cy"), py::arg("width"), py::arg("height"),
             py::arg("rotation") = Mat3::Identity(), py::arg("translation") = Vec3::Zero())
        .def_static(
            "look_at",
            [](const Vec3& eye, const Vec3& target, double focal, int width, int height, const Vec3& up) {
                CameraModel c;
                c.intrinsics = {focal, focal, 0.5 * width, 0.5 * height, width, height};
                c.extrinsics = look_at(eye, target, up);
                c.validate();
                return c;
            },
            py::arg("eye"), py::arg("target"), py::arg("focal"), py::arg("width"), py::arg("height"),
            py::arg("up") = Vec3::UnitY())
        .def_property_readonly("width", &CameraModel::width)
        .def_property_readonly("height", &CameraModel::height)
        .def_property_readonly("K", [](const CameraModel& c) { return c.intrinsics.matrix(); })
        .def_property_readonly("pose", [](const CameraModel& c) { return c.extrinsics.matrix(); })
        .def_property_readonly("rotation", [](const CameraModel& c) { return c.extrinsics.rotation; })
        .def_property_readonly("translation", [](const CameraModel& c) { return c.extrinsics.translation; })
        .def_property_readonly("center", [](const CameraModel& c) { return c.extrinsics.center(); })
        .def("__repr__", [](const CameraModel& c) {
            return "Camera(" + std::to_string(c.width()) + "x" + std::to_string(c.height()) + ")";
        });

    py::class_<GaussianScene>(m, "Scene")
        .def("__len__", [](const GaussianScene& s) { return s.gaussians.size(); })
        .def_property_readonly("background", [](const GaussianScene& s) { return s.background; })
        .def("to_json", &scene_to_json)
        .def_static("from_json", [](const std::string& text) { return parse_scene(text); });

    m.def(
        "synthesize_scene",
        [](std::uint64_t seed, int n_gaussians, int count, double spacing_deg, double radius, int size) {
            CameraArc arc;
            arc.count = count;
            arc.spacing_deg = spacing_deg;
            arc.radius = radius;
            arc.width = arc.height = size;
            arc.focal = size;
            SyntheticScene s = synthesize_scene(seed, n_gaussians, {}, arc);
            return py::make_tuple(std::move(s.scene), std::move(s.cameras));
        },
        py::arg("seed"), py::arg("n_gaussians") = 4000, py::arg("count") = 8, py::arg("spacing_deg") = 10.0,
        py::arg("radius") = 4.0, py::arg("size") = 64, "Textured test scene and cameras on an arc.");

    m.def(
        "two_wall_scene",
        [](std::uint64_t seed, double front_opacity, double front_extent) {
            TwoWallSpec spec;
            spec.front_opacity = front_opacity;
            spec.front_extent = front_extent;
            SyntheticScene s = two_wall_scene(seed, spec);
            return py::make_tuple(std::move(s.scene), std::move(s.cameras));
        },
        py::arg("seed"), py::arg("front_opacity") = 0.9, py::arg("front_extent") = 0.5);

    m.def(
        "render",
        [](const GaussianScene& scene, const CameraModel& camera) {
            RenderOutput r;
            {
                py::gil_scoped_release release;
                r = render_view(scene, camera);
            }
            py::dict out;
            out["color"] = to_numpy(r.color);
            out["median_depth"] = to_numpy(r.median_depth.depth);
            out["median_valid"] = mask_to_numpy(r.median_depth.valid);
            out["weighted_depth"] = to_numpy(r.weighted_depth.depth);
            out["weighted_valid"] = mask_to_numpy(r.weighted_depth.valid);
            out["coverage"] = mask_to_numpy(r.coverage);
            return out;
        },
        py::arg("scene"), py::arg("camera"));

    m.def(
        "disparity_and_mask",
        [](const Array<float>& depth, const Array<bool>& valid, const Array<float>& ref_depth,
           const Array<bool>& ref_valid, const CameraModel& camera, const CameraModel& reference, double eps) {
            const DisparityAndMask r = disparity_and_mask(depth_from_numpy(depth, valid),
                                                          depth_from_numpy(ref_depth, ref_valid), camera, reference,
                                                          eps);
            py::dict out;
            out["disparity"] = to_numpy(r.disparity.shift);
            out["disparity_valid"] = mask_to_numpy(r.disparity.valid);
            out["projected_depth"] = to_numpy(r.projected_depth.depth);
            out["mask"] = mask_to_numpy(r.mask);
            out["occlusion_eps"] = r.occlusion_eps;
            return out;
        },
        py::arg("depth"), py::arg("valid"), py::arg("ref_depth"), py::arg("ref_valid"), py::arg("camera"),
        py::arg("reference"), py::arg("relative_eps") = kDefaultRelativeOcclusionEps);

    m.def(
        "warp",
        [](const Array<float>& plane, const Array<float>& disparity) {
            DisparityMap d;
            d.shift = from_numpy(disparity, "disparity");
            if (d.shift.channels() != 2) throw DimensionError("disparity: expected a (H, W, 2) array");
            d.valid = MaskMap(d.shift.width(), d.shift.height(), 1, 1);
            return to_numpy(warp(from_numpy(plane, "plane"), d));
        },
        py::arg("plane"), py::arg("disparity"));

    m.def(
        "cvdp",
        [](const Array<float>& ref_depth, const Array<bool>& ref_valid, const CameraModel& reference,
           const CameraModel& target) {
            const DepthPrediction p = cvdp(depth_from_numpy(ref_depth, ref_valid), reference, target);
            return py::make_tuple(to_numpy(p.depth), mask_to_numpy(p.hit));
        },
        py::arg("ref_depth"), py::arg("ref_valid"), py::arg("reference"), py::arg("target"));

    m.def(
        "view_distance",
        [](const CameraModel& a, const CameraModel& b, const std::string& norm) {
            return view_distance(a.extrinsics, b.extrinsics, parse_norm(norm));
        },
        py::arg("a"), py::arg("b"), py::arg("norm") = "frobenius");
    m.def(
        "distance_matrix",
        [](const std::vector<CameraModel>& cameras, const std::string& norm) {
            std::vector<CameraExtrinsics> poses;
            for (const CameraModel& c : cameras) poses.push_back(c.extrinsics);
            return Eigen::MatrixXd(distance_matrix(poses, parse_norm(norm)));
        },
        py::arg("cameras"), py::arg("norm") = "frobenius");
    m.def(
        "greedy_order", [](const Eigen::MatrixXd& d, int start) { return greedy_order(d, start); },
        py::arg("distances"), py::arg("start") = 0);
    m.def(
        "best_start_order", [](const Eigen::MatrixXd& d) { return best_start_order(d); }, py::arg("distances"));

    m.def(
        "quantize", [](double r, double q) { return quantize(r, q); }, py::arg("residual"), py::arg("q"));
    m.def(
        "dequantize", [](std::int32_t s, double q) { return dequantize(s, q); }, py::arg("symbol"), py::arg("q"));

    m.def(
        "range_encode",
        [](const Array<std::int32_t>& symbols, const std::optional<Array<std::uint8_t>>& contexts) {
            const std::span<const std::int32_t> s(symbols.data(), symbols.size());
            std::span<const std::uint8_t> c;
            if (contexts) c = {contexts->data(), static_cast<std::size_t>(contexts->size())};
            return as_bytes(range_encode(s, c));
        },
        py::arg("symbols"), py::arg("contexts") = py::none());
    m.def(
        "range_decode",
        [](const py::bytes& data, std::size_t count, const std::optional<Array<std::uint8_t>>& contexts) {
            std::span<const std::uint8_t> c;
            if (contexts) c = {contexts->data(), static_cast<std::size_t>(contexts->size())};
            const std::vector<std::int32_t> s = range_decode(from_bytes(data), count, c);
            return Array<std::int32_t>(static_cast<py::ssize_t>(s.size()), s.data());
        },
        py::arg("data"), py::arg("count"), py::arg("contexts") = py::none());

    m.def(
        "psnr",
        [](const Array<float>& a, const Array<float>& b, double peak, const std::optional<Array<bool>>& mask) {
            std::optional<MaskMap> mm;
            if (mask) mm = mask_from_numpy(*mask, "mask");
            return psnr(from_numpy(a, "a"), from_numpy(b, "b"), peak, mm ? &*mm : nullptr);
        },
        py::arg("a"), py::arg("b"), py::arg("peak") = 1.0, py::arg("mask") = py::none());

    m.def(
        "encode_sequence",
        [](const std::vector<Array<float>>& images, const std::vector<Array<float>>& depths,
           const std::vector<Array<bool>>& valids, const std::vector<CameraModel>& cameras, double q,
           double q_depth, bool separate, bool use_mask, bool depth_prediction, bool align,
           const std::string& intra, double eps) {
            if (images.size() != depths.size() || images.size() != valids.size() ||
                images.size() != cameras.size()) {
                throw DimensionError("encode_sequence: images, depths, valids and cameras differ in length");
            }
            std::vector<ViewInput> views;
            for (std::size_t i = 0; i < images.size(); ++i) {
                views.push_back({from_numpy(images[i], "image"), depth_from_numpy(depths[i], valids[i]), cameras[i]});
            }
            const SequenceOptions options =
                sequence_options(q, q_depth, separate, use_mask, depth_prediction, align, intra, eps);
            std::vector<ViewStreams> streams;
            {
                py::gil_scoped_release release;
                streams = encode_sequence(views, options);
            }
            py::list out;
            for (const ViewStreams& s : streams) {
                py::dict d;
                d["image_stream"] = as_bytes(s.image.serialize());
                d["depth_stream"] = as_bytes(s.depth.serialize());
                d["image"] = to_numpy(s.image_reconstruction);
                d["depth"] = to_numpy(s.depth_reconstruction.depth);
                d["valid"] = mask_to_numpy(s.depth_reconstruction.valid);
                d["bpp_image"] = s.image_rate.bpp;
                d["bpp_depth"] = s.depth_rate.bpp;
                d["psnr_image"] = s.image_rate.psnr;
                d["psnr_depth"] = s.depth_rate.psnr;
                out.append(d);
            }
            return out;
        },
        py::arg("images"), py::arg("depths"), py::arg("valids"), py::arg("cameras"), py::arg("q") = 1.0 / 32,
        py::arg("q_depth") = 1.0 / 64, py::arg("separate") = false, py::arg("use_mask") = true,
        py::arg("depth_prediction") = true, py::arg("align") = true, py::arg("intra") = "zero",
        py::arg("relative_eps") = kDefaultRelativeOcclusionEps);

    m.def(
        "decode_sequence",
        [](const std::vector<py::bytes>& image_streams, const std::vector<py::bytes>& depth_streams,
           const std::vector<CameraModel>& cameras, double eps) {
            std::vector<Bitstream> img, dep;
            for (const auto& b : image_streams) img.push_back(Bitstream::parse(from_bytes(b)));
            for (const auto& b : depth_streams) dep.push_back(Bitstream::parse(from_bytes(b)));
            const std::vector<DecodedView> views = decode_sequence(img, dep, cameras, eps);
            py::list out;
            for (const DecodedView& v : views) {
                out.append(py::make_tuple(to_numpy(v.image), to_numpy(v.depth.depth), mask_to_numpy(v.depth.valid)));
            }
            return out;
        },
        py::arg("image_streams"), py::arg("depth_streams"), py::arg("cameras"),
        py::arg("relative_eps") = kDefaultRelativeOcclusionEps);

    m.def(
        "run_ablation",
        [](std::uint64_t seed, int n_gaussians, int count, double spacing_deg, const std::vector<double>& q_list,
           double q_depth) {
            ExperimentConfig c;
            c.seed = seed;
            c.n_gaussians = n_gaussians;
            c.arc.count = count;
            c.arc.spacing_deg = spacing_deg;
            c.q_list = q_list;
            c.q_depth = q_depth;
            c.validate();
            AblationResult r;
            {
                py::gil_scoped_release release;
                r = run_ablation(c);
            }
            return py::make_tuple(r.report.to_csv(), r.report.summary());
        },
        py::arg("seed") = 1, py::arg("n_gaussians") = 4000, py::arg("count") = 8, py::arg("spacing_deg") = 10.0,
        py::arg("q_list") = std::vector<double>{1.0 / 32}, py::arg("q_depth") = 1.0 / 64,
        "Runs every ablation arm and returns (csv, summary).");
}
