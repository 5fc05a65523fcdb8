// Copyright 2026 The mvgeo Authors
// SPDX-License-Identifier: Apache-2.0

// mvgeo command-line tool.

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <map>
#include <numeric>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "mvgeo/codec.hpp"
#include "mvgeo/depth_prediction.hpp"
#include "mvgeo/disparity.hpp"
#include "mvgeo/experiment.hpp"
#include "mvgeo/gaussian_scene.hpp"
#include "mvgeo/io.hpp"
#include "mvgeo/metrics.hpp"
#include "mvgeo/view_ordering.hpp"

namespace fs = std::filesystem;
using namespace mvgeo;

namespace {

std::string view_stem(int id) { return "view_" + std::to_string(id); }

// Camera set with lookup by id.
struct Cameras {
    CameraSet set;

    const CameraModel& by_id(int id, const std::string& what) const {
        for (std::size_t i = 0; i < set.ids.size(); ++i) {
            if (set.ids[i] == id) return set.cameras[i];
        }
        throw ParseError("no camera with id " + std::to_string(id) + " (" + what + ")");
    }

    // Indices sorted by id.
    std::vector<int> id_order() const {
        std::vector<int> idx(set.ids.size());
        std::iota(idx.begin(), idx.end(), 0);
        std::stable_sort(idx.begin(), idx.end(), [&](int a, int b) { return set.ids[a] < set.ids[b]; });
        return idx;
    }
};

Cameras load_cameras(const std::string& path) {
    Cameras c{read_cameras(path)};
    std::vector<int> ids = c.set.ids;
    std::sort(ids.begin(), ids.end());
    if (std::adjacent_find(ids.begin(), ids.end()) != ids.end()) throw ParseError(path + ": duplicate camera id");
    return c;
}

std::string json_int_list(const std::vector<int>& v) {
    std::string s = "[";
    for (std::size_t i = 0; i < v.size(); ++i) s += (i ? ", " : "") + std::to_string(v[i]);
    return s + "]";
}

std::string number_text(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

// --- shared codec option block ------------------------------------------------

struct CodecFlags {
    double q = 1.0 / 32.0;
    double q_depth = 1.0 / 64.0;
    double eps = kAblationOcclusionEps;
    bool separate = false;
    bool no_mask = false;
    bool no_dep_pred = false;
    bool concat = false;
    std::string intra = "zero";

    void add(CLI::App* cmd) {
        cmd->add_option("--q", q, "image quantizer step")->check(CLI::PositiveNumber);
        cmd->add_option("--q-depth", q_depth, "depth quantizer step")->check(CLI::PositiveNumber);
        cmd->add_option("--eps", eps, "relative occlusion slack")->check(CLI::NonNegativeNumber);
        cmd->add_flag("--separate", separate, "code every plane without cross-view prediction");
        cmd->add_flag("--no-mask", no_mask, "apply prediction everywhere, no mask context");
        cmd->add_flag("--no-dep-pred", no_dep_pred, "code depth maps intra");
        cmd->add_flag("--concat", concat, "use the reference without alignment");
        cmd->add_option("--intra", intra, "intra predictor")->check(CLI::IsMember({"zero", "spatial"}));
    }

    SequenceOptions options() const {
        SequenceOptions o;
        o.q = q;
        o.q_depth = q_depth;
        o.occlusion_eps = eps;
        o.separate = separate;
        o.depth_prediction = !no_dep_pred;
        o.tools.use_mask = !no_mask;
        o.tools.align = !concat;
        o.tools.intra = intra == "spatial" ? IntraPredictor::kSpatial : IntraPredictor::kZero;
        return o;
    }
};

// --- subcommands --------------------------------------------------------------

struct SynthArgs {
    std::uint64_t seed = 1;
    int n_gaussians = 4000;
    int count = 8;
    double spacing = 10.0;
    double radius = 4.0;
    int size = 64;
    bool two_wall = false;
    std::string out_dir;
};

int run_synth(const SynthArgs& a) {
    fs::create_directories(a.out_dir);
    SyntheticScene s;
    if (a.two_wall) {
        TwoWallSpec spec;
        spec.width = spec.height = a.size;
        spec.focal = a.size;
        s = two_wall_scene(a.seed, spec);
    } else {
        CameraArc arc;
        arc.count = a.count;
        arc.spacing_deg = a.spacing;
        arc.radius = a.radius;
        arc.width = arc.height = a.size;
        arc.focal = a.size;
        s = synthesize_scene(a.seed, a.n_gaussians, BoundingBox{}, arc);
    }
    CameraSet set{s.cameras, {}};
    for (std::size_t i = 0; i < s.cameras.size(); ++i) set.ids.push_back(static_cast<int>(i));
    write_scene(fs::path(a.out_dir) / "scene.json", s.scene);
    write_cameras(fs::path(a.out_dir) / "cameras.json", set);
    std::cout << "wrote " << s.scene.gaussians.size() << " gaussians and " << s.cameras.size() << " cameras to "
              << a.out_dir << "\n";
    return 0;
}

struct RenderArgs {
    std::string scene, cameras, out_dir;
    bool weighted = false;
};

int run_render(const RenderArgs& a) {
    const GaussianScene scene = read_scene(a.scene);
    const Cameras cams = load_cameras(a.cameras);
    fs::create_directories(a.out_dir);
    for (int i : cams.id_order()) {
        const int id = cams.set.ids[i];
        const RenderOutput r = render_view(scene, cams.set.cameras[i]);
        const fs::path base = fs::path(a.out_dir) / view_stem(id);
        write_p6(base.string() + ".ppm", r.color);
        write_mvfd(base.string() + ".image.mvfd", PlaneKind::kImage, r.color);
        write_depth(base.string() + ".depth.mvfd", r.median_depth);
        if (a.weighted) write_depth(base.string() + ".weighted.mvfd", r.weighted_depth);
        std::size_t covered = 0;
        for (std::uint8_t v : r.coverage.data()) covered += v;
        std::cout << "view " << id << ": " << covered << " of " << r.coverage.size() << " pixels covered\n";
    }
    return 0;
}

struct PairArgs {
    std::string depth, ref_depth, cameras, out, projected;
    int target = 0;
    int reference = 0;
    double eps = kDefaultRelativeOcclusionEps;
};

int run_disparity(const PairArgs& a) {
    const Cameras cams = load_cameras(a.cameras);
    const DepthMap depth = read_depth(a.depth);
    const DisparityResult r =
        estimate_disparity(depth, cams.by_id(a.target, "--target"), cams.by_id(a.reference, "--reference"));
    write_disparity(a.out, r.disparity);
    if (!a.projected.empty()) write_depth(a.projected, r.projected_depth);
    return 0;
}

int run_mask(const PairArgs& a) {
    const Cameras cams = load_cameras(a.cameras);
    const DepthMap depth = read_depth(a.depth);
    const DepthMap ref_depth = read_depth(a.ref_depth);
    const DisparityAndMask dm = disparity_and_mask(depth, ref_depth, cams.by_id(a.target, "--target"),
                                                   cams.by_id(a.reference, "--reference"), a.eps);
    write_mask(a.out, dm.mask);
    std::size_t on = 0;
    for (std::uint8_t v : dm.mask.data()) on += v;
    std::cout << "mask: " << on << " of " << dm.mask.size() << " pixels, absolute eps " << number_text(dm.occlusion_eps)
              << "\n";
    return 0;
}

int run_cvdp(const PairArgs& a) {
    const Cameras cams = load_cameras(a.cameras);
    const DepthMap ref_depth = read_depth(a.ref_depth);
    const DepthPrediction p =
        cvdp(ref_depth, cams.by_id(a.reference, "--reference"), cams.by_id(a.target, "--target"));
    DepthMap out;
    out.depth = p.depth;
    out.valid = p.hit;
    write_depth(a.out, out);
    if (!a.projected.empty()) write_mask(a.projected, p.hit);
    return 0;
}

struct OrderArgs {
    std::string cameras, out, matrix, norm = "frobenius";
    bool best_start = false;
    int start = -1;
};

int run_order(const OrderArgs& a) {
    const Cameras cams = load_cameras(a.cameras);
    const std::vector<int> by_id = cams.id_order();
    std::vector<CameraExtrinsics> ext;
    for (int i : by_id) ext.push_back(cams.set.cameras[i].extrinsics);
    const DistanceMatrix d = distance_matrix(ext, parse_norm(a.norm));
    std::vector<int> order;
    if (a.best_start) {
        order = best_start_order(d);
    } else {
        int start = 0;
        if (a.start >= 0) {
            auto it = std::find_if(by_id.begin(), by_id.end(), [&](int i) { return cams.set.ids[i] == a.start; });
            if (it == by_id.end()) throw ParseError("--start: no camera with id " + std::to_string(a.start));
            start = static_cast<int>(it - by_id.begin());
        }
        order = greedy_order(d, start);
    }
    std::vector<int> ids;
    for (int k : order) ids.push_back(cams.set.ids[by_id[k]]);
    const std::string text = json_int_list(ids);
    std::cout << text << "\n";
    if (!a.out.empty()) write_text_file(a.out, text + "\n");
    if (!a.matrix.empty()) {
        std::ostringstream csv;
        csv << "id";
        for (int i : by_id) csv << ',' << cams.set.ids[i];
        csv << '\n';
        for (std::size_t r = 0; r < by_id.size(); ++r) {
            csv << cams.set.ids[by_id[r]];
            for (std::size_t c = 0; c < by_id.size(); ++c) csv << ',' << number_text(d(r, c));
            csv << '\n';
        }
        write_text_file(a.matrix, csv.str());
    }
    return 0;
}

struct EncodeArgs {
    std::string cameras, inputs, out_dir, order = "sort";
    CodecFlags codec;
    bool write_recon = false;
};

int run_encode(const EncodeArgs& a) {
    const Cameras cams = load_cameras(a.cameras);
    std::vector<int> idx = cams.id_order();
    if (a.order == "sort") {
        std::vector<CameraExtrinsics> ext;
        for (int i : idx) ext.push_back(cams.set.cameras[i].extrinsics);
        const std::vector<int> g = greedy_order(distance_matrix(ext), 0);
        std::vector<int> sorted;
        for (int k : g) sorted.push_back(idx[k]);
        idx = sorted;
    } else if (a.order == "given") {
        std::iota(idx.begin(), idx.end(), 0);
    }
    std::vector<ViewInput> views;
    for (int i : idx) {
        const fs::path base = fs::path(a.inputs) / view_stem(cams.set.ids[i]);
        fs::path image_path = base.string() + ".image.mvfd";
        if (!fs::exists(image_path)) image_path = base.string() + ".ppm";
        ViewInput v{read_image(image_path), read_depth(base.string() + ".depth.mvfd"), cams.set.cameras[i]};
        require_same_shape(v.camera.width(), v.camera.height(), v.image.width(), v.image.height(),
                           image_path.string());
        require_same_shape(v.camera.width(), v.camera.height(), v.depth.width(), v.depth.height(),
                           base.string() + ".depth.mvfd");
        views.push_back(std::move(v));
    }
    const SequenceOptions options = a.codec.options();
    const std::vector<ViewStreams> streams = encode_sequence(views, options);

    fs::create_directories(a.out_dir);
    Manifest manifest;
    manifest.q = options.q;
    manifest.q_depth = options.q_depth;
    manifest.occlusion_eps = options.occlusion_eps;
    std::uint64_t bits = 0, pixels = 0;
    for (std::size_t k = 0; k < idx.size(); ++k) {
        const int id = cams.set.ids[idx[k]];
        ManifestView mv{id, view_stem(id) + ".img.mvgc", view_stem(id) + ".depth.mvgc", views[k].camera};
        write_file_bytes(fs::path(a.out_dir) / mv.image_stream, streams[k].image.serialize());
        write_file_bytes(fs::path(a.out_dir) / mv.depth_stream, streams[k].depth.serialize());
        if (a.write_recon) {
            const fs::path base = fs::path(a.out_dir) / (view_stem(id) + ".recon");
            write_mvfd(base.string() + ".image.mvfd", PlaneKind::kImage, streams[k].image_reconstruction);
            write_depth(base.string() + ".depth.mvfd", streams[k].depth_reconstruction);
        }
        bits += streams[k].image.size_bits() + streams[k].depth.size_bits();
        pixels += static_cast<std::uint64_t>(views[k].image.width()) * views[k].image.height();
        std::printf("view %d: image %.4f bpp %.2f dB, depth %.4f bpp %.2f dB\n", id, streams[k].image_rate.bpp,
                    streams[k].image_rate.psnr, streams[k].depth_rate.bpp, streams[k].depth_rate.psnr);
        manifest.views.push_back(std::move(mv));
    }
    write_manifest(fs::path(a.out_dir) / "manifest.json", manifest);
    std::printf("total: %.4f bpp over %zu views\n", static_cast<double>(bits) / static_cast<double>(pixels), idx.size());
    return 0;
}

struct DecodeArgs {
    std::string manifest, out_dir;
};

int run_decode(const DecodeArgs& a) {
    const Manifest m = read_manifest(a.manifest);
    const fs::path dir = fs::path(a.manifest).parent_path();
    std::vector<Bitstream> images, depths;
    std::vector<CameraModel> cameras;
    for (const ManifestView& v : m.views) {
        const fs::path ip = dir / v.image_stream;
        const fs::path dp = dir / v.depth_stream;
        try {
            images.push_back(Bitstream::parse(read_file_bytes(ip)));
        } catch (const DecodeError& e) {
            throw DecodeError(ip.string() + ": " + e.what());
        }
        try {
            depths.push_back(Bitstream::parse(read_file_bytes(dp)));
        } catch (const DecodeError& e) {
            throw DecodeError(dp.string() + ": " + e.what());
        }
        cameras.push_back(v.camera);
    }
    const std::vector<DecodedView> out = decode_sequence(images, depths, cameras, m.occlusion_eps);
    fs::create_directories(a.out_dir);
    for (std::size_t k = 0; k < out.size(); ++k) {
        const fs::path base = fs::path(a.out_dir) / view_stem(m.views[k].id);
        write_mvfd(base.string() + ".image.mvfd", PlaneKind::kImage, out[k].image);
        write_p6(base.string() + ".ppm", out[k].image);
        write_depth(base.string() + ".depth.mvfd", out[k].depth);
    }
    std::cout << "decoded " << out.size() << " views to " << a.out_dir << "\n";
    return 0;
}

struct EvalArgs {
    std::string a, b, mask;
    double peak = 0.0;
};

// Loads a plane for eval: P6 or any MVFD kind. Depth planes carry validity.
struct EvalPlane {
    Plane<float> plane;
    bool is_depth = false;
    MaskMap valid;
};

EvalPlane load_eval_plane(const std::string& path) {
    const std::vector<std::uint8_t> bytes = read_file_bytes(path);
    EvalPlane out;
    if (bytes.size() >= 2 && bytes[0] == 'P' && bytes[1] == '6') {
        out.plane = decode_p6(bytes, path);
        return out;
    }
    MvfdPlane p = parse_mvfd(bytes, path);
    if (p.kind == PlaneKind::kDepth) {
        out.is_depth = true;
        out.valid = depth_from_plane(p.plane).valid;
    }
    out.plane = std::move(p.plane);
    return out;
}

int run_eval(const EvalArgs& args) {
    const EvalPlane a = load_eval_plane(args.a);
    const EvalPlane b = load_eval_plane(args.b);
    if (a.plane.width() != b.plane.width() || a.plane.height() != b.plane.height() ||
        a.plane.channels() != b.plane.channels()) {
        throw DimensionError(args.b + ": shape differs from " + args.a);
    }
    std::optional<MaskMap> mask;
    if (!args.mask.empty()) {
        mask = read_mask(args.mask);
    } else if (a.is_depth) {
        mask = a.valid;
    }
    double peak = args.peak;
    if (!(peak > 0.0)) peak = a.is_depth ? depth_peak(depth_from_plane(a.plane)) : 1.0;
    const MaskMap* m = mask ? &*mask : nullptr;
    const double e = mse(a.plane, b.plane, m);
    std::cout << "{\"mse\": " << number_text(e) << ", \"psnr\": " << number_text(psnr_from_mse(e, peak))
              << ", \"max_abs\": " << number_text(max_abs_error(a.plane, b.plane, m)) << ", \"peak\": "
              << number_text(peak) << "}\n";
    return 0;
}

struct AblateArgs {
    std::uint64_t seed = 1;
    int n_gaussians = 4000;
    int count = 8;
    double spacing = 10.0;
    double radius = 4.0;
    std::vector<double> q{1.0 / 32.0};
    double q_depth = 1.0 / 64.0;
    double eps = kAblationOcclusionEps;
    std::string norm = "frobenius", order = "sort", intra = "zero";
    bool separate = false, no_mask = false, no_dep_pred = false, concat = false, random_order = false;
    std::string csv, summary, streams;
};

int run_ablate(const AblateArgs& a) {
    ExperimentConfig c;
    c.seed = a.seed;
    c.n_gaussians = a.n_gaussians;
    c.arc.count = a.count;
    c.arc.spacing_deg = a.spacing;
    c.arc.radius = a.radius;
    c.q_list = a.q;
    c.q_depth = a.q_depth;
    c.occlusion_eps = a.eps;
    c.norm = parse_norm(a.norm);
    c.order = parse_order_mode(a.order);
    c.intra = a.intra == "spatial" ? IntraPredictor::kSpatial : IntraPredictor::kZero;
    if (a.separate) c.arms.push_back(Arm::kSeparate);
    if (a.concat) c.arms.push_back(Arm::kConcatenation);
    if (a.no_mask) c.arms.push_back(Arm::kNoMask);
    if (a.no_dep_pred) c.arms.push_back(Arm::kNoDepPred);
    if (a.random_order) c.arms.push_back(Arm::kRandom);
    const AblationResult r = run_ablation(c);
    const std::string csv = r.report.to_csv();
    if (a.csv.empty()) {
        std::cout << csv;
    } else {
        write_text_file(a.csv, csv);
    }
    const std::string summary = r.report.summary();
    if (a.summary.empty()) {
        (a.csv.empty() ? std::cerr : std::cout) << summary;
    } else {
        write_text_file(a.summary, summary);
    }
    if (!a.streams.empty()) write_ablation_streams(r, c, a.streams);
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"mvgeo: geometry-guided multi-view image and depth coding toolkit"};
    app.require_subcommand(1);

    SynthArgs synth;
    auto* s = app.add_subcommand("synth", "synthesize a Gaussian scene and a camera arc");
    s->add_option("--seed", synth.seed);
    s->add_option("--n-gaussians", synth.n_gaussians)->check(CLI::PositiveNumber);
    s->add_option("--count", synth.count)->check(CLI::PositiveNumber);
    s->add_option("--spacing", synth.spacing, "arc spacing in degrees");
    s->add_option("--radius", synth.radius)->check(CLI::PositiveNumber);
    s->add_option("--size", synth.size, "image width and height")->check(CLI::PositiveNumber);
    s->add_flag("--two-wall", synth.two_wall, "two-wall occlusion scene with a stereo pair");
    s->add_option("--out-dir", synth.out_dir)->required();

    RenderArgs render;
    auto* r = app.add_subcommand("render", "render color and depth planes");
    r->add_option("--scene", render.scene)->required()->check(CLI::ExistingFile);
    r->add_option("--cameras", render.cameras)->required()->check(CLI::ExistingFile);
    r->add_option("--out-dir", render.out_dir)->required();
    r->add_flag("--weighted", render.weighted, "also write weighted-average depth");

    PairArgs disp;
    auto* d = app.add_subcommand("disparity", "per-pixel disparity from a target depth map");
    d->add_option("--depth", disp.depth, "target depth (MVFD)")->required()->check(CLI::ExistingFile);
    d->add_option("--cameras", disp.cameras)->required()->check(CLI::ExistingFile);
    d->add_option("--target", disp.target, "target camera id")->required();
    d->add_option("--reference", disp.reference, "reference camera id")->required();
    d->add_option("--out", disp.out)->required();
    d->add_option("--projected", disp.projected, "write the depth seen by the reference camera");

    PairArgs mask;
    auto* m = app.add_subcommand("mask", "occlusion mask between a target and a reference view");
    m->add_option("--depth", mask.depth, "target depth (MVFD)")->required()->check(CLI::ExistingFile);
    m->add_option("--ref-depth", mask.ref_depth, "reference depth (MVFD)")->required()->check(CLI::ExistingFile);
    m->add_option("--cameras", mask.cameras)->required()->check(CLI::ExistingFile);
    m->add_option("--target", mask.target)->required();
    m->add_option("--reference", mask.reference)->required();
    m->add_option("--eps", mask.eps, "relative occlusion slack")->check(CLI::NonNegativeNumber);
    m->add_option("--out", mask.out)->required();

    PairArgs pred;
    auto* p = app.add_subcommand("cvdp", "forward-splat a reference depth map into a target view");
    p->add_option("--ref-depth", pred.ref_depth)->required()->check(CLI::ExistingFile);
    p->add_option("--cameras", pred.cameras)->required()->check(CLI::ExistingFile);
    p->add_option("--reference", pred.reference)->required();
    p->add_option("--target", pred.target)->required();
    p->add_option("--out", pred.out)->required();
    p->add_option("--hit", pred.projected, "write the hit mask");

    OrderArgs order;
    auto* o = app.add_subcommand("order", "greedy coding order from camera poses");
    o->add_option("--cameras", order.cameras)->required()->check(CLI::ExistingFile);
    o->add_option("--norm", order.norm)->check(CLI::IsMember({"frobenius", "spectral"}));
    o->add_option("--start", order.start, "start camera id (default: smallest id)");
    o->add_flag("--best-start", order.best_start, "try every start, keep the shortest path");
    o->add_option("--out", order.out, "write the ordered ids as JSON");
    o->add_option("--matrix", order.matrix, "write the distance matrix as CSV");

    EncodeArgs enc;
    auto* e = app.add_subcommand("encode", "code a sequence of views");
    e->add_option("--cameras", enc.cameras)->required()->check(CLI::ExistingFile);
    e->add_option("--inputs", enc.inputs, "directory with view_<id>.image.mvfd|.ppm and view_<id>.depth.mvfd")
        ->required()
        ->check(CLI::ExistingDirectory);
    e->add_option("--out-dir", enc.out_dir)->required();
    e->add_option("--order", enc.order)->check(CLI::IsMember({"sort", "id", "given"}));
    e->add_flag("--write-recon", enc.write_recon, "write encoder-side reconstructions");
    enc.codec.add(e);

    DecodeArgs dec;
    auto* de = app.add_subcommand("decode", "decode a coded sequence");
    de->add_option("--manifest", dec.manifest)->required()->check(CLI::ExistingFile);
    de->add_option("--out-dir", dec.out_dir)->required();

    EvalArgs ev;
    auto* v = app.add_subcommand("eval", "MSE and PSNR between two planes");
    v->add_option("a", ev.a)->required()->check(CLI::ExistingFile);
    v->add_option("b", ev.b)->required()->check(CLI::ExistingFile);
    v->add_option("--mask", ev.mask)->check(CLI::ExistingFile);
    v->add_option("--peak", ev.peak, "PSNR peak (default 1, or the largest valid depth)");

    AblateArgs ab;
    auto* a = app.add_subcommand("ablate", "ablation study on a synthesized scene");
    a->add_option("--seed", ab.seed);
    a->add_option("--n-gaussians", ab.n_gaussians)->check(CLI::PositiveNumber);
    a->add_option("--count", ab.count)->check(CLI::PositiveNumber);
    a->add_option("--spacing", ab.spacing);
    a->add_option("--radius", ab.radius)->check(CLI::PositiveNumber);
    a->add_option("--q", ab.q, "image quantizer steps (sweep)")->check(CLI::PositiveNumber);
    a->add_option("--q-depth", ab.q_depth)->check(CLI::PositiveNumber);
    a->add_option("--eps", ab.eps, "relative occlusion slack")->check(CLI::NonNegativeNumber);
    a->add_option("--norm", ab.norm)->check(CLI::IsMember({"frobenius", "spectral"}));
    a->add_option("--order", ab.order)->check(CLI::IsMember({"sort", "random", "given"}));
    a->add_option("--intra", ab.intra)->check(CLI::IsMember({"zero", "spatial"}));
    a->add_flag("--separate", ab.separate);
    a->add_flag("--no-mask", ab.no_mask);
    a->add_flag("--no-dep-pred", ab.no_dep_pred);
    a->add_flag("--concat", ab.concat);
    a->add_flag("--random-order", ab.random_order);
    a->add_option("--csv", ab.csv, "CSV output (default stdout)");
    a->add_option("--summary", ab.summary, "summary output");
    a->add_option("--streams", ab.streams, "directory for the coded streams");

    CLI11_PARSE(app, argc, argv);

    const std::string name = app.get_subcommands().front()->get_name();
    try {
        if (*s) return run_synth(synth);
        if (*r) return run_render(render);
        if (*d) return run_disparity(disp);
        if (*m) return run_mask(mask);
        if (*p) return run_cvdp(pred);
        if (*o) return run_order(order);
        if (*e) return run_encode(enc);
        if (*de) return run_decode(dec);
        if (*v) return run_eval(ev);
        if (*a) return run_ablate(ab);
    } catch (const std::exception& ex) {
        std::cerr << "mvgeo " << name << ": error: " << ex.what() << "\n";
        return 1;
    }
    return 0;
}
