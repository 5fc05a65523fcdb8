// Copyright 2026 The mvgeo Authors
// SPDX-License-Identifier: Apache-2.0

#include "mvgeo/experiment.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>
#include <stdexcept>

#include "mvgeo/io.hpp"
#include "mvgeo/rng.hpp"

namespace mvgeo {
namespace {

constexpr std::uint64_t kPresentationSalt = 0x9E3779B97F4A7C15ull;
constexpr std::uint64_t kRandomOrderSalt = 0xC2B2AE3D27D4EB4Full;

std::string fixed(double v, int digits = 6) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*f", digits, v);
    return buf;
}

// q printed exactly enough to tell sweep points apart.
std::string q_text(double q) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.9g", q);
    return buf;
}

RdRow make_row(std::string_view arm, int view, double q, std::uint64_t bits_img, std::uint64_t bits_depth,
               std::uint64_t pixels, double mse_img, double mse_depth, double depth_peak_value) {
    RdRow row;
    row.arm = std::string(arm);
    row.view = view;
    row.q = q;
    row.bits_img = bits_img;
    row.bits_depth = bits_depth;
    row.pixels = pixels;
    row.bpp_img = static_cast<double>(bits_img) / static_cast<double>(pixels);
    row.bpp_depth = static_cast<double>(bits_depth) / static_cast<double>(pixels);
    row.psnr_img = psnr_from_mse(mse_img, 1.0);
    row.psnr_depth = psnr_from_mse(mse_depth, depth_peak_value);
    return row;
}

} // namespace

OrderMode parse_order_mode(std::string_view name) {
    if (name == "sort") return OrderMode::kSort;
    if (name == "random") return OrderMode::kRandom;
    if (name == "given") return OrderMode::kGiven;
    throw DomainError("unknown order mode '" + std::string(name) + "' (expected sort, random or given)");
}

std::string_view order_mode_name(OrderMode mode) {
    switch (mode) {
        case OrderMode::kSort: return "sort";
        case OrderMode::kRandom: return "random";
        case OrderMode::kGiven: return "given";
    }
    return "sort";
}

std::string_view arm_name(Arm arm) {
    switch (arm) {
        case Arm::kSort: return "sort";
        case Arm::kSeparate: return "separate";
        case Arm::kConcatenation: return "concatenation";
        case Arm::kNoMask: return "wo_mask";
        case Arm::kNoDepPred: return "wo_dep_pred";
        case Arm::kRandom: return "random";
    }
    return "sort";
}

Arm parse_arm(std::string_view name) {
    for (Arm arm : kAllArms) {
        if (arm_name(arm) == name) return arm;
    }
    throw DomainError("unknown ablation arm '" + std::string(name) + "'");
}

void ExperimentConfig::validate() const {
    if (n_gaussians <= 0) throw DomainError("experiment: n_gaussians must be positive");
    if (arc.count < 1) throw DomainError("experiment: camera count must be at least 1");
    if (q_list.empty()) throw DomainError("experiment: q list must not be empty");
    for (double q : q_list) {
        if (!(q > 0.0) || !std::isfinite(q)) throw DomainError("experiment: every q must be positive");
    }
    if (!(q_depth > 0.0) || !std::isfinite(q_depth)) throw DomainError("experiment: q_depth must be positive");
    if (!(occlusion_eps >= 0.0) || !std::isfinite(occlusion_eps)) {
        throw DomainError("experiment: occlusion_eps must be non-negative");
    }
}

std::vector<Arm> ExperimentConfig::selected_arms() const {
    if (arms.empty()) return {std::begin(kAllArms), std::end(kAllArms)};
    std::vector<Arm> out{Arm::kSort};
    for (Arm arm : kAllArms) {
        if (arm != Arm::kSort && std::find(arms.begin(), arms.end(), arm) != arms.end()) out.push_back(arm);
    }
    return out;
}

ExperimentViews prepare_views(const ExperimentConfig& config) {
    config.validate();
    const SyntheticScene synth = synthesize_scene(config.seed, config.n_gaussians, config.bbox, config.arc);
    Rng rng(config.seed ^ kPresentationSalt);
    const std::vector<int> presented = rng.permutation(static_cast<int>(synth.cameras.size()));
    ExperimentViews out;
    for (int id : presented) {
        const CameraModel& cam = synth.cameras[id];
        RenderOutput r = render_view(synth.scene, cam);
        out.views.push_back({std::move(r.color), std::move(r.median_depth), cam});
        out.ids.push_back(id);
    }
    return out;
}

std::vector<int> coding_order(const ExperimentViews& views, OrderMode mode, MatrixNorm norm, std::uint64_t seed) {
    const int n = static_cast<int>(views.views.size());
    std::vector<CameraExtrinsics> extrinsics;
    for (const ViewInput& v : views.views) extrinsics.push_back(v.camera.extrinsics);
    // Greedy ordering starts from the view with the smallest id.
    const int start = n == 0 ? 0 : static_cast<int>(std::min_element(views.ids.begin(), views.ids.end()) - views.ids.begin());
    switch (mode) {
        case OrderMode::kGiven: {
            std::vector<int> order(n);
            for (int i = 0; i < n; ++i) order[i] = i;
            return order;
        }
        case OrderMode::kSort: return greedy_order(distance_matrix(extrinsics, norm), start);
        case OrderMode::kRandom: {
            const std::vector<int> sorted = greedy_order(distance_matrix(extrinsics, norm), start);
            std::vector<int> reversed(sorted.rbegin(), sorted.rend());
            Rng rng(seed ^ kRandomOrderSalt);
            std::vector<int> order = rng.permutation(n);
            // A random order that happens to be the sorted path is no ablation.
            for (int attempt = 0; attempt < 64 && n > 2 && (order == sorted || order == reversed); ++attempt) {
                order = rng.permutation(n);
            }
            return order;
        }
    }
    return {};
}

SequenceOptions arm_options(Arm arm, const ExperimentConfig& config, double q) {
    SequenceOptions o;
    o.q = q;
    o.q_depth = config.q_depth;
    o.occlusion_eps = config.occlusion_eps;
    o.tools.intra = config.intra;
    switch (arm) {
        case Arm::kSeparate: o.separate = true; break;
        case Arm::kConcatenation: o.tools.align = false; break;
        case Arm::kNoMask: o.tools.use_mask = false; break;
        case Arm::kNoDepPred: o.depth_prediction = false; break;
        case Arm::kSort:
        case Arm::kRandom: break;
    }
    return o;
}

AblationResult run_ablation(const ExperimentConfig& config) {
    AblationResult result;
    result.views = prepare_views(config);
    const std::vector<int> main_order = coding_order(result.views, config.order, config.norm, config.seed);
    const std::vector<int> random_order = coding_order(result.views, OrderMode::kRandom, config.norm, config.seed);

    for (double q : config.q_list) {
        for (Arm arm : config.selected_arms()) {
            ArmRun run;
            run.arm = arm;
            run.q = q;
            run.order = arm == Arm::kRandom ? random_order : main_order;
            run.options = arm_options(arm, config, q);
            std::vector<ViewInput> ordered;
            for (int i : run.order) ordered.push_back(result.views.views[i]);
            run.streams = encode_sequence(ordered, run.options);

            std::uint64_t bits_img = 0, bits_depth = 0, pixels = 0;
            double sq_img = 0.0, sq_depth = 0.0, peak = 0.0;
            std::uint64_t n_img = 0, n_depth = 0;
            std::vector<RdRow> per_view;
            for (std::size_t k = 0; k < ordered.size(); ++k) {
                const ViewInput& in = ordered[k];
                const ViewStreams& vs = run.streams[k];
                const std::uint64_t px = static_cast<std::uint64_t>(in.image.width()) * in.image.height();
                std::uint64_t valid = 0;
                for (std::uint8_t v : in.depth.valid.data()) valid += v ? 1 : 0;
                per_view.push_back(make_row(arm_name(arm), result.views.ids[run.order[k]], q, vs.image.size_bits(),
                                            vs.depth.size_bits(), px, vs.image_rate.mse, vs.depth_rate.mse,
                                            depth_peak(in.depth)));
                bits_img += vs.image.size_bits();
                bits_depth += vs.depth.size_bits();
                pixels += px;
                sq_img += vs.image_rate.mse * static_cast<double>(in.image.size());
                n_img += in.image.size();
                sq_depth += vs.depth_rate.mse * static_cast<double>(valid);
                n_depth += valid;
                if (valid > 0) peak = std::max(peak, depth_peak(in.depth));
            }
            std::sort(per_view.begin(), per_view.end(), [](const RdRow& a, const RdRow& b) { return a.view < b.view; });
            result.report.rows.insert(result.report.rows.end(), per_view.begin(), per_view.end());
            result.report.rows.push_back(make_row(arm_name(arm), -1, q, bits_img, bits_depth, pixels,
                                                  n_img ? sq_img / static_cast<double>(n_img) : 0.0,
                                                  n_depth ? sq_depth / static_cast<double>(n_depth) : 0.0,
                                                  peak > 0.0 ? peak : 1.0));
            result.runs.push_back(std::move(run));
        }
    }
    return result;
}

std::string RdReport::to_csv() const {
    std::ostringstream out;
    out << "arm,view,q,bpp_img,bpp_depth,psnr_img,psnr_depth\n";
    for (const RdRow& r : rows) {
        out << r.arm << ',' << (r.view < 0 ? std::string("all") : std::to_string(r.view)) << ',' << q_text(r.q) << ','
            << fixed(r.bpp_img) << ',' << fixed(r.bpp_depth) << ',' << fixed(r.psnr_img, 4) << ','
            << fixed(r.psnr_depth, 4) << '\n';
    }
    return out.str();
}

const RdRow& RdReport::aggregate(std::string_view arm, double q) const {
    for (const RdRow& r : rows) {
        if (r.view < 0 && r.arm == arm && r.q == q) return r;
    }
    throw std::out_of_range("no aggregate row for arm '" + std::string(arm) + "' at q " + q_text(q));
}

std::string RdReport::summary() const {
    std::vector<double> qs;
    for (const RdRow& r : rows) {
        if (r.view < 0 && std::find(qs.begin(), qs.end(), r.q) == qs.end()) qs.push_back(r.q);
    }
    std::ostringstream out;
    for (double q : qs) {
        const RdRow* base = nullptr;
        for (const RdRow& r : rows) {
            if (r.view < 0 && r.q == q && r.arm == arm_name(Arm::kSort)) base = &r;
        }
        out << "q = " << q_text(q) << "\n";
        out << "  arm              bpp_img   bpp_depth  bpp_total  psnr_img  psnr_depth  vs sort\n";
        for (const RdRow& r : rows) {
            if (r.view >= 0 || r.q != q) continue;
            char line[256];
            std::string delta = "-";
            if (base && &r != base && base->bpp_total() > 0.0) {
                delta = (r.bpp_total() >= base->bpp_total() ? "+" : "") +
                        fixed(100.0 * (r.bpp_total() / base->bpp_total() - 1.0), 2) + "%";
            }
            std::snprintf(line, sizeof line, "  %-15s %9.4f %11.4f %10.4f %9.3f %11.3f  %s\n", r.arm.c_str(), r.bpp_img,
                          r.bpp_depth, r.bpp_total(), r.psnr_img, r.psnr_depth, delta.c_str());
            out << line;
        }
    }
    return out.str();
}

void write_ablation_streams(const AblationResult& result, const ExperimentConfig& config,
                            const std::filesystem::path& dir) {
    std::vector<double> qs;
    for (const ArmRun& run : result.runs) {
        if (std::find(qs.begin(), qs.end(), run.q) == qs.end()) qs.push_back(run.q);
    }
    for (const ArmRun& run : result.runs) {
        const auto qi = std::find(qs.begin(), qs.end(), run.q) - qs.begin();
        const std::filesystem::path sub = dir / std::string(arm_name(run.arm)) / ("q" + std::to_string(qi));
        std::filesystem::create_directories(sub);
        Manifest manifest;
        manifest.q = run.options.q;
        manifest.q_depth = run.options.q_depth;
        manifest.occlusion_eps = config.occlusion_eps;
        for (std::size_t k = 0; k < run.order.size(); ++k) {
            const int idx = run.order[k];
            const int id = result.views.ids[idx];
            const std::string stem = std::to_string(k) + "_" + std::to_string(id);
            ManifestView mv;
            mv.id = id;
            mv.image_stream = stem + ".img.mvgc";
            mv.depth_stream = stem + ".depth.mvgc";
            mv.camera = result.views.views[idx].camera;
            write_file_bytes(sub / mv.image_stream, run.streams[k].image.serialize());
            write_file_bytes(sub / mv.depth_stream, run.streams[k].depth.serialize());
            manifest.views.push_back(std::move(mv));
        }
        write_manifest(sub / "manifest.json", manifest);
    }
}

AlignmentScore alignment_score(const Image& target, const Image& reference, const DisparityMap& disparity,
                               const MaskMap& region) {
    const Image warped = warp(reference, disparity);
    AlignmentScore s;
    for (std::uint8_t v : region.data()) s.pixels += v ? 1 : 0;
    s.psnr_warped = psnr(target, warped, 1.0, &region);
    s.psnr_unwarped = psnr(target, reference, 1.0, &region);
    return s;
}

} // namespace mvgeo
