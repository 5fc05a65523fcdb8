// Copyright 2026 The mvgeo Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "mvgeo/codec.hpp"
#include "mvgeo/gaussian_scene.hpp"
#include "mvgeo/view_ordering.hpp"

namespace mvgeo {

inline constexpr double kAblationOcclusionEps = 2e-2;

enum class OrderMode { kSort, kRandom, kGiven };

OrderMode parse_order_mode(std::string_view name);
std::string_view order_mode_name(OrderMode mode);

/// Ablation arms.
enum class Arm {
    kSort,           ///< full pipeline, views in greedy distance order
    kSeparate,       ///< every plane intra coded
    kConcatenation,  ///< reference used without alignment (zero disparity)
    kNoMask,         ///< prediction applied everywhere, no mask context
    kNoDepPred,      ///< depth maps intra coded
    kRandom,         ///< full pipeline, random view order
};

inline constexpr Arm kAllArms[] = {Arm::kSort,     Arm::kSeparate,  Arm::kConcatenation,
                                   Arm::kNoMask,   Arm::kNoDepPred, Arm::kRandom};

std::string_view arm_name(Arm arm);
Arm parse_arm(std::string_view name);

struct ExperimentConfig {
    std::uint64_t seed = 1;
    int n_gaussians = 4000;
    BoundingBox bbox{};
    CameraArc arc{};
    std::vector<double> q_list{1.0 / 32.0};
    double q_depth = 1.0 / 64.0;
    /// Arms to run besides the reference arm (sort); empty runs every arm.
    std::vector<Arm> arms;
    OrderMode order = OrderMode::kSort;  ///< order used by the reference arm
    /// Relative occlusion slack; rendered median depths jitter by a few percent
    /// between views, so the ablation uses a wider slack than the library.
    double occlusion_eps = kAblationOcclusionEps;
    MatrixNorm norm = MatrixNorm::kFrobenius;
    IntraPredictor intra = IntraPredictor::kZero;

    /// Throws DomainError on an empty or non-positive q list, count < 1, etc.
    void validate() const;
    std::vector<Arm> selected_arms() const;
};

/// Rendered views of a synthesized scene, in the order presented to the
/// coder (a seeded shuffle of the arc) with their arc positions as ids.
struct ExperimentViews {
    std::vector<ViewInput> views;
    std::vector<int> ids;
};

ExperimentViews prepare_views(const ExperimentConfig& config);

/// Coding order (indices into prepared views) for an order mode.
std::vector<int> coding_order(const ExperimentViews& views, OrderMode mode, MatrixNorm norm, std::uint64_t seed);

struct RdRow {
    std::string arm;
    int view = -1;  ///< view id, -1 for the aggregate row
    double q = 0.0;
    double bpp_img = 0.0;
    double bpp_depth = 0.0;
    double psnr_img = 0.0;
    double psnr_depth = 0.0;
    std::uint64_t bits_img = 0;
    std::uint64_t bits_depth = 0;
    std::uint64_t pixels = 0;

    double bpp_total() const { return bpp_img + bpp_depth; }
};

struct RdReport {
    std::vector<RdRow> rows;

    /// Header: arm,view,q,bpp_img,bpp_depth,psnr_img,psnr_depth; aggregate rows use view "all".
    std::string to_csv() const;
    /// Aggregate row of an arm at a q; throws std::out_of_range when absent.
    const RdRow& aggregate(std::string_view arm, double q) const;
    /// Human-readable table of aggregate bpp and deltas against the sort arm.
    std::string summary() const;
};

struct ArmRun {
    Arm arm = Arm::kSort;
    double q = 0.0;
    std::vector<int> order;  ///< indices into the prepared views
    std::vector<ViewStreams> streams;
    SequenceOptions options;
};

struct AblationResult {
    ExperimentViews views;
    std::vector<ArmRun> runs;
    RdReport report;
};

SequenceOptions arm_options(Arm arm, const ExperimentConfig& config, double q);
AblationResult run_ablation(const ExperimentConfig& config);

/// Writes each run's streams as <dir>/<arm>/q<k>/<pos>_<id>.{img,depth}.mvgc
/// plus a manifest.json per run.
void write_ablation_streams(const AblationResult& result, const ExperimentConfig& config,
                            const std::filesystem::path& dir);

/// PSNR of the reference warped into the target and of the unwarped
/// reference, both over the same pixel selection.
struct AlignmentScore {
    double psnr_warped = 0.0;
    double psnr_unwarped = 0.0;
    std::size_t pixels = 0;
};

AlignmentScore alignment_score(const Image& target, const Image& reference, const DisparityMap& disparity,
                               const MaskMap& region);

} // namespace mvgeo
