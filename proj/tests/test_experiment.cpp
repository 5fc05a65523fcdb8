// Copyright 2026 The mvgeo Authors
// SPDX-License-Identifier: Apache-2.0

#include <gtest/gtest.h>

#include <algorithm>
#include <filesystem>
#include <numeric>
#include <sstream>

#include "mvgeo/experiment.hpp"
#include "mvgeo/io.hpp"

namespace mvgeo {
namespace {

namespace fs = std::filesystem;

ExperimentConfig small_config(std::uint64_t seed = 3) {
    ExperimentConfig c;
    c.seed = seed;
    c.n_gaussians = 1500;
    c.arc.count = 4;
    c.arc.width = c.arc.height = 48;
    c.arc.focal = 48;
    return c;
}

TEST(Names, ArmsAndOrders) {
    std::vector<std::string> names;
    for (Arm a : kAllArms) {
        names.emplace_back(arm_name(a));
        EXPECT_EQ(parse_arm(arm_name(a)), a);
    }
    EXPECT_EQ(names, (std::vector<std::string>{"sort", "separate", "concatenation", "wo_mask", "wo_dep_pred", "random"}));
    for (OrderMode m : {OrderMode::kSort, OrderMode::kRandom, OrderMode::kGiven}) {
        EXPECT_EQ(parse_order_mode(order_mode_name(m)), m);
    }
    EXPECT_THROW(parse_arm("nope"), DomainError);
    EXPECT_THROW(parse_order_mode("nope"), DomainError);
}

TEST(Config, ValidateRejectsBadValues) {
    ExperimentConfig c;
    EXPECT_NO_THROW(c.validate());
    c.q_list.clear();
    EXPECT_THROW(c.validate(), DomainError);
    c = {};
    c.q_list = {0.1, -1.0};
    EXPECT_THROW(c.validate(), DomainError);
    c = {};
    c.arc.count = 0;
    EXPECT_THROW(c.validate(), DomainError);
    c = {};
    c.q_depth = 0.0;
    EXPECT_THROW(c.validate(), DomainError);
}

TEST(Config, SelectedArmsAlwaysIncludeSort) {
    ExperimentConfig c;
    EXPECT_EQ(c.selected_arms().size(), 6u);
    c.arms = {Arm::kRandom, Arm::kSeparate};
    EXPECT_EQ(c.selected_arms(), (std::vector<Arm>{Arm::kSort, Arm::kSeparate, Arm::kRandom}));
}

TEST(Views, ShuffledPresentationSortsBackToArcOrder) {
    ExperimentConfig c = small_config();
    c.arc.count = 8;
    const ExperimentViews v = prepare_views(c);
    ASSERT_EQ(v.views.size(), 8u);
    std::vector<int> ids = v.ids;
    std::sort(ids.begin(), ids.end());
    for (int i = 0; i < 8; ++i) EXPECT_EQ(ids[i], i);

    std::vector<int> sorted;
    for (int i : coding_order(v, OrderMode::kSort, MatrixNorm::kFrobenius, c.seed)) sorted.push_back(v.ids[i]);
    std::vector<int> expected(8);
    std::iota(expected.begin(), expected.end(), 0);
    EXPECT_EQ(sorted, expected);

    const std::vector<int> random = coding_order(v, OrderMode::kRandom, MatrixNorm::kFrobenius, c.seed);
    std::vector<int> random_ids;
    for (int i : random) random_ids.push_back(v.ids[i]);
    EXPECT_NE(random_ids, expected);
    std::vector<int> check = random;
    std::sort(check.begin(), check.end());
    EXPECT_EQ(check, expected);

    const std::vector<int> given = coding_order(v, OrderMode::kGiven, MatrixNorm::kFrobenius, c.seed);
    EXPECT_EQ(given, expected);
}

TEST(Ablation, ReportStructure) {
    ExperimentConfig c = small_config();
    c.q_list = {1.0 / 32, 1.0 / 8};
    const AblationResult r = run_ablation(c);
    EXPECT_EQ(r.runs.size(), 12u);
    EXPECT_EQ(r.report.rows.size(), 12u * 5u);
    for (double q : c.q_list) {
        for (Arm a : kAllArms) {
            const RdRow& agg = r.report.aggregate(arm_name(a), q);
            std::uint64_t bits_img = 0, bits_depth = 0, pixels = 0;
            for (const RdRow& row : r.report.rows) {
                if (row.view < 0 || row.arm != agg.arm || row.q != q) continue;
                bits_img += row.bits_img;
                bits_depth += row.bits_depth;
                pixels += row.pixels;
            }
            EXPECT_EQ(agg.bits_img, bits_img);
            EXPECT_EQ(agg.bits_depth, bits_depth);
            EXPECT_EQ(agg.pixels, pixels);
            EXPECT_DOUBLE_EQ(agg.bpp_img, static_cast<double>(bits_img) / pixels);
        }
    }
    EXPECT_THROW(r.report.aggregate("sort", 0.5), std::out_of_range);
    EXPECT_GT(r.report.aggregate("separate", 1.0 / 32).bpp_total(), r.report.aggregate("sort", 1.0 / 32).bpp_total());
}

TEST(Ablation, CsvFormat) {
    ExperimentConfig c = small_config();
    c.arms = {Arm::kSeparate};
    const AblationResult r = run_ablation(c);
    std::istringstream in(r.report.to_csv());
    std::string line;
    std::getline(in, line);
    EXPECT_EQ(line, "arm,view,q,bpp_img,bpp_depth,psnr_img,psnr_depth");
    int rows = 0, aggregates = 0;
    while (std::getline(in, line)) {
        ++rows;
        EXPECT_EQ(std::count(line.begin(), line.end(), ','), 6) << line;
        if (line.find(",all,") != std::string::npos) ++aggregates;
    }
    EXPECT_EQ(rows, 10);
    EXPECT_EQ(aggregates, 2);
    EXPECT_NE(r.report.to_csv().find("sort,0,0.03125,"), std::string::npos);
    const std::string summary = r.report.summary();
    EXPECT_NE(summary.find("separate"), std::string::npos);
    EXPECT_NE(summary.find("%"), std::string::npos);
}

TEST(Ablation, Deterministic) {
    const ExperimentConfig c = small_config(5);
    const AblationResult a = run_ablation(c);
    const AblationResult b = run_ablation(c);
    EXPECT_EQ(a.report.to_csv(), b.report.to_csv());
    ASSERT_EQ(a.runs.size(), b.runs.size());
    for (std::size_t i = 0; i < a.runs.size(); ++i) {
        for (std::size_t k = 0; k < a.runs[i].streams.size(); ++k) {
            EXPECT_EQ(a.runs[i].streams[k].image, b.runs[i].streams[k].image);
            EXPECT_EQ(a.runs[i].streams[k].depth, b.runs[i].streams[k].depth);
        }
    }
}

TEST(Ablation, WrittenStreamsDecode) {
    ExperimentConfig c = small_config(6);
    c.arms = {Arm::kNoMask, Arm::kConcatenation};
    const AblationResult r = run_ablation(c);
    const fs::path dir = fs::temp_directory_path() / "mvgeo_test_streams";
    fs::remove_all(dir);
    write_ablation_streams(r, c, dir);
    for (const ArmRun& run : r.runs) {
        const fs::path sub = dir / std::string(arm_name(run.arm)) / "q0";
        const Manifest m = read_manifest(sub / "manifest.json");
        ASSERT_EQ(m.views.size(), run.order.size());
        EXPECT_EQ(m.occlusion_eps, c.occlusion_eps);
        std::vector<Bitstream> img, dep;
        std::vector<CameraModel> cams;
        for (const ManifestView& v : m.views) {
            img.push_back(Bitstream::parse(read_file_bytes(sub / v.image_stream)));
            dep.push_back(Bitstream::parse(read_file_bytes(sub / v.depth_stream)));
            cams.push_back(v.camera);
        }
        const auto decoded = decode_sequence(img, dep, cams, m.occlusion_eps);
        for (std::size_t k = 0; k < decoded.size(); ++k) {
            EXPECT_EQ(decoded[k].image, run.streams[k].image_reconstruction);
            EXPECT_EQ(decoded[k].depth, run.streams[k].depth_reconstruction);
        }
    }
    fs::remove_all(dir);
}

TEST(Alignment, ScoreOnIdenticalImages) {
    Image img(4, 4, 3, 0.25f);
    img.at(1, 1, 0) = 0.75f;
    const MaskMap region(4, 4, 1, 1);
    const AlignmentScore s = alignment_score(img, img, DisparityMap(4, 4), region);
    EXPECT_EQ(s.pixels, 16u);
    EXPECT_EQ(s.psnr_warped, kPsnrCap);
    EXPECT_EQ(s.psnr_unwarped, kPsnrCap);
}

} // namespace
} // namespace mvgeo
