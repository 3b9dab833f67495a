// Copyright 2026 The shadowkit Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//    http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.


// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any FAIL.
//
//   acceptance [--workdir DIR]

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <map>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "shadowkit/shadowkit.hpp"
#include "support/dataset.hpp"
#include "support/oracles.hpp"
#include "support/synthetic.hpp"

namespace sk = shadowkit;
namespace fs = std::filesystem;
using namespace sk::testing;

namespace {

struct Verdict {
    bool pass = true;
    std::ostringstream detail;
    void require(bool ok, const std::string& what) {
        if (!ok) {
            pass = false;
            detail << " [failed: " << what << "]";
        }
    }
};

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

Verdict homography_recovery() {
    Verdict v;
    const auto t0 = Clock::now();
    int ok = 0;
    double worst_mean = 0;
    for (int trial = 0; trial < 100; ++trial) {
        std::mt19937_64 rng(1000 + uint64_t(trial));
        const int w = 640, h = 480;
        const auto h0 = random_projective(w, h, rng, 100.0);
        const auto pairs = noisy_correspondences(h0, w, h, 70, 30, 0.5, rng);
        sk::RansacParams p;
        p.reproj_threshold = 3.0;
        p.seed = uint64_t(trial);
        try {
            const auto r = sk::ransac_homography(pairs, p);
            // Mean reprojection error of the true inliers against the noise-free mapping.
            double sum = 0;
            for (int i = 0; i < 70; ++i) sum += sk::distance(r.h.apply(pairs[size_t(i)].src), h0.apply(pairs[size_t(i)].src));
            const double mean = sum / 70.0;
            worst_mean = std::max(worst_mean, mean);
            ok += mean <= 1.0;
        } catch (const sk::Error&) {
        }
    }
    const double secs = seconds_since(t0);
    v.detail << "recovered " << ok << "/100, worst mean error " << worst_mean << " px, " << secs << " s";
    v.require(ok >= 95, ">= 95 recoveries");
    v.require(secs < 30.0, "runtime < 30 s");
    return v;
}

Verdict alignment_end_to_end() {
    Verdict v;
    std::mt19937_64 rng(2024);
    const int w = 480, h = 360;
    const sk::Image shadow = textured_scene(w, h, 77);
    const sk::Homography h0 = mild_homography(w, h, rng);
    const auto r = sk::align_pair(shadow, sk::warp(shadow, h0));
    const auto same = sk::align_pair(shadow, shadow);
    const double id_err = same.h.max_abs_diff(sk::Homography::identity());
    v.detail << "residual " << r.report.mean_residual_px << " px, " << r.report.inliers << " inliers, identity error "
             << id_err;
    v.require(r.report.aligned && r.report.mean_residual_px <= 0.5, "residual <= 0.5 px");
    v.require(id_err <= 1e-3, "identity within 1e-3");
    return v;
}

Verdict ssim_psnr_oracles() {
    Verdict v;
    std::mt19937_64 rng(3030);
    double worst_ssim = 0, worst_psnr = 0;
    for (int t = 0; t < 50; ++t) {
        const int ch = t % 2 ? 3 : 1;
        const sk::Image a = random_image(16, 16, ch, rng), b = random_image(16, 16, ch, rng);
        worst_ssim = std::max(worst_ssim, std::abs(sk::ssim(a, b) - ssim_oracle(a, b)));
        worst_psnr = std::max(worst_psnr, std::abs(sk::psnr(a, b) - psnr_oracle(a, b)));
    }
    const sk::Image a = random_image(16, 16, 3, rng);
    const double self = sk::ssim(a, a);
    v.detail << "max |ssim - oracle| " << worst_ssim << ", max |psnr - oracle| " << worst_psnr << ", ssim(a,a) " << self;
    v.require(worst_ssim <= 1e-7, "ssim within 1e-7");
    v.require(worst_psnr <= 1e-9, "psnr within 1e-9");
    v.require(std::abs(self - 1.0) <= 1e-12, "ssim(a,a) = 1");
    return v;
}

Verdict essim_invariances() {
    Verdict v;
    const sk::Image gt = textured_scene(128, 96, 4040, 0.05, 0.95);
    const size_t gt_edges = sk::edge_detect(gt).count();
    const double same = sk::essim_loss(gt, gt);
    // Hue rotation with V kept: cycle the RGB channels.
    sk::Image hue = gt;
    for (int y = 0; y < gt.height(); ++y)
        for (int x = 0; x < gt.width(); ++x)
            for (int c = 0; c < 3; ++c) hue.at(x, y, c) = gt.at(x, y, (c + 1) % 3);
    const double hue_only = sk::essim_loss(hue, gt);
    const sk::Image sharp = checkerboard(8, 8, 8, 3, 0.1, 0.9);
    const sk::Grid blurred = sk::gaussian_blur(sk::Grid(sk::v_channel(sharp)), 12.0);
    sk::Image blur(sharp.width(), sharp.height(), 3);
    for (int y = 0; y < sharp.height(); ++y)
        for (int x = 0; x < sharp.width(); ++x)
            for (int c = 0; c < 3; ++c) blur.at(x, y, c) = std::clamp(blurred(x, y), 0.0, 1.0);
    const double blurry = sk::essim_loss(blur, sharp);
    v.detail << gt_edges << " edge pixels in gt; identical " << same << ", hue-only " << hue_only << ", blurred " << blurry;
    v.require(hue != gt, "hue case differs from gt");
    v.require(gt_edges > 0, "gt has edges");
    v.require(std::abs(same) <= 1e-12, "zero on identical");
    v.require(std::abs(hue_only) <= 1e-12, "zero on hue-only change");
    v.require(blurry > 0, "positive on blurred");
    return v;
}

Verdict loss_algebra() {
    Verdict v;
    auto collinear = [](double x1, double y1, double x2, double y2, double x3, double y3) {
        return std::abs((y2 - y1) * (x3 - x1) - (y3 - y1) * (x2 - x1));
    };
    std::mt19937_64 rng(5050);
    double worst_joint = 0, worst_removal = 0;
    for (int t = 0; t < 1000; ++t) {
        const double lr = uniform(rng, 0, 2), ld = uniform(rng, 0, 2);
        const double a1 = uniform(rng, 0, 1), a2 = uniform(rng, 0, 1), a3 = uniform(rng, 0, 1);
        worst_joint = std::max(worst_joint, collinear(a1, sk::joint_loss(lr, ld, a1), a2, sk::joint_loss(lr, ld, a2),
                                                      a3, sk::joint_loss(lr, ld, a3)));
        const double sp = uniform(rng, 0, 1e-5), es = uniform(rng, 0, 1), m = uniform(rng, 0, 0.1);
        const double b1 = uniform(rng, 0, 1e6), b2 = uniform(rng, 0, 1e6), b3 = uniform(rng, 0, 1e6);
        worst_removal = std::max(
            worst_removal, collinear(b1 / 1e6, sk::removal_loss(sp, es, m, b1), b2 / 1e6,
                                     sk::removal_loss(sp, es, m, b2), b3 / 1e6, sk::removal_loss(sp, es, m, b3)));
    }
    const bool endpoints = sk::joint_loss(0.7, 0.3, 0.0) == 0.7 && sk::joint_loss(0.7, 0.3, 1.0) == 0.3;
    const double beta_case = sk::removal_loss(2e-7, 0.0, 0.0, 1e6);
    const double alpha_case = sk::joint_loss(1.0, 0.5, 1e-2);
    v.detail << "collinearity residual joint " << worst_joint << ", removal " << worst_removal << "; beta case "
             << beta_case << ", alpha case " << alpha_case;
    v.require(worst_joint <= 1e-12, "joint affine in alpha");
    v.require(worst_removal <= 1e-12, "removal affine in beta (beta scaled by 1e-6)");
    v.require(endpoints, "alpha endpoints exact");
    // 2e-7 * 1e6 is not representable as 0.2; exact means the loss is the single rounded product.
    const double product = 2e-7 * 1e6;
    v.require(beta_case == product && std::abs(beta_case - 0.2) <= std::nextafter(0.2, 1.0) - 0.2,
              "beta=1e6 case exact");
    v.require(std::abs(alpha_case - 0.995) <= 1e-15, "alpha=0.01 case");
    return v;
}

Verdict sasma_recovery() {
    Verdict v;
    std::mt19937_64 rng(6060);
    double sum = 0, worst = 1;
    for (int s = 0; s < 20; ++s) {
        const int w = 200, h = 150;
        const sk::Image lit = textured_scene(w, h, 6100 + uint64_t(s));
        const auto truth = polygon_mask(w, h, random_convex_polygon(w, h, rng));
        const sk::Image shadow = cast_shadow(lit, truth, uniform(rng, 0.2, 0.5), 0.02, rng);
        const sk::Plane err = sk::error_map(shadow, lit);
        const auto sel = sk::proposed_selection(sk::build_histogram(err));
        const double iou = sel ? sk::iou(sk::binarize(err, *sel), truth) : 0.0;
        sum += iou;
        worst = std::min(worst, iou);
    }
    const double mean = sum / 20.0;

    size_t violations = 0;
    sk::Plane p(48, 48);
    for (double& x : p.data()) x = uniform(rng, 0, 1);
    for (int t = 0; t < 1000; ++t) {
        double lo = uniform(rng, 0, 1), hi = uniform(rng, 0, 1);
        if (lo > hi) std::swap(lo, hi);
        const auto narrow = sk::binarize(p, sk::ThresholdSelection::make(lo, hi, sk::SelectionSource::HumanAdjusted));
        const auto wide = sk::binarize(
            p, sk::ThresholdSelection::make(uniform(rng, 0, lo), uniform(rng, hi, 1), sk::SelectionSource::HumanAdjusted));
        for (int y = 0; y < p.height(); ++y)
            for (int x = 0; x < p.width(); ++x) violations += narrow.at(x, y) && !wide.at(x, y);
    }
    v.detail << "mean IoU " << mean << ", worst " << worst << ", monotonicity violations " << violations << "/1000 widenings";
    v.require(mean >= 0.9, "mean IoU >= 0.9");
    v.require(worst >= 0.8, "per-scene IoU >= 0.8");
    v.require(violations == 0, "binarize monotone");
    return v;
}

Verdict cutshadow_provenance() {
    Verdict v;
    std::mt19937_64 rng(7070);
    size_t bad_pixels = 0, pixels = 0;
    for (int t = 0; t < 100; ++t) {
        const int w = 8 + int(rng() % 57), h = 8 + int(rng() % 57);
        // Disjoint value ranges make the source of every pixel unambiguous.
        const sk::Image input = random_image(w, h, 3, rng, 0.0, 0.45), gt = random_image(w, h, 3, rng, 0.55, 1.0);
        sk::ShadowMask mask(w, h);
        for (int y = 0; y < h; ++y)
            for (int x = 0; x < w; ++x) mask.set(x, y, rng() % 3 == 0);
        const auto region = sk::sample_region(rng(), {w, h});
        const auto r = sk::cutshadow(input, gt, mask, region);
        const bool s2n = region.direction == sk::CutDirection::ShadowToNoShadow;
        for (int y = 0; y < h; ++y)
            for (int x = 0; x < w; ++x) {
                const bool from_input = s2n == region.contains(x, y);
                const sk::Image& src = from_input ? input : gt;
                bool ok = r.mask.at(x, y) == (from_input && mask.at(x, y));
                for (int c = 0; c < 3; ++c) ok = ok && r.input.at(x, y, c) == src.at(x, y, c);
                bad_pixels += !ok;
                ++pixels;
            }
    }
    const sk::Image input = random_image(30, 20, 3, rng), gt = random_image(30, 20, 3, rng);
    sk::ShadowMask mask(30, 20);
    for (int y = 0; y < 20; ++y)
        for (int x = 0; x < 30; ++x) mask.set(x, y, (x + y) % 2 == 0);
    const auto full = sk::cutshadow(input, gt, mask, {0, 0, 30, 20, sk::CutDirection::ShadowToNoShadow});
    const bool identity = full.input == input && full.mask == mask;
    v.detail << bad_pixels << " of " << pixels << " pixels off-provenance; full-region identity "
             << (identity ? "holds" : "broken");
    v.require(bad_pixels == 0, "every pixel from the dictated raster");
    v.require(identity, "full-region paste is identity");
    return v;
}

Verdict hsv_round_trip() {
    Verdict v;
    std::mt19937_64 rng(8080);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    double worst = 0;
    for (int i = 0; i < 1000000; ++i) {
        const double r = u(rng), g = u(rng), b = u(rng);
        const auto hsv = sk::rgb_to_hsv(r, g, b);
        const auto back = sk::hsv_to_rgb(hsv[0], hsv[1], hsv[2]);
        worst = std::max({worst, std::abs(back[0] - r), std::abs(back[1] - g), std::abs(back[2] - b)});
    }
    v.detail << "max channel error " << worst << " over 1e6 pixels";
    v.require(worst <= 1.0 / 255.0, "error <= 1/255");
    return v;
}

std::map<std::string, sk::Bytes> snapshot(const fs::path& dir) {
    std::map<std::string, sk::Bytes> out;
    for (const auto& e : fs::recursive_directory_iterator(dir))
        if (e.is_regular_file()) out[fs::relative(e.path(), dir).generic_string()] = sk::read_file(e.path());
    return out;
}

Verdict preprocess_reproducibility(const fs::path& work) {
    Verdict v;
    fs::remove_all(work);
    write_dataset(work / "data", {.count = 4, .seed = 9090});
    const auto m = sk::DatasetManifest::load(work / "data" / "manifest.json");
    sk::PipelineConfig cfg;
    const auto a = sk::run_preprocess(m, work / "run1", cfg);
    const auto b = sk::run_preprocess(m, work / "run2", cfg);
    auto sa = snapshot(work / "run1"), sb = snapshot(work / "run2");
    // The output manifest stores paths relative to its own directory; compare it after that rewrite.
    sa.erase("manifest.json");
    sb.erase("manifest.json");
    size_t differing = 0;
    for (const auto& [k, bytes] : sa) differing += !sb.count(k) || sb.at(k) != bytes;
    differing += sb.size() > sa.size() ? sb.size() - sa.size() : 0;
    v.detail << sa.size() << " files compared, " << differing << " differ; computed " << a.computed << "+" << b.computed
             << ", failed " << a.failed + b.failed;
    v.require(differing == 0 && !sa.empty(), "byte-identical outputs");
    v.require(a.failed + b.failed == 0, "no failures");
    return v;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"shadowkit acceptance suite"};
    fs::path workdir = fs::temp_directory_path() / "shadowkit_acceptance";
    app.add_option("--workdir", workdir, "scratch directory");
    CLI11_PARSE(app, argc, argv);

    const std::vector<std::pair<std::string, std::function<Verdict()>>> criteria = {
        {"homography-recovery", homography_recovery},
        {"alignment-end-to-end", alignment_end_to_end},
        {"ssim-psnr-oracle", ssim_psnr_oracles},
        {"essim-invariances", essim_invariances},
        {"loss-algebra", loss_algebra},
        {"sasma-synthetic-recovery", sasma_recovery},
        {"cutshadow-provenance", cutshadow_provenance},
        {"hsv-round-trip", hsv_round_trip},
        {"preprocess-reproducibility", [&] { return preprocess_reproducibility(workdir / "reproducibility"); }},
    };
    int failed = 0;
    for (const auto& [name, fn] : criteria) {
        Verdict v;
        try {
            v = fn();
        } catch (const std::exception& e) {
            v.pass = false;
            v.detail << "exception: " << e.what();
        }
        failed += !v.pass;
        std::printf("%s %s: %s\n", v.pass ? "PASS" : "FAIL", name.c_str(), v.detail.str().c_str());
        std::fflush(stdout);
    }
    std::printf("%d/%zu criteria passed\n", int(criteria.size()) - failed, criteria.size());
    return failed ? 1 : 0;
}
