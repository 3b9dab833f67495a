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


// shadowkit command-line driver.

#include <cstdio>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "shadowkit/shadowkit.hpp"

namespace sk = shadowkit;
namespace fs = std::filesystem;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitPartial = 1;
constexpr int kExitUsage = 2;

bool g_quiet = false;

void log_line(const std::string& msg) {
    if (!g_quiet) std::cerr << "[shadowkit] " << msg << "\n";
}

struct Globals {
    std::optional<fs::path> config;
    int jobs = 0;
};

// Flags override config file values, which override built-in defaults.
struct Overrides {
    std::vector<std::function<void(sk::PipelineConfig&)>> fns;

    template <class T>
    void add(CLI::Option* opt, const T& value, T sk::PipelineConfig::*field) {
        fns.push_back([opt, &value, field](sk::PipelineConfig& c) {
            if (opt->count() > 0) c.*field = value;
        });
    }
};

sk::PipelineConfig effective_config(const Globals& g, const Overrides& o, CLI::Option* jobs_opt) {
    sk::PipelineConfig cfg = g.config ? sk::load_config(*g.config) : sk::PipelineConfig{};
    for (const auto& f : o.fns) f(cfg);
    if (jobs_opt->count() > 0) cfg.jobs = g.jobs;
    cfg.validate();
    return cfg;
}

fs::path manifest_path(const std::optional<fs::path>& flag) {
    if (flag) return *flag;
    if (auto p = sk::default_manifest_path()) return *p;
    throw sk::ValidationError("no manifest given and SHADOWKIT_DATA_ROOT is not set");
}

sk::DatasetManifest load_checked(const fs::path& path) {
    if (!fs::is_regular_file(path)) throw sk::ValidationError("manifest not found: " + path.string());
    auto m = sk::DatasetManifest::load(path);
    const auto missing = m.missing_files();
    if (!missing.empty()) {
        std::string msg = "manifest references missing files:";
        for (const auto& s : missing) msg += "\n  " + s;
        throw sk::ValidationError(msg);
    }
    return m;
}

// One entry per image in `dir`, used as both input and GT.
sk::DatasetManifest manifest_from_gt_dir(const fs::path& dir) { return sk::manifest_from_dirs(dir, dir); }

std::vector<std::string> split_csv(const std::string& s) {
    std::vector<std::string> out;
    std::stringstream ss(s);
    for (std::string item; std::getline(ss, item, ',');)
        if (!item.empty()) out.push_back(item);
    return out;
}

void emit(const nlohmann::json& j) { std::cout << j.dump(2) << std::endl; }

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"shadowkit: shadow dataset preprocessing, augmentation and evaluation"};
    app.require_subcommand(1);
    Globals g;
    app.add_option("--config", g.config, "JSON config file (flags override it)")->check(CLI::ExistingFile);
    auto* jobs_opt = app.add_option("--jobs", g.jobs, "worker threads (0 = all cores)");
    app.add_flag("--quiet", g_quiet, "suppress progress logging");

    sk::PipelineConfig flags;  // holds raw flag values
    std::string padding_str = "reflect";
    std::string metrics_str = "psnr,ssim,essim,sp";

    // align
    auto* align = app.add_subcommand("align", "align each GT onto its input by homography");
    fs::path align_in, align_gt, align_out;
    Overrides align_ov;
    align->add_option("--input-dir", align_in, "shadow images")->required()->check(CLI::ExistingDirectory);
    align->add_option("--gt-dir", align_gt, "shadow-free images (same file stems)")->required()->check(CLI::ExistingDirectory);
    align->add_option("--out-dir", align_out, "output directory")->required();
    align_ov.add(align->add_option("--threshold", flags.threshold, "RANSAC inlier threshold (px)"), flags.threshold,
                 &sk::PipelineConfig::threshold);
    align_ov.add(align->add_option("--seed", flags.seed, "RANSAC seed"), flags.seed, &sk::PipelineConfig::seed);
    align_ov.add(align->add_option("--max-iters", flags.max_iters, "RANSAC iteration cap"), flags.max_iters,
                 &sk::PipelineConfig::max_iters);
    auto* align_pad = align->add_option("--padding", padding_str, "reflect|zero")->check(CLI::IsMember({"reflect", "zero"}));

    // sasma
    auto* sasma = app.add_subcommand("sasma", "propose or apply SASMA shadow masks");
    std::string sasma_mode;
    std::optional<fs::path> sasma_manifest;
    fs::path sasma_out;
    Overrides sasma_ov;
    std::string sasma_sel;
    sasma->add_option("mode", sasma_mode, "propose|apply")->required()->check(CLI::IsMember({"propose", "apply"}));
    sasma->add_option("--pairs-manifest", sasma_manifest, "dataset manifest (default $SHADOWKIT_DATA_ROOT/manifest.json)");
    sasma->add_option("--out-dir", sasma_out, "output directory")->required();
    sasma_ov.add(sasma->add_flag("--cleanup", flags.cleanup, "3x3 open+close on masks"), flags.cleanup,
                 &sk::PipelineConfig::cleanup);
    auto* sasma_sel_opt = sasma->add_option("--selections", sasma_sel, "selection store JSON");

    // augment
    auto* augment = app.add_subcommand("augment", "generate CutShadow/geometric/MixUp samples");
    std::optional<fs::path> aug_manifest;
    fs::path aug_out;
    Overrides aug_ov;
    augment->add_option("--manifest", aug_manifest, "manifest with mask_path entries");
    augment->add_option("--out-dir", aug_out, "output directory")->required();
    aug_ov.add(augment->add_option("--seed", flags.seed, "sampling seed"), flags.seed, &sk::PipelineConfig::seed);
    aug_ov.add(augment->add_option("--area-min", flags.area_min, "min region area fraction"), flags.area_min,
               &sk::PipelineConfig::area_min);
    aug_ov.add(augment->add_option("--area-max", flags.area_max, "max region area fraction"), flags.area_max,
               &sk::PipelineConfig::area_max);
    aug_ov.add(augment->add_option("--n-per-image", flags.n_per_image, "samples per entry"), flags.n_per_image,
               &sk::PipelineConfig::n_per_image);
    aug_ov.add(augment->add_option("--mixup-prob", flags.mixup_prob, "per-sample MixUp probability"), flags.mixup_prob,
               &sk::PipelineConfig::mixup_prob);

    // eval
    auto* eval = app.add_subcommand("eval", "score predictions against GT");
    fs::path eval_pred;
    std::optional<fs::path> eval_gt_dir, eval_manifest, eval_report, eval_mask_dir;
    Overrides eval_ov;
    eval->add_option("--pred-dir", eval_pred, "predictions named <id>.png")->required()->check(CLI::ExistingDirectory);
    auto* gt_opt = eval->add_option("--gt-dir", eval_gt_dir, "GT directory")->check(CLI::ExistingDirectory);
    eval->add_option("--manifest", eval_manifest, "dataset manifest")->excludes(gt_opt);
    auto* metrics_opt = eval->add_option("--metrics", metrics_str, "comma list of psnr,ssim,essim,sp");
    eval->add_option("--report", eval_report, "write the JSON report here (default stdout)");
    eval->add_option("--pred-mask-dir", eval_mask_dir, "predicted soft masks <id>.png for detection/joint loss");
    eval_ov.add(eval->add_option("--alpha", flags.alpha, "joint-loss weight"), flags.alpha, &sk::PipelineConfig::alpha);
    eval_ov.add(eval->add_option("--beta", flags.beta, "SP-loss weight"), flags.beta, &sk::PipelineConfig::beta);

    // serve
    auto* serve = app.add_subcommand("serve", "run the annotation HTTP service");
    std::optional<fs::path> serve_manifest, serve_store, serve_static;
    std::string serve_host = "127.0.0.1";
    int serve_port = 8080;
    Overrides serve_ov;
    serve->add_option("--manifest", serve_manifest, "dataset manifest");
    serve->add_option("--port", serve_port, "TCP port (0 = any free port)")->check(CLI::Range(0, 65535));
    serve->add_option("--host", serve_host, "bind address");
    serve->add_option("--selections", serve_store, "selection store (default <manifest dir>/selections.json)");
    serve->add_option("--static-dir", serve_static, "UI assets served at /")->check(CLI::ExistingDirectory);
    serve_ov.add(serve->add_flag("--cleanup", flags.cleanup, "3x3 open+close on preview masks"), flags.cleanup,
                 &sk::PipelineConfig::cleanup);

    // preprocess
    auto* pre = app.add_subcommand("preprocess", "align + SASMA every manifest entry (incremental)");
    std::optional<fs::path> pre_manifest;
    fs::path pre_out;
    std::string pre_sel;
    Overrides pre_ov;
    pre->add_option("--manifest", pre_manifest, "dataset manifest");
    pre->add_option("--out-dir", pre_out, "output directory")->required();
    pre_ov.add(pre->add_option("--seed", flags.seed, "RANSAC seed"), flags.seed, &sk::PipelineConfig::seed);
    pre_ov.add(pre->add_option("--threshold", flags.threshold, "RANSAC inlier threshold (px)"), flags.threshold,
               &sk::PipelineConfig::threshold);
    pre_ov.add(pre->add_flag("--cleanup", flags.cleanup, "3x3 open+close on masks"), flags.cleanup,
               &sk::PipelineConfig::cleanup);
    auto* pre_pad = pre->add_option("--padding", padding_str, "reflect|zero")->check(CLI::IsMember({"reflect", "zero"}));
    auto* pre_sel_opt = pre->add_option("--selections", pre_sel, "selection store JSON");

    // features (debug)
    auto* feat = app.add_subcommand("features", "dump keypoints (and matches) as JSON lines");
    fs::path feat_image;
    std::optional<fs::path> feat_match;
    int feat_max = 1500, feat_oct = 3;
    double feat_ratio = 0.8;
    feat->add_option("--image", feat_image, "image")->required()->check(CLI::ExistingFile);
    feat->add_option("--match", feat_match, "second image; also dump matches")->check(CLI::ExistingFile);
    feat->add_option("--max-keypoints", feat_max, "keypoint budget");
    feat->add_option("--octaves", feat_oct, "pyramid octaves");
    feat->add_option("--ratio", feat_ratio, "ratio-test threshold");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        // --help and --version exit 0; every other parse failure is a usage error.
        return app.exit(e) == 0 ? kExitOk : kExitUsage;
    }

    auto padding_override = [&](Overrides& o, CLI::Option* opt) {
        o.fns.push_back([opt, &padding_str](sk::PipelineConfig& c) {
            if (opt->count() > 0) c.padding = *sk::parse_padding(padding_str);
        });
    };
    auto selections_override = [&](Overrides& o, CLI::Option* opt, const std::string& value) {
        o.fns.push_back([opt, &value](sk::PipelineConfig& c) {
            if (opt->count() > 0) c.selections = fs::path(value);
        });
    };

    try {
        if (*align) {
            padding_override(align_ov, align_pad);
            const auto cfg = effective_config(g, align_ov, jobs_opt);
            const auto m = sk::manifest_from_dirs(align_in, align_gt);
            log_line("aligning " + std::to_string(m.entries.size()) + " pairs");
            const auto out = sk::run_align(m, align_out, cfg);
            nlohmann::json rows = nlohmann::json::array();
            int failed = 0;
            for (const auto& o : out) {
                if (!o.error.empty()) {
                    ++failed;
                    rows.push_back({{"id", o.id}, {"error", o.error}});
                    continue;
                }
                rows.push_back({{"id", o.id},
                                {"aligned", o.report.aligned},
                                {"inliers", o.report.inliers},
                                {"mean_residual_px", o.report.mean_residual_px}});
                if (!o.report.aligned) log_line(o.id + ": " + o.report.message);
            }
            emit({{"config", cfg.to_json()}, {"entries", rows}, {"failed", failed}});
            return failed ? kExitPartial : kExitOk;
        }
        if (*sasma) {
            selections_override(sasma_ov, sasma_sel_opt, sasma_sel);
            const auto cfg = effective_config(g, sasma_ov, jobs_opt);
            const auto m = load_checked(manifest_path(sasma_manifest));
            const auto mode = sasma_mode == "propose" ? sk::SasmaMode::Propose : sk::SasmaMode::Apply;
            const auto anns = sk::run_sasma(m, sasma_out, mode, cfg);
            nlohmann::json rows = nlohmann::json::array();
            int failed = 0;
            for (const auto& a : anns) {
                nlohmann::json r{{"id", a.id}};
                if (!a.ok()) {
                    ++failed;
                    r["error"] = a.error;
                } else if (a.selection) {
                    r["lower"] = a.selection->lower;
                    r["upper"] = a.selection->upper;
                    r["source"] = sk::to_string(a.selection->source);
                }
                rows.push_back(std::move(r));
            }
            emit({{"config", cfg.to_json()}, {"mode", sasma_mode}, {"entries", rows}, {"failed", failed}});
            return failed ? kExitPartial : kExitOk;
        }
        if (*augment) {
            const auto cfg = effective_config(g, aug_ov, jobs_opt);
            const auto m = load_checked(manifest_path(aug_manifest));
            std::vector<std::string> errors;
            const auto samples = sk::run_augment(m, aug_out, cfg, &errors);
            for (const auto& e : errors) log_line(e);
            emit({{"config", cfg.to_json()}, {"samples", samples.size()}, {"errors", errors}});
            return errors.empty() ? kExitOk : kExitPartial;
        }
        if (*eval) {
            eval_ov.fns.push_back([&](sk::PipelineConfig& c) {
                if (metrics_opt->count() > 0) c.metrics = split_csv(metrics_str);
            });
            const auto cfg = effective_config(g, eval_ov, jobs_opt);
            const sk::DatasetManifest m =
                eval_gt_dir ? manifest_from_gt_dir(*eval_gt_dir) : load_checked(manifest_path(eval_manifest));
            sk::EvalOptions opts;
            opts.weights = sk::LossWeights::make(cfg.alpha, cfg.beta);
            opts.metrics = {cfg.metrics.begin(), cfg.metrics.end()};
            opts.pred_mask_dir = eval_mask_dir;
            const sk::DeskFeatureExtractor extractor;
            const auto report = sk::run_eval(m, eval_pred, opts, extractor, cfg.to_json());
            if (eval_report) {
                sk::write_json(*eval_report, report);
                log_line("report written to " + eval_report->string());
            } else {
                emit(report);
            }
            if (report["missing"].get<int>() > 0) log_line(std::to_string(report["missing"].get<int>()) + " predictions missing");
            return report["failed"].get<int>() > 0 ? kExitPartial : kExitOk;
        }
        if (*serve) {
            const auto cfg = effective_config(g, serve_ov, jobs_opt);
            const fs::path mp = manifest_path(serve_manifest);
            auto m = load_checked(mp);
            sk::ServerOptions opts;
            opts.store_path = serve_store ? *serve_store : m.root / "selections.json";
            opts.annotate.cleanup = cfg.cleanup;
            opts.static_dir = serve_static;
            opts.log = log_line;
            sk::AnnotationServer server(std::move(m), opts);
            const int port = server.bind(serve_host, serve_port);
            std::cout << "listening on http://" << serve_host << ":" << port << std::endl;
            return server.run() ? kExitOk : kExitPartial;
        }
        if (*pre) {
            padding_override(pre_ov, pre_pad);
            selections_override(pre_ov, pre_sel_opt, pre_sel);
            const auto cfg = effective_config(g, pre_ov, jobs_opt);
            const auto m = load_checked(manifest_path(pre_manifest));
            log_line("preprocessing " + std::to_string(m.entries.size()) + " entries");
            const auto sum = sk::run_preprocess(m, pre_out, cfg);
            for (const auto& e : sum.entries)
                if (!e.error.empty()) log_line(e.id + ": " + e.error);
            const auto report = sk::preprocess_report(sum, cfg);
            sk::write_json(pre_out / "report.json", report);
            emit({{"computed", sum.computed}, {"skipped", sum.skipped}, {"failed", sum.failed}});
            return sum.failed ? kExitPartial : kExitOk;
        }
        if (*feat) {
            auto dump = [&](const fs::path& p) {
                const sk::Image img = sk::read_image(p);
                const auto kps = sk::detect(img, feat_max, feat_oct);
                sk::DescribeParams dp;
                dp.octaves = feat_oct;
                return sk::describe(img, kps, dp).features;
            };
            const auto fa = dump(feat_image);
            for (const auto& f : fa) std::cout << nlohmann::json{{"image", 0}, {"keypoint", sk::to_json(f.keypoint)}}.dump() << "\n";
            if (feat_match) {
                const auto fb = dump(*feat_match);
                for (const auto& f : fb)
                    std::cout << nlohmann::json{{"image", 1}, {"keypoint", sk::to_json(f.keypoint)}}.dump() << "\n";
                for (const auto& mp : sk::match(fa, fb, feat_ratio))
                    std::cout << nlohmann::json{{"match", sk::to_json(mp)}}.dump() << "\n";
            }
            std::cout.flush();
            return kExitOk;
        }
    } catch (const sk::ValidationError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitPartial;
    }
    return kExitUsage;
}
