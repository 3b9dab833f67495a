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

// Batch drivers: dataset alignment + mask annotation (preprocess), paired
// augmentation, and evaluation of predictions.
//
// Output layout of preprocess under out_dir:
//   aligned/<id>.png          GT warped into the input frame
//   homography/<id>.json      {"h", "inliers", "mean_residual_px", ...}
//   masks/<id>.png            255 = shadow
//   masks/<id>.json           selection provenance
//   preprocess_state.json     id -> content hash of completed entries
//   manifest.json             input manifest plus the produced paths

#pragma once

#include <algorithm>
#include <atomic>
#include <cmath>
#include <filesystem>
#include <functional>
#include <limits>
#include <map>
#include <mutex>
#include <optional>
#include <random>
#include <set>
#include <string>
#include <thread>
#include <vector>

#include <json.hpp>

#include "shadowkit/align.hpp"
#include "shadowkit/augment.hpp"
#include "shadowkit/hash.hpp"
#include "shadowkit/io.hpp"
#include "shadowkit/losses.hpp"
#include "shadowkit/manifest.hpp"
#include "shadowkit/metrics.hpp"
#include "shadowkit/sasma.hpp"

namespace shadowkit {

/// Every tunable of the batch commands. Precedence when built by the CLI:
/// flags > config file > these defaults.
struct PipelineConfig {
    // alignment
    double threshold = 3.0;
    int max_iters = 2000;
    double confidence = 0.995;
    uint64_t seed = 7;
    PaddingMode padding = PaddingMode::Reflect;
    int max_keypoints = 1500;
    int octaves = 3;
    double ratio = 0.8;
    // sasma
    bool cleanup = false;
    std::optional<fs::path> selections;  ///< selection store consulted by preprocess / sasma apply
    // augment
    double area_min = 0.05;
    double area_max = 0.4;
    int n_per_image = 4;
    double mixup_prob = 0.0;
    // eval
    double alpha = 1e-2;
    double beta = 1e6;
    std::vector<std::string> metrics = {"psnr", "ssim", "essim", "sp"};
    // execution
    int jobs = 0;  ///< 0 = hardware concurrency

    AlignParams align_params(size_t pair_index) const {
        AlignParams p;
        p.detect.max_keypoints = max_keypoints;
        p.detect.octaves = octaves;
        p.describe.octaves = octaves;
        p.match.ratio = ratio;
        p.ransac.reproj_threshold = threshold;
        p.ransac.max_iters = max_iters;
        p.ransac.confidence = confidence;
        p.ransac.seed = seed ^ uint64_t(pair_index);
        p.padding = padding;
        p.fallback_to_identity = true;
        return p;
    }

    nlohmann::json to_json() const {
        nlohmann::json j;
        j["threshold"] = threshold;
        j["max_iters"] = max_iters;
        j["confidence"] = confidence;
        j["seed"] = seed;
        j["padding"] = std::string(to_string(padding));
        j["max_keypoints"] = max_keypoints;
        j["octaves"] = octaves;
        j["ratio"] = ratio;
        j["cleanup"] = cleanup;
        j["selections"] = selections ? nlohmann::json(selections->generic_string()) : nlohmann::json(nullptr);
        j["area_min"] = area_min;
        j["area_max"] = area_max;
        j["n_per_image"] = n_per_image;
        j["mixup_prob"] = mixup_prob;
        j["alpha"] = alpha;
        j["beta"] = beta;
        j["metrics"] = metrics;
        return j;
    }

    /// Overrides only the keys present in `j`.
    void merge(const nlohmann::json& j) {
        auto get = [&](const char* key, auto& field) {
            if (j.contains(key) && !j[key].is_null()) field = j[key].get<std::decay_t<decltype(field)>>();
        };
        get("threshold", threshold);
        get("max_iters", max_iters);
        get("confidence", confidence);
        get("seed", seed);
        if (j.contains("padding")) {
            auto p = parse_padding(j["padding"].get<std::string>());
            if (!p) throw ValidationError("config: padding must be reflect or zero");
            padding = *p;
        }
        get("max_keypoints", max_keypoints);
        get("octaves", octaves);
        get("ratio", ratio);
        get("cleanup", cleanup);
        if (j.contains("selections") && !j["selections"].is_null()) selections = fs::path(j["selections"].get<std::string>());
        get("area_min", area_min);
        get("area_max", area_max);
        get("n_per_image", n_per_image);
        get("mixup_prob", mixup_prob);
        get("alpha", alpha);
        get("beta", beta);
        get("metrics", metrics);
        get("jobs", jobs);
        validate();
    }

    void validate() const {
        if (!(threshold > 0)) throw ValidationError("config: threshold must be positive");
        if (max_iters < 1) throw ValidationError("config: max_iters must be >= 1");
        if (!(confidence > 0 && confidence < 1)) throw ValidationError("config: confidence must lie in (0,1)");
        if (!(ratio > 0 && ratio <= 1)) throw ValidationError("config: ratio must lie in (0,1]");
        if (!(area_min > 0 && area_min <= area_max && area_max <= 1))
            throw ValidationError("config: need 0 < area_min <= area_max <= 1");
        if (n_per_image < 0) throw ValidationError("config: n_per_image must be >= 0");
        if (!(mixup_prob >= 0 && mixup_prob <= 1)) throw ValidationError("config: mixup_prob must lie in [0,1]");
        LossWeights::make(alpha, beta);
    }
};

inline PipelineConfig load_config(const fs::path& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open config " + path.string());
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        throw IoError("config " + path.string() + ": " + e.what());
    }
    PipelineConfig c;
    c.merge(j);
    return c;
}

inline void write_json(const fs::path& path, const nlohmann::json& j) {
    const std::string text = j.dump(2) + "\n";
    write_file(path, Bytes(text.begin(), text.end()));
}

inline nlohmann::json read_json(const fs::path& path) {
    const Bytes b = read_file(path);
    try {
        return nlohmann::json::parse(b.begin(), b.end());
    } catch (const nlohmann::json::exception& e) {
        throw IoError(path.string() + ": " + e.what());
    }
}

/// Runs body(i) for i in [0, n) on up to `jobs` threads; exceptions must be handled inside body.
inline void parallel_for(size_t n, int jobs, const std::function<void(size_t)>& body) {
    size_t threads = jobs > 0 ? size_t(jobs) : std::max<size_t>(1, std::thread::hardware_concurrency());
    threads = std::min(threads, n);
    if (threads <= 1) {
        for (size_t i = 0; i < n; ++i) body(i);
        return;
    }
    std::atomic<size_t> next{0};
    std::vector<std::jthread> pool;
    for (size_t t = 0; t < threads; ++t)
        pool.emplace_back([&] {
            for (size_t i = next++; i < n; i = next++) body(i);
        });
}

// ---------------------------------------------------------------------------
// preprocess

struct EntryOutcome {
    std::string id;
    bool skipped = false;  ///< unchanged since the last run
    bool aligned = false;
    std::string error;
    AlignReport align;
    std::optional<ThresholdSelection> selection;
};

struct PreprocessSummary {
    DatasetManifest manifest;  ///< updated with produced paths
    std::vector<EntryOutcome> entries;
    size_t computed = 0;
    size_t skipped = 0;
    size_t failed = 0;
};

namespace detail {

inline std::string preprocess_key(const ManifestEntry& e, const PipelineConfig& cfg,
                                  const std::optional<ThresholdSelection>& sel, size_t index) {
    Sha256 h;
    h.update(read_file(e.input_path));
    h.update("\x1f");
    h.update(read_file(e.gt_path));
    nlohmann::json k = cfg.to_json();
    k.erase("selections");
    k["pair_index"] = index;
    if (sel) k["selection"] = {sel->lower, sel->upper, to_string(sel->source)};
    h.update(k.dump());
    return h.hex();
}

}  // namespace detail

/**
 * Aligns every GT to its input, then annotates a shadow mask from the
 * aligned pair. Entries whose inputs, selection and config hash to the value
 * recorded by a previous run (and whose outputs still exist) are skipped.
 * Failures are recorded per entry and the run continues.
 */
inline PreprocessSummary run_preprocess(const DatasetManifest& manifest, const fs::path& out_dir,
                                        const PipelineConfig& cfg) {
    cfg.validate();
    PreprocessSummary sum;
    sum.manifest = manifest;
    sum.entries.resize(manifest.entries.size());
    fs::create_directories(out_dir);

    const fs::path state_path = out_dir / "preprocess_state.json";
    std::map<std::string, std::string> state;
    if (fs::exists(state_path)) {
        try {
            state = read_json(state_path).get<std::map<std::string, std::string>>();
        } catch (const std::exception&) {
            state.clear();
        }
    }
    const SelectionStore store = cfg.selections ? SelectionStore::load(*cfg.selections) : SelectionStore{};
    std::vector<std::string> keys(manifest.entries.size());

    parallel_for(manifest.entries.size(), cfg.jobs, [&](size_t i) {
        const ManifestEntry& e = manifest.entries[i];
        EntryOutcome& out = sum.entries[i];
        out.id = e.id;
        const fs::path aligned_path = out_dir / "aligned" / (e.id + ".png");
        const fs::path h_path = out_dir / "homography" / (e.id + ".json");
        const fs::path mask_path = out_dir / "masks" / (e.id + ".png");
        const fs::path mask_meta = out_dir / "masks" / (e.id + ".json");
        try {
            const std::optional<ThresholdSelection> sel = e.selection ? e.selection : store.find(e.id);
            keys[i] = detail::preprocess_key(e, cfg, sel, i);
            auto it = state.find(e.id);
            if (it != state.end() && it->second == keys[i] && fs::exists(aligned_path) && fs::exists(h_path) &&
                fs::exists(mask_path) && fs::exists(mask_meta)) {
                out.skipped = true;
                const auto hj = read_json(h_path);
                out.aligned = hj.value("aligned", false);
                return;
            }
            const Image input = read_image(e.input_path);
            const Image gt = read_image(e.gt_path);
            if (input.channels() != 3 || gt.channels() != 3)
                throw ChannelError("preprocess expects RGB input and GT images");
            const AlignResult ar = align_pair(input, gt, cfg.align_params(i));
            out.align = ar.report;
            out.aligned = ar.report.aligned;
            write_png(aligned_path, ar.aligned_gt);
            write_json(h_path, homography_json(ar.h, ar.report));

            SelectionStore one;
            if (sel) one.put(e.id, *sel);
            AnnotateOptions opts;
            opts.cleanup = cfg.cleanup;
            // Annotate against the GT as stored so later runs on the outputs reproduce the mask.
            const Annotation ann = annotate_pair(e.id, input, quantize_u8(ar.aligned_gt), one, opts);
            out.selection = ann.selection;
            write_png(mask_path, *ann.mask);
            write_json(mask_meta, annotation_json(ann, cfg.cleanup));
        } catch (const std::exception& ex) {
            out.error = ex.what();
            keys[i].clear();
        }
    });

    for (size_t i = 0; i < manifest.entries.size(); ++i) {
        const auto& o = sum.entries[i];
        auto& me = sum.manifest.entries[i];
        if (!o.error.empty()) {
            ++sum.failed;
            state.erase(me.id);
            continue;
        }
        o.skipped ? ++sum.skipped : ++sum.computed;
        state[me.id] = keys[i];
        me.aligned_gt_path = out_dir / "aligned" / (me.id + ".png");
        me.homography_path = out_dir / "homography" / (me.id + ".json");
        me.mask_path = out_dir / "masks" / (me.id + ".png");
    }
    write_json(state_path, nlohmann::json(state));
    sum.manifest.root = out_dir;
    sum.manifest.save(out_dir / "manifest.json");
    return sum;
}

inline nlohmann::json preprocess_report(const PreprocessSummary& s, const PipelineConfig& cfg) {
    nlohmann::json entries = nlohmann::json::array();
    for (const auto& e : s.entries) {
        nlohmann::json j{{"id", e.id}, {"skipped", e.skipped}, {"aligned", e.aligned}};
        if (!e.skipped && e.error.empty()) {
            j["inliers"] = e.align.inliers;
            j["mean_residual_px"] = e.align.mean_residual_px;
        }
        if (!e.error.empty()) j["error"] = e.error;
        entries.push_back(std::move(j));
    }
    return {{"config", cfg.to_json()},
            {"computed", s.computed},
            {"skipped", s.skipped},
            {"failed", s.failed},
            {"entries", entries}};
}

// ---------------------------------------------------------------------------
// align (directory mode)

struct AlignOutcome {
    std::string id;
    AlignReport report;
    std::string error;
};

/// Aligns each GT onto its input and writes <out>/<id>.png plus <out>/<id>.json.
inline std::vector<AlignOutcome> run_align(const DatasetManifest& manifest, const fs::path& out_dir,
                                           const PipelineConfig& cfg) {
    cfg.validate();
    std::vector<AlignOutcome> out(manifest.entries.size());
    parallel_for(manifest.entries.size(), cfg.jobs, [&](size_t i) {
        const auto& e = manifest.entries[i];
        out[i].id = e.id;
        try {
            const Image input = read_image(e.input_path);
            const Image gt = read_image(e.gt_path);
            const AlignResult ar = align_pair(input, gt, cfg.align_params(i));
            out[i].report = ar.report;
            write_png(out_dir / (e.id + ".png"), ar.aligned_gt);
            write_json(out_dir / (e.id + ".json"), homography_json(ar.h, ar.report));
        } catch (const std::exception& ex) {
            out[i].error = ex.what();
        }
    });
    return out;
}

// ---------------------------------------------------------------------------
// sasma (batch)

enum class SasmaMode { Propose, Apply };

/**
 * propose: writes <out>/<id>.histogram.json for every pair and a
 * selections.json holding the automatic proposals.
 * apply: writes <out>/<id>.png and <out>/<id>.json, using the selection
 * store (config.selections, then per-entry selections) and falling back to
 * the automatic proposal.
 */
inline std::vector<Annotation> run_sasma(const DatasetManifest& manifest, const fs::path& out_dir, SasmaMode mode,
                                         const PipelineConfig& cfg) {
    SelectionStore store = cfg.selections ? SelectionStore::load(*cfg.selections) : SelectionStore{};
    for (const auto& e : manifest.entries)
        if (e.selection && !store.find(e.id)) store.put(e.id, *e.selection);
    std::vector<PairSource> pairs;
    for (const auto& e : manifest.entries) pairs.push_back({e.id, e.input_path, e.target_gt_path()});
    AnnotateOptions opts;
    opts.cleanup = cfg.cleanup;
    const SelectionStore empty;
    auto anns = annotate_batch(pairs, mode == SasmaMode::Propose ? empty : store, opts);
    fs::create_directories(out_dir);
    if (mode == SasmaMode::Propose) {
        SelectionStore proposals;
        for (const auto& a : anns) {
            if (!a.ok()) continue;
            write_json(out_dir / (a.id + ".histogram.json"), histogram_json(a.histogram));
            if (auto s = proposed_selection(a.histogram)) proposals.put(a.id, *s);
        }
        proposals.save(out_dir / "selections.json");
    } else {
        for (const auto& a : anns) {
            if (!a.ok()) continue;
            write_png(out_dir / (a.id + ".png"), *a.mask);
            write_json(out_dir / (a.id + ".json"), annotation_json(a, cfg.cleanup));
        }
    }
    return anns;
}

// ---------------------------------------------------------------------------
// augment

struct AugmentSample {
    std::string id;
    int index = 0;
    int quarter_turns = 0;
    bool flipped = false;
    CutRegion region;
    std::optional<std::string> mixup_with;
    double mixup_lambda = 1.0;
};

/**
 * Per entry and sample k: rotate/flip (same transform for input, GT, mask),
 * then cutshadow, then optionally MixUp with another entry of the same
 * shape. Writes <id>_<k>_{input,gt,mask}.png and <id>_<k>.json.
 * Entries without a readable mask are skipped with an error.
 */
inline std::vector<AugmentSample> run_augment(const DatasetManifest& manifest, const fs::path& out_dir,
                                              const PipelineConfig& cfg, std::vector<std::string>* errors = nullptr) {
    cfg.validate();
    struct Triplet {
        Image input, gt;
        ShadowMask mask;
    };
    std::vector<std::optional<Triplet>> data(manifest.entries.size());
    for (size_t i = 0; i < manifest.entries.size(); ++i) {
        const auto& e = manifest.entries[i];
        try {
            if (!e.mask_path) throw ValidationError("no mask_path");
            Triplet t{read_image(e.input_path), read_image(e.target_gt_path()), read_mask(*e.mask_path)};
            if (!t.input.same_shape(t.gt)) throw DimensionError("input and gt differ in shape");
            require_same_size(t.input, t.mask, "augment");
            data[i] = std::move(t);
        } catch (const std::exception& ex) {
            if (errors) errors->push_back(e.id + ": " + ex.what());
        }
    }
    std::vector<AugmentSample> samples;
    for (size_t i = 0; i < data.size(); ++i) {
        if (!data[i]) continue;
        const auto& id = manifest.entries[i].id;
        for (int k = 0; k < cfg.n_per_image; ++k) {
            std::mt19937_64 rng(mix_seed(cfg.seed, i, uint64_t(k)));
            AugmentSample s;
            s.id = id;
            s.index = k;
            s.quarter_turns = int(rng() % 4);
            s.flipped = (rng() & 1) != 0;
            Image input = rotate90(data[i]->input, s.quarter_turns);
            Image gt = rotate90(data[i]->gt, s.quarter_turns);
            ShadowMask mask = rotate90(data[i]->mask, s.quarter_turns);
            if (s.flipped) {
                input = flip_vertical(input);
                gt = flip_vertical(gt);
                mask = flip_vertical(mask);
            }
            s.region = sample_region(rng(), Size{input.width(), input.height()}, AreaRange{cfg.area_min, cfg.area_max});
            auto cut = cutshadow(input, gt, mask, s.region);
            Image out_input = std::move(cut.input);
            ShadowMask out_mask = std::move(cut.mask);
            Image out_gt = gt;
            const double u = std::uniform_real_distribution<double>(0, 1)(rng);
            if (cfg.mixup_prob > 0 && u < cfg.mixup_prob && data.size() > 1) {
                const size_t j = (i + 1 + size_t(rng() % (data.size() - 1))) % data.size();
                const double lambda = std::uniform_real_distribution<double>(0, 1)(rng);
                if (data[j] && data[j]->input.same_shape(out_input)) {
                    out_input = mixup(out_input, data[j]->input, lambda);
                    out_gt = mixup(out_gt, data[j]->gt, lambda);
                    ShadowMask mixed(out_mask.width(), out_mask.height());
                    for (int y = 0; y < mixed.height(); ++y)
                        for (int x = 0; x < mixed.width(); ++x)
                            mixed.set(x, y, lambda * out_mask.at(x, y) + (1 - lambda) * data[j]->mask.at(x, y) >= 0.5);
                    out_mask = std::move(mixed);
                    s.mixup_with = manifest.entries[j].id;
                    s.mixup_lambda = lambda;
                }
            }
            const std::string stem = id + "_" + std::to_string(k);
            write_png(out_dir / (stem + "_input.png"), out_input);
            write_png(out_dir / (stem + "_gt.png"), out_gt);
            write_png(out_dir / (stem + "_mask.png"), out_mask);
            nlohmann::json prov{{"id", id},
                                {"sample", k},
                                {"quarter_turns", s.quarter_turns},
                                {"flip_vertical", s.flipped},
                                {"region", to_json(s.region)},
                                {"order", {"geometric", "cutshadow", "mixup"}}};
            if (s.mixup_with) prov["mixup"] = {{"with", *s.mixup_with}, {"lambda", s.mixup_lambda}};
            write_json(out_dir / (stem + ".json"), prov);
            samples.push_back(std::move(s));
        }
    }
    return samples;
}

// ---------------------------------------------------------------------------
// eval

struct EvalOptions {
    LossWeights weights;
    std::set<std::string> metrics = {"psnr", "ssim", "essim", "sp"};
    std::optional<fs::path> pred_mask_dir;  ///< <dir>/<id>.png soft masks for detection/joint loss
};

/// JSON cannot hold infinities; they are written as the string "inf".
inline nlohmann::json json_number(double v) {
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    if (std::isnan(v)) return nullptr;
    return v;
}

inline std::optional<fs::path> find_prediction(const fs::path& dir, const std::string& id) {
    for (const char* ext : {".png", ".jpg", ".jpeg"}) {
        const fs::path p = dir / (id + ext);
        if (fs::exists(p)) return p;
    }
    return std::nullopt;
}

/**
 * Scores <pred_dir>/<id>.png against each entry's (aligned) GT. Columns:
 * psnr, ssim, essim, sp, mse and removal (when essim and sp are both
 * requested), detection and joint (when a predicted mask and a GT mask
 * exist). Missing predictions are flagged and left out of the means.
 */
inline nlohmann::json run_eval(const DatasetManifest& manifest, const fs::path& pred_dir, const EvalOptions& opts,
                               const FeatureExtractor& extractor, const nlohmann::json& effective_config = {}) {
    LossWeights::make(opts.weights.alpha, opts.weights.beta);
    for (const auto& m : opts.metrics)
        if (m != "psnr" && m != "ssim" && m != "essim" && m != "sp")
            throw ValidationError("eval: unknown metric '" + m + "'");
    const bool want_psnr = opts.metrics.count("psnr"), want_ssim = opts.metrics.count("ssim");
    const bool want_essim = opts.metrics.count("essim"), want_sp = opts.metrics.count("sp");

    std::vector<nlohmann::json> rows(manifest.entries.size());
    parallel_for(manifest.entries.size(), 0, [&](size_t i) {
        const auto& e = manifest.entries[i];
        nlohmann::json r;
        r["id"] = e.id;
        const auto pred_path = find_prediction(pred_dir, e.id);
        if (!pred_path) {
            r["missing"] = true;
            rows[i] = std::move(r);
            return;
        }
        try {
            const Image pred = read_image(*pred_path);
            const Image gt = read_image(e.target_gt_path());
            if (!pred.same_shape(gt)) throw DimensionError("prediction and GT differ in shape");
            if (want_psnr) r["psnr"] = psnr(pred, gt);
            if (want_ssim) r["ssim"] = ssim(pred, gt);
            const double m = mse(pred, gt);
            r["mse"] = m;
            std::optional<double> es, sp;
            if (want_essim) r["essim"] = *(es = essim_loss(pred, gt));
            if (want_sp) r["sp"] = *(sp = sp_loss(pred, gt, extractor));
            if (es && sp) {
                const double removal = removal_loss(*sp, *es, m, opts.weights.beta);
                r["removal"] = removal;
                if (opts.pred_mask_dir && e.mask_path) {
                    if (auto pm = find_prediction(*opts.pred_mask_dir, e.id)) {
                        const double det = detection_loss(read_plane(*pm), read_mask(*e.mask_path));
                        r["detection"] = det;
                        r["joint"] = joint_loss(removal, det, opts.weights.alpha);
                    }
                }
            }
        } catch (const std::exception& ex) {
            r = {{"id", e.id}, {"error", ex.what()}};
        }
        rows[i] = std::move(r);
    });

    std::map<std::string, std::pair<double, size_t>> acc;
    nlohmann::json images = nlohmann::json::array();
    size_t evaluated = 0, missing = 0, failed = 0;
    for (auto& r : rows) {
        if (r.contains("missing")) {
            ++missing;
        } else if (r.contains("error")) {
            ++failed;
        } else {
            ++evaluated;
            for (auto it = r.begin(); it != r.end(); ++it) {
                if (!it.value().is_number()) continue;
                auto& [s, n] = acc[it.key()];
                s += it.value().get<double>();
                ++n;
            }
        }
        nlohmann::json out;
        for (auto it = r.begin(); it != r.end(); ++it)
            out[it.key()] = it.value().is_number_float() ? json_number(it.value().get<double>()) : it.value();
        images.push_back(std::move(out));
    }
    nlohmann::json mean = nlohmann::json::object();
    for (const auto& [k, v] : acc) mean[k] = json_number(v.first / double(v.second));
    nlohmann::json report;
    report["config"] = effective_config;
    report["weights"] = {{"alpha", opts.weights.alpha}, {"beta", opts.weights.beta}};
    report["evaluated"] = evaluated;
    report["missing"] = missing;
    report["failed"] = failed;
    report["images"] = images;
    report["mean"] = mean;
    return report;
}

}  // namespace shadowkit
