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

// Semi-automatic shadow mask annotation.
//
// The shadow/GT pair is reduced to the absolute difference of their HSV value
// channels. A 256-bin histogram of that error plane is shown to an annotator
// together with a proposed [lower, upper] bracket around the shadow mode; the
// annotator accepts or adjusts it, and every pixel whose error falls inside
// the bracket becomes a shadow pixel.
//
// Proposal rule (a tool choice, overridable by the annotator): ignore errors
// below 0.05 (the lit-region mass) and, by default, the decaying tail of that
// mass beyond 0.05; take the fullest remaining bin as the peak, grow a
// contiguous run around it while bins hold >= 10% of the peak count, and
// widen that run by 2 bins on each side.

#pragma once

#include <algorithm>
#include <array>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "shadowkit/color.hpp"
#include "shadowkit/image.hpp"
#include "shadowkit/io.hpp"

namespace shadowkit {

inline constexpr int kHistogramBins = 256;
inline constexpr int kNoPeak = -1;

struct ProposalParams {
    double exclude_below = 0.05;   ///< error values under this are never the peak
    double run_fraction = 0.10;    ///< bins in the run hold at least this share of the peak count
    int widen_bins = 2;
    /// Also skip bins past exclude_below while the 5-bin smoothed histogram keeps
    /// falling, so resampling or noise spill from the lit mass is not taken as the peak.
    bool skip_decaying_tail = true;
};

struct Histogram {
    std::array<uint64_t, kHistogramBins> bins{};
    double bin_width = 1.0 / kHistogramBins;
    int peak = kNoPeak;  ///< bin index, or kNoPeak when no shadow mode was found
    int lower = kNoPeak;
    int upper = kNoPeak;

    bool has_proposal() const noexcept { return peak != kNoPeak; }
    uint64_t total() const noexcept {
        uint64_t s = 0;
        for (auto b : bins) s += b;
        return s;
    }
};

enum class SelectionSource { Proposed, HumanAdjusted };

inline std::string to_string(SelectionSource s) { return s == SelectionSource::Proposed ? "proposed" : "human-adjusted"; }

inline SelectionSource parse_selection_source(const std::string& s) {
    if (s == "proposed") return SelectionSource::Proposed;
    if (s == "human-adjusted") return SelectionSource::HumanAdjusted;
    throw ValidationError("unknown selection source '" + s + "'");
}

/// Inclusive error-value bracket; 0 <= lower <= upper <= 1.
struct ThresholdSelection {
    double lower = 0.0;
    double upper = 1.0;
    SelectionSource source = SelectionSource::Proposed;

    static ThresholdSelection make(double lower, double upper, SelectionSource src) {
        if (!(lower >= 0.0 && upper <= 1.0 && lower <= upper))
            throw ValidationError("selection must satisfy 0 <= lower <= upper <= 1");
        return {lower, upper, src};
    }

    friend bool operator==(const ThresholdSelection&, const ThresholdSelection&) = default;
};

inline int bin_of(double v) noexcept { return std::clamp(int(v * kHistogramBins), 0, kHistogramBins - 1); }

/// |V(input) - V(gt)| per pixel; gt must already be aligned to input.
inline Plane error_map(const Image& input, const Image& gt_aligned) {
    require_same_size(input, gt_aligned, "error_map");
    const Plane a = v_channel(input);
    const Plane b = v_channel(gt_aligned);
    Plane out(a.width(), a.height());
    auto da = a.data(), db = b.data();
    auto d = out.data();
    for (size_t i = 0; i < d.size(); ++i) d[i] = std::abs(da[i] - db[i]);
    return out;
}

inline Histogram build_histogram(const Plane& err, const ProposalParams& params = {}) {
    Histogram h;
    for (double v : err.data()) ++h.bins[size_t(bin_of(v))];

    // First bin lying entirely at or above the exclusion threshold.
    int first = int(std::ceil(params.exclude_below * kHistogramBins - 1e-9));
    first = std::clamp(first, 0, kHistogramBins - 1);
    if (params.skip_decaying_tail) {
        std::array<double, kHistogramBins> smooth{};
        for (int b = 0; b < kHistogramBins; ++b) {
            const int lo = std::max(0, b - 2), hi = std::min(kHistogramBins - 1, b + 2);
            for (int k = lo; k <= hi; ++k) smooth[size_t(b)] += double(h.bins[size_t(k)]);
            smooth[size_t(b)] /= double(hi - lo + 1);
        }
        while (first + 1 < kHistogramBins && smooth[size_t(first + 1)] <= smooth[size_t(first)]) ++first;
    }
    uint64_t best = 0;
    for (int b = first; b < kHistogramBins; ++b)
        if (h.bins[size_t(b)] > best) {
            best = h.bins[size_t(b)];
            h.peak = b;
        }
    if (h.peak == kNoPeak) return h;

    const double floor_count = params.run_fraction * double(best);
    int lo = h.peak, hi = h.peak;
    while (lo - 1 >= first && double(h.bins[size_t(lo - 1)]) >= floor_count) --lo;
    while (hi + 1 < kHistogramBins && double(h.bins[size_t(hi + 1)]) >= floor_count) ++hi;
    h.lower = std::max(0, lo - params.widen_bins);
    h.upper = std::min(kHistogramBins - 1, hi + params.widen_bins);
    return h;
}

/// Error-value bracket covering the proposed bins, or nullopt without a proposal.
inline std::optional<ThresholdSelection> proposed_selection(const Histogram& h) {
    if (!h.has_proposal()) return std::nullopt;
    return ThresholdSelection{double(h.lower) / kHistogramBins, double(h.upper + 1) / kHistogramBins,
                              SelectionSource::Proposed};
}

namespace detail {

inline ShadowMask morph(const ShadowMask& m, bool dilate) {
    ShadowMask out(m.width(), m.height());
    for (int y = 0; y < m.height(); ++y)
        for (int x = 0; x < m.width(); ++x) {
            bool v = !dilate;
            for (int dy = -1; dy <= 1; ++dy)
                for (int dx = -1; dx <= 1; ++dx) {
                    const int nx = x + dx, ny = y + dy;
                    if (nx < 0 || ny < 0 || nx >= m.width() || ny >= m.height()) continue;
                    if (dilate)
                        v = v || m.at(nx, ny);
                    else
                        v = v && m.at(nx, ny);
                }
            out.set(x, y, v);
        }
    return out;
}

}  // namespace detail

/// 3x3 opening followed by 3x3 closing; out-of-image neighbors are ignored.
inline ShadowMask morphological_cleanup(const ShadowMask& m) {
    using detail::morph;
    const ShadowMask opened = morph(morph(m, false), true);
    return morph(morph(opened, true), false);
}

/// 1 where lower <= err <= upper.
inline ShadowMask binarize(const Plane& err, const ThresholdSelection& sel, bool cleanup = false) {
    if (!(sel.lower >= 0.0 && sel.upper <= 1.0 && sel.lower <= sel.upper))
        throw ValidationError("binarize: invalid selection");
    ShadowMask m(err.width(), err.height());
    for (int y = 0; y < err.height(); ++y)
        for (int x = 0; x < err.width(); ++x) {
            const double v = err.at(x, y);
            m.set(x, y, v >= sel.lower && v <= sel.upper);
        }
    return cleanup ? morphological_cleanup(m) : m;
}

/// image-id -> selection, persisted as {"id": {"lower":..,"upper":..,"source":..}}.
class SelectionStore {
public:
    SelectionStore() = default;

    static SelectionStore load(const std::filesystem::path& path) {
        SelectionStore s;
        if (!std::filesystem::exists(path)) return s;
        std::ifstream in(path);
        nlohmann::json j;
        try {
            in >> j;
        } catch (const nlohmann::json::exception& e) {
            throw IoError(path.string() + ": " + e.what());
        }
        s = from_json(j);
        return s;
    }

    static SelectionStore from_json(const nlohmann::json& j) {
        SelectionStore s;
        for (auto it = j.begin(); it != j.end(); ++it) {
            const auto& v = it.value();
            s.entries_[it.key()] = ThresholdSelection::make(
                v.at("lower").get<double>(), v.at("upper").get<double>(),
                parse_selection_source(v.value("source", std::string("human-adjusted"))));
        }
        return s;
    }

    nlohmann::json to_json() const {
        nlohmann::json j = nlohmann::json::object();
        for (const auto& [id, sel] : entries_)
            j[id] = {{"lower", sel.lower}, {"upper", sel.upper}, {"source", shadowkit::to_string(sel.source)}};
        return j;
    }

    void save(const std::filesystem::path& path) const {
        const std::string text = to_json().dump(2) + "\n";
        write_file(path, Bytes(text.begin(), text.end()));
    }

    std::optional<ThresholdSelection> find(const std::string& id) const {
        auto it = entries_.find(id);
        if (it == entries_.end()) return std::nullopt;
        return it->second;
    }

    void put(const std::string& id, const ThresholdSelection& sel) { entries_[id] = sel; }
    bool erase(const std::string& id) { return entries_.erase(id) > 0; }
    size_t size() const noexcept { return entries_.size(); }
    bool empty() const noexcept { return entries_.empty(); }

private:
    std::map<std::string, ThresholdSelection> entries_;
};

struct AnnotateOptions {
    ProposalParams proposal;
    bool cleanup = false;
};

struct Annotation {
    std::string id;
    std::optional<ShadowMask> mask;
    std::optional<ThresholdSelection> selection;  ///< the bracket actually applied
    Histogram histogram;
    std::string error;  ///< non-empty when the pair could not be processed

    bool ok() const noexcept { return mask.has_value(); }
};

/**
 * Mask for one aligned pair: a stored selection wins, else the automatic
 * proposal; without either the mask is empty (all lit) and the
 * selection is nullopt.
 */
inline Annotation annotate_pair(const std::string& id, const Image& input, const Image& gt_aligned,
                                const SelectionStore& store, const AnnotateOptions& opts = {}) {
    Annotation a;
    a.id = id;
    const Plane err = error_map(input, gt_aligned);
    a.histogram = build_histogram(err, opts.proposal);
    a.selection = store.find(id);
    if (!a.selection) a.selection = proposed_selection(a.histogram);
    a.mask = a.selection ? binarize(err, *a.selection, opts.cleanup) : ShadowMask(err.width(), err.height());
    return a;
}

struct PairSource {
    std::string id;
    std::filesystem::path input_path;
    std::filesystem::path gt_path;  ///< aligned GT
};

/// Loads and annotates every pair; unreadable or mismatched pairs are reported and skipped.
inline std::vector<Annotation> annotate_batch(const std::vector<PairSource>& pairs, const SelectionStore& store,
                                              const AnnotateOptions& opts = {}) {
    std::vector<Annotation> out;
    out.reserve(pairs.size());
    for (const auto& p : pairs) {
        try {
            out.push_back(annotate_pair(p.id, read_image(p.input_path), read_image(p.gt_path), store, opts));
        } catch (const Error& e) {
            Annotation a;
            a.id = p.id;
            a.error = e.what();
            out.push_back(std::move(a));
        }
    }
    return out;
}

inline nlohmann::json histogram_json(const Histogram& h) {
    nlohmann::json j;
    j["bins"] = h.bins;
    j["bin_width"] = h.bin_width;
    j["peak"] = h.peak;
    if (h.has_proposal()) {
        const auto sel = *proposed_selection(h);
        j["proposed_lower"] = sel.lower;
        j["proposed_upper"] = sel.upper;
    } else {
        j["proposed_lower"] = nullptr;
        j["proposed_upper"] = nullptr;
    }
    return j;
}

/// Provenance sidecar for a written mask.
inline nlohmann::json annotation_json(const Annotation& a, bool cleanup) {
    nlohmann::json j;
    j["id"] = a.id;
    j["peak_bin"] = a.histogram.peak;
    if (a.selection) {
        j["lower"] = a.selection->lower;
        j["upper"] = a.selection->upper;
        j["source"] = to_string(a.selection->source);
    } else {
        j["lower"] = nullptr;
        j["upper"] = nullptr;
        j["source"] = "none";
    }
    j["cleanup"] = cleanup;
    if (a.mask) j["shadow_pixels"] = a.mask->count();
    if (!a.error.empty()) j["error"] = a.error;
    return j;
}

}  // namespace shadowkit
