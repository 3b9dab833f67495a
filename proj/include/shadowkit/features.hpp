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

#pragma once

#include <algorithm>
#include <array>
#include <bit>
#include <climits>
#include <cmath>
#include <cstdint>
#include <random>
#include <span>
#include <tuple>
#include <vector>

#include <json.hpp>

#include "shadowkit/color.hpp"
#include "shadowkit/filter.hpp"
#include "shadowkit/geometry.hpp"
#include "shadowkit/image.hpp"

namespace shadowkit {

/// Corner location in full-resolution continuous coordinates.
struct Keypoint {
    double x = 0.0;
    double y = 0.0;
    int scale = 0;  ///< pyramid octave the corner was found in
    double response = 0.0;
};

/// 256-bit binary intensity-comparison descriptor.
struct Descriptor {
    std::array<uint64_t, 4> bits{};

    bool test(int i) const noexcept { return (bits[size_t(i / 64)] >> (i % 64)) & 1u; }
    void set(int i) noexcept { bits[size_t(i / 64)] |= uint64_t(1) << (i % 64); }

    friend bool operator==(const Descriptor&, const Descriptor&) = default;
};

inline int hamming(const Descriptor& a, const Descriptor& b) noexcept {
    int d = 0;
    for (size_t i = 0; i < 4; ++i) d += std::popcount(a.bits[i] ^ b.bits[i]);
    return d;
}

struct Feature {
    Keypoint keypoint;
    Descriptor descriptor;
};

struct MatchPair {
    Point2 src;
    Point2 dst;
    int distance = 0;
    size_t src_index = 0;
    size_t dst_index = 0;
};

struct DetectParams {
    int max_keypoints = 1500;
    int octaves = 3;
    double harris_k = 0.04;
    double smoothing_sigma = 1.0;  ///< pre-derivative smoothing
    double window_sigma = 1.5;     ///< structure-tensor integration window
    double relative_threshold = 0.01;
    double absolute_threshold = 1e-9;
    int nms_radius = 2;
};

/// Pixels kept clear of each pyramid level's border so the descriptor patch fits.
inline constexpr int kFeatureBorder = 16;
inline constexpr int kPatchRadius = 15;

namespace detail {

inline std::vector<Grid> luminance_pyramid(const Image& img, int octaves) {
    std::vector<Grid> levels;
    levels.emplace_back(luminance(img));
    for (int o = 1; o < octaves; ++o) {
        const Grid& prev = levels.back();
        if (prev.width / 2 < 2 * kFeatureBorder + 1 || prev.height / 2 < 2 * kFeatureBorder + 1) break;
        levels.push_back(downsample2(prev));
    }
    return levels;
}

// Harris response with derivatives expressed per full-resolution pixel, so
// responses from different octaves are comparable.
inline Grid harris_response(const Grid& level, int octave, const DetectParams& p) {
    const Gradients g = sobel(gaussian_blur(level, p.smoothing_sigma));
    const double unit = 1.0 / double(1 << octave);
    Grid ixx(level.width, level.height), iyy(level.width, level.height), ixy(level.width, level.height);
    for (size_t i = 0; i < ixx.v.size(); ++i) {
        const double dx = g.dx.v[i] * unit, dy = g.dy.v[i] * unit;
        ixx.v[i] = dx * dx;
        iyy.v[i] = dy * dy;
        ixy.v[i] = dx * dy;
    }
    ixx = gaussian_blur(ixx, p.window_sigma);
    iyy = gaussian_blur(iyy, p.window_sigma);
    ixy = gaussian_blur(ixy, p.window_sigma);
    Grid r(level.width, level.height);
    for (size_t i = 0; i < r.v.size(); ++i) {
        const double det = ixx.v[i] * iyy.v[i] - ixy.v[i] * ixy.v[i];
        const double tr = ixx.v[i] + iyy.v[i];
        r.v[i] = det - p.harris_k * tr * tr;
    }
    return r;
}

// Raster-order tie-breaking keeps exactly one of several equal maxima.
inline bool is_local_max(const Grid& r, int x, int y, int radius) {
    const double c = r(x, y);
    for (int dy = -radius; dy <= radius; ++dy)
        for (int dx = -radius; dx <= radius; ++dx) {
            if (dx == 0 && dy == 0) continue;
            const int nx = x + dx, ny = y + dy;
            if (nx < 0 || ny < 0 || nx >= r.width || ny >= r.height) continue;
            const double n = r(nx, ny);
            const bool before = dy < 0 || (dy == 0 && dx < 0);
            if (before ? n >= c : n > c) return false;
        }
    return true;
}

inline double parabola_offset(double left, double center, double right) {
    const double denom = left - 2.0 * center + right;
    if (denom >= 0.0) return 0.0;
    return std::clamp(0.5 * (left - right) / denom, -0.5, 0.5);
}

inline bool keypoint_order(const Keypoint& a, const Keypoint& b) {
    return std::tie(b.response, a.y, a.x, a.scale) < std::tie(a.response, b.y, b.x, b.scale);
}

struct SamplePair {
    int x1, y1, x2, y2;
};

// Fixed comparison pattern: offsets drawn from an isotropic Gaussian with
// sigma = patch/5, clipped to the patch. Box-Muller over mt19937 keeps the
// pattern identical across standard libraries.
inline const std::array<SamplePair, 256>& brief_pattern() {
    static const std::array<SamplePair, 256> pattern = [] {
        std::array<SamplePair, 256> out{};
        std::mt19937 rng(0x5ad0u);
        const double sigma = (2.0 * kPatchRadius + 1.0) / 5.0;
        auto uniform = [&] { return (double(rng()) + 0.5) / 4294967296.0; };
        auto gauss = [&] {
            const double u1 = uniform(), u2 = uniform();
            const double v = std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586 * u2) * sigma;
            return std::clamp(int(std::lround(v)), -kPatchRadius, kPatchRadius);
        };
        for (auto& s : out) {
            do {
                s = {gauss(), gauss(), gauss(), gauss()};
            } while (s.x1 == s.x2 && s.y1 == s.y2);
        }
        return out;
    }();
    return pattern;
}

}  // namespace detail

/**
 * Multi-scale corner detection.
 *
 * Harris corner strength on a 2x box pyramid of the luminance, strict
 * non-maximum suppression per octave, parabolic sub-pixel refinement.
 * Output is sorted by (response desc, y, x) and truncated to max_keypoints.
 */
inline std::vector<Keypoint> detect(const Image& img, const DetectParams& params = {}) {
    std::vector<Keypoint> out;
    if (params.max_keypoints <= 0) return out;
    const auto levels = detail::luminance_pyramid(img, std::max(1, params.octaves));
    for (int o = 0; o < int(levels.size()); ++o) {
        const Grid& level = levels[size_t(o)];
        if (level.width < 2 * kFeatureBorder + 1 || level.height < 2 * kFeatureBorder + 1) break;
        const Grid r = detail::harris_response(level, o, params);
        const double peak = *std::max_element(r.v.begin(), r.v.end());
        const double thr = std::max(params.absolute_threshold, params.relative_threshold * peak);
        const double scale = double(1 << o);
        for (int y = kFeatureBorder; y < level.height - kFeatureBorder; ++y)
            for (int x = kFeatureBorder; x < level.width - kFeatureBorder; ++x) {
                const double c = r(x, y);
                if (!(c > thr) || !detail::is_local_max(r, x, y, params.nms_radius)) continue;
                const double ox = detail::parabola_offset(r(x - 1, y), c, r(x + 1, y));
                const double oy = detail::parabola_offset(r(x, y - 1), c, r(x, y + 1));
                out.push_back({(x + ox + 0.5) * scale, (y + oy + 0.5) * scale, o, c});
            }
    }
    std::sort(out.begin(), out.end(), detail::keypoint_order);
    if (out.size() > size_t(params.max_keypoints)) out.resize(size_t(params.max_keypoints));
    return out;
}

inline std::vector<Keypoint> detect(const Image& img, int max_keypoints, int octaves) {
    DetectParams p;
    p.max_keypoints = max_keypoints;
    p.octaves = octaves;
    return detect(img, p);
}

struct DescribeResult {
    std::vector<Feature> features;
    std::vector<size_t> skipped;  ///< input indices whose patch left the image
};

struct DescribeParams {
    double smoothing_sigma = 2.0;
    int octaves = 3;  ///< must cover the octaves used at detection
};

/// BRIEF-style descriptors on a Gaussian-smoothed pyramid level at each keypoint.
inline DescribeResult describe(const Image& img, std::span<const Keypoint> kps, const DescribeParams& params = {}) {
    DescribeResult res;
    int needed = params.octaves;
    for (const auto& k : kps) needed = std::max(needed, k.scale + 1);
    const auto levels = detail::luminance_pyramid(img, needed);
    std::vector<Grid> smooth;
    smooth.reserve(levels.size());
    for (const auto& l : levels) smooth.push_back(gaussian_blur(l, params.smoothing_sigma));
    const auto& pattern = detail::brief_pattern();
    for (size_t i = 0; i < kps.size(); ++i) {
        const Keypoint& k = kps[i];
        if (k.scale < 0 || k.scale >= int(smooth.size())) {
            res.skipped.push_back(i);
            continue;
        }
        const Grid& g = smooth[size_t(k.scale)];
        const double s = double(1 << k.scale);
        const int cx = int(std::lround(k.x / s - 0.5)), cy = int(std::lround(k.y / s - 0.5));
        if (cx < kPatchRadius || cy < kPatchRadius || cx >= g.width - kPatchRadius || cy >= g.height - kPatchRadius) {
            res.skipped.push_back(i);
            continue;
        }
        Descriptor d;
        for (int b = 0; b < 256; ++b) {
            const auto& sp = pattern[size_t(b)];
            if (g(cx + sp.x1, cy + sp.y1) < g(cx + sp.x2, cy + sp.y2)) d.set(b);
        }
        res.features.push_back({k, d});
    }
    return res;
}

struct MatchParams {
    double ratio = 0.8;
    bool cross_check = true;
};

/**
 * Brute-force Hamming matching with the ratio test (best < ratio * second
 * best) and optional mutual-nearest-neighbor check. Ties resolve to the
 * lowest index.
 */
inline std::vector<MatchPair> match(std::span<const Feature> a, std::span<const Feature> b,
                                    const MatchParams& params = {}) {
    std::vector<MatchPair> out;
    if (a.empty() || b.empty()) return out;
    std::vector<size_t> best_in_a(b.size(), 0);
    if (params.cross_check) {
        std::vector<int> best_dist(b.size(), INT_MAX);
        for (size_t i = 0; i < a.size(); ++i)
            for (size_t j = 0; j < b.size(); ++j) {
                const int d = hamming(a[i].descriptor, b[j].descriptor);
                if (d < best_dist[j]) {
                    best_dist[j] = d;
                    best_in_a[j] = i;
                }
            }
    }
    for (size_t i = 0; i < a.size(); ++i) {
        int best = INT_MAX, second = INT_MAX;
        size_t best_j = 0;
        for (size_t j = 0; j < b.size(); ++j) {
            const int d = hamming(a[i].descriptor, b[j].descriptor);
            if (d < best) {
                second = best;
                best = d;
                best_j = j;
            } else if (d < second) {
                second = d;
            }
        }
        const bool unique = second == INT_MAX || double(best) < params.ratio * double(second);
        if (!unique) continue;
        if (params.cross_check && best_in_a[best_j] != i) continue;
        out.push_back({{a[i].keypoint.x, a[i].keypoint.y}, {b[best_j].keypoint.x, b[best_j].keypoint.y}, best, i, best_j});
    }
    return out;
}

inline std::vector<MatchPair> match(std::span<const Feature> a, std::span<const Feature> b, double ratio) {
    MatchParams p;
    p.ratio = ratio;
    return match(a, b, p);
}

inline nlohmann::json to_json(const Keypoint& k) {
    return {{"x", k.x}, {"y", k.y}, {"scale", k.scale}, {"response", k.response}};
}

inline nlohmann::json to_json(const MatchPair& m) {
    return {{"src", {m.src.x, m.src.y}}, {"dst", {m.dst.x, m.dst.y}}, {"distance", m.distance}};
}

}  // namespace shadowkit
