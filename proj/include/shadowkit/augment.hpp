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
#include <cmath>
#include <cstdint>
#include <random>
#include <string>

#include <json.hpp>

#include "shadowkit/image.hpp"
#include "shadowkit/warp.hpp"

namespace shadowkit {

enum class CutDirection {
    /// Shadowed patch pasted onto the shadow-free image.
    ShadowToNoShadow,
    /// Shadow-free patch pasted onto the shadowed image.
    NoShadowToShadow,
};

inline std::string to_string(CutDirection d) {
    return d == CutDirection::ShadowToNoShadow ? "shadow_to_no_shadow" : "no_shadow_to_shadow";
}

/// Axis-aligned rectangle [x, x+w) x [y, y+h).
struct CutRegion {
    int x = 0;
    int y = 0;
    int w = 1;
    int h = 1;
    CutDirection direction = CutDirection::ShadowToNoShadow;

    bool contains(int px, int py) const noexcept { return px >= x && px < x + w && py >= y && py < y + h; }
    bool fits(int width, int height) const noexcept {
        return w >= 1 && h >= 1 && x >= 0 && y >= 0 && x + w <= width && y + h <= height;
    }
    double area_fraction(int width, int height) const noexcept { return double(w) * h / (double(width) * height); }
};

struct CutShadowResult {
    Image input;
    ShadowMask mask;
};

/**
 * ShadowToNoShadow: gt with the region taken from input; the mask is empty
 * outside the region and copied from `mask` inside it.
 * NoShadowToShadow: input with the region taken from gt; the mask is `mask`
 * with the region cleared.
 * The training target for the result is always `gt`, which is not modified.
 */
inline CutShadowResult cutshadow(const Image& input, const Image& gt, const ShadowMask& mask, const CutRegion& region) {
    if (!input.same_shape(gt)) throw DimensionError("cutshadow: input and gt differ in shape");
    require_same_size(input, mask, "cutshadow");
    if (!region.fits(input.width(), input.height())) throw ValidationError("cutshadow: region outside image");

    const bool to_no_shadow = region.direction == CutDirection::ShadowToNoShadow;
    CutShadowResult r{to_no_shadow ? gt : input, to_no_shadow ? ShadowMask(mask.width(), mask.height()) : mask};
    const Image& patch_src = to_no_shadow ? input : gt;
    for (int y = region.y; y < region.y + region.h; ++y)
        for (int x = region.x; x < region.x + region.w; ++x) {
            for (int c = 0; c < input.channels(); ++c) r.input.at(x, y, c) = patch_src.at(x, y, c);
            r.mask.set(x, y, to_no_shadow ? mask.at(x, y) : false);
        }
    return r;
}

struct AreaRange {
    double min = 0.05;
    double max = 0.4;
};

/**
 * Uniform random rectangle whose area fraction lies in `range` (up to
 * integer rounding when the range is narrower than one row/column step),
 * with a fair coin for the direction. Deterministic per seed.
 */
inline CutRegion sample_region(uint64_t seed, Size img, AreaRange range = {}) {
    if (img.width <= 0 || img.height <= 0) throw ValidationError("sample_region: empty image");
    if (!(range.min > 0.0 && range.min <= range.max && range.max <= 1.0))
        throw ValidationError("sample_region: need 0 < min <= max <= 1");
    std::mt19937_64 rng(seed);
    const double total = double(img.width) * img.height;
    const double target = std::uniform_real_distribution<double>(range.min, range.max)(rng) * total;

    // Width range that keeps the target area reachable with 1 <= h <= height.
    const int w_lo = std::clamp(int(std::ceil(target / img.height)), 1, img.width);
    const int w_hi = std::clamp(int(std::floor(target)), w_lo, img.width);
    CutRegion r;
    r.w = std::uniform_int_distribution<int>(w_lo, w_hi)(rng);
    r.h = std::clamp(int(std::lround(target / r.w)), 1, img.height);
    const double lo = range.min * total, hi = range.max * total;
    while (double(r.w) * r.h < lo && r.h < img.height) ++r.h;
    while (double(r.w) * r.h > hi && r.h > 1) --r.h;
    r.x = std::uniform_int_distribution<int>(0, img.width - r.w)(rng);
    r.y = std::uniform_int_distribution<int>(0, img.height - r.h)(rng);
    r.direction = std::bernoulli_distribution(0.5)(rng) ? CutDirection::ShadowToNoShadow : CutDirection::NoShadowToShadow;
    return r;
}

inline nlohmann::json to_json(const CutRegion& r) {
    return {{"x", r.x}, {"y", r.y}, {"w", r.w}, {"h", r.h}, {"direction", to_string(r.direction)}};
}

}  // namespace shadowkit
