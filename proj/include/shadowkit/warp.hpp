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
#include <cstdlib>
#include <optional>
#include <string>
#include <string_view>

#include "shadowkit/geometry.hpp"
#include "shadowkit/image.hpp"

namespace shadowkit {

/// How source coordinates outside the raster are resolved.
enum class PaddingMode {
    /// Mirror without repeating the edge sample: ... 2 1 | 0 1 2 ... n-1 | n-2 ...
    Reflect,
    /// Contribute zeros.
    Zero,
};

inline std::string_view to_string(PaddingMode m) noexcept { return m == PaddingMode::Reflect ? "reflect" : "zero"; }

inline std::optional<PaddingMode> parse_padding(std::string_view s) noexcept {
    if (s == "reflect") return PaddingMode::Reflect;
    if (s == "zero") return PaddingMode::Zero;
    return std::nullopt;
}

/// Reflect-101 index folding; always lands in [0, n).
inline int reflect101(long long i, int n) noexcept {
    if (n == 1) return 0;
    const long long period = 2LL * (n - 1);
    long long r = std::llabs(i) % period;
    if (r >= n) r = period - r;
    return int(r);
}

struct Size {
    int width = 0;
    int height = 0;
};

namespace detail {

// Bilinear sample at index-space location (u, v), i.e. pixel (x, y) sits at (x, y).
inline void sample_bilinear(const Image& img, double u, double v, PaddingMode pad, double* out) {
    const int w = img.width(), h = img.height(), ch = img.channels();
    const double fu = std::floor(u), fv = std::floor(v);
    const double ax = u - fu, ay = v - fv;
    const long long x0 = (long long)fu, y0 = (long long)fv;
    const double weights[4] = {(1 - ax) * (1 - ay), ax * (1 - ay), (1 - ax) * ay, ax * ay};
    const long long xs[4] = {x0, x0 + 1, x0, x0 + 1};
    const long long ys[4] = {y0, y0, y0 + 1, y0 + 1};
    for (int c = 0; c < ch; ++c) out[c] = 0.0;
    for (int k = 0; k < 4; ++k) {
        if (weights[k] == 0.0) continue;
        long long x = xs[k], y = ys[k];
        if (pad == PaddingMode::Zero) {
            if (x < 0 || y < 0 || x >= w || y >= h) continue;
        } else {
            x = reflect101(x, w);
            y = reflect101(y, h);
        }
        for (int c = 0; c < ch; ++c) out[c] += weights[k] * img.at(int(x), int(y), c);
    }
    for (int c = 0; c < ch; ++c) out[c] = std::clamp(out[c], 0.0, 1.0);
}

}  // namespace detail

/**
 * Resamples `img` into a raster of `out_size` such that output pixel p takes
 * the bilinear sample of `img` at h^-1(p). `h` maps source coordinates into
 * output coordinates.
 */
inline Image warp(const Image& img, const Homography& h, Size out_size, PaddingMode padding = PaddingMode::Reflect) {
    const Homography inv = h.inverse();
    Image out(out_size.width, out_size.height, img.channels());
    double px[3];
    for (int y = 0; y < out_size.height; ++y) {
        for (int x = 0; x < out_size.width; ++x) {
            const Point2 s = inv.apply({x + 0.5, y + 0.5});
            if (!std::isfinite(s.x) || !std::isfinite(s.y)) {
                for (int c = 0; c < img.channels(); ++c) out.at(x, y, c) = 0.0;
                continue;
            }
            detail::sample_bilinear(img, s.x - 0.5, s.y - 0.5, padding, px);
            for (int c = 0; c < img.channels(); ++c) out.at(x, y, c) = px[c];
        }
    }
    return out;
}

inline Image warp(const Image& img, const Homography& h, PaddingMode padding = PaddingMode::Reflect) {
    return warp(img, h, Size{img.width(), img.height()}, padding);
}

/// Quarter turn clockwise.
inline Image rotate90(const Image& img) {
    const int w = img.width(), h = img.height(), ch = img.channels();
    Image out(h, w, ch);
    for (int y = 0; y < w; ++y)
        for (int x = 0; x < h; ++x)
            for (int c = 0; c < ch; ++c) out.at(x, y, c) = img.at(y, h - 1 - x, c);
    return out;
}

/// Turns clockwise `quarter_turns` (mod 4) times.
inline Image rotate90(const Image& img, int quarter_turns) {
    quarter_turns = ((quarter_turns % 4) + 4) % 4;
    Image out = img;
    for (int i = 0; i < quarter_turns; ++i) out = rotate90(out);
    return out;
}

/// Top row becomes the bottom row.
inline Image flip_vertical(const Image& img) {
    Image out = img;
    const int w = img.width(), h = img.height(), ch = img.channels();
    for (int y = 0; y < h; ++y)
        for (int x = 0; x < w; ++x)
            for (int c = 0; c < ch; ++c) out.at(x, y, c) = img.at(x, h - 1 - y, c);
    return out;
}

template <class Tag>
BinaryRaster<Tag> rotate90(const BinaryRaster<Tag>& m, int quarter_turns = 1) {
    quarter_turns = ((quarter_turns % 4) + 4) % 4;
    BinaryRaster<Tag> cur = m;
    for (int t = 0; t < quarter_turns; ++t) {
        BinaryRaster<Tag> next(cur.height(), cur.width());
        for (int y = 0; y < cur.width(); ++y)
            for (int x = 0; x < cur.height(); ++x) next.set(x, y, cur.at(y, cur.height() - 1 - x));
        cur = std::move(next);
    }
    return cur;
}

template <class Tag>
BinaryRaster<Tag> flip_vertical(const BinaryRaster<Tag>& m) {
    BinaryRaster<Tag> out(m.width(), m.height());
    for (int y = 0; y < m.height(); ++y)
        for (int x = 0; x < m.width(); ++x) out.set(x, y, m.at(x, m.height() - 1 - y));
    return out;
}

/// lambda * a + (1 - lambda) * b.
inline Image mixup(const Image& a, const Image& b, double lambda) {
    if (!a.same_shape(b)) throw DimensionError("mixup: images differ in shape");
    if (!(lambda >= 0.0 && lambda <= 1.0)) throw ValidationError("mixup: lambda must lie in [0,1]");
    Image out(a.width(), a.height(), a.channels());
    auto da = a.data(), db = b.data();
    auto d = out.data();
    for (size_t i = 0; i < d.size(); ++i) d[i] = std::clamp(lambda * da[i] + (1.0 - lambda) * db[i], 0.0, 1.0);
    return out;
}

}  // namespace shadowkit
