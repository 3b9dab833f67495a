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

// Synthetic scenes with known geometry and known shadows for tests.

#pragma once

#include <algorithm>
#include <cmath>
#include <random>
#include <vector>

#include <Eigen/Dense>

#include "shadowkit/color.hpp"
#include "shadowkit/features.hpp"
#include "shadowkit/geometry.hpp"
#include "shadowkit/image.hpp"

namespace shadowkit::testing {

inline double uniform(std::mt19937_64& rng, double lo, double hi) {
    return std::uniform_real_distribution<double>(lo, hi)(rng);
}

inline Image random_image(int w, int h, int ch, std::mt19937_64& rng, double lo = 0.0, double hi = 1.0) {
    Image img(w, h, ch);
    for (double& v : img.data()) v = uniform(rng, lo, hi);
    return img;
}

inline Image constant_image(int w, int h, int ch, double value) {
    Image img(w, h, ch);
    for (double& v : img.data()) v = value;
    return img;
}

/// White square [x0, x0+side) x [y0, y0+side) on black; corners at (x0, y0) etc. in continuous coordinates.
inline Image square_image(int w, int h, int x0, int y0, int side) {
    Image img(w, h, 1);
    for (int y = y0; y < y0 + side; ++y)
        for (int x = x0; x < x0 + side; ++x) img.at(x, y) = 1.0;
    return img;
}

inline Image checkerboard(int squares_x, int squares_y, int cell, int ch = 1, double lo = 0.0, double hi = 1.0) {
    Image img(squares_x * cell, squares_y * cell, ch);
    for (int y = 0; y < img.height(); ++y)
        for (int x = 0; x < img.width(); ++x) {
            const double v = ((x / cell) + (y / cell)) % 2 ? hi : lo;
            for (int c = 0; c < ch; ++c) img.at(x, y, c) = v;
        }
    return img;
}

/// Piecewise-smooth colored scene: shaded background plus many random
/// rectangles and discs. Every pixel has V in [v_lo, v_hi].
inline Image textured_scene(int w, int h, uint64_t seed, double v_lo = 0.5, double v_hi = 0.9, int shapes = 160) {
    std::mt19937_64 rng(seed);
    Image img(w, h, 3);
    const double bh = uniform(rng, 0, 1), bs = uniform(rng, 0.1, 0.5);
    const double gx = uniform(rng, -0.1, 0.1), gy = uniform(rng, -0.1, 0.1);
    for (int y = 0; y < h; ++y)
        for (int x = 0; x < w; ++x) {
            const double v = std::clamp(0.5 * (v_lo + v_hi) + gx * (x / double(w) - 0.5) + gy * (y / double(h) - 0.5),
                                        v_lo, v_hi);
            const auto rgb = hsv_to_rgb(bh, bs, v);
            for (int c = 0; c < 3; ++c) img.at(x, y, c) = rgb[size_t(c)];
        }
    for (int s = 0; s < shapes; ++s) {
        const double hue = uniform(rng, 0, 1), sat = uniform(rng, 0.0, 0.8), val = uniform(rng, v_lo, v_hi);
        const auto rgb = hsv_to_rgb(hue, sat, val);
        const bool disc = uniform(rng, 0, 1) < 0.4;
        const double cx = uniform(rng, 0, w), cy = uniform(rng, 0, h);
        const double rx = uniform(rng, 4, std::max(6.0, w / 10.0)), ry = uniform(rng, 4, std::max(6.0, h / 10.0));
        const int x0 = std::max(0, int(cx - rx)), x1 = std::min(w - 1, int(cx + rx));
        const int y0 = std::max(0, int(cy - ry)), y1 = std::min(h - 1, int(cy + ry));
        for (int y = y0; y <= y1; ++y)
            for (int x = x0; x <= x1; ++x) {
                if (disc) {
                    const double dx = (x + 0.5 - cx) / rx, dy = (y + 0.5 - cy) / ry;
                    if (dx * dx + dy * dy > 1.0) continue;
                }
                for (int c = 0; c < 3; ++c) img.at(x, y, c) = rgb[size_t(c)];
            }
    }
    return img;
}

/// Random convex polygon: jittered, evenly spaced angles around a center.
inline std::vector<Point2> random_convex_polygon(int w, int h, std::mt19937_64& rng, int vertices = 6) {
    const double cx = uniform(rng, 0.35 * w, 0.65 * w), cy = uniform(rng, 0.35 * h, 0.65 * h);
    const double r = uniform(rng, 0.3, 0.45) * std::min(w, h);
    const double step = 2 * M_PI / vertices, phase = uniform(rng, 0, step);
    std::vector<Point2> poly;
    for (int i = 0; i < vertices; ++i) {
        const double a = phase + step * (i + uniform(rng, -0.25, 0.25));
        const double rr = r * uniform(rng, 0.8, 1.0);
        poly.push_back({cx + rr * std::cos(a), cy + rr * std::sin(a)});
    }
    return poly;
}

inline bool inside_polygon(const std::vector<Point2>& poly, double x, double y) {
    bool in = false;
    for (size_t i = 0, j = poly.size() - 1; i < poly.size(); j = i++) {
        const auto& a = poly[i];
        const auto& b = poly[j];
        if ((a.y > y) != (b.y > y) && x < (b.x - a.x) * (y - a.y) / (b.y - a.y) + a.x) in = !in;
    }
    return in;
}

/// Pixel-center rasterization.
inline ShadowMask polygon_mask(int w, int h, const std::vector<Point2>& poly) {
    ShadowMask m(w, h);
    for (int y = 0; y < h; ++y)
        for (int x = 0; x < w; ++x) m.set(x, y, inside_polygon(poly, x + 0.5, y + 0.5));
    return m;
}

/// Lowers V by `attenuation` inside the mask (hue and saturation kept) and adds
/// Gaussian noise of `sigma` to every sample, clamped to [0,1].
inline Image cast_shadow(const Image& lit, const ShadowMask& mask, double attenuation, double sigma,
                         std::mt19937_64& rng) {
    Image out = lit;
    std::normal_distribution<double> noise(0.0, sigma);
    for (int y = 0; y < lit.height(); ++y)
        for (int x = 0; x < lit.width(); ++x) {
            if (mask.at(x, y)) {
                const double v = std::max({lit.at(x, y, 0), lit.at(x, y, 1), lit.at(x, y, 2)});
                const double scale = v > 0 ? std::max(0.0, v - attenuation) / v : 0.0;
                for (int c = 0; c < 3; ++c) out.at(x, y, c) = lit.at(x, y, c) * scale;
            }
            if (sigma > 0) {
                // Shift all channels together so the noise lands on V exactly once.
                const double n = noise(rng);
                for (int c = 0; c < 3; ++c) out.at(x, y, c) = std::clamp(out.at(x, y, c) + n, 0.0, 1.0);
            }
        }
    return out;
}

/// Mild projective transform about the image center: small rotation, scale,
/// shear, translation and perspective terms.
inline Homography mild_homography(int w, int h, std::mt19937_64& rng, double strength = 1.0) {
    const double cx = w / 2.0, cy = h / 2.0;
    const double ang = uniform(rng, -0.03, 0.03) * strength;
    const double s = 1.0 + uniform(rng, -0.03, 0.03) * strength;
    Eigen::Matrix3d a;
    a << s * std::cos(ang), -s * std::sin(ang) + uniform(rng, -0.01, 0.01) * strength, uniform(rng, -6, 6) * strength,
        s * std::sin(ang), s * std::cos(ang), uniform(rng, -6, 6) * strength,
        uniform(rng, -2e-5, 2e-5) * strength, uniform(rng, -2e-5, 2e-5) * strength, 1.0;
    Eigen::Matrix3d t, ti;
    t << 1, 0, -cx, 0, 1, -cy, 0, 0, 1;
    ti << 1, 0, cx, 0, 1, cy, 0, 0, 1;
    return Homography(ti * a * t);
}

/// Random projective map of a w x h frame. The matrix expressed in
/// coordinates normalized to [-1,1] has condition number below `max_cond`
/// and a positive denominator over the whole frame.
inline Homography random_projective(int w, int h, std::mt19937_64& rng, double max_cond = 100.0) {
    const double s = 2.0 / std::max(w, h);
    Eigen::Matrix3d n;
    n << s, 0, -s * w / 2.0, 0, s, -s * h / 2.0, 0, 0, 1;
    for (;;) {
        Eigen::Matrix3d a = Eigen::Matrix3d::Identity();
        for (int r = 0; r < 2; ++r)
            for (int c = 0; c < 3; ++c) a(r, c) += uniform(rng, -0.3, 0.3);
        a(2, 0) = uniform(rng, -0.2, 0.2);
        a(2, 1) = uniform(rng, -0.2, 0.2);
        Eigen::JacobiSVD<Eigen::Matrix3d> svd(a);
        const auto sv = svd.singularValues();
        if (sv(2) <= 0 || sv(0) / sv(2) >= max_cond) continue;
        bool ok = true;
        for (double u : {-1.0, 1.0})
            for (double v : {-1.0, 1.0}) ok = ok && a(2, 0) * u + a(2, 1) * v + 1.0 > 0.2;
        if (ok) return Homography(n.inverse() * a * n);
    }
}

/// `inliers` exact-plus-Gaussian correspondences of `h` followed by
/// `outliers` uniformly random pairs, all inside a w x h frame.
inline std::vector<MatchPair> noisy_correspondences(const Homography& h, int w, int ht, int inliers, int outliers,
                                                    double sigma, std::mt19937_64& rng) {
    std::vector<MatchPair> out;
    std::normal_distribution<double> noise(0.0, sigma);
    while (int(out.size()) < inliers) {
        const Point2 s{uniform(rng, 0, w), uniform(rng, 0, ht)};
        Point2 d = h.apply(s);
        if (sigma > 0) d = {d.x + noise(rng), d.y + noise(rng)};
        out.push_back({s, d, 0, out.size(), out.size()});
    }
    for (int i = 0; i < outliers; ++i) {
        const Point2 s{uniform(rng, 0, w), uniform(rng, 0, ht)};
        const Point2 d{uniform(rng, 0, w), uniform(rng, 0, ht)};
        out.push_back({s, d, 0, out.size(), out.size()});
    }
    return out;
}

}  // namespace shadowkit::testing
