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

#include <cmath>
#include <vector>

#include "shadowkit/color.hpp"
#include "shadowkit/filter.hpp"
#include "shadowkit/image.hpp"

namespace shadowkit {

/// Thresholds apply to canny_magnitude: an unsmoothed unit step reads 1.
struct CannyParams {
    double low = 0.1;
    double high = 0.2;
    double sigma = 1.4;
};

/// Gradient magnitude after Gaussian smoothing, as used by canny().
namespace detail {

inline Grid magnitude(const Gradients& g) {
    Grid mag(g.dx.width, g.dx.height);
    for (size_t i = 0; i < mag.v.size(); ++i) mag.v[i] = 2.0 * std::hypot(g.dx.v[i], g.dy.v[i]);
    return mag;
}

}  // namespace detail

/// Smoothed gradient magnitude, scaled so an unsmoothed unit step reads 1.
inline Grid canny_magnitude(const Plane& p, double sigma) {
    return detail::magnitude(sobel(gaussian_blur(Grid(p), sigma)));
}

/**
 * Canny edge detector: Gaussian smoothing, Sobel gradients, non-maximum
 * suppression along the quantized gradient direction, double-threshold
 * hysteresis with 8-connectivity.
 *
 * Along the gradient a pixel must beat its predecessor strictly and its
 * successor or tie, so a symmetric ridge yields a single-pixel line.
 */
inline EdgeMap canny(const Plane& p, const CannyParams& params = {}) {
    if (!(params.low >= 0.0 && params.low <= params.high)) throw ValidationError("canny: need 0 <= low <= high");
    const int w = p.width(), h = p.height();
    const Gradients g = sobel(gaussian_blur(Grid(p), params.sigma));
    const Grid mag = detail::magnitude(g);

    auto m_at = [&](int x, int y) { return (x < 0 || y < 0 || x >= w || y >= h) ? 0.0 : mag(x, y); };

    // 0 = none, 1 = weak candidate, 2 = strong.
    std::vector<uint8_t> cls(size_t(w) * size_t(h), 0);
    constexpr double kTan22 = 0.41421356237309503;
    for (int y = 0; y < h; ++y)
        for (int x = 0; x < w; ++x) {
            const double m = mag(x, y);
            if (m < params.low || m == 0.0) continue;
            const double gx = g.dx(x, y), gy = g.dy(x, y);
            const double ax = std::abs(gx), ay = std::abs(gy);
            int dx, dy;
            if (ay <= kTan22 * ax) {
                dx = 1, dy = 0;
            } else if (ax <= kTan22 * ay) {
                dx = 0, dy = 1;
            } else {
                dx = 1, dy = (gx * gy > 0) ? 1 : -1;
            }
            const double before = m_at(x - dx, y - dy), after = m_at(x + dx, y + dy);
            if (!(m > before && m >= after)) continue;
            cls[size_t(y) * size_t(w) + size_t(x)] = m >= params.high ? 2 : 1;
        }

    EdgeMap edges(w, h);
    std::vector<int> stack;
    for (int i = 0; i < w * h; ++i)
        if (cls[size_t(i)] == 2) {
            edges.set(i % w, i / w, true);
            stack.push_back(i);
        }
    while (!stack.empty()) {
        const int i = stack.back();
        stack.pop_back();
        const int x = i % w, y = i / w;
        for (int dy = -1; dy <= 1; ++dy)
            for (int dx = -1; dx <= 1; ++dx) {
                const int nx = x + dx, ny = y + dy;
                if (nx < 0 || ny < 0 || nx >= w || ny >= h) continue;
                const int j = ny * w + nx;
                if (cls[size_t(j)] == 1 && !edges.at(nx, ny)) {
                    edges.set(nx, ny, true);
                    stack.push_back(j);
                }
            }
    }
    return edges;
}

inline EdgeMap canny(const Plane& p, double low, double high, double sigma) {
    return canny(p, CannyParams{low, high, sigma});
}

/// canny(v_channel(img)).
inline EdgeMap edge_detect(const Image& img, const CannyParams& params = {}) { return canny(v_channel(img), params); }

}  // namespace shadowkit
