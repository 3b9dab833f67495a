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
#include <span>
#include <vector>

#include "shadowkit/image.hpp"
#include "shadowkit/warp.hpp"

namespace shadowkit {

/// Unbounded scalar field (gradients, filter responses).
struct Grid {
    int width = 0;
    int height = 0;
    std::vector<double> v;

    Grid() = default;
    Grid(int w, int h, double fill = 0.0) : width(w), height(h), v(size_t(w) * size_t(h), fill) {}
    explicit Grid(const Plane& p) : width(p.width()), height(p.height()), v(p.data().begin(), p.data().end()) {}

    double operator()(int x, int y) const noexcept { return v[size_t(y) * size_t(width) + size_t(x)]; }
    double& operator()(int x, int y) noexcept { return v[size_t(y) * size_t(width) + size_t(x)]; }

    /// Reflect-101 read.
    double reflect(int x, int y) const noexcept { return (*this)(reflect101(x, width), reflect101(y, height)); }
};

/// Normalized 1-D Gaussian taps of length 2*radius+1; radius defaults to ceil(3 sigma).
inline std::vector<double> gaussian_kernel(double sigma, int radius = -1) {
    if (radius < 0) radius = std::max(1, int(std::ceil(3.0 * sigma)));
    std::vector<double> k(size_t(2 * radius + 1));
    double sum = 0.0;
    for (int i = -radius; i <= radius; ++i) {
        const double v = std::exp(-0.5 * double(i * i) / (sigma * sigma));
        k[size_t(i + radius)] = v;
        sum += v;
    }
    for (double& v : k) v /= sum;
    return k;
}

/// Separable convolution with an odd symmetric kernel, reflect-101 borders.
inline Grid convolve_separable(const Grid& src, std::span<const double> kx, std::span<const double> ky) {
    const int rx = int(kx.size() / 2), ry = int(ky.size() / 2);
    Grid tmp(src.width, src.height);
    for (int y = 0; y < src.height; ++y)
        for (int x = 0; x < src.width; ++x) {
            double s = 0.0;
            for (int i = -rx; i <= rx; ++i) s += kx[size_t(i + rx)] * src.reflect(x + i, y);
            tmp(x, y) = s;
        }
    Grid out(src.width, src.height);
    for (int y = 0; y < src.height; ++y)
        for (int x = 0; x < src.width; ++x) {
            double s = 0.0;
            for (int i = -ry; i <= ry; ++i) s += ky[size_t(i + ry)] * tmp.reflect(x, y + i);
            out(x, y) = s;
        }
    return out;
}

inline Grid gaussian_blur(const Grid& src, double sigma) {
    if (sigma <= 0.0) return src;
    const auto k = gaussian_kernel(sigma);
    return convolve_separable(src, k, k);
}

/// Sobel derivatives scaled by 1/8, i.e. intensity change per pixel.
struct Gradients {
    Grid dx;
    Grid dy;
};

inline Gradients sobel(const Grid& src) {
    Gradients g{Grid(src.width, src.height), Grid(src.width, src.height)};
    for (int y = 0; y < src.height; ++y)
        for (int x = 0; x < src.width; ++x) {
            const double a = src.reflect(x - 1, y - 1), b = src.reflect(x, y - 1), c = src.reflect(x + 1, y - 1);
            const double d = src.reflect(x - 1, y), f = src.reflect(x + 1, y);
            const double gg = src.reflect(x - 1, y + 1), h = src.reflect(x, y + 1), i = src.reflect(x + 1, y + 1);
            g.dx(x, y) = ((c + 2 * f + i) - (a + 2 * d + gg)) / 8.0;
            g.dy(x, y) = ((gg + 2 * h + i) - (a + 2 * b + c)) / 8.0;
        }
    return g;
}

/// 2x2 box average; odd trailing rows/columns are dropped.
inline Grid downsample2(const Grid& src) {
    Grid out(std::max(1, src.width / 2), std::max(1, src.height / 2));
    for (int y = 0; y < out.height; ++y)
        for (int x = 0; x < out.width; ++x) {
            const int x0 = std::min(2 * x, src.width - 1), x1 = std::min(2 * x + 1, src.width - 1);
            const int y0 = std::min(2 * y, src.height - 1), y1 = std::min(2 * y + 1, src.height - 1);
            out(x, y) = 0.25 * (src(x0, y0) + src(x1, y0) + src(x0, y1) + src(x1, y1));
        }
    return out;
}

/// Area-weighted (box) resampling to an arbitrary size.
inline Grid resize_area(const Grid& src, int out_w, int out_h) {
    auto weights = [](int in, int out) {
        // For each output index, list (input index, weight) with weights summing to 1.
        std::vector<std::vector<std::pair<int, double>>> w(static_cast<size_t>(out));
        const double scale = double(in) / double(out);
        for (int o = 0; o < out; ++o) {
            const double lo = o * scale, hi = (o + 1) * scale;
            for (int i = int(std::floor(lo)); i < int(std::ceil(hi)) && i < in; ++i) {
                const double overlap = std::min(hi, double(i + 1)) - std::max(lo, double(i));
                if (overlap > 0) w[size_t(o)].push_back({i, overlap / scale});
            }
        }
        return w;
    };
    const auto wx = weights(src.width, out_w);
    const auto wy = weights(src.height, out_h);
    Grid out(out_w, out_h);
    for (int y = 0; y < out_h; ++y)
        for (int x = 0; x < out_w; ++x) {
            double s = 0.0;
            for (auto [iy, fy] : wy[size_t(y)])
                for (auto [ix, fx] : wx[size_t(x)]) s += fx * fy * src(ix, iy);
            out(x, y) = s;
        }
    return out;
}

}  // namespace shadowkit
