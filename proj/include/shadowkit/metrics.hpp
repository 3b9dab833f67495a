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
#include <limits>
#include <vector>

#include "shadowkit/color.hpp"
#include "shadowkit/filter.hpp"
#include "shadowkit/image.hpp"

namespace shadowkit {

/// Mean squared error over every sample.
inline double mse(const Image& a, const Image& b) {
    if (!a.same_shape(b)) throw DimensionError("mse: images differ in shape");
    auto da = a.data(), db = b.data();
    double s = 0.0;
    for (size_t i = 0; i < da.size(); ++i) {
        const double d = da[i] - db[i];
        s += d * d;
    }
    return s / double(da.size());
}

/// 10 log10(1 / MSE) for [0,1] data; +infinity when the images are identical.
inline double psnr(const Image& a, const Image& b) {
    const double m = mse(a, b);
    if (m == 0.0) return std::numeric_limits<double>::infinity();
    return 10.0 * std::log10(1.0 / m);
}

struct SsimParams {
    int window = 11;
    double sigma = 1.5;
    double k1 = 0.01;
    double k2 = 0.03;
    double dynamic_range = 1.0;
};

/**
 * Mean SSIM over all fully-contained window positions (no padding), with a
 * normalized Gaussian window. Throws DimensionError when the planes are
 * smaller than the window.
 */
inline double ssim(const Grid& a, const Grid& b, const SsimParams& p = {}) {
    if (a.width != b.width || a.height != b.height) throw DimensionError("ssim: size mismatch");
    if (a.width < p.window || a.height < p.window) throw DimensionError("ssim: image smaller than window");
    const int r = p.window / 2;
    const auto k = gaussian_kernel(p.sigma, r);
    const double c1 = (p.k1 * p.dynamic_range) * (p.k1 * p.dynamic_range);
    const double c2 = (p.k2 * p.dynamic_range) * (p.k2 * p.dynamic_range);
    const int ow = a.width - 2 * r, oh = a.height - 2 * r;

    // Valid-region separable filtering of a, b, a^2, b^2, ab.
    auto filter_valid = [&](auto&& value) {
        Grid tmp(ow, a.height);
        for (int y = 0; y < a.height; ++y)
            for (int x = 0; x < ow; ++x) {
                double s = 0.0;
                for (int i = 0; i < p.window; ++i) s += k[size_t(i)] * value(x + i, y);
                tmp(x, y) = s;
            }
        Grid out(ow, oh);
        for (int y = 0; y < oh; ++y)
            for (int x = 0; x < ow; ++x) {
                double s = 0.0;
                for (int i = 0; i < p.window; ++i) s += k[size_t(i)] * tmp(x, y + i);
                out(x, y) = s;
            }
        return out;
    };
    const Grid mu_a = filter_valid([&](int x, int y) { return a(x, y); });
    const Grid mu_b = filter_valid([&](int x, int y) { return b(x, y); });
    const Grid aa = filter_valid([&](int x, int y) { return a(x, y) * a(x, y); });
    const Grid bb = filter_valid([&](int x, int y) { return b(x, y) * b(x, y); });
    const Grid ab = filter_valid([&](int x, int y) { return a(x, y) * b(x, y); });

    double total = 0.0;
    for (size_t i = 0; i < mu_a.v.size(); ++i) {
        const double ma = mu_a.v[i], mb = mu_b.v[i];
        const double va = aa.v[i] - ma * ma, vb = bb.v[i] - mb * mb, cov = ab.v[i] - ma * mb;
        total += ((2 * ma * mb + c1) * (2 * cov + c2)) / ((ma * ma + mb * mb + c1) * (va + vb + c2));
    }
    return total / double(mu_a.v.size());
}

/// SSIM on luminance (3-channel images are converted with 0.299/0.587/0.114).
inline double ssim(const Image& a, const Image& b, const SsimParams& p = {}) {
    if (!a.same_shape(b)) throw DimensionError("ssim: images differ in shape");
    return ssim(Grid(luminance(a)), Grid(luminance(b)), p);
}

inline double ssim(const Plane& a, const Plane& b, const SsimParams& p = {}) { return ssim(Grid(a), Grid(b), p); }

inline double ssim_loss(const Image& a, const Image& b, const SsimParams& p = {}) { return 1.0 - ssim(a, b, p); }
inline double ssim_loss(const Plane& a, const Plane& b, const SsimParams& p = {}) { return 1.0 - ssim(a, b, p); }

}  // namespace shadowkit
