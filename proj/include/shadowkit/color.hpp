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
#include <cmath>

#include "shadowkit/image.hpp"

namespace shadowkit {

inline void require_rgb(const Image& img, const char* what) {
    if (img.channels() != 3)
        throw ChannelError(std::string(what) + " needs a 3-channel image, got " + std::to_string(img.channels()));
}

/// Hexcone model. Hue is returned in [0,1) (degrees / 360); gray pixels get hue 0.
inline std::array<double, 3> rgb_to_hsv(double r, double g, double b) noexcept {
    const double mx = std::max({r, g, b});
    const double mn = std::min({r, g, b});
    const double delta = mx - mn;
    double h = 0.0;
    if (delta > 0.0) {
        if (mx == r)
            h = (g - b) / delta;
        else if (mx == g)
            h = (b - r) / delta + 2.0;
        else
            h = (r - g) / delta + 4.0;
        h /= 6.0;
        if (h < 0.0) h += 1.0;
        if (h >= 1.0) h -= 1.0;
    }
    const double s = mx > 0.0 ? delta / mx : 0.0;
    return {h, s, mx};
}

inline std::array<double, 3> hsv_to_rgb(double h, double s, double v) noexcept {
    if (s <= 0.0) return {v, v, v};
    const double h6 = (h - std::floor(h)) * 6.0;
    const int sector = std::min(int(h6), 5);
    const double f = h6 - sector;
    const double p = v * (1.0 - s);
    const double q = v * (1.0 - s * f);
    const double t = v * (1.0 - s * (1.0 - f));
    switch (sector) {
        case 0: return {v, t, p};
        case 1: return {q, v, p};
        case 2: return {p, v, t};
        case 3: return {p, q, v};
        case 4: return {t, p, v};
        default: return {v, p, q};
    }
}

/// Per-pixel RGB -> (H, S, V), all channels in [0,1].
inline Image rgb_to_hsv(const Image& img) {
    require_rgb(img, "rgb_to_hsv");
    Image out(img.width(), img.height(), 3);
    auto src = img.data();
    auto dst = out.data();
    for (size_t i = 0; i < src.size(); i += 3) {
        const auto hsv = rgb_to_hsv(src[i], src[i + 1], src[i + 2]);
        std::copy(hsv.begin(), hsv.end(), dst.begin() + std::ptrdiff_t(i));
    }
    return out;
}

inline Image hsv_to_rgb(const Image& img) {
    require_rgb(img, "hsv_to_rgb");
    Image out(img.width(), img.height(), 3);
    auto src = img.data();
    auto dst = out.data();
    for (size_t i = 0; i < src.size(); i += 3) {
        const auto rgb = hsv_to_rgb(src[i], src[i + 1], src[i + 2]);
        for (int c = 0; c < 3; ++c) dst[i + size_t(c)] = std::clamp(rgb[size_t(c)], 0.0, 1.0);
    }
    return out;
}

/// V of HSV, i.e. max(R, G, B) per pixel.
inline Plane v_channel(const Image& img) {
    require_rgb(img, "v_channel");
    Plane out(img.width(), img.height());
    auto src = img.data();
    auto dst = out.data();
    for (size_t i = 0; i < dst.size(); ++i) dst[i] = std::max({src[3 * i], src[3 * i + 1], src[3 * i + 2]});
    return out;
}

/// 0.299 R + 0.587 G + 0.114 B; a 1-channel image is returned as-is.
inline Plane luminance(const Image& img) {
    Plane out(img.width(), img.height());
    auto src = img.data();
    auto dst = out.data();
    if (img.channels() == 1) {
        std::copy(src.begin(), src.end(), dst.begin());
        return out;
    }
    for (size_t i = 0; i < dst.size(); ++i)
        dst[i] = std::clamp(0.299 * src[3 * i] + 0.587 * src[3 * i + 1] + 0.114 * src[3 * i + 2], 0.0, 1.0);
    return out;
}

inline Image plane_to_image(const Plane& p) {
    std::vector<double> v(p.data().begin(), p.data().end());
    return Image(p.width(), p.height(), 1, std::move(v));
}

}  // namespace shadowkit
