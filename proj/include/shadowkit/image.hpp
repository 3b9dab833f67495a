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
#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "shadowkit/error.hpp"

namespace shadowkit {

/**
 * Interleaved, row-major raster with 1 or 3 channels and samples in [0,1].
 *
 * Continuous image coordinates place the center of pixel (x, y) at
 * (x + 0.5, y + 0.5); keypoints, homographies and warps all use this frame.
 */
class Image {
public:
    Image() = default;

    Image(int width, int height, int channels)
        : width_(width), height_(height), channels_(channels) {
        check_shape();
        data_.assign(size_t(width) * size_t(height) * size_t(channels), 0.0);
    }

    Image(int width, int height, int channels, std::vector<double> data)
        : width_(width), height_(height), channels_(channels), data_(std::move(data)) {
        check_shape();
        if (data_.size() != size_t(width) * size_t(height) * size_t(channels))
            throw DimensionError("image data length does not match width*height*channels");
        for (double v : data_)
            if (!(v >= 0.0 && v <= 1.0)) throw ValidationError("image sample outside [0,1]");
    }

    int width() const noexcept { return width_; }
    int height() const noexcept { return height_; }
    int channels() const noexcept { return channels_; }
    size_t pixel_count() const noexcept { return size_t(width_) * size_t(height_); }
    bool empty() const noexcept { return data_.empty(); }

    double at(int x, int y, int c = 0) const noexcept { return data_[index(x, y, c)]; }
    double& at(int x, int y, int c = 0) noexcept { return data_[index(x, y, c)]; }

    std::span<const double> data() const noexcept { return data_; }
    std::span<double> data() noexcept { return data_; }

    bool same_shape(const Image& o) const noexcept {
        return width_ == o.width_ && height_ == o.height_ && channels_ == o.channels_;
    }

    friend bool operator==(const Image&, const Image&) = default;

private:
    size_t index(int x, int y, int c) const noexcept {
        return (size_t(y) * size_t(width_) + size_t(x)) * size_t(channels_) + size_t(c);
    }

    void check_shape() const {
        if (width_ <= 0 || height_ <= 0) throw DimensionError("image dimensions must be positive");
        if (channels_ != 1 && channels_ != 3)
            throw ChannelError("image must have 1 or 3 channels, got " + std::to_string(channels_));
    }

    int width_ = 0;
    int height_ = 0;
    int channels_ = 0;
    std::vector<double> data_;
};

/// Single-channel raster with samples in [0,1].
class Plane {
public:
    Plane() = default;

    Plane(int width, int height, double fill = 0.0)
        : width_(width), height_(height), data_(size_t(width) * size_t(height), fill) {
        if (width <= 0 || height <= 0) throw DimensionError("plane dimensions must be positive");
    }

    Plane(int width, int height, std::vector<double> data)
        : width_(width), height_(height), data_(std::move(data)) {
        if (width <= 0 || height <= 0) throw DimensionError("plane dimensions must be positive");
        if (data_.size() != size_t(width) * size_t(height))
            throw DimensionError("plane data length does not match width*height");
    }

    int width() const noexcept { return width_; }
    int height() const noexcept { return height_; }
    size_t size() const noexcept { return data_.size(); }

    double at(int x, int y) const noexcept { return data_[size_t(y) * size_t(width_) + size_t(x)]; }
    double& at(int x, int y) noexcept { return data_[size_t(y) * size_t(width_) + size_t(x)]; }

    std::span<const double> data() const noexcept { return data_; }
    std::span<double> data() noexcept { return data_; }

    friend bool operator==(const Plane&, const Plane&) = default;

private:
    int width_ = 0;
    int height_ = 0;
    std::vector<double> data_;
};

/// Binary raster; the tag keeps shadow masks and edge maps from being mixed up.
template <class Tag>
class BinaryRaster {
public:
    BinaryRaster() = default;

    BinaryRaster(int width, int height, bool fill = false)
        : width_(width), height_(height), data_(size_t(width) * size_t(height), fill ? 1 : 0) {
        if (width <= 0 || height <= 0) throw DimensionError("mask dimensions must be positive");
    }

    int width() const noexcept { return width_; }
    int height() const noexcept { return height_; }
    size_t size() const noexcept { return data_.size(); }

    bool at(int x, int y) const noexcept { return data_[size_t(y) * size_t(width_) + size_t(x)] != 0; }
    void set(int x, int y, bool v) noexcept { data_[size_t(y) * size_t(width_) + size_t(x)] = v ? 1 : 0; }

    std::span<const uint8_t> data() const noexcept { return data_; }

    size_t count() const noexcept { return size_t(std::count(data_.begin(), data_.end(), uint8_t{1})); }

    /// The mask as a {0,1} plane.
    Plane to_plane() const {
        std::vector<double> v(data_.begin(), data_.end());
        return Plane(width_, height_, std::move(v));
    }

    friend bool operator==(const BinaryRaster&, const BinaryRaster&) = default;

private:
    int width_ = 0;
    int height_ = 0;
    std::vector<uint8_t> data_;
};

struct ShadowTag;
struct EdgeTag;

/// 1 = shadow, 0 = lit.
using ShadowMask = BinaryRaster<ShadowTag>;
/// 1 = edge pixel.
using EdgeMap = BinaryRaster<EdgeTag>;

inline void require_same_size(int w0, int h0, int w1, int h1, const char* what) {
    if (w0 != w1 || h0 != h1)
        throw DimensionError(std::string(what) + ": size mismatch (" + std::to_string(w0) + "x" +
                             std::to_string(h0) + " vs " + std::to_string(w1) + "x" + std::to_string(h1) + ")");
}

template <class A, class B>
void require_same_size(const A& a, const B& b, const char* what) {
    require_same_size(a.width(), a.height(), b.width(), b.height(), what);
}

/// Intersection over union; two empty masks score 1.
inline double iou(const ShadowMask& a, const ShadowMask& b) {
    require_same_size(a, b, "iou");
    size_t inter = 0, uni = 0;
    auto da = a.data(), db = b.data();
    for (size_t i = 0; i < da.size(); ++i) {
        inter += (da[i] & db[i]);
        uni += (da[i] | db[i]);
    }
    return uni == 0 ? 1.0 : double(inter) / double(uni);
}

}  // namespace shadowkit
