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

// Loss stack for shadow removal:
//
//   removal = beta * sp + essim + mse
//   joint   = (1 - alpha) * removal + alpha * detection
//
// sp is the mean squared distance between feature embeddings of prediction
// and target; essim is the SSIM loss between Canny edge maps of the HSV
// value channels.

#pragma once

#include <algorithm>
#include <cmath>
#include <vector>

#include "shadowkit/color.hpp"
#include "shadowkit/edges.hpp"
#include "shadowkit/filter.hpp"
#include "shadowkit/metrics.hpp"

namespace shadowkit {

struct LossWeights {
    double alpha = 1e-2;  ///< detection (pretask) weight in the joint loss
    double beta = 1e6;    ///< structure-preservation weight in the removal loss

    static LossWeights make(double alpha, double beta) {
        if (!(alpha >= 0.0 && alpha <= 1.0)) throw ValidationError("alpha must lie in [0,1]");
        if (!(beta >= 0.0)) throw ValidationError("beta must be nonnegative");
        return {alpha, beta};
    }
};

/// Deterministic image embedding of fixed dimension.
class FeatureExtractor {
public:
    virtual ~FeatureExtractor() = default;
    virtual std::vector<double> embed(const Image& img) const = 0;
    virtual size_t dimension() const = 0;
};

/**
 * Dependency-free stand-in for a pretrained backbone: resize luminance to
 * 32x32 by area averaging, then per 4x4 patch emit the mean, the mean
 * horizontal forward difference and the mean vertical forward difference
 * (differences past the last row/column count as 0). D = 8*8*3 = 192.
 */
class DeskFeatureExtractor final : public FeatureExtractor {
public:
    static constexpr int kSide = 32;
    static constexpr int kPatch = 4;
    static constexpr int kCells = kSide / kPatch;
    static constexpr size_t kDim = size_t(kCells) * kCells * 3;

    std::vector<double> embed(const Image& img) const override {
        const Grid small = resize_area(Grid(luminance(img)), kSide, kSide);
        std::vector<double> out(kDim, 0.0);
        const double n = kPatch * kPatch;
        for (int cy = 0; cy < kCells; ++cy)
            for (int cx = 0; cx < kCells; ++cx) {
                double mean = 0.0, gx = 0.0, gy = 0.0;
                for (int y = cy * kPatch; y < (cy + 1) * kPatch; ++y)
                    for (int x = cx * kPatch; x < (cx + 1) * kPatch; ++x) {
                        mean += small(x, y);
                        if (x + 1 < kSide) gx += small(x + 1, y) - small(x, y);
                        if (y + 1 < kSide) gy += small(x, y + 1) - small(x, y);
                    }
                const size_t base = (size_t(cy) * kCells + size_t(cx)) * 3;
                out[base] = mean / n;
                out[base + 1] = gx / n;
                out[base + 2] = gy / n;
            }
        return out;
    }

    size_t dimension() const override { return kDim; }
};

inline double mse(const std::vector<double>& a, const std::vector<double>& b) {
    if (a.size() != b.size()) throw DimensionError("embedding dimension mismatch");
    if (a.empty()) return 0.0;
    double s = 0.0;
    for (size_t i = 0; i < a.size(); ++i) {
        const double d = a[i] - b[i];
        s += d * d;
    }
    return s / double(a.size());
}

/// Mean squared distance of the two embeddings.
inline double sp_loss(const Image& pred, const Image& gt, const FeatureExtractor& f) {
    return mse(f.embed(pred), f.embed(gt));
}

/// SSIM loss between the {0,1} edge maps of the two value channels.
inline double essim_loss(const Image& pred, const Image& gt, const CannyParams& canny_params = {},
                         const SsimParams& ssim_params = {}) {
    if (!pred.same_shape(gt)) throw DimensionError("essim_loss: images differ in shape");
    const Plane ep = edge_detect(pred, canny_params).to_plane();
    const Plane eg = edge_detect(gt, canny_params).to_plane();
    return ssim_loss(ep, eg, ssim_params);
}

struct RemovalLossTerms {
    double sp = 0.0;
    double essim = 0.0;
    double mse = 0.0;
    double total = 0.0;
};

/// beta * sp + essim + mse from precomputed terms.
inline double removal_loss(double sp, double essim, double mse_term, double beta) {
    return beta * sp + essim + mse_term;
}

inline RemovalLossTerms removal_loss_terms(const Image& pred, const Image& gt, const LossWeights& w,
                                           const FeatureExtractor& f) {
    RemovalLossTerms t;
    t.sp = sp_loss(pred, gt, f);
    t.essim = essim_loss(pred, gt);
    t.mse = mse(pred, gt);
    t.total = removal_loss(t.sp, t.essim, t.mse, w.beta);
    return t;
}

inline double removal_loss(const Image& pred, const Image& gt, const LossWeights& w, const FeatureExtractor& f) {
    return removal_loss_terms(pred, gt, w, f).total;
}

/// (1 - alpha) * removal + alpha * detection.
inline double joint_loss(double l_removal, double l_detection, double alpha) {
    return (1.0 - alpha) * l_removal + alpha * l_detection;
}

/// Mean binary cross-entropy; predictions are clamped to [1e-7, 1 - 1e-7].
inline double detection_loss(const Plane& pred_mask, const ShadowMask& gt_mask) {
    require_same_size(pred_mask, gt_mask, "detection_loss");
    constexpr double eps = 1e-7;
    double s = 0.0;
    for (int y = 0; y < pred_mask.height(); ++y)
        for (int x = 0; x < pred_mask.width(); ++x) {
            const double p = std::clamp(pred_mask.at(x, y), eps, 1.0 - eps);
            s += gt_mask.at(x, y) ? -std::log(p) : -std::log(1.0 - p);
        }
    return s / double(pred_mask.size());
}

}  // namespace shadowkit
