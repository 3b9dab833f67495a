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
#include <cstdint>
#include <limits>
#include <random>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "shadowkit/features.hpp"
#include "shadowkit/geometry.hpp"

namespace shadowkit {

namespace detail {

// Similarity taking the points' centroid to the origin with mean distance sqrt(2).
inline Eigen::Matrix3d hartley_normalizer(std::span<const Point2> pts) {
    double cx = 0.0, cy = 0.0;
    for (const auto& p : pts) {
        cx += p.x;
        cy += p.y;
    }
    cx /= double(pts.size());
    cy /= double(pts.size());
    double mean_dist = 0.0;
    for (const auto& p : pts) mean_dist += std::hypot(p.x - cx, p.y - cy);
    mean_dist /= double(pts.size());
    if (!(mean_dist > 0.0)) throw EstimationError("degenerate point set: all points coincide");
    const double s = std::sqrt(2.0) / mean_dist;
    Eigen::Matrix3d t;
    t << s, 0, -s * cx, 0, s, -s * cy, 0, 0, 1;
    return t;
}

inline Point2 apply(const Eigen::Matrix3d& t, Point2 p) {
    const double w = t(2, 0) * p.x + t(2, 1) * p.y + t(2, 2);
    return {(t(0, 0) * p.x + t(0, 1) * p.y + t(0, 2)) / w, (t(1, 0) * p.x + t(1, 1) * p.y + t(1, 2)) / w};
}

inline double cross(Point2 a, Point2 b, Point2 c) { return (b.x - a.x) * (c.y - a.y) - (b.y - a.y) * (c.x - a.x); }

}  // namespace detail

/**
 * Least-squares homography mapping src[i] -> dst[i] by the normalized direct
 * linear transform. Exact for four noise-free correspondences.
 *
 * Throws EstimationError for fewer than four pairs or a rank-deficient system.
 */
inline Homography estimate_dlt(std::span<const Point2> src, std::span<const Point2> dst) {
    if (src.size() != dst.size()) throw ValidationError("estimate_dlt: src/dst length mismatch");
    const size_t n = src.size();
    if (n < 4) throw EstimationError("estimate_dlt: need at least 4 correspondences");
    const Eigen::Matrix3d ts = detail::hartley_normalizer(src);
    const Eigen::Matrix3d td = detail::hartley_normalizer(dst);
    Eigen::MatrixXd a(2 * n, 9);
    for (size_t i = 0; i < n; ++i) {
        const Point2 p = detail::apply(ts, src[i]);
        const Point2 q = detail::apply(td, dst[i]);
        const auto r = Eigen::Index(2 * i);
        a.row(r) << -p.x, -p.y, -1, 0, 0, 0, q.x * p.x, q.x * p.y, q.x;
        a.row(r + 1) << 0, 0, 0, -p.x, -p.y, -1, q.y * p.x, q.y * p.y, q.y;
    }
    Eigen::VectorXd h;
    Eigen::VectorXd sv;
    if (n == 4) {
        // Square up the 8x9 system so the SVD returns the full null space basis.
        Eigen::MatrixXd sq = Eigen::MatrixXd::Zero(9, 9);
        sq.topRows(8) = a;
        Eigen::JacobiSVD<Eigen::MatrixXd> svd(sq, Eigen::ComputeFullV);
        h = svd.matrixV().col(8);
        sv = svd.singularValues();
    } else {
        Eigen::JacobiSVD<Eigen::MatrixXd> svd(a, Eigen::ComputeFullV);
        h = svd.matrixV().col(8);
        sv = svd.singularValues();
    }
    // A unique solution needs rank 8: the second-smallest singular value must not vanish.
    if (!(sv(7) > 1e-10 * sv(0))) throw EstimationError("estimate_dlt: degenerate configuration (rank < 8)");
    Eigen::Matrix3d hn;
    hn << h(0), h(1), h(2), h(3), h(4), h(5), h(6), h(7), h(8);
    return Homography(td.inverse() * hn * ts);
}

inline Homography estimate_dlt(std::span<const MatchPair> pairs) {
    std::vector<Point2> src, dst;
    src.reserve(pairs.size());
    dst.reserve(pairs.size());
    for (const auto& m : pairs) {
        src.push_back(m.src);
        dst.push_back(m.dst);
    }
    return estimate_dlt(src, dst);
}

/// ||H src - dst||.
inline double forward_error(const Homography& h, Point2 src, Point2 dst) noexcept {
    const Point2 p = h.apply(src);
    const double e = distance(p, dst);
    return std::isfinite(e) ? e : std::numeric_limits<double>::infinity();
}

/**
 * Symmetric transfer error: root mean square of the forward distance
 * ||H src - dst|| and the backward distance ||H^-1 dst - src||, in pixels.
 */
inline double symmetric_error(const Homography& h, const Homography& h_inv, Point2 src, Point2 dst) noexcept {
    const double f = distance(h.apply(src), dst);
    const double b = distance(h_inv.apply(dst), src);
    const double e = std::sqrt(0.5 * (f * f + b * b));
    return std::isfinite(e) ? e : std::numeric_limits<double>::infinity();
}

struct RansacParams {
    double reproj_threshold = 3.0;  ///< pixels, on the symmetric error
    int max_iters = 2000;
    double confidence = 0.995;
    uint64_t seed = 7;
    int refine_rounds = 5;
};

struct RansacResult {
    Homography h;
    std::vector<bool> inliers;
    int iterations_run = 0;

    size_t inlier_count() const noexcept { return size_t(std::count(inliers.begin(), inliers.end(), true)); }
};

namespace detail {

inline std::vector<bool> score_inliers(const Homography& h, std::span<const MatchPair> pairs, double thr,
                                       size_t* count) {
    std::vector<bool> in(pairs.size(), false);
    const Homography inv = h.inverse();
    *count = 0;
    for (size_t i = 0; i < pairs.size(); ++i) {
        if (symmetric_error(h, inv, pairs[i].src, pairs[i].dst) <= thr) {
            in[i] = true;
            ++*count;
        }
    }
    return in;
}

// Any three of the four collinear in either image makes the minimal fit degenerate.
inline bool sample_degenerate(std::span<const MatchPair> pairs, const std::array<size_t, 4>& idx) {
    static constexpr int tri[4][3] = {{0, 1, 2}, {0, 1, 3}, {0, 2, 3}, {1, 2, 3}};
    for (const auto& t : tri) {
        const auto& a = pairs[idx[size_t(t[0])]];
        const auto& b = pairs[idx[size_t(t[1])]];
        const auto& c = pairs[idx[size_t(t[2])]];
        if (std::abs(cross(a.src, b.src, c.src)) < 1e-6 || std::abs(cross(a.dst, b.dst, c.dst)) < 1e-6) return true;
    }
    return false;
}

inline int adaptive_iterations(double inlier_ratio, double confidence, int max_iters) {
    if (inlier_ratio >= 1.0) return 1;
    if (inlier_ratio <= 0.0) return max_iters;
    const double p_good = std::pow(inlier_ratio, 4.0);
    const double denom = std::log(1.0 - p_good);
    if (!(denom < 0.0)) return max_iters;
    const double n = std::ceil(std::log(1.0 - confidence) / denom);
    return int(std::clamp(n, 1.0, double(max_iters)));
}

}  // namespace detail

/**
 * Robust homography from putative matches.
 *
 * Draws 4-match minimal samples from a seeded mt19937_64, scores each model
 * by counting matches whose symmetric transfer error is within the
 * threshold, and keeps the largest consensus. The iteration bound shrinks
 * with the observed inlier ratio to reach `confidence`. The winner is refit
 * by DLT on its inliers, and inliers are re-scored under the refit model
 * until the set stops growing, so every reported inlier satisfies the
 * threshold under the returned H.
 *
 * Throws NoConsensusError if fewer than four matches support any model.
 */
inline RansacResult ransac_homography(std::span<const MatchPair> pairs, const RansacParams& params = {}) {
    const size_t n = pairs.size();
    if (n < 4) throw NoConsensusError("ransac: need at least 4 matches, got " + std::to_string(n));
    std::mt19937_64 rng(params.seed);
    std::uniform_int_distribution<size_t> pick(0, n - 1);

    size_t best_count = 0;
    std::vector<bool> best_inliers;
    Homography best_h;
    int bound = std::max(1, params.max_iters);
    int it = 0;
    std::vector<MatchPair> sample(4);
    for (; it < bound; ++it) {
        std::array<size_t, 4> idx{};
        for (size_t k = 0; k < 4; ++k) {
            size_t v;
            do {
                v = pick(rng);
            } while (std::find(idx.begin(), idx.begin() + std::ptrdiff_t(k), v) != idx.begin() + std::ptrdiff_t(k));
            idx[k] = v;
        }
        if (detail::sample_degenerate(pairs, idx)) continue;
        for (size_t k = 0; k < 4; ++k) sample[k] = pairs[idx[k]];
        Homography h;
        try {
            h = estimate_dlt(sample);
        } catch (const EstimationError&) {
            continue;
        }
        size_t count = 0;
        auto in = detail::score_inliers(h, pairs, params.reproj_threshold, &count);
        if (count > best_count) {
            best_count = count;
            best_inliers = std::move(in);
            best_h = h;
            bound = std::min(bound, detail::adaptive_iterations(double(count) / double(n), params.confidence,
                                                                params.max_iters));
        }
    }
    if (best_count < 4) throw NoConsensusError("ransac: no model supported by at least 4 matches");

    for (int round = 0; round < params.refine_rounds; ++round) {
        std::vector<MatchPair> inl;
        for (size_t i = 0; i < n; ++i)
            if (best_inliers[i]) inl.push_back(pairs[i]);
        Homography refit;
        try {
            refit = estimate_dlt(inl);
        } catch (const EstimationError&) {
            break;
        }
        size_t count = 0;
        auto in = detail::score_inliers(refit, pairs, params.reproj_threshold, &count);
        if (count < best_count || count < 4) break;
        const bool same = in == best_inliers;
        best_h = refit;
        best_inliers = std::move(in);
        best_count = count;
        if (same) break;
    }
    return RansacResult{best_h, std::move(best_inliers), it};
}

}  // namespace shadowkit
