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

#include <string>
#include <vector>

#include <json.hpp>

#include "shadowkit/features.hpp"
#include "shadowkit/homography.hpp"
#include "shadowkit/warp.hpp"

namespace shadowkit {

struct AlignParams {
    DetectParams detect;
    DescribeParams describe;
    MatchParams match;
    RansacParams ransac;
    PaddingMode padding = PaddingMode::Reflect;
    /// On no-consensus return the unaligned GT with report.aligned == false instead of throwing.
    bool fallback_to_identity = false;
};

struct AlignReport {
    bool aligned = false;
    size_t keypoints_shadow = 0;
    size_t keypoints_shadow_free = 0;
    size_t matches = 0;
    size_t inliers = 0;
    int iterations = 0;
    double mean_residual_px = 0.0;
    std::string message;
};

struct AlignResult {
    Image aligned_gt;
    Homography h;  ///< maps shadow-free coordinates into the shadow image frame
    AlignReport report;
};

/// Mean ||H src - dst|| over the flagged matches.
inline double mean_residual(const Homography& h, std::span<const MatchPair> pairs, const std::vector<bool>& flags) {
    double sum = 0.0;
    size_t n = 0;
    for (size_t i = 0; i < pairs.size(); ++i) {
        if (!flags[i]) continue;
        sum += forward_error(h, pairs[i].src, pairs[i].dst);
        ++n;
    }
    return n == 0 ? 0.0 : sum / double(n);
}

/**
 * Registers the shadow-free image onto the shadow image: detect, describe
 * and match features in both, estimate H (shadow-free -> shadow) with RANSAC,
 * and warp the shadow-free image into the shadow frame.
 */
inline AlignResult align_pair(const Image& shadow, const Image& shadow_free, const AlignParams& params = {}) {
    AlignResult res;
    auto& rep = res.report;

    const auto kp_s = detect(shadow, params.detect);
    const auto kp_f = detect(shadow_free, params.detect);
    rep.keypoints_shadow = kp_s.size();
    rep.keypoints_shadow_free = kp_f.size();
    DescribeParams dp = params.describe;
    dp.octaves = std::max(dp.octaves, params.detect.octaves);
    const auto fs = describe(shadow, kp_s, dp);
    const auto ff = describe(shadow_free, kp_f, dp);
    const auto matches = match(ff.features, fs.features, params.match);
    rep.matches = matches.size();

    try {
        const RansacResult rr = ransac_homography(matches, params.ransac);
        // Round-off from an exact identity fit is snapped so identical images round-trip bit-exactly.
        res.h = rr.h.max_abs_diff(Homography::identity()) < 1e-9 ? Homography::identity() : rr.h;
        rep.inliers = rr.inlier_count();
        rep.iterations = rr.iterations_run;
        rep.mean_residual_px = mean_residual(res.h, matches, rr.inliers);
        rep.aligned = true;
    } catch (const NoConsensusError& e) {
        if (!params.fallback_to_identity) throw;
        res.h = Homography::identity();
        res.aligned_gt = shadow_free;
        rep.aligned = false;
        rep.message = e.what();
        return res;
    }
    res.aligned_gt = warp(shadow_free, res.h, Size{shadow.width(), shadow.height()}, params.padding);
    return res;
}

/// Sidecar written beside each aligned image.
inline nlohmann::json homography_json(const Homography& h, const AlignReport& rep) {
    nlohmann::json rows = nlohmann::json::array();
    for (const auto& r : h.rows()) rows.push_back({r[0], r[1], r[2]});
    nlohmann::json j;
    j["h"] = rows;
    j["inliers"] = rep.inliers;
    j["mean_residual_px"] = rep.mean_residual_px;
    j["aligned"] = rep.aligned;
    j["matches"] = rep.matches;
    if (!rep.message.empty()) j["message"] = rep.message;
    return j;
}

inline Homography homography_from_json(const nlohmann::json& j) {
    std::array<std::array<double, 3>, 3> rows{};
    for (size_t r = 0; r < 3; ++r)
        for (size_t c = 0; c < 3; ++c) rows[r][c] = j.at("h").at(r).at(c).get<double>();
    return Homography::from_rows(rows);
}

}  // namespace shadowkit
