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

#include <array>
#include <cmath>

#include <Eigen/Dense>

#include "shadowkit/error.hpp"

namespace shadowkit {

struct Point2 {
    double x = 0.0;
    double y = 0.0;

    friend bool operator==(const Point2&, const Point2&) = default;
};

inline double distance(Point2 a, Point2 b) noexcept { return std::hypot(a.x - b.x, a.y - b.y); }

/**
 * Nonsingular 3x3 projective transform with m(2,2) == 1.
 *
 * Maps continuous image coordinates (pixel centers at +0.5) of one frame
 * into another.
 */
class Homography {
public:
    Homography() : m_(Eigen::Matrix3d::Identity()) {}

    /// Normalizes so the bottom-right entry is 1; throws EstimationError if that is impossible.
    explicit Homography(const Eigen::Matrix3d& m) : m_(m) {
        if (!m_.allFinite()) throw EstimationError("homography has non-finite entries");
        const double s = m_(2, 2);
        if (std::abs(s) < 1e-12 * m_.cwiseAbs().maxCoeff())
            throw EstimationError("homography cannot be normalized (m22 ~ 0)");
        m_ /= s;
        const double det = m_.determinant();
        if (!std::isfinite(det) || std::abs(det) < 1e-14) throw EstimationError("singular homography");
    }

    static Homography identity() { return {}; }

    static Homography translation(double tx, double ty) {
        Eigen::Matrix3d m = Eigen::Matrix3d::Identity();
        m(0, 2) = tx;
        m(1, 2) = ty;
        return Homography(m);
    }

    /// Row-major nested array, for serialization.
    static Homography from_rows(const std::array<std::array<double, 3>, 3>& rows) {
        Eigen::Matrix3d m;
        for (int r = 0; r < 3; ++r)
            for (int c = 0; c < 3; ++c) m(r, c) = rows[size_t(r)][size_t(c)];
        return Homography(m);
    }

    std::array<std::array<double, 3>, 3> rows() const {
        std::array<std::array<double, 3>, 3> out{};
        for (int r = 0; r < 3; ++r)
            for (int c = 0; c < 3; ++c) out[size_t(r)][size_t(c)] = m_(r, c);
        return out;
    }

    const Eigen::Matrix3d& matrix() const noexcept { return m_; }
    double operator()(int r, int c) const noexcept { return m_(r, c); }

    Homography inverse() const { return Homography(m_.inverse()); }

    /// Projects p; returns a non-finite point if p maps to the line at infinity.
    Point2 apply(Point2 p) const noexcept {
        const double w = m_(2, 0) * p.x + m_(2, 1) * p.y + m_(2, 2);
        return {(m_(0, 0) * p.x + m_(0, 1) * p.y + m_(0, 2)) / w, (m_(1, 0) * p.x + m_(1, 1) * p.y + m_(1, 2)) / w};
    }

    /// (*this) after `first`.
    Homography compose(const Homography& first) const { return Homography(m_ * first.m_); }

    /// Largest absolute entry difference after normalization.
    double max_abs_diff(const Homography& o) const noexcept { return (m_ - o.m_).cwiseAbs().maxCoeff(); }

private:
    Eigen::Matrix3d m_;
};

}  // namespace shadowkit
