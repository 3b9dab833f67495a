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


#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include "shadowkit/features.hpp"
#include "shadowkit/warp.hpp"
#include "support/synthetic.hpp"

namespace sk = shadowkit;
using namespace sk::testing;

namespace {

std::vector<sk::Feature> features_of(const sk::Image& img, int max_kp = 1500, int octaves = 3) {
    sk::DescribeParams dp;
    dp.octaves = octaves;
    return sk::describe(img, sk::detect(img, max_kp, octaves), dp).features;
}

}  // namespace

TEST(DetectTest, ConstantImageHasNoKeypoints) {
    EXPECT_TRUE(sk::detect(constant_image(96, 96, 3, 0.4), 500, 3).empty());
}

TEST(DetectTest, SquareCornersAreStrongest) {
    const sk::Image img = square_image(128, 128, 40, 40, 48);
    const auto kps = sk::detect(img, 500, 3);
    ASSERT_GE(kps.size(), 4u);
    const std::array<sk::Point2, 4> corners{{{40, 40}, {88, 40}, {40, 88}, {88, 88}}};
    std::array<bool, 4> hit{};
    for (size_t i = 0; i < 4; ++i) {
        double best = 1e9;
        size_t arg = 0;
        for (size_t c = 0; c < 4; ++c) {
            const double d = sk::distance({kps[i].x, kps[i].y}, corners[c]);
            if (d < best) {
                best = d;
                arg = c;
            }
        }
        EXPECT_LE(best, 2.0) << "keypoint " << i << " at " << kps[i].x << "," << kps[i].y;
        hit[arg] = true;
    }
    EXPECT_TRUE(hit[0] && hit[1] && hit[2] && hit[3]);
}

TEST(DetectTest, CheckerboardCountMatchesInteriorCorners) {
    const sk::Image img = checkerboard(8, 8, 24);
    const int interior = 7 * 7;
    const auto kps = sk::detect(img, 1500, 1);
    EXPECT_NEAR(double(kps.size()), interior, 0.1 * interior);
    const auto capped = sk::detect(img, 20, 1);
    EXPECT_EQ(capped.size(), 20u);
}

TEST(DetectTest, SortedDeterministicAndInBounds) {
    const sk::Image img = textured_scene(200, 150, 3);
    const auto a = sk::detect(img, 800, 3);
    const auto b = sk::detect(img, 800, 3);
    ASSERT_FALSE(a.empty());
    ASSERT_EQ(a.size(), b.size());
    for (size_t i = 0; i < a.size(); ++i) {
        EXPECT_EQ(a[i].x, b[i].x);
        EXPECT_EQ(a[i].y, b[i].y);
        EXPECT_EQ(a[i].response, b[i].response);
        EXPECT_GE(a[i].x, 0.0);
        EXPECT_LT(a[i].x, 200.0);
        EXPECT_GE(a[i].y, 0.0);
        EXPECT_LT(a[i].y, 150.0);
        EXPECT_GE(a[i].response, 0.0);
        EXPECT_GE(a[i].scale, 0);
        if (i) EXPECT_GE(a[i - 1].response, a[i].response);
    }
}

TEST(DescribeTest, DeterministicAndOffsetInvariant) {
    std::mt19937_64 rng(31);
    const sk::Image img = random_image(128, 128, 3, rng, 0.0, 0.9);
    sk::Image bright = img;
    for (double& v : bright.data()) v += 0.1;
    const auto kps = sk::detect(img, 300, 2);
    ASSERT_FALSE(kps.empty());
    const auto d1 = sk::describe(img, kps);
    const auto d2 = sk::describe(img, kps);
    const auto d3 = sk::describe(bright, kps);
    ASSERT_EQ(d1.features.size(), d2.features.size());
    ASSERT_EQ(d1.features.size(), d3.features.size());
    for (size_t i = 0; i < d1.features.size(); ++i) {
        EXPECT_EQ(d1.features[i].descriptor, d2.features[i].descriptor);
        EXPECT_EQ(d1.features[i].descriptor, d3.features[i].descriptor);
    }
}

TEST(DescribeTest, DistinctAtDistantPointsAndSkipsBorder) {
    const sk::Image img = textured_scene(160, 160, 5);
    const std::vector<sk::Keypoint> kps{{80.5, 80.5, 0, 1.0}, {100.5, 80.5, 0, 1.0}, {2.0, 2.0, 0, 1.0}};
    const auto res = sk::describe(img, kps);
    ASSERT_EQ(res.features.size(), 2u);
    ASSERT_EQ(res.skipped, std::vector<size_t>{2});
    EXPECT_GT(sk::hamming(res.features[0].descriptor, res.features[1].descriptor), 64);
}

TEST(MatchTest, SelfMatchIsIdentity) {
    const auto f = features_of(textured_scene(200, 160, 7), 400);
    ASSERT_GT(f.size(), 50u);
    const auto m = sk::match(f, f, 0.99);
    size_t distinct = 0;
    for (size_t i = 0; i < f.size(); ++i) {
        bool unique = true;
        for (size_t j = 0; j < f.size(); ++j)
            if (j != i && f[j].descriptor == f[i].descriptor) unique = false;
        distinct += unique;
    }
    EXPECT_EQ(m.size(), distinct);
    for (const auto& p : m) {
        EXPECT_EQ(p.src_index, p.dst_index);
        EXPECT_EQ(p.distance, 0);
    }
}

TEST(MatchTest, UnrelatedNoiseRarelyMatches) {
    std::mt19937_64 rng(32);
    const auto fa = features_of(random_image(160, 160, 1, rng), 500);
    const auto fb = features_of(random_image(160, 160, 1, rng), 500);
    ASSERT_FALSE(fa.empty());
    const auto m = sk::match(fa, fb, 0.8);
    EXPECT_LT(double(m.size()), 0.1 * double(fa.size()));
}

TEST(MatchTest, TranslationRecovered) {
    const sk::Image img = textured_scene(240, 180, 9);
    const sk::Image moved = sk::warp(img, sk::Homography::translation(5, 0));
    const auto m = sk::match(features_of(img), features_of(moved), 0.8);
    ASSERT_GT(m.size(), 20u);
    size_t good = 0;
    for (const auto& p : m) good += sk::distance({p.src.x + 5, p.src.y}, p.dst) <= 1.5;
    EXPECT_GE(double(good), 0.5 * double(m.size()));
    for (const auto& p : m) {
        EXPECT_LE(p.distance, 256);
        EXPECT_TRUE(p.src.x >= 0 && p.src.x < 240 && p.dst.y >= 0 && p.dst.y < 180);
    }
}

TEST(MatchTest, RatioMonotoneAndEmptyInputs) {
    const sk::Image img = textured_scene(200, 160, 10);
    const auto fa = features_of(img);
    const auto fb = features_of(sk::warp(img, sk::Homography::translation(2.5, 1.5)));
    size_t prev = SIZE_MAX;
    for (double r : {1.0, 0.9, 0.8, 0.7, 0.6, 0.5}) {
        const size_t n = sk::match(fa, fb, r).size();
        EXPECT_LE(n, prev);
        prev = n;
    }
    EXPECT_TRUE(sk::match({}, fb, 0.8).empty());
    EXPECT_TRUE(sk::match(fa, {}, 0.8).empty());
}

TEST(FeaturesJsonTest, KeypointLine) {
    const auto j = sk::to_json(sk::Keypoint{1.5, 2.5, 1, 0.25});
    EXPECT_EQ(j["x"], 1.5);
    EXPECT_EQ(j["y"], 2.5);
    EXPECT_EQ(j["scale"], 1);
    EXPECT_EQ(j["response"], 0.25);
}
