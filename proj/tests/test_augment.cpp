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


#include <random>

#include <gtest/gtest.h>

#include "shadowkit/augment.hpp"
#include "support/synthetic.hpp"

namespace sk = shadowkit;
using namespace sk::testing;

namespace {

struct Triplet {
    sk::Image input, gt;
    sk::ShadowMask mask;
};

// Input and GT with disjoint value ranges so provenance is unambiguous.
Triplet random_triplet(std::mt19937_64& rng, int w, int h) {
    Triplet t{random_image(w, h, 3, rng, 0.0, 0.45), random_image(w, h, 3, rng, 0.55, 1.0), sk::ShadowMask(w, h)};
    for (int y = 0; y < h; ++y)
        for (int x = 0; x < w; ++x) t.mask.set(x, y, rng() % 3 == 0);
    return t;
}

}  // namespace

TEST(CutShadowTest, FullRegionShadowToNoShadowIsIdentity) {
    std::mt19937_64 rng(111);
    const auto t = random_triplet(rng, 20, 15);
    const auto r = sk::cutshadow(t.input, t.gt, t.mask, {0, 0, 20, 15, sk::CutDirection::ShadowToNoShadow});
    EXPECT_EQ(r.input, t.input);
    EXPECT_EQ(r.mask, t.mask);
}

TEST(CutShadowTest, SinglePixelNoShadowToShadow) {
    std::mt19937_64 rng(112);
    auto t = random_triplet(rng, 10, 10);
    t.mask.set(4, 6, true);
    const auto r = sk::cutshadow(t.input, t.gt, t.mask, {4, 6, 1, 1, sk::CutDirection::NoShadowToShadow});
    size_t changed = 0;
    for (int y = 0; y < 10; ++y)
        for (int x = 0; x < 10; ++x)
            for (int c = 0; c < 3; ++c) changed += r.input.at(x, y, c) != t.input.at(x, y, c);
    EXPECT_EQ(changed, 3u);
    for (int c = 0; c < 3; ++c) EXPECT_EQ(r.input.at(4, 6, c), t.gt.at(4, 6, c));
    EXPECT_FALSE(r.mask.at(4, 6));
    sk::ShadowMask expect = t.mask;
    expect.set(4, 6, false);
    EXPECT_EQ(r.mask, expect);
}

TEST(CutShadowTest, PixelProvenanceScan) {
    std::mt19937_64 rng(113);
    for (int trial = 0; trial < 30; ++trial) {
        const int w = 8 + int(rng() % 24), h = 8 + int(rng() % 24);
        const auto t = random_triplet(rng, w, h);
        const auto region = sk::sample_region(rng(), {w, h});
        const auto r = sk::cutshadow(t.input, t.gt, t.mask, region);
        const bool s2n = region.direction == sk::CutDirection::ShadowToNoShadow;
        for (int y = 0; y < h; ++y)
            for (int x = 0; x < w; ++x) {
                const bool inside = region.contains(x, y);
                const bool from_input = s2n ? inside : !inside;
                const sk::Image& src = from_input ? t.input : t.gt;
                for (int c = 0; c < 3; ++c) ASSERT_EQ(r.input.at(x, y, c), src.at(x, y, c));
                ASSERT_EQ(r.mask.at(x, y), from_input && t.mask.at(x, y));
            }
    }
}

TEST(CutShadowTest, Errors) {
    std::mt19937_64 rng(114);
    const auto t = random_triplet(rng, 10, 10);
    EXPECT_THROW(sk::cutshadow(t.input, t.gt, t.mask, {5, 5, 6, 1}), sk::ValidationError);
    EXPECT_THROW(sk::cutshadow(t.input, t.gt, t.mask, {0, 0, 0, 1}), sk::ValidationError);
    EXPECT_THROW(sk::cutshadow(t.input, sk::Image(10, 9, 3), t.mask, {0, 0, 1, 1}), sk::DimensionError);
    EXPECT_THROW(sk::cutshadow(t.input, t.gt, sk::ShadowMask(9, 10), {0, 0, 1, 1}), sk::DimensionError);
}

TEST(SampleRegionTest, DeterministicPerSeed) {
    const auto a = sk::sample_region(99, {640, 480});
    const auto b = sk::sample_region(99, {640, 480});
    EXPECT_EQ(a.x, b.x);
    EXPECT_EQ(a.y, b.y);
    EXPECT_EQ(a.w, b.w);
    EXPECT_EQ(a.h, b.h);
    EXPECT_EQ(a.direction, b.direction);
}

TEST(SampleRegionTest, AreaRangeAndDirectionBalance) {
    int s2n = 0;
    const int n = 10000;
    for (int i = 0; i < n; ++i) {
        const auto r = sk::sample_region(uint64_t(i) * 7919u + 1u, {320, 240});
        ASSERT_TRUE(r.fits(320, 240));
        const double f = r.area_fraction(320, 240);
        ASSERT_GE(f, 0.05);
        ASSERT_LE(f, 0.4);
        s2n += r.direction == sk::CutDirection::ShadowToNoShadow;
    }
    EXPECT_NEAR(double(s2n) / n, 0.5, 0.02);
}

TEST(SampleRegionTest, DegenerateRangeHitsTarget) {
    for (uint64_t seed = 0; seed < 200; ++seed) {
        const auto r = sk::sample_region(seed, {100, 80}, {0.25, 0.25});
        // Rounding: one row of the chosen width either way.
        EXPECT_NEAR(r.area_fraction(100, 80), 0.25, double(r.w) / (100.0 * 80.0));
    }
    EXPECT_THROW(sk::sample_region(1, {10, 10}, {0.5, 0.2}), sk::ValidationError);
    EXPECT_THROW(sk::sample_region(1, {10, 10}, {0.0, 0.2}), sk::ValidationError);
}
