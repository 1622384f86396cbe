/*
Copyright 2026 The lzrobust Authors
Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
you may obtain a copy of the License at

                http://www.apache.org/licenses/LICENSE-2.0

Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.
*/

#include <lzrobust/alpha.hpp>

#include <gtest/gtest.h>

#include <memory>

using namespace lzr;

namespace {

std::shared_ptr<Construction> small_construction() {
    ConstructionParams p;
    p.h0 = 16;
    return std::make_shared<Construction>(p);
}

AlphaParams small_alpha(uint64_t seed = 1) {
    AlphaParams ap;
    ap.steps = 6;
    ap.even_level = 5;
    ap.seed = seed;
    ap.depth = 16;
    return ap;
}

} // namespace

TEST(AlphaLengths, DefaultSchedule) {
    Construction c{ConstructionParams{}};
    const auto lay = Layout::from(c, c.column_height(5));
    const auto len = alpha_lengths(lay, AlphaParams{});
    const std::vector<std::size_t> want{512, 16384, 32768, 262144, 278528, 2228224, 2244608};
    EXPECT_EQ(len, want);
    AlphaParams deep;
    deep.even_level = 9;
    EXPECT_THROW(alpha_lengths(lay, deep), std::invalid_argument);
}

TEST(AlphaPath, AlignedBlocksOnly) {
    Construction c{ConstructionParams{}};
    const auto lay = Layout::from(c, 1u << 16);
    std::mt19937_64 rng(1);
    BinaryWord w;
    append_pi_path(lay, rng, 512, 4096, w);
    EXPECT_EQ(w.size(), 3584u);
    EXPECT_THROW(append_pi_path(lay, rng, 100, 4096, w), std::invalid_argument);
}

TEST(Alpha, FragmentInvariants) {
    auto c = small_construction();
    const Lz78Coder lz;
    const AlphaParams ap = small_alpha();
    const auto tr = build_alpha(c, ap, lz);
    const auto lay = Layout::from(*c, tr.word.size());
    ASSERT_EQ(tr.fragments.size(), 6u);
    EXPECT_EQ(tr.initial_length, 32u);
    const double r = 1.0 / 256;
    std::size_t prev_end = tr.initial_length;
    unsigned prev_stage = 0;
    for (const auto &f : tr.fragments) {
        EXPECT_EQ(f.begin, prev_end);
        EXPECT_GT(f.end, f.begin);
        EXPECT_GE(f.end, lay.height[f.stage] / 2);
        EXPECT_GT(f.end, lay.height[prev_stage] / 2);
        if (f.odd()) {
            EXPECT_EQ(f.kind, FragmentKind::sparse);
            EXPECT_LE(f.ones_frequency, 2 * r);
            EXPECT_GE(f.kept, 1u);
        } else {
            EXPECT_EQ(f.kind, FragmentKind::incompressible);
            EXPECT_EQ(f.end - f.begin, lay.height[ap.even_level]);
            EXPECT_GE(f.lz78_local_ratio, 0.8);
        }
        EXPECT_GT(f.log2_prob, neg_inf);
        prev_end = f.end;
        prev_stage = f.stage;
    }
    EXPECT_EQ(tr.word.size(), prev_end);
}

TEST(Alpha, RecordedDeficiencyMatchesRecomputed) {
    auto c = small_construction();
    const Lz78Coder lz;
    const AlphaParams ap = small_alpha();
    const auto tr = build_alpha(c, ap, lz);
    const Theorem1Measure m(c, ap.depth);
    for (const auto &f : tr.fragments) {
        const auto w = tr.word.prefix(f.end);
        EXPECT_NEAR(f.log2_prob, m.log2_prob(w), 1e-6);
        EXPECT_NEAR(f.deficiency, surrogate_deficiency(w, m, lz), 1e-6);
    }
}

TEST(Alpha, DeterministicPerSeed) {
    auto c = small_construction();
    const Lz78Coder lz;
    const auto a = build_alpha(c, small_alpha(3), lz);
    const auto b = build_alpha(c, small_alpha(3), lz);
    const auto d = build_alpha(c, small_alpha(4), lz);
    EXPECT_EQ(a.word, b.word);
    EXPECT_EQ(a.to_json(), b.to_json());
    EXPECT_NE(a.word, d.word);
}

TEST(Alpha, JsonShape) {
    auto c = small_construction();
    AlphaParams ap = small_alpha();
    ap.steps = 2;
    const auto j = build_alpha(c, ap, Lz78Coder()).to_json();
    EXPECT_EQ(j["fragments"].size(), 2u);
    EXPECT_EQ(j["fragments"][0]["parity"], "odd");
    EXPECT_EQ(j["fragments"][1]["kind"], "incompressible");
    EXPECT_EQ(j["surrogate_code"], "lz78");
}

TEST(Alpha, BadParameters) {
    auto c = small_construction();
    AlphaParams ap = small_alpha();
    ap.mu = 1;
    EXPECT_THROW(build_alpha(c, ap, Lz78Coder()), std::invalid_argument);
    ap = small_alpha();
    ap.min_random_ratio = 5;
    ap.max_retries = 2;
    EXPECT_THROW(build_alpha(c, ap, Lz78Coder()), StageFailure);
}
