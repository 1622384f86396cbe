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

#include <lzrobust/kt.hpp>
#include <lzrobust/theorem1.hpp>

#include <gtest/gtest.h>

#include <cmath>
#include <memory>
#include <random>

using namespace lzr;

namespace {

Rational Q(long n, long d = 1) {
    Rational q(n, d);
    q.canonicalize();
    return q;
}

ConstructionParams small_empirical(uint64_t h0 = 4) {
    ConstructionParams p;
    p.mode = ConstructionParams::Mode::empirical;
    p.h0 = h0;
    p.fold = 2;
    return p;
}

ConstructionParams faithful_relaxed() {
    ConstructionParams p;
    p.mode = ConstructionParams::Mode::faithful;
    p.strict_wd = false;
    p.rs_cap = 8;
    return p;
}

BinaryWord sparse_word(std::mt19937_64 &rng, std::size_t n, unsigned one_in) {
    BinaryWord x;
    for (std::size_t i = 0; i < n; ++i) x.push_back(rng() % one_in == 0 ? 1 : 0);
    return x;
}

} // namespace

TEST(HeightsSchedule, IdentitySigma) {
    const auto h = heights_schedule(Sigma::identity(), Q(1, 256), 3);
    ASSERT_EQ(h.size(), 5u);
    EXPECT_EQ(h[0], 1u);
    EXPECT_EQ(h[1], 23u);
    EXPECT_EQ(h[2], 46u);
    EXPECT_EQ(h[3], 70u);
    EXPECT_EQ(h[4], 95u);
}

TEST(HeightsSchedule, HalfGivesGapsAboveFourteenPlusI) {
    const auto h = heights_schedule(Sigma::identity(), Q(1, 2), 2);
    EXPECT_EQ(h[1] - h[0], 15u);
    EXPECT_EQ(h[2] - h[1], 16u);
    EXPECT_EQ(h[3] - h[2], 17u);
}

TEST(HeightsSchedule, RandomTablesAndErrors) {
    std::mt19937_64 rng(3);
    for (int t = 0; t < 20; ++t) {
        std::vector<int64_t> tab{0};
        for (int i = 1; i < 4000; ++i) tab.push_back(tab.back() + static_cast<int64_t>(rng() % 3));
        const auto h = heights_schedule(Sigma::from_table(tab), Q(1, 256), 4);
        for (std::size_t i = 1; i < h.size(); ++i) {
            EXPECT_LT(h[i - 1], h[i]);
            EXPECT_GT(tab[h[i]] - tab[h[i - 1]], 8 + static_cast<int64_t>(i - 1) + 13);
        }
    }
    EXPECT_THROW(Sigma::from_table({0, 2, 1}), std::invalid_argument);
    EXPECT_THROW(heights_schedule(Sigma::from_table({0, 1, 2, 3}), Q(1, 256), 2), std::out_of_range);
}

TEST(EntropyBound, Values) {
    EXPECT_DOUBLE_EQ(entropy_upper_bound(Q(1, 256)), 0.09375);
    EXPECT_THROW(entropy_upper_bound(Q(1, 2)), std::invalid_argument);
    double prev = 0;
    for (int k = 40; k >= 2; --k) {
        const double v = entropy_upper_bound(Q(1, 4 * k));
        EXPECT_GT(v, prev);
        prev = v;
    }
}

TEST(InitGadgets, MassesAndNames) {
    const Rational r = Q(1, 256);
    const auto [delta, pi] = init_gadgets(r, 3);
    EXPECT_EQ(delta->support, 2 * r);
    EXPECT_EQ(pi->support, 1 - 2 * r);
    EXPECT_EQ(gadget_name_measure(pi, BinaryWord{1}), 0);
    EXPECT_EQ(delta->heights.size(), 1u);
    EXPECT_EQ(delta->heights.begin()->first, 6u);
    // names of Delta_0 are uniform over {0,1}^6
    const auto g = materialize(delta, 64);
    ASSERT_EQ(g.size(), 64u);
    for (const auto &c : g.columns()) EXPECT_EQ(c.measure(), 2 * r / 64);
    EXPECT_THROW(init_gadgets(Q(1, 4), 3), std::invalid_argument);
}

TEST(Construction, MassScheduleEmpirical) {
    Construction c(small_empirical());
    const Rational r = Q(1, 256);
    for (unsigned s = 0; s <= 4; ++s) {
        const auto &st = c.stage(s);
        EXPECT_EQ(st.delta_mass, pow2(1 - static_cast<long>(s)) * r);
        EXPECT_EQ(st.pi_mass, 1 - pow2(1 - static_cast<long>(s)) * r);
        EXPECT_EQ(st.column_height, 8u << s);
        if (s > 0) {
            EXPECT_EQ(st.gamma, pow2(1 - static_cast<long>(s)) * r / (1 - pow2(2 - static_cast<long>(s)) * r));
            EXPECT_EQ(st.routing, st.gamma / (1 + st.gamma));
            EXPECT_EQ(c.routing(s), st.routing);
        }
    }
}

TEST(Construction, FaithfulStages) {
    Construction c(faithful_relaxed());
    const Rational r = Q(1, 256);
    const auto &s0 = c.stage(0);
    EXPECT_EQ(s0.column_height, 92u);
    for (unsigned s = 1; s <= 4; ++s) {
        const auto &st = c.stage(s);
        EXPECT_EQ(st.delta_mass, pow2(1 - static_cast<long>(s)) * r);
        EXPECT_EQ(st.pi_mass, 1 - pow2(1 - static_cast<long>(s)) * r);
        EXPECT_GE(st.column_height, 2 * st.heights[s + 2]);
        EXPECT_GT(st.column_height, c.stage(s - 1).column_height);
    }
    EXPECT_TRUE(c.stage(1).wd_ok);
    EXPECT_LT(*c.stage(1).wd, 1);
}

TEST(Construction, PrintedGammaDiffers) {
    EXPECT_FALSE(printed_gamma(Q(1, 256), 2).has_value());
    EXPECT_NE(*printed_gamma(Q(1, 256), 3), Q(1, 512) / (1 - Q(1, 256) / 2));
}

TEST(Construction, RemarkOneOnDelta) {
    Construction c(small_empirical(8));
    std::mt19937_64 rng(7);
    for (unsigned s = 0; s <= 3; ++s) {
        const auto &st = c.stage(s);
        for (int t = 0; t < 8; ++t) {
            const std::size_t l = 1 + rng() % 8;
            BinaryWord x;
            for (std::size_t i = 0; i < l; ++i) x.push_back(static_cast<uint8_t>(rng() & 1));
            EXPECT_EQ(stationary_name_measure(st.delta, x), st.delta_mass / pow2(static_cast<long>(l)));
        }
    }
}

TEST(MeasureQuery, Basics) {
    Construction c(small_empirical());
    const Rational eps = Q(1, 20);
    EXPECT_EQ(c.measure_query(BinaryWord(), eps), 1);
    EXPECT_EQ(c.measure_query(BinaryWord{1}, eps), Q(1, 256));
    const Rational p0 = c.measure_query(BinaryWord{0}, eps);
    EXPECT_EQ(p0 + c.measure_query(BinaryWord{1}, eps), 1);
    // additivity within the band, at one fixed stage
    std::mt19937_64 rng(9);
    for (int t = 0; t < 10; ++t) {
        const auto x = sparse_word(rng, 1 + rng() % 5, 6);
        const auto &st = c.stage(c.query_stage(x.size() + 1, eps));
        const auto phi = sym_union(st.pi, st.delta);
        const Rational px = gadget_name_measure(phi, x);
        const Rational sum = gadget_name_measure(phi, x + BinaryWord{0}) + gadget_name_measure(phi, x + BinaryWord{1});
        EXPECT_LE(abs_diff(px, sum), 2 * eps);
        EXPECT_LE(sum, px);
    }
    EXPECT_THROW(c.measure_query(BinaryWord{0}, Q(0)), std::invalid_argument);
}

TEST(Hierarchical, MatchesExactDynamicProgram) {
    auto c = std::make_shared<Construction>(small_empirical(2));
    std::mt19937_64 rng(11);
    for (unsigned top = 0; top <= 3; ++top) {
        const auto &st = c->stage(top);
        const auto phi = sym_union(st.pi, st.delta);
        const auto lay = Layout::from(*c, c->column_height(top));
        ASSERT_EQ(lay.top(), top);
        for (int t = 0; t < 12; ++t) {
            const auto x = sparse_word(rng, 1 + rng() % 12, t % 2 ? 3 : 12);
            const Rational exact = gadget_name_measure(phi, x);
            const double h = hierarchical_log2_measure(lay, x);
            if (exact == 0) {
                EXPECT_EQ(h, neg_inf) << x.to_string();
            } else {
                EXPECT_NEAR(h, log2_rational(exact), 1e-9) << top << " " << x.to_string();
            }
        }
    }
}

TEST(Hierarchical, LowerBoundGrowsWithDepth) {
    auto c = std::make_shared<Construction>(small_empirical(4));
    std::mt19937_64 rng(12);
    const auto x = sparse_word(rng, 200, 40);
    double prev = neg_inf;
    for (unsigned top = 4; top <= 9; ++top) {
        const double v = hierarchical_log2_measure(Layout::from(*c, c->column_height(top)), x);
        EXPECT_GE(v, prev - 1e-9);
        prev = v;
    }
    Theorem1Measure m(c);
    const auto [lo, hi] = m.log2_prob_bounds(x);
    EXPECT_LE(lo, hi);
    EXPECT_NEAR(m.log2_prob(x), lo, 1e-12);
}

TEST(Sampler, DeterministicAndRoomChecked) {
    Construction c(small_empirical(8));
    const auto a = sample_sequence(c, 5, 300, 6);
    EXPECT_EQ(a, sample_sequence(c, 5, 300, 6));
    bool differs = false;
    for (uint64_t seed = 6; seed < 200 && !differs; ++seed) differs = a != sample_sequence(c, seed, 300, 6);
    EXPECT_TRUE(differs);
    EXPECT_EQ(a.size(), 300u);
    EXPECT_THROW(sample_sequence(c, 5, 10000, 3), std::invalid_argument);
}

TEST(Sampler, OnesFrequencyMatchesR) {
    Construction c(ConstructionParams{});
    std::vector<double> freq;
    for (uint64_t seed = 0; seed < 100; ++seed) {
        const auto x = sample_sequence(c, seed, 10000, 6);
        freq.push_back(static_cast<double>(x.count_ones()) / 10000.0);
    }
    double mean = 0, var = 0;
    for (double f : freq) mean += f / 100;
    for (double f : freq) var += (f - mean) * (f - mean) / 99;
    const double se = std::sqrt(var / 100);
    EXPECT_LE(std::abs(mean - 1.0 / 256), 3 * se + 1e-4);
}

TEST(Sampler, WordFrequencyMatchesOracle) {
    Construction c(small_empirical(4));
    const BinaryWord x = BinaryWord::from_string("00000000");
    const double p = c.measure_query(x, Q(1, 1000)).get_d();
    std::size_t hits = 0, trials = 20000;
    for (uint64_t seed = 0; seed < trials; ++seed) hits += sample_sequence(c, seed, 8, 8) == x;
    const double f = static_cast<double>(hits) / static_cast<double>(trials);
    const double se = std::sqrt(p * (1 - p) / static_cast<double>(trials));
    EXPECT_LE(std::abs(f - p), 4 * se + 0.01);
}

TEST(Sampler, MixtureCodeBelowEntropyBound) {
    Construction c(ConstructionParams{});
    MixtureCoder coder;
    double total = 0;
    const int reps = 5;
    for (int k = 0; k < reps; ++k) {
        const auto x = sample_sequence(c, 100 + k, 100000, 8);
        total += static_cast<double>(coder.code_length(x)) / 1e5;
    }
    EXPECT_LE(total / reps, entropy_upper_bound(Q(1, 256)) + 0.05);
}
