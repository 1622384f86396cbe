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

#include "lzrobust/lz78.hpp"
#include "lzrobust/lzwindow.hpp"

#include <gtest/gtest.h>

#include <random>

using namespace lzr;

namespace {

// Quadratic reference parse.
std::vector<WindowPhrase> naive_parse(const BinaryWord &x, std::size_t w) {
    std::vector<WindowPhrase> out;
    std::size_t i = 0;
    while (i < x.size()) {
        std::size_t best = 0, off = 0;
        const std::size_t lo = (w == 0 || i < w) ? 0 : i - w;
        for (std::size_t j = i; j-- > lo;) {
            std::size_t l = 0;
            while (i + l < x.size() && x[j + l] == x[i + l]) ++l;
            if (l > best) {
                best = l;
                off = i - j;
            }
        }
        WindowPhrase ph{i, best, off, std::nullopt};
        if (i + best < x.size()) ph.next = x[i + best];
        out.push_back(ph);
        i += best + (ph.next ? 1 : 0);
    }
    return out;
}

} // namespace

TEST(SuffixArray, MatchesSortedSuffixes) {
    std::mt19937_64 rng(4);
    for (int t = 0; t < 200; ++t) {
        BinaryWord x;
        const auto n = rng() % 80;
        for (uint64_t i = 0; i < n; ++i) x.push_back(t % 3 == 0 ? (rng() % 7 == 0) : (rng() & 1));
        const auto sa = suffix_array(x);
        std::vector<int32_t> ref(n);
        for (std::size_t i = 0; i < n; ++i) ref[i] = static_cast<int32_t>(i);
        std::sort(ref.begin(), ref.end(), [&](int32_t a, int32_t b) { return x.substr(a, n - a) < x.substr(b, n - b); });
        ASSERT_EQ(sa, ref);
        const auto lcp = lcp_array(x, sa);
        for (std::size_t k = 1; k < n; ++k) {
            int32_t l = 0;
            while (sa[k] + l < static_cast<int32_t>(n) && sa[k - 1] + l < static_cast<int32_t>(n) && x[sa[k] + l] == x[sa[k - 1] + l]) ++l;
            ASSERT_EQ(lcp[k], l);
        }
    }
}

TEST(LzWindow, ZerosAreOneLiteralThenOneMatch) {
    LzWindowCoder c;
    const auto ph = c.parse(BinaryWord(64, 0));
    ASSERT_EQ(ph.size(), 2u);
    EXPECT_EQ(ph[0].length, 0u);
    EXPECT_EQ(ph[0].next, uint8_t{0});
    EXPECT_EQ(ph[1].length, 63u);
    EXPECT_EQ(ph[1].offset, 1u);
    EXPECT_FALSE(ph[1].next.has_value());
    EXPECT_EQ(c.encode(BinaryWord(64, 0)), encode_int(65) + encode_int(1) + BitString{0} + encode_int(64) + encode_int(1));
}

TEST(LzWindow, AgreesWithQuadraticParse) {
    std::mt19937_64 rng(6);
    for (std::size_t w : {std::size_t{0}, std::size_t{1}, std::size_t{5}, std::size_t{16}}) {
        LzWindowCoder c(w);
        for (int t = 0; t < 150; ++t) {
            BinaryWord x;
            const auto n = rng() % 200;
            for (uint64_t i = 0; i < n; ++i) x.push_back(t % 2 ? (rng() % 5 == 0) : (rng() & 1));
            const auto a = c.parse(x);
            const auto b = naive_parse(x, w);
            ASSERT_EQ(a.size(), b.size());
            for (std::size_t k = 0; k < a.size(); ++k) {
                ASSERT_EQ(a[k].length, b[k].length);
                ASSERT_EQ(a[k].offset, b[k].offset);
                ASSERT_EQ(a[k].next, b[k].next);
            }
        }
    }
}

class LzWindowSizes : public ::testing::TestWithParam<std::size_t> {};

TEST_P(LzWindowSizes, RoundTripAndSeparation) {
    LzWindowCoder c(GetParam());
    std::mt19937_64 rng(GetParam() + 1);
    for (int t = 0; t < 2000; ++t) {
        const auto x = random_word(rng, rng() % 300);
        const auto y = random_word(rng, rng() % 300);
        ASSERT_EQ(c.decode(c.encode(x)), x);
        ASSERT_TRUE(separates(c, x, y));
    }
}

TEST_P(LzWindowSizes, PrefixLengthsMatchReencoding) {
    LzWindowCoder c(GetParam());
    std::mt19937_64 rng(17);
    for (int t = 0; t < 20; ++t) {
        BinaryWord x;
        for (int i = 0; i < 600; ++i) x.push_back(t % 2 ? (rng() % 11 == 0) : (rng() & 1));
        std::vector<std::size_t> ns;
        for (std::size_t n = 0; n <= x.size(); n += 1 + rng() % 9) ns.push_back(n);
        const auto fast = c.prefix_lengths(x, ns);
        ASSERT_EQ(fast.size(), ns.size());
        for (std::size_t i = 0; i < ns.size(); ++i) ASSERT_EQ(fast[i], c.code_length(x.prefix(ns[i]))) << ns[i];
    }
}

INSTANTIATE_TEST_SUITE_P(Windows, LzWindowSizes, ::testing::Values(std::size_t{16}, std::size_t{256}, std::size_t{0}));

TEST(LzWindow, MalformedStreamsThrow) {
    LzWindowCoder c(16);
    const auto code = c.encode(BitString::from_string("1011010100010110100111"));
    for (std::size_t cut = 0; cut < code.size(); ++cut) EXPECT_THROW(c.decode(code.prefix(cut)), MalformedInput);
    // an offset reaching before the start of the output
    BitString bad = encode_int(5) + encode_int(3) + encode_int(2);
    EXPECT_THROW(c.decode(bad), MalformedInput);
}

TEST(LzWindow, PeriodicInputsNotWorseThanIncrementalParse) {
    LzWindowCoder win;
    Lz78Coder lz78;
    for (std::size_t period : {1, 2, 3, 5, 8, 13}) {
        BinaryWord x;
        for (std::size_t i = 0; i < 4096; ++i) x.push_back((i % period) < (period + 1) / 2);
        const auto a = win.code_length(x);
        const auto b = lz78.code_length(x);
        EXPECT_LE(a, b + 64) << period;
    }
}
