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

#include <gtest/gtest.h>

#include <bit>
#include <random>
#include <set>

using namespace lzr;

namespace {

std::vector<std::string> phrase_strings(const BinaryWord &x, const PhraseParse &p) {
    std::vector<std::string> out;
    for (const auto &ph : p.phrases) out.push_back(x.substr(ph.start, ph.length).to_string());
    return out;
}

} // namespace

TEST(Lz78Parse, HandTrace) {
    const auto x = BitString::from_string("1011010100010");
    const auto p = lz78_parse(x);
    EXPECT_EQ(phrase_strings(x, p), (std::vector<std::string>{"1", "0", "11", "01", "010", "00", "10"}));
    for (const auto &ph : p.phrases) EXPECT_TRUE(ph.new_symbol.has_value());
}

TEST(Lz78Parse, IncompleteTail) {
    const auto x = BitString::from_string("0000");
    const auto p = lz78_parse(x);
    ASSERT_EQ(p.phrases.size(), 3u);
    EXPECT_EQ(phrase_strings(x, p), (std::vector<std::string>{"0", "00", "0"}));
    EXPECT_FALSE(p.phrases.back().new_symbol.has_value());
    EXPECT_TRUE(lz78_parse(BitString{}).phrases.empty());
}

TEST(Lz78Parse, CompletePhrasesDistinctAndCoverInput) {
    std::mt19937_64 rng(21);
    for (int t = 0; t < 50; ++t) {
        const auto x = random_word(rng, 500 + rng() % 500);
        const auto p = lz78_parse(x);
        std::set<std::string> seen{""};
        BinaryWord joined;
        for (const auto &ph : p.phrases) {
            const auto s = x.substr(ph.start, ph.length);
            joined.append(s);
            if (!ph.new_symbol) continue;
            // everything but the last symbol was an earlier phrase
            EXPECT_TRUE(seen.count(s.prefix(s.size() - 1).to_string()));
            EXPECT_TRUE(seen.insert(s.to_string()).second);
        }
        EXPECT_EQ(joined, x);
    }
}

// Goldens come from an independent implementation of the same layout.
TEST(Lz78Coder, GoldenCodewords) {
    Lz78Coder c;
    EXPECT_EQ(c.encode(BitString::from_string("1011010100010")).to_string(), "001001100010000010011011100100");
    EXPECT_EQ(c.encode(BitString::from_string("0000")).to_string(), "01101010101010");
    EXPECT_EQ(c.encode(BitString::from_string("110")).to_string(), "011000101110");
    EXPECT_EQ(c.encode(BitString{}).to_string(), "11");
    const auto w = BitString::from_string(
        "1101000011010000110100010000000011000011011001011010111110110010110111010000011111011010011011011100011000"
        "1001111000110001001100110101111111100101100111010111111100111111111111011100011101011100010000");
    EXPECT_EQ(c.encode(w).to_string(),
              "0001000100100100110100001101100011110110111110101100100111000100110111001101111100111000010001001110100000"
              "0010111110101101110011001011101011111001111101111000001011001011111010010010111011010010110011111001111111"
              "0101011100110010100011000111");
}

TEST(Lz78Coder, RatioOfHandTraceExample) {
    Lz78Coder c;
    EXPECT_EQ(compression_ratio(c, BitString::from_string("1011010100010")), Rational(30, 13));
}

TEST(Lz78Coder, AllZerosRatio) {
    // c complete phrases 0, 00, ..., 0^c. Phrase k refers to the newest node,
    // the last of k open nodes, so it costs bit_width(k-1) index bits plus one
    // leaf symbol bit.
    const std::size_t n = std::size_t{1} << 16;
    std::size_t c = 0;
    while ((c + 1) * (c + 2) / 2 <= n) ++c;
    const std::size_t rem = n - c * (c + 1) / 2;
    std::size_t bits = int_code_length(n + 1) + int_code_length(c + 1);
    for (std::size_t k = 1; k <= c; ++k) bits += std::bit_width(k - 1) + 1;
    if (rem > 0) bits += phased_length(rem, c + 1);
    Lz78Coder coder;
    const BinaryWord x(n, 0);
    EXPECT_EQ(coder.code_length(x), bits);
    EXPECT_LT(compression_ratio(coder, x), Rational(1, 20));
}

TEST(Lz78Coder, RatioDecreasesOnZeros) {
    Lz78Coder coder;
    const BinaryWord x(1 << 14, 0);
    const auto curve = ratio_curve(coder, x, 1 << 10);
    for (std::size_t i = 1; i < curve.size(); ++i) EXPECT_LT(curve[i].ratio(), curve[i - 1].ratio());
}

class Lz78Forms : public ::testing::TestWithParam<Lz78Coder::Reference> {};

TEST_P(Lz78Forms, RoundTripAndSeparation) {
    Lz78Coder c(GetParam());
    std::mt19937_64 rng(5);
    for (int t = 0; t < 2000; ++t) {
        const auto x = random_word(rng, rng() % 300);
        const auto y = random_word(rng, rng() % 300);
        ASSERT_EQ(c.decode(c.encode(x)), x);
        ASSERT_TRUE(separates(c, x, y));
    }
    const auto x = random_word(rng, 100);
    EXPECT_TRUE(separates(c, x, x.prefix(37)));
    EXPECT_TRUE(separates(c, BitString{}, x));
}

TEST_P(Lz78Forms, PrefixLengthsMatchReencoding) {
    Lz78Coder c(GetParam());
    std::mt19937_64 rng(8);
    for (int t = 0; t < 20; ++t) {
        BinaryWord x;
        const bool sparse = t % 2;
        for (int i = 0; i < 700; ++i) x.push_back(sparse ? (rng() % 9 == 0) : (rng() & 1));
        std::vector<std::size_t> ns;
        for (std::size_t n = 0; n <= x.size(); n += 1 + rng() % 13) ns.push_back(n);
        const auto fast = c.prefix_lengths(x, ns);
        for (std::size_t i = 0; i < ns.size(); ++i) ASSERT_EQ(fast[i], c.code_length(x.prefix(ns[i]))) << ns[i];
    }
}

TEST_P(Lz78Forms, MalformedStreamsThrow) {
    Lz78Coder c(GetParam());
    auto code = c.encode(BitString::from_string("10110101000101101"));
    for (std::size_t cut = 0; cut < code.size(); ++cut) {
        auto t = code.prefix(cut);
        EXPECT_THROW(c.decode(t), MalformedInput) << cut;
    }
}

INSTANTIATE_TEST_SUITE_P(Both, Lz78Forms,
                         ::testing::Values(Lz78Coder::Reference::index, Lz78Coder::Reference::coordinate),
                         [](const auto &info) { return Lz78Coder(info.param).name() == "lz78" ? std::string("index") : std::string("coordinate"); });

TEST(Lz78Coder, CoordinateFormIsLonger) {
    std::mt19937_64 rng(2);
    const auto x = random_word(rng, 4096);
    EXPECT_GT(Lz78Coder(Lz78Coder::Reference::coordinate).code_length(x), Lz78Coder().code_length(x));
}
