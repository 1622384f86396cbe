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

#include "lzrobust/block.hpp"
#include "lzrobust/lz78.hpp"
#include "lzrobust/lzwindow.hpp"

#include <gtest/gtest.h>

#include <random>

using namespace lzr;

TEST(Verbatim, RatioIsForced) {
    VerbatimCoder v;
    std::mt19937_64 rng(1);
    const auto x = random_word(rng, 100);
    EXPECT_EQ(compression_ratio(v, x), Rational(164, 100));
    EXPECT_EQ(v.decode(v.encode(x)), x);
    EXPECT_THROW(compression_ratio(v, BitString{}), std::invalid_argument);
}

TEST(Block, SingleBlockIsInnerPlusEmptyTail) {
    auto inner = std::make_shared<Lz78Coder>();
    BlockCoder b(8, inner);
    const auto x = BitString::from_string("10110010");
    EXPECT_EQ(b.encode(x), inner->encode(x) + encode_int(1));
}

TEST(Block, TwoBlocksAndRawTail) {
    auto inner = std::make_shared<Lz78Coder>();
    BlockCoder b(5, inner);
    const auto x = BitString::from_string("1011001110101");
    const auto expect = inner->encode(x.substr(0, 5)) + inner->encode(x.substr(5, 5)) + encode_int(4) + x.substr(10, 3);
    EXPECT_EQ(b.encode(x), expect);
    EXPECT_EQ(b.decode(expect), x);
}

TEST(Block, RoundTripSeparationAndPrefixLengths) {
    std::mt19937_64 rng(33);
    for (std::size_t n : {std::size_t{8}, std::size_t{64}, std::size_t{1024}}) {
        for (int which = 0; which < 2; ++which) {
            std::shared_ptr<const Coder> inner;
            if (which == 0) inner = std::make_shared<Lz78Coder>();
            else inner = std::make_shared<LzWindowCoder>(256);
            BlockCoder b(n, inner);
            for (int t = 0; t < 300; ++t) {
                const auto x = random_word(rng, rng() % 3000);
                const auto y = random_word(rng, rng() % 300);
                ASSERT_EQ(b.decode(b.encode(x)), x);
                ASSERT_TRUE(separates(b, x, y));
            }
            const auto x = random_word(rng, 2500);
            std::vector<std::size_t> ns;
            for (std::size_t k = 0; k <= x.size(); k += 1 + rng() % 97) ns.push_back(k);
            const auto fast = b.prefix_lengths(x, ns);
            for (std::size_t i = 0; i < ns.size(); ++i) ASSERT_EQ(fast[i], b.code_length(x.prefix(ns[i])));
        }
    }
}

TEST(Block, RejectsBadArguments) {
    EXPECT_THROW(BlockCoder(0, std::make_shared<Lz78Coder>()), std::invalid_argument);
    EXPECT_THROW(BlockCoder(4, nullptr), std::invalid_argument);
    BlockCoder b(4, std::make_shared<Lz78Coder>());
    EXPECT_THROW(b.decode(encode_int(7)), MalformedInput);
}
