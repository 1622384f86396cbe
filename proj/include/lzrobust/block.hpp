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

#ifndef LZROBUST_BLOCK_HPP
#define LZROBUST_BLOCK_HPP

#include "coder.hpp"

#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

namespace lzr {

/// Block realization: x is cut into blocks of N symbols, each full block is
/// coded independently by the inner coder and the incomplete last block goes
/// out raw as self_delimit(tail). The tail marker is always present, so an
/// input of exactly N symbols yields inner(x) ++ encode_int(1).
///
/// The decoder tells the two apart by peeking the leading integer: every
/// inner codeword starts with encode_int(N+1), a tail with encode_int(q+1),
/// q < N.
class BlockCoder final : public Coder {
public:
    using Coder::decode;
    using Coder::encode;

    BlockCoder(std::size_t block, std::shared_ptr<const Coder> inner) : n_(block), inner_(std::move(inner)) {
        if (n_ == 0) throw std::invalid_argument("BlockCoder: block length must be positive");
        if (!inner_) throw std::invalid_argument("BlockCoder: missing inner coder");
    }

    std::string name() const override { return "block-" + std::to_string(n_) + "-" + inner_->name(); }
    std::size_t block() const { return n_; }
    const Coder &inner() const { return *inner_; }

    void encode(const BinaryWord &x, BitString &out) const override {
        const std::size_t full = x.size() / n_;
        for (std::size_t b = 0; b < full; ++b) inner_->encode(x.substr(b * n_, n_), out);
        out.append(self_delimit(x.substr(full * n_, x.size() - full * n_)));
    }

    BinaryWord decode(BitReader &in) const override {
        BinaryWord out;
        for (;;) {
            BitReader peek = in;
            const uint64_t lead = decode_int(peek) - 1;
            if (lead == n_) {
                const auto blk = inner_->decode(in);
                if (blk.size() != n_) throw MalformedInput("block: inner codeword of wrong length");
                out.append(blk);
                continue;
            }
            if (lead > n_) throw MalformedInput("block: tail longer than a block");
            out.append(read_self_delimited(in));
            return out;
        }
    }

    std::vector<std::size_t> prefix_lengths(const BinaryWord &x, std::span<const std::size_t> ns) const override {
        // cumulative inner costs of full blocks, computed once
        std::vector<std::size_t> cum{0};
        const std::size_t blocks = x.size() / n_;
        for (std::size_t b = 0; b < blocks; ++b) cum.push_back(cum.back() + inner_->code_length(x.substr(b * n_, n_)));
        std::vector<std::size_t> out;
        out.reserve(ns.size());
        for (auto n : ns) {
            const std::size_t q = n % n_;
            out.push_back(cum[n / n_] + int_code_length(q + 1) + q);
        }
        return out;
    }

private:
    std::size_t n_;
    std::shared_ptr<const Coder> inner_;
};

} // namespace lzr

#endif
