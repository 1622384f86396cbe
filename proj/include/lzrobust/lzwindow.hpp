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

#ifndef LZROBUST_LZWINDOW_HPP
#define LZROBUST_LZWINDOW_HPP

#include "coder.hpp"
#include "suffix_array.hpp"

#include <algorithm>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace lzr {

struct WindowPhrase {
    std::size_t start = 0;
    std::size_t length = 0; // match length, 0 for a literal
    std::size_t offset = 0; // distance back to the source, 0 when length == 0
    std::optional<uint8_t> next;
};

/// Variant 2 of Lempel-Ziv: greedy longest match against sources starting in
/// the previous W positions (all previous positions when unbounded); the
/// match may run past the current position. Ties go to the smallest offset.
///
/// Codeword: encode_int(n+1), then per phrase encode_int(len+1),
/// encode_int(offset) when len > 0, and the next symbol as one raw bit unless
/// the match reaches the end of the input.
class LzWindowCoder final : public Coder {
public:
    using Coder::decode;
    using Coder::encode;

    static constexpr std::size_t unbounded = 0;

    explicit LzWindowCoder(std::size_t window = unbounded) : window_(window) {}

    std::string name() const override {
        return window_ == unbounded ? std::string("lzwin") : "lzwin-" + std::to_string(window_);
    }
    std::size_t window() const { return window_; }

    std::vector<WindowPhrase> parse(const BinaryWord &x) const {
        std::vector<WindowPhrase> out;
        run(x, {}, &out, nullptr);
        return out;
    }

    void encode(const BinaryWord &x, BitString &out) const override {
        encode_int(x.size() + 1, out);
        for (const auto &ph : parse(x)) {
            encode_int(ph.length + 1, out);
            if (ph.length > 0) encode_int(ph.offset, out);
            if (ph.next) out.push_back(*ph.next);
        }
    }

    BinaryWord decode(BitReader &in) const override {
        const uint64_t n = decode_int(in) - 1;
        BinaryWord out;
        while (out.size() < n) {
            const uint64_t len = decode_int(in) - 1;
            if (len > n - out.size()) throw MalformedInput("lzwin: match overruns the declared length");
            if (len > 0) {
                const uint64_t off = decode_int(in);
                if (off > out.size() || (window_ != unbounded && off > window_))
                    throw MalformedInput("lzwin: offset outside the window");
                const std::size_t from = out.size() - off;
                for (uint64_t k = 0; k < len; ++k) out.push_back(out[from + k]);
            }
            if (out.size() < n) out.push_back(in.read_bit());
        }
        return out;
    }

    std::vector<std::size_t> prefix_lengths(const BinaryWord &x, std::span<const std::size_t> ns) const override {
        std::vector<std::size_t> out;
        run(x, ns, nullptr, &out);
        return out;
    }

private:
    static std::size_t phrase_bits(std::size_t len, std::size_t off, bool literal) {
        return int_code_length(len + 1) + (len > 0 ? int_code_length(off) : 0) + (literal ? 1 : 0);
    }

    // One greedy pass. For every checkpoint n' the phrase that crosses n' is
    // re-matched against the truncated prefix: its length becomes n' - start
    // and the smallest offset for that shorter length is looked up with the
    // window in the same state.
    void run(const BinaryWord &x, std::span<const std::size_t> ns, std::vector<WindowPhrase> *phrases,
             std::vector<std::size_t> *lengths) const {
        const std::size_t n = x.size();
        std::size_t ci = 0;
        const auto emit_checkpoints_upto = [&](std::size_t limit, std::size_t cum) {
            while (ci < ns.size() && ns[ci] <= limit) lengths->push_back(int_code_length(ns[ci++] + 1) + cum);
        };
        if (n == 0) {
            if (lengths) emit_checkpoints_upto(0, 0);
            return;
        }
        MatchFinder mf(x);
        std::size_t inserted = 0, erased = 0, i = 0, cum = 0;
        if (lengths) emit_checkpoints_upto(0, 0);
        while (i < n) {
            while (inserted < i) mf.insert(inserted++);
            if (window_ != unbounded)
                while (erased + window_ < i) mf.erase(erased++);
            std::size_t len = i > 0 ? mf.longest(i) : 0;
            std::size_t off = 0;
            if (len > 0) off = i - static_cast<std::size_t>(mf.latest_source(i, len));
            const std::size_t end = i + len; // position of the literal, if any
            const bool literal = end < n;
            if (lengths) {
                // checkpoints strictly inside the match part: truncated phrase
                while (ci < ns.size() && ns[ci] <= end && ns[ci] > i) {
                    const std::size_t l2 = ns[ci] - i;
                    const std::size_t o2 = i - static_cast<std::size_t>(mf.latest_source(i, l2));
                    lengths->push_back(int_code_length(ns[ci] + 1) + cum + phrase_bits(l2, o2, false));
                    ++ci;
                }
            }
            cum += phrase_bits(len, off, literal);
            if (phrases) {
                WindowPhrase ph{i, len, off, std::nullopt};
                if (literal) ph.next = x[end];
                phrases->push_back(ph);
            }
            i = literal ? end + 1 : end;
            if (lengths) emit_checkpoints_upto(i, cum);
        }
    }

    std::size_t window_;
};

} // namespace lzr

#endif
