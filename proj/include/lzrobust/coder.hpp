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

#ifndef LZROBUST_CODER_HPP
#define LZROBUST_CODER_HPP

#include "bits.hpp"
#include "rational.hpp"

#include <cstddef>
#include <memory>
#include <optional>
#include <random>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace lzr {

/// A computable code family phi_n. The compressing coders all start their
/// codewords with encode_int(n+1), so codewords are self-delimiting and
/// concatenations decode unambiguously. BlockCoder relies on that header.
class Coder {
public:
    virtual ~Coder() = default;

    virtual std::string name() const = 0;
    virtual void encode(const BinaryWord &x, BitString &out) const = 0;
    virtual BinaryWord decode(BitReader &in) const = 0;

    /// Codeword length of every prefix x[0..n) for n in `ns` (ascending).
    /// The default re-encodes each prefix; coders override with one-pass versions.
    virtual std::vector<std::size_t> prefix_lengths(const BinaryWord &x, std::span<const std::size_t> ns) const {
        std::vector<std::size_t> out;
        out.reserve(ns.size());
        for (auto n : ns) {
            BitString c;
            encode(x.prefix(n), c);
            out.push_back(c.size());
        }
        return out;
    }

    BitString encode(const BinaryWord &x) const {
        BitString out;
        encode(x, out);
        return out;
    }
    BinaryWord decode(const BitString &code) const {
        BitReader in(code);
        return decode(in);
    }
    std::size_t code_length(const BinaryWord &x) const { return encode(x).size(); }
};

/// x verbatim after a fixed 64-bit length field; the reference point for
/// ratios. Not usable as a block inner coder (no integer header).
class VerbatimCoder final : public Coder {
public:
    using Coder::decode;
    using Coder::encode;

    std::string name() const override { return "verbatim"; }
    void encode(const BinaryWord &x, BitString &out) const override {
        out.append_uint(x.size(), 64);
        out.append(x);
    }
    BinaryWord decode(BitReader &in) const override {
        const uint64_t n = in.read_uint(64);
        return in.read_bits(n);
    }
    std::vector<std::size_t> prefix_lengths(const BinaryWord &, std::span<const std::size_t> ns) const override {
        std::vector<std::size_t> out;
        for (auto n : ns) out.push_back(64 + n);
        return out;
    }
};

struct RatioPoint {
    std::size_t n = 0;
    std::size_t bits = 0;
    Rational ratio() const { return Rational(static_cast<unsigned long>(bits), static_cast<unsigned long>(n)); }
    double ratio_d() const { return static_cast<double>(bits) / static_cast<double>(n); }
};

using RatioCurve = std::vector<RatioPoint>;

/// l(phi_n(x)) / n for binary input (log|A| = 1).
inline Rational compression_ratio(const Coder &coder, const BinaryWord &x) {
    if (x.empty()) throw std::invalid_argument("compression_ratio: empty input");
    return Rational(static_cast<unsigned long>(coder.code_length(x)), static_cast<unsigned long>(x.size()));
}

/// Ratios of prefixes at stride, 2*stride, ... (and the full length when it is not a multiple).
inline RatioCurve ratio_curve(const Coder &coder, const BinaryWord &x, std::size_t stride) {
    if (x.empty()) throw std::invalid_argument("ratio_curve: empty input");
    if (stride == 0) throw std::invalid_argument("ratio_curve: stride must be positive");
    std::vector<std::size_t> ns;
    for (std::size_t n = stride; n <= x.size(); n += stride) ns.push_back(n);
    if (ns.empty() || ns.back() != x.size()) ns.push_back(x.size());
    const auto lens = coder.prefix_lengths(x, ns);
    RatioCurve curve;
    curve.reserve(ns.size());
    for (std::size_t i = 0; i < ns.size(); ++i) curve.push_back({ns[i], lens[i]});
    return curve;
}

/// Ratios at an arbitrary ascending list of prefix lengths.
inline RatioCurve ratio_points(const Coder &coder, const BinaryWord &x, std::span<const std::size_t> ns) {
    const auto lens = coder.prefix_lengths(x, ns);
    RatioCurve curve;
    for (std::size_t i = 0; i < ns.size(); ++i) curve.push_back({ns[i], lens[i]});
    return curve;
}

struct DecodabilityReport {
    std::size_t pairs_checked = 0;
    std::size_t failures = 0;
    std::optional<std::pair<BinaryWord, BinaryWord>> witness;
    bool ok() const { return failures == 0; }
};

/// Separating property on one pair: decode(encode(x) ++ encode(y)) yields x then y and nothing else.
inline bool separates(const Coder &coder, const BinaryWord &x, const BinaryWord &y) {
    BitString joint = coder.encode(x);
    joint.append(coder.encode(y));
    try {
        BitReader in(joint);
        if (coder.decode(in) != x) return false;
        if (coder.decode(in) != y) return false;
        return in.at_end();
    } catch (const MalformedInput &) {
        return false;
    }
}

inline DecodabilityReport decodability_check(const Coder &coder, std::span<const std::pair<BinaryWord, BinaryWord>> corpus) {
    DecodabilityReport rep;
    for (const auto &[x, y] : corpus) {
        ++rep.pairs_checked;
        if (!separates(coder, x, y)) {
            ++rep.failures;
            if (!rep.witness) rep.witness = std::make_pair(x, y);
        }
    }
    return rep;
}

/// Seeded uniform random word.
template <class Rng>
BinaryWord random_word(Rng &rng, std::size_t n) {
    BinaryWord w;
    w.reserve(n);
    uint64_t buf = 0;
    for (std::size_t i = 0; i < n; ++i) {
        if (i % 64 == 0) buf = rng();
        w.push_back(static_cast<uint8_t>((buf >> (i % 64)) & 1u));
    }
    return w;
}

} // namespace lzr

#endif
