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

#ifndef LZROBUST_KT_HPP
#define LZROBUST_KT_HPP

#include "coder.hpp"
#include "measure.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace lzr {

inline constexpr unsigned default_kmax = 8;

/// Context of order k before position t, as an integer (oldest symbol high).
inline uint32_t context_at(const BinaryWord &x, std::size_t t, unsigned k) {
    uint32_t c = 0;
    for (std::size_t i = t - k; i < t; ++i) c = (c << 1) | x[i];
    return c;
}

/// Exact KT probability of x under order k. The first k symbols have no full
/// context and get probability 1/2 each.
inline Rational kt_prob(const BinaryWord &x, unsigned k) {
    std::vector<std::array<unsigned long, 2>> counts(std::size_t{1} << k, {0, 0});
    BigInt num = 1, den = 1;
    uint32_t ctx = 0;
    const uint32_t mask = (uint32_t{1} << k) - 1;
    for (std::size_t t = 0; t < x.size(); ++t) {
        const uint8_t b = x[t];
        if (t < k) {
            den *= 2;
        } else {
            auto &c = counts[ctx];
            num *= 2 * c[b] + 1;
            den *= 2 * (c[0] + c[1]) + 2;
            ++c[b];
        }
        ctx = ((ctx << 1) | b) & mask;
    }
    Rational p(num, den);
    p.canonicalize();
    return p;
}

/// Prior weights lambda_k proportional to 1/((k+2) log^2(k+2)), k = 0..kmax.
/// Each is rounded to a multiple of 2^-32 and the vector is renormalized
/// exactly, so the weights are reproducible rationals summing to 1.
inline std::vector<Rational> mixture_weights(unsigned kmax) {
    std::vector<BigInt> raw;
    BigInt total = 0;
    for (unsigned k = 0; k <= kmax; ++k) {
        const double l = std::log2(static_cast<double>(k + 2));
        const double v = std::ldexp(1.0 / (static_cast<double>(k + 2) * l * l), 32);
        raw.emplace_back(static_cast<unsigned long>(std::llround(v)));
        total += raw.back();
    }
    std::vector<Rational> out;
    for (const auto &r : raw) {
        Rational q(r, total);
        q.canonicalize();
        out.push_back(q);
    }
    return out;
}

/// Ryabko's mixture rho = sum_k lambda_k rho_k over orders 0..kmax.
class MixtureMeasure final : public MeasureOracle {
public:
    explicit MixtureMeasure(unsigned kmax = default_kmax) : kmax_(kmax), weights_(mixture_weights(kmax)) {
        if (kmax > 24) throw std::invalid_argument("MixtureMeasure: kmax too large");
        for (const auto &w : weights_) log_weights_.push_back(log2_rational(w));
    }

    std::string name() const override { return "mixture-" + std::to_string(kmax_); }
    unsigned kmax() const { return kmax_; }
    const std::vector<Rational> &weights() const { return weights_; }
    const std::vector<double> &log2_weights() const { return log_weights_; }

    Rational exact(const BinaryWord &x) const {
        Rational s = 0;
        for (unsigned k = 0; k <= kmax_; ++k) s += weights_[k] * kt_prob(x, k);
        return s;
    }
    Rational prob(const BinaryWord &x, const Rational &) const override { return exact(x); }

    /// rho(b | x) = rho(xb) / rho(x), exact.
    Rational pred(const BinaryWord &x, uint8_t b) const {
        BinaryWord xb = x;
        xb.push_back(b);
        return exact(xb) / exact(x);
    }

    double log2_prob(const BinaryWord &x) const override;
    std::vector<double> prefix_log2_probs(const BinaryWord &x, std::span<const std::size_t> ns) const override;

private:
    unsigned kmax_;
    std::vector<Rational> weights_;
    std::vector<double> log_weights_;
};

/// Sequential floating-point evaluation of the mixture: per-order KT counts
/// plus log-domain posterior weights.
class MixturePredictor {
public:
    explicit MixturePredictor(const MixtureMeasure &m)
        : kmax_(m.kmax()), lw_(m.log2_weights()), counts_(kmax_ + 1), ctx_(0) {
        for (unsigned k = 0; k <= kmax_; ++k) counts_[k].assign(std::size_t{1} << k, {0, 0});
    }

    /// rho(0 | history) as a double.
    double p0() const {
        const double top = *std::max_element(lw_.begin(), lw_.end());
        double num = 0, den = 0;
        for (unsigned k = 0; k <= kmax_; ++k) {
            const double w = std::exp2(lw_[k] - top);
            num += w * order_p0(k);
            den += w;
        }
        return num / den;
    }

    /// Consume b and return log2 rho(b | history).
    double update(uint8_t b) {
        const double top = *std::max_element(lw_.begin(), lw_.end());
        double num = 0, den = 0;
        for (unsigned k = 0; k <= kmax_; ++k) {
            const double pk = b ? 1.0 - order_p0(k) : order_p0(k);
            const double w = std::exp2(lw_[k] - top);
            num += w * pk;
            den += w;
            lw_[k] += std::log2(pk);
        }
        for (unsigned k = 0; k <= kmax_; ++k) {
            if (t_ < k) continue;
            ++counts_[k][ctx_ & ((uint32_t{1} << k) - 1)][b];
        }
        ctx_ = (ctx_ << 1) | b;
        ++t_;
        return std::log2(num / den);
    }

private:
    double order_p0(unsigned k) const {
        if (t_ < k) return 0.5;
        const auto &c = counts_[k][ctx_ & ((uint32_t{1} << k) - 1)];
        return (2.0 * c[0] + 1.0) / (2.0 * (c[0] + c[1]) + 2.0);
    }

    unsigned kmax_;
    std::vector<double> lw_;
    std::vector<std::vector<std::array<uint32_t, 2>>> counts_;
    uint64_t ctx_;
    std::size_t t_ = 0;
};

inline double MixtureMeasure::log2_prob(const BinaryWord &x) const {
    MixturePredictor p(*this);
    double s = 0;
    for (std::size_t t = 0; t < x.size(); ++t) s += p.update(x[t]);
    return s;
}

inline std::vector<double> MixtureMeasure::prefix_log2_probs(const BinaryWord &x, std::span<const std::size_t> ns) const {
    MixturePredictor p(*this);
    std::vector<double> out;
    double s = 0;
    std::size_t t = 0;
    for (auto n : ns) {
        for (; t < n; ++t) s += p.update(x[t]);
        out.push_back(s);
    }
    return out;
}

/// Ideal code length ceil(-log rho(x)) + 1 from the exact measure.
inline std::size_t mixture_code_len(const BinaryWord &x, unsigned kmax = default_kmax) {
    const Rational p = MixtureMeasure(kmax).exact(x);
    // smallest L with 2^-L <= p
    std::size_t L = 0;
    Rational scaled = p;
    while (scaled < 1) {
        scaled *= 2;
        ++L;
    }
    return L + 1;
}

/// Binary arithmetic coder with 62-bit registers (Witten-Neal-Cleary
/// renormalization with pending bits). The payload for n symbols is
/// exactly shifts + 2 bits, and the decoder recomputes that count, so it
/// leaves the reader at the end of the payload whatever follows.
class ArithmeticEncoder {
public:
    static constexpr unsigned precision = 62;
    static constexpr uint64_t top = uint64_t{1} << precision;
    static constexpr uint64_t half = top >> 1;
    static constexpr uint64_t quarter = top >> 2;

    explicit ArithmeticEncoder(BitString &out) : out_(&out) {}

    /// p0 is the probability of symbol 0, scaled by 2^62.
    void encode(uint8_t b, uint64_t p0) {
        const uint64_t r0 = split(low_, high_, p0);
        if (b) low_ += r0;
        else high_ = low_ + r0 - 1;
        for (;;) {
            if (high_ < half) {
                emit(0);
            } else if (low_ >= half) {
                emit(1);
                low_ -= half;
                high_ -= half;
            } else if (low_ >= quarter && high_ < half + quarter) {
                ++pending_;
                low_ -= quarter;
                high_ -= quarter;
            } else {
                break;
            }
            low_ <<= 1;
            high_ = (high_ << 1) | 1;
            ++shifts_;
        }
    }

    void finish() {
        ++pending_;
        emit(low_ < quarter ? 0 : 1);
    }

    /// Payload length if the stream were finished now.
    std::size_t finished_length() const { return shifts_ + 2; }

    static uint64_t split(uint64_t low, uint64_t high, uint64_t p0) {
        const uint64_t range = high - low + 1;
        auto r0 = static_cast<uint64_t>((static_cast<unsigned __int128>(range) * p0) >> precision);
        return std::clamp<uint64_t>(r0, 1, range - 1);
    }

private:
    void emit(uint8_t b) {
        out_->push_back(b);
        for (; pending_ > 0; --pending_) out_->push_back(1 - b);
    }

    BitString *out_;
    uint64_t low_ = 0, high_ = top - 1;
    std::size_t pending_ = 0, shifts_ = 0;
};

class ArithmeticDecoder {
public:
    explicit ArithmeticDecoder(BitReader &in) : in_(&in), start_(in.position()) {
        for (unsigned i = 0; i < ArithmeticEncoder::precision; ++i) value_ = (value_ << 1) | next();
    }

    uint8_t decode(uint64_t p0) {
        using E = ArithmeticEncoder;
        const uint64_t r0 = E::split(low_, high_, p0);
        uint8_t b = 0;
        if (value_ - low_ >= r0) {
            b = 1;
            low_ += r0;
        } else {
            high_ = low_ + r0 - 1;
        }
        for (;;) {
            if (high_ < E::half) {
            } else if (low_ >= E::half) {
                low_ -= E::half;
                high_ -= E::half;
                value_ -= E::half;
            } else if (low_ >= E::quarter && high_ < E::half + E::quarter) {
                low_ -= E::quarter;
                high_ -= E::quarter;
                value_ -= E::quarter;
            } else {
                break;
            }
            low_ <<= 1;
            high_ = (high_ << 1) | 1;
            value_ = (value_ << 1) | next();
            ++shifts_;
        }
        return b;
    }

    /// Position the reader right after the payload.
    void finish() { in_->seek(start_ + shifts_ + 2); }

private:
    uint8_t next() { return in_->bit_or_zero(cursor_++); }

    BitReader *in_;
    std::size_t start_;
    std::size_t cursor_ = start_;
    uint64_t low_ = 0, high_ = ArithmeticEncoder::top - 1, value_ = 0;
    std::size_t shifts_ = 0;
};

inline uint64_t quantize_p0(double p0) {
    const double scaled = std::ldexp(p0, static_cast<int>(ArithmeticEncoder::precision));
    if (!(scaled >= 1.0)) return 1;
    const double cap = std::ldexp(1.0, static_cast<int>(ArithmeticEncoder::precision)) - 1.0;
    return static_cast<uint64_t>(std::min(scaled, cap));
}

/// Code built from the mixture: encode_int(n+1) ++ arithmetic payload.
class MixtureCoder final : public Coder {
public:
    using Coder::decode;
    using Coder::encode;

    explicit MixtureCoder(unsigned kmax = default_kmax) : measure_(kmax) {}

    std::string name() const override { return "mixture"; }
    const MixtureMeasure &measure() const { return measure_; }

    void encode(const BinaryWord &x, BitString &out) const override {
        encode_int(x.size() + 1, out);
        MixturePredictor p(measure_);
        ArithmeticEncoder enc(out);
        for (std::size_t t = 0; t < x.size(); ++t) {
            enc.encode(x[t], quantize_p0(p.p0()));
            p.update(x[t]);
        }
        enc.finish();
    }

    BinaryWord decode(BitReader &in) const override {
        const uint64_t n = decode_int(in) - 1;
        if (n > (uint64_t{1} << 40)) throw MalformedInput("mixture: implausible length");
        MixturePredictor p(measure_);
        ArithmeticDecoder dec(in);
        BinaryWord out;
        for (uint64_t t = 0; t < n; ++t) {
            const uint8_t b = dec.decode(quantize_p0(p.p0()));
            p.update(b);
            out.push_back(b);
        }
        dec.finish();
        return out;
    }

    /// Arithmetic payload length only (no length header).
    std::size_t payload_length(const BinaryWord &x) const {
        BitString sink;
        MixturePredictor p(measure_);
        ArithmeticEncoder enc(sink);
        for (std::size_t t = 0; t < x.size(); ++t) {
            enc.encode(x[t], quantize_p0(p.p0()));
            p.update(x[t]);
        }
        return enc.finished_length();
    }

    std::vector<std::size_t> prefix_lengths(const BinaryWord &x, std::span<const std::size_t> ns) const override {
        BitString sink;
        MixturePredictor p(measure_);
        ArithmeticEncoder enc(sink);
        std::vector<std::size_t> out;
        std::size_t t = 0;
        for (auto n : ns) {
            for (; t < n; ++t) {
                enc.encode(x[t], quantize_p0(p.p0()));
                p.update(x[t]);
            }
            out.push_back(int_code_length(n + 1) + enc.finished_length());
        }
        return out;
    }

private:
    MixtureMeasure measure_;
};

/// (1/t) log2(mu(x) / rho(x)) with t = l(x): the mean forecast error of rho
/// against mu on x.
inline double forecast_error(const BinaryWord &x, const MeasureOracle &mu, const MixtureMeasure &rho) {
    if (x.empty()) throw std::invalid_argument("forecast_error: empty word");
    const double lm = mu.log2_prob(x);
    if (lm == neg_inf) throw std::domain_error("forecast_error: mu(x) = 0");
    return (lm - rho.log2_prob(x)) / static_cast<double>(x.size());
}

/// Forecast error at each checkpoint, sharing one sequential pass per measure.
inline std::vector<double> forecast_error_curve(const BinaryWord &x, const MeasureOracle &mu, const MixtureMeasure &rho,
                                                std::span<const std::size_t> ns) {
    const auto a = mu.prefix_log2_probs(x, ns);
    const auto b = rho.prefix_log2_probs(x, ns);
    std::vector<double> out;
    for (std::size_t i = 0; i < ns.size(); ++i) {
        if (a[i] == neg_inf) throw std::domain_error("forecast_error: mu(x) = 0");
        out.push_back(ns[i] == 0 ? 0.0 : (a[i] - b[i]) / static_cast<double>(ns[i]));
    }
    return out;
}

} // namespace lzr

#endif
