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

#ifndef LZROBUST_SOURCES_HPP
#define LZROBUST_SOURCES_HPP

#include "block.hpp"
#include "coder.hpp"
#include "measure.hpp"

#include <json.hpp>

#include <cmath>
#include <cstdint>
#include <memory>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

namespace lzr {

/// Uniform double in [0,1) from 53 high bits; platform independent unlike
/// the std distributions.
inline double unit_double(std::mt19937_64 &rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

inline double binary_entropy(double p) {
    if (p <= 0.0 || p >= 1.0) return 0.0;
    return -p * std::log2(p) - (1 - p) * std::log2(1 - p);
}

/// Solve A v = b over the rationals (Gauss-Jordan). Throws if singular.
inline std::vector<Rational> solve_linear(std::vector<std::vector<Rational>> a, std::vector<Rational> b) {
    const std::size_t n = b.size();
    for (std::size_t col = 0; col < n; ++col) {
        std::size_t piv = col;
        while (piv < n && a[piv][col] == 0) ++piv;
        if (piv == n) throw std::domain_error("solve_linear: singular system");
        std::swap(a[piv], a[col]);
        std::swap(b[piv], b[col]);
        for (std::size_t r = 0; r < n; ++r) {
            if (r == col || a[r][col] == 0) continue;
            const Rational f = a[r][col] / a[col][col];
            for (std::size_t c = col; c < n; ++c) a[r][c] -= f * a[col][c];
            b[r] -= f * b[col];
        }
    }
    for (std::size_t i = 0; i < n; ++i) b[i] /= a[i][i];
    return b;
}

/// Stationary binary Markov chain of order k. State = last k symbols with the
/// oldest in the high bit; row c holds P(next = 1 | c).
class MarkovSource final : public MeasureOracle {
public:
    MarkovSource(unsigned order, std::vector<Rational> p1) : k_(order), p1_(std::move(p1)) {
        if (order > 16) throw std::invalid_argument("MarkovSource: order too large");
        if (p1_.size() != (std::size_t{1} << k_)) throw std::invalid_argument("MarkovSource: need 2^k rows");
        for (const auto &p : p1_)
            if (p < 0 || p > 1) throw std::invalid_argument("MarkovSource: row probability outside [0,1]");
        solve_stationary();
        for (const auto &p : p1_) {
            lp1_.push_back(log2_or_neg_inf(p));
            lp0_.push_back(log2_or_neg_inf(1 - p));
            p1d_.push_back(p.get_d());
        }
        for (const auto &s : pi_) cum_.push_back((cum_.empty() ? 0.0 : cum_.back()) + s.get_d());
    }

    static MarkovSource bernoulli(const Rational &p) { return MarkovSource(0, {p}); }
    /// Symmetric chain that flips the previous symbol with probability p.
    static MarkovSource flip_chain(const Rational &p) { return MarkovSource(1, {p, 1 - p}); }

    /// {"order": k, "rows": {"<context bits>": "num/den", ...}} giving P(1 | context).
    static MarkovSource from_json(const nlohmann::json &j) {
        const unsigned k = j.at("order").get<unsigned>();
        std::vector<Rational> rows(std::size_t{1} << k);
        std::vector<bool> seen(rows.size(), false);
        for (const auto &[ctx, val] : j.at("rows").items()) {
            if (ctx.size() != k) throw std::invalid_argument("MarkovSource: context '" + ctx + "' has wrong length");
            uint32_t c = 0;
            for (char ch : ctx) {
                if (ch != '0' && ch != '1') throw std::invalid_argument("MarkovSource: bad context " + ctx);
                c = (c << 1) | static_cast<uint32_t>(ch - '0');
            }
            rows[c] = parse_rational(val.get<std::string>());
            seen[c] = true;
        }
        for (bool s : seen)
            if (!s) throw std::invalid_argument("MarkovSource: missing context row");
        return MarkovSource(k, rows);
    }

    nlohmann::json to_json() const {
        nlohmann::json rows = nlohmann::json::object();
        for (uint32_t c = 0; c < p1_.size(); ++c) {
            std::string ctx;
            for (unsigned i = k_; i-- > 0;) ctx.push_back(static_cast<char>('0' + ((c >> i) & 1)));
            rows[ctx] = to_string(p1_[c]);
        }
        return {{"order", k_}, {"rows", rows}};
    }

    std::string name() const override { return "markov-" + std::to_string(k_); }
    unsigned order() const { return k_; }
    const std::vector<Rational> &rows() const { return p1_; }
    const std::vector<Rational> &stationary() const { return pi_; }

    Rational exact(const BinaryWord &x) const {
        const std::size_t m = x.size();
        if (m <= k_) {
            // marginal of the first m symbols of the stationary state
            Rational s = 0;
            const uint32_t free_bits = k_ - static_cast<unsigned>(m);
            uint32_t head = 0;
            for (std::size_t i = 0; i < m; ++i) head = (head << 1) | x[i];
            for (uint32_t low = 0; low < (uint32_t{1} << free_bits); ++low) s += pi_[(head << free_bits) | low];
            return s;
        }
        uint32_t c = 0;
        for (unsigned i = 0; i < k_; ++i) c = (c << 1) | x[i];
        Rational p = pi_[c];
        const uint32_t mask = (uint32_t{1} << k_) - 1;
        for (std::size_t t = k_; t < m && p != 0; ++t) {
            p *= x[t] ? p1_[c] : 1 - p1_[c];
            c = ((c << 1) | x[t]) & mask;
        }
        return p;
    }
    Rational prob(const BinaryWord &x, const Rational &) const override { return exact(x); }

    double log2_prob(const BinaryWord &x) const override {
        if (x.size() <= k_) return log2_or_neg_inf(exact(x));
        uint32_t c = 0;
        for (unsigned i = 0; i < k_; ++i) c = (c << 1) | x[i];
        double s = log2_or_neg_inf(pi_[c]);
        const uint32_t mask = (uint32_t{1} << k_) - 1;
        for (std::size_t t = k_; t < x.size(); ++t) {
            s += x[t] ? lp1_[c] : lp0_[c];
            c = ((c << 1) | x[t]) & mask;
        }
        return s;
    }

    std::vector<double> prefix_log2_probs(const BinaryWord &x, std::span<const std::size_t> ns) const override {
        std::vector<double> out;
        double s = 0;
        uint32_t c = 0;
        const uint32_t mask = (uint32_t{1} << k_) - 1;
        std::size_t t = 0;
        for (auto n : ns) {
            if (n <= k_) {
                out.push_back(log2_or_neg_inf(exact(x.prefix(n))));
                continue;
            }
            while (t < n) {
                if (t < k_) {
                    c = (c << 1) | x[t++];
                    if (t == k_) s = log2_or_neg_inf(pi_[c]);
                    continue;
                }
                s += x[t] ? lp1_[c] : lp0_[c];
                c = ((c << 1) | x[t++]) & mask;
            }
            out.push_back(s);
        }
        return out;
    }

    /// Sum over states of pi(c) h(P(1|c)).
    double entropy_rate() const {
        double h = 0;
        for (std::size_t c = 0; c < p1_.size(); ++c) h += pi_[c].get_d() * binary_entropy(p1d_[c]);
        return h;
    }

    BinaryWord sample(uint64_t seed, std::size_t n) const {
        std::mt19937_64 rng(seed);
        BinaryWord out;
        out.reserve(n);
        const double u = unit_double(rng) * cum_.back();
        uint32_t c = 0;
        while (c + 1 < cum_.size() && u >= cum_[c]) ++c;
        for (unsigned i = k_; i-- > 0 && out.size() < n;) out.push_back((c >> i) & 1);
        const uint32_t mask = (uint32_t{1} << k_) - 1;
        while (out.size() < n) {
            const uint8_t b = unit_double(rng) < p1d_[c] ? 1 : 0;
            out.push_back(b);
            c = ((c << 1) | b) & mask;
        }
        return out;
    }

private:
    void solve_stationary() {
        const std::size_t s = p1_.size();
        if (s == 1) {
            pi_ = {Rational(1)};
            return;
        }
        // (P^T - I) pi = 0 with the last equation replaced by sum(pi) = 1
        std::vector<std::vector<Rational>> a(s, std::vector<Rational>(s, 0));
        const uint32_t mask = static_cast<uint32_t>(s - 1);
        for (uint32_t c = 0; c < s; ++c) {
            a[((c << 1) | 0) & mask][c] += 1 - p1_[c];
            a[((c << 1) | 1) & mask][c] += p1_[c];
            a[c][c] -= 1;
        }
        for (auto &v : a.back()) v = 1;
        std::vector<Rational> b(s, 0);
        b.back() = 1;
        try {
            pi_ = solve_linear(a, b);
        } catch (const std::domain_error &) {
            throw std::invalid_argument("MarkovSource: stationary distribution not unique");
        }
        for (const auto &p : pi_)
            if (p < 0) throw std::invalid_argument("MarkovSource: negative stationary mass");
    }

    unsigned k_;
    std::vector<Rational> p1_;
    std::vector<Rational> pi_;
    std::vector<double> lp1_, lp0_, p1d_, cum_;
};

struct RobustnessReport {
    std::string source;
    std::string coder;
    double entropy = 0;
    RatioCurve full;
    std::vector<std::pair<std::size_t, RatioCurve>> blocks; // (N, curve)
    double final_ratio() const { return full.back().ratio_d(); }
    /// Final ratio of each block curve, in the order of `blocks`.
    std::vector<double> block_limits() const {
        std::vector<double> out;
        for (const auto &[n, c] : blocks) out.push_back(c.back().ratio_d());
        return out;
    }
};

/// Ratio curves of `coder` on one sample and of block(N, coder) for each N.
inline RobustnessReport robustness_experiment(const MarkovSource &src, std::shared_ptr<const Coder> coder, std::size_t n,
                                              std::span<const std::size_t> block_lengths, uint64_t seed,
                                              std::size_t stride) {
    RobustnessReport rep;
    rep.source = src.name();
    rep.coder = coder->name();
    rep.entropy = src.entropy_rate();
    const auto x = src.sample(seed, n);
    rep.full = ratio_curve(*coder, x, stride);
    for (auto blk : block_lengths) {
        BlockCoder b(blk, coder);
        rep.blocks.emplace_back(blk, ratio_curve(b, x, stride));
    }
    return rep;
}

} // namespace lzr

#endif
