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

#ifndef LZROBUST_MEASURE_HPP
#define LZROBUST_MEASURE_HPP

#include "bits.hpp"
#include "rational.hpp"

#include <cmath>
#include <limits>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace lzr {

/// A computable measure on binary words.
class MeasureOracle {
public:
    virtual ~MeasureOracle() = default;

    virtual std::string name() const = 0;

    /// Rational approximation of P(x) within eps. Exact sources ignore eps.
    virtual Rational prob(const BinaryWord &x, const Rational &eps) const = 0;

    /// log2 P(x), -inf when P(x) = 0. Floating point, for long words.
    virtual double log2_prob(const BinaryWord &x) const = 0;

    /// Rigorous enclosure [lo, hi] of log2 P(x) where the oracle can only
    /// bound P. Exact oracles return a degenerate interval.
    virtual std::pair<double, double> log2_prob_bounds(const BinaryWord &x) const {
        const double v = log2_prob(x);
        return {v, v};
    }

    /// log2 P of the prefixes x[0..n) for each n in ns (ascending).
    virtual std::vector<double> prefix_log2_probs(const BinaryWord &x, std::span<const std::size_t> ns) const {
        std::vector<double> out;
        out.reserve(ns.size());
        for (auto n : ns) out.push_back(log2_prob(x.prefix(n)));
        return out;
    }
};

inline constexpr double neg_inf = -std::numeric_limits<double>::infinity();

/// log2(2^a + 2^b) without overflow.
inline double log2_add(double a, double b) {
    if (a == neg_inf) return b;
    if (b == neg_inf) return a;
    if (a < b) std::swap(a, b);
    return a + std::log2(1.0 + std::exp2(b - a));
}

} // namespace lzr

#endif
