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

#ifndef LZROBUST_RATIONAL_HPP
#define LZROBUST_RATIONAL_HPP

#include <gmpxx.h>

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>
#include <string_view>

namespace lzr {

using Rational = mpq_class;
using BigInt = mpz_class;

/// Parse "p/q" or "p" into a canonical rational.
inline Rational parse_rational(std::string_view s) {
    Rational q;
    if (q.set_str(std::string(s), 10) != 0) throw std::invalid_argument("not a rational: " + std::string(s));
    if (q.get_den() == 0) throw std::invalid_argument("zero denominator: " + std::string(s));
    q.canonicalize();
    return q;
}

inline std::string to_string(const Rational &q) { return q.get_str(10); }

/// log2 of a positive rational, accurate for values far outside double range.
inline double log2_rational(const Rational &q) {
    if (sgn(q) <= 0) throw std::domain_error("log2 of a nonpositive rational");
    long en = 0, ed = 0;
    const double mn = mpz_get_d_2exp(&en, q.get_num_mpz_t());
    const double md = mpz_get_d_2exp(&ed, q.get_den_mpz_t());
    return std::log2(mn) - std::log2(md) + static_cast<double>(en - ed);
}

/// log2 q, or -inf for q = 0.
inline double log2_or_neg_inf(const Rational &q) {
    return sgn(q) == 0 ? -std::numeric_limits<double>::infinity() : log2_rational(q);
}

inline Rational pow2(long e) {
    Rational q(1);
    if (e >= 0) mpq_mul_2exp(q.get_mpq_t(), q.get_mpq_t(), static_cast<mp_bitcnt_t>(e));
    else mpq_div_2exp(q.get_mpq_t(), q.get_mpq_t(), static_cast<mp_bitcnt_t>(-e));
    return q;
}

inline Rational abs_diff(const Rational &a, const Rational &b) {
    Rational d = a - b;
    return sgn(d) < 0 ? Rational(-d) : d;
}

} // namespace lzr

#endif
