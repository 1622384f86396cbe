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

#ifndef LZROBUST_TESTS_RANDOM_TREES_HPP
#define LZROBUST_TESTS_RANDOM_TREES_HPP

#include <lzrobust/deficiency.hpp>

#include <optional>
#include <random>
#include <vector>

namespace lzr::testing {

inline Rational q_(long n, long d = 1) {
    Rational q(n, d);
    q.canonicalize();
    return q;
}

inline std::size_t heap_index(const BinaryWord &x) {
    std::size_t v = 1;
    for (std::size_t i = 0; i < x.size(); ++i) v = (v << 1) | x[i];
    return v;
}

/// Random measure and supermartingale on the full tree of depth D, stored by
/// heap index. Conditionals include 0 and 1, so P has null words; M takes
/// arbitrary (sometimes infinite) values on them.
struct RandomTree {
    std::vector<Rational> p;
    std::vector<std::optional<Rational>> m;

    RandomTree(std::mt19937_64 &rng, std::size_t depth) : p(std::size_t{2} << depth), m(std::size_t{2} << depth) {
        static const std::vector<Rational> cond{q_(0), q_(1, 4), q_(1, 3), q_(1, 2), q_(2, 3), q_(3, 4), q_(1)};
        p[1] = 1;
        m[1] = q_(static_cast<long>(1 + rng() % 8), 8);
        for (std::size_t v = 1; v < (std::size_t{1} << depth); ++v) {
            const Rational c0 = rng() % 4 == 0 ? cond[rng() % cond.size()] : cond[1 + rng() % 5];
            p[2 * v] = p[v] * c0;
            p[2 * v + 1] = p[v] * (1 - c0);
            const auto free_value = [&]() -> std::optional<Rational> {
                if (rng() % 3 == 0) return std::nullopt;
                return q_(static_cast<long>(rng() % 50), 7);
            };
            if (!m[v] || p[v] == 0) {
                m[2 * v] = free_value();
                m[2 * v + 1] = free_value();
                continue;
            }
            // spend a random share s <= 1 of the budget M(x), split f : 1-f
            const Rational s = q_(static_cast<long>(rng() % 9), 8);
            const Rational f = q_(static_cast<long>(rng() % 5), 4);
            const Rational budget = *m[v] * s;
            if (c0 == 0) {
                m[2 * v] = free_value();
                m[2 * v + 1] = budget;
            } else if (c0 == 1) {
                m[2 * v] = budget;
                m[2 * v + 1] = free_value();
            } else {
                m[2 * v] = Rational(budget * f / c0);
                m[2 * v + 1] = Rational(budget * (1 - f) / (1 - c0));
            }
        }
    }

    WordMeasure measure() const {
        return [this](const BinaryWord &x) { return p.at(heap_index(x)); };
    }
    Supermartingale martingale() const {
        return {[this](const BinaryWord &x) { return m.at(heap_index(x)); }, measure()};
    }
};

} // namespace lzr::testing

#endif
