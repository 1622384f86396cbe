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

#ifndef LZROBUST_CUTSTACK_HPP
#define LZROBUST_CUTSTACK_HPP

#include "bits.hpp"
#include "rational.hpp"

#include <algorithm>
#include <cstdint>
#include <optional>
#include <random>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace lzr {

/// Half-open [left, right) with exact endpoints.
struct Interval {
    Rational left, right;

    Interval() = default;
    Interval(Rational l, Rational r) : left(std::move(l)), right(std::move(r)) {
        if (!(left < right)) throw std::invalid_argument("Interval: need left < right");
    }
    Rational width() const { return right - left; }
    bool contains(const Interval &o) const { return left <= o.left && o.right <= right; }
    bool contains(const Rational &p) const { return left <= p && p < right; }
    friend bool operator==(const Interval &, const Interval &) = default;
};

/// pi_1 = [1/2, 1/2 + r), pi_0 the rest of [0,1). Endpoints carry no mass.
struct Partition {
    Rational r;

    explicit Partition(Rational rr) : r(std::move(rr)) {
        if (!(r > 0) || !(r < Rational(1, 2))) throw std::invalid_argument("Partition: need 0 < r < 1/2");
    }
    Interval one() const { return {Rational(1, 2), Rational(1, 2) + r}; }

    /// Name of an interval; throws if it straddles the two elements.
    uint8_t name_of(const Interval &iv) const {
        const Interval p1 = one();
        if (p1.contains(iv)) return 1;
        if (iv.right <= p1.left || iv.left >= p1.right) return 0;
        throw std::invalid_argument("Partition: interval not compatible with the partition");
    }
};

class Column {
public:
    Column() = default;
    Column(std::vector<Interval> levels, BinaryWord name) : levels_(std::move(levels)), name_(std::move(name)) {
        if (levels_.empty()) throw std::invalid_argument("Column: empty");
        if (name_.size() != levels_.size()) throw std::invalid_argument("Column: name length differs from height");
        const Rational w = levels_[0].width();
        for (const auto &l : levels_)
            if (l.width() != w) throw std::invalid_argument("Column: levels of unequal width");
    }
    Column(std::vector<Interval> levels, const Partition &p) : Column(levels, names(levels, p)) {}

    std::size_t height() const { return levels_.size(); }
    Rational width() const { return levels_[0].width(); }
    Rational measure() const { return width() * static_cast<unsigned long>(height()); }
    const BinaryWord &name() const { return name_; }
    const std::vector<Interval> &levels() const { return levels_; }
    const Interval &level(std::size_t j) const { return levels_[j]; }
    friend bool operator==(const Column &, const Column &) = default;

private:
    static BinaryWord names(const std::vector<Interval> &lv, const Partition &p) {
        BinaryWord nm;
        for (const auto &l : lv) nm.push_back(p.name_of(l));
        return nm;
    }

    std::vector<Interval> levels_;
    BinaryWord name_;
};

/// All intervals pairwise disjoint (checked by sorting).
inline bool disjoint(std::vector<Interval> all) {
    std::sort(all.begin(), all.end(), [](const Interval &a, const Interval &b) { return a.left < b.left; });
    for (std::size_t i = 1; i < all.size(); ++i)
        if (all[i].left < all[i - 1].right) return false;
    return true;
}

/// Column stacking: E2 on top of E1, name concatenated.
inline Column stack_columns(const Column &e1, const Column &e2) {
    if (e1.width() != e2.width()) throw std::invalid_argument("stack_columns: width mismatch");
    std::vector<Interval> lv = e1.levels();
    lv.insert(lv.end(), e2.levels().begin(), e2.levels().end());
    if (!disjoint(lv)) throw std::invalid_argument("stack_columns: supports overlap");
    return Column(std::move(lv), e1.name() + e2.name());
}

class Gadget {
public:
    Gadget() = default;
    explicit Gadget(std::vector<Column> cols) : cols_(std::move(cols)) {}

    const std::vector<Column> &columns() const { return cols_; }
    std::size_t size() const { return cols_.size(); }
    const Column &operator[](std::size_t i) const { return cols_[i]; }

    Rational width() const {
        Rational w = 0;
        for (const auto &c : cols_) w += c.width();
        return w;
    }
    Rational support() const {
        Rational s = 0;
        for (const auto &c : cols_) s += c.measure();
        return s;
    }
    std::vector<Rational> distribution() const {
        const Rational w = width();
        std::vector<Rational> d;
        for (const auto &c : cols_) d.push_back(c.width() / w);
        return d;
    }
    std::vector<Interval> intervals() const {
        std::vector<Interval> all;
        for (const auto &c : cols_) all.insert(all.end(), c.levels().begin(), c.levels().end());
        return all;
    }
    bool is_disjoint() const { return disjoint(intervals()); }
    friend bool operator==(const Gadget &, const Gadget &) = default;

private:
    std::vector<Column> cols_;
};

inline Gadget union_gadgets(const Gadget &a, const Gadget &b) {
    std::vector<Column> c = a.columns();
    c.insert(c.end(), b.columns().begin(), b.columns().end());
    Gadget g(std::move(c));
    if (!g.is_disjoint()) throw std::invalid_argument("union_gadgets: supports overlap");
    return g;
}

/// Cut each interval into pieces of relative widths gamma, left to right;
/// copy m collects the m-th pieces.
inline std::vector<Gadget> cut_into_copies(const Gadget &g, const std::vector<Rational> &gamma) {
    if (gamma.empty()) throw std::invalid_argument("cut_into_copies: empty vector");
    Rational s = 0;
    for (const auto &x : gamma) {
        if (!(x > 0)) throw std::invalid_argument("cut_into_copies: entries must be positive");
        s += x;
    }
    if (s != 1) throw std::invalid_argument("cut_into_copies: entries must sum to 1");
    std::vector<std::vector<Column>> copies(gamma.size());
    for (const auto &col : g.columns()) {
        std::vector<std::vector<Interval>> lv(gamma.size());
        for (const auto &iv : col.levels()) {
            Rational at = iv.left;
            const Rational w = iv.width();
            for (std::size_t m = 0; m < gamma.size(); ++m) {
                const Rational next = m + 1 == gamma.size() ? iv.right : Rational(at + gamma[m] * w);
                lv[m].emplace_back(at, next);
                at = next;
            }
        }
        for (std::size_t m = 0; m < gamma.size(); ++m) copies[m].emplace_back(std::move(lv[m]), col.name());
    }
    std::vector<Gadget> out;
    for (auto &c : copies) out.emplace_back(std::move(c));
    return out;
}

/// U * L: L is cut into copies L_i with w(L_i) = w(E_i) for the columns E_i
/// of U; each E_i is cut along the distribution of L_i and the columns of
/// L_i are stacked on the pieces.
inline Gadget stack_gadgets(const Gadget &u, const Gadget &l) {
    const Rational w = u.width();
    if (w != l.width()) throw std::invalid_argument("stack_gadgets: width mismatch");
    std::vector<Rational> gamma;
    for (const auto &e : u.columns()) gamma.push_back(e.width() / w);
    const auto lcopies = cut_into_copies(l, gamma);
    const auto ldist = l.distribution();
    std::vector<Column> out;
    for (std::size_t i = 0; i < u.size(); ++i) {
        const auto pieces = cut_into_copies(Gadget({u[i]}), ldist);
        for (std::size_t j = 0; j < l.size(); ++j) out.push_back(stack_columns(pieces[j][0], lcopies[i][j]));
    }
    return Gadget(std::move(out));
}

/// M-fold independent cutting and stacking, explicit (|G|^M columns).
inline Gadget independent_cut_stack(const Gadget &g, std::size_t m, std::size_t max_columns = 4096) {
    if (m == 0) throw std::invalid_argument("independent_cut_stack: M must be positive");
    double cols = 1;
    for (std::size_t i = 0; i < m; ++i) cols *= static_cast<double>(g.size());
    if (cols > static_cast<double>(max_columns))
        throw std::length_error("independent_cut_stack: explicit result too large, use the symbolic form");
    const auto copies = cut_into_copies(g, std::vector<Rational>(m, Rational(1, static_cast<unsigned long>(m))));
    Gadget acc = copies[0];
    for (std::size_t i = 1; i < m; ++i) acc = stack_gadgets(acc, copies[i]);
    return acc;
}

/// Name of the trajectory from 1-based level `level` over `steps` steps.
inline BinaryWord trajectory_name(const Gadget &g, std::size_t column, std::size_t level, std::size_t steps) {
    const auto &c = g.columns().at(column);
    if (level == 0 || level > c.height()) throw std::out_of_range("trajectory_name: no such level");
    if (level + steps > c.height()) throw std::out_of_range("trajectory_name: trajectory passes the top");
    return c.name().substr(level - 1, steps + 1);
}

/// Total width of levels whose remaining name extends x (a start at level j
/// of a column of height h sees the name suffix of length h-j+1).
inline Rational gadget_name_measure(const Gadget &g, const BinaryWord &x) {
    Rational s = 0;
    for (const auto &c : g.columns()) {
        const auto &nm = c.name();
        if (x.size() > nm.size()) continue;
        unsigned long hits = 0;
        for (std::size_t j = 0; j < nm.size() && j + x.size() <= nm.size(); ++j)
            if (std::equal(x.begin(), x.end(), nm.begin() + static_cast<std::ptrdiff_t>(j))) ++hits;
        s += c.width() * hits;
    }
    return s;
}

/// Width of starts whose remaining name is exactly x (the boundary term).
inline Rational gadget_exact_tail_measure(const Gadget &g, const BinaryWord &x) {
    Rational s = 0;
    if (x.empty()) return s;
    for (const auto &c : g.columns()) {
        const auto &nm = c.name();
        if (x.size() <= nm.size() && std::equal(x.begin(), x.end(), nm.end() - static_cast<std::ptrdiff_t>(x.size())))
            s += c.width();
    }
    return s;
}

/// lambda(E^ cap D^) for every pair (D in l, E in u), by locating each level
/// of E inside the levels of l. Requires u to be cut from l.
inline std::vector<std::vector<Rational>> intersection_masses(const Gadget &l, const Gadget &u) {
    struct Owned {
        Interval iv;
        std::size_t col;
    };
    std::vector<Owned> lv;
    for (std::size_t d = 0; d < l.size(); ++d)
        for (const auto &iv : l[d].levels()) lv.push_back({iv, d});
    std::sort(lv.begin(), lv.end(), [](const Owned &a, const Owned &b) { return a.iv.left < b.iv.left; });
    std::vector<std::vector<Rational>> out(l.size(), std::vector<Rational>(u.size(), 0));
    for (std::size_t e = 0; e < u.size(); ++e) {
        for (const auto &iv : u[e].levels()) {
            auto it = std::upper_bound(lv.begin(), lv.end(), iv.left,
                                       [](const Rational &p, const Owned &o) { return p < o.iv.left; });
            if (it == lv.begin()) continue;
            --it;
            if (it->iv.contains(iv)) out[it->col][e] += iv.width();
            else if (it->iv.right > iv.left) throw std::invalid_argument("intersection_masses: u not cut from l");
        }
    }
    return out;
}

/// sum_D sum_E |lambda(E^ cap D^) - lambda(E^) lambda(D^)|, brute force.
inline Rational well_distributedness(const Gadget &l, const Gadget &u) {
    const auto inter = intersection_masses(l, u);
    Rational s = 0;
    for (std::size_t d = 0; d < l.size(); ++d) {
        const Rational md = l[d].measure();
        for (std::size_t e = 0; e < u.size(); ++e) s += abs_diff(inter[d][e], u[e].measure() * md);
    }
    return s;
}

/// Where T(G) sends a point, if it is defined there (not outside and not on a top level).
inline std::optional<Rational> gadget_map(const Gadget &g, const Rational &p) {
    for (const auto &c : g.columns())
        for (std::size_t j = 0; j < c.height(); ++j)
            if (c.level(j).contains(p)) {
                if (j + 1 == c.height()) return std::nullopt;
                return c.level(j + 1).left + (p - c.level(j).left);
            }
    return std::nullopt;
}

struct CompletenessReport {
    std::vector<std::string> violations;
    bool ok() const { return violations.empty(); }
};

/// The three conditions on a finite prefix: widths strictly decreasing,
/// supports strictly increasing, and each gadget's map extending the
/// previous one on sampled points of the previous support.
inline CompletenessReport completeness_check(const std::vector<Gadget> &seq, std::size_t samples = 64, uint64_t seed = 1) {
    CompletenessReport rep;
    std::mt19937_64 rng(seed);
    for (std::size_t m = 1; m < seq.size(); ++m) {
        const auto &prev = seq[m - 1];
        const auto &cur = seq[m];
        if (!(cur.width() < prev.width())) rep.violations.push_back("width not decreasing at " + std::to_string(m));
        if (!(cur.support() > prev.support())) rep.violations.push_back("support not increasing at " + std::to_string(m));
        for (std::size_t t = 0; t < samples && prev.size() > 0; ++t) {
            const auto &c = prev[rng() % prev.size()];
            if (c.height() < 2) continue;
            const auto &lv = c.level(rng() % (c.height() - 1));
            Rational frac(static_cast<unsigned long>(rng() % 1000), 1000ul);
            frac.canonicalize();
            const Rational p = lv.left + lv.width() * frac;
            const auto a = gadget_map(prev, p);
            const auto b = gadget_map(cur, p);
            if (!b || *a != *b) {
                rep.violations.push_back("map not extended at " + std::to_string(m) + " point " + to_string(p));
                break;
            }
        }
    }
    return rep;
}

} // namespace lzr

#endif
