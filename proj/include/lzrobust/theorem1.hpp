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

#ifndef LZROBUST_THEOREM1_HPP
#define LZROBUST_THEOREM1_HPP

#include "measure.hpp"
#include "sources.hpp"
#include "symbolic.hpp"

#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <memory>
#include <optional>
#include <random>
#include <stdexcept>
#include <string>
#include <tuple>
#include <vector>

namespace lzr {

/// Nondecreasing unbounded integer function, either the identity or a table
/// sigma(0..N-1).
struct Sigma {
    std::vector<int64_t> table; // empty: identity

    static Sigma identity() { return {}; }
    static Sigma from_table(std::vector<int64_t> t) {
        for (std::size_t i = 1; i < t.size(); ++i)
            if (t[i] < t[i - 1]) throw std::invalid_argument("Sigma: table must be nondecreasing");
        return Sigma{std::move(t)};
    }
    bool defined(uint64_t n) const { return table.empty() || n < table.size(); }
    int64_t operator()(uint64_t n) const {
        if (table.empty()) return static_cast<int64_t>(n);
        if (n >= table.size()) throw std::out_of_range("Sigma: argument beyond the table");
        return table[n];
    }
};

/// Greedy heights h_{-2} = 1, h_{-1}, ..., h_{count-1}: for i = 0..count the
/// smallest h_{i-1} > h_{i-2} with sigma(h_{i-1}) - sigma(h_{i-2}) > -log r + i + 13.
inline std::vector<uint64_t> heights_schedule(const Sigma &sigma, const Rational &r, std::size_t count) {
    if (!(r > 0) || !(r < 1)) throw std::invalid_argument("heights_schedule: need 0 < r < 1");
    // d > -log2 r + k  <=>  2^(d-k) r > 1, exact
    const auto exceeds = [&](int64_t d, int64_t k) {
        const int64_t e = d - k;
        if (e >= 62) return true;
        if (e <= -62) return false;
        return pow2(e) * r > 1;
    };
    std::vector<uint64_t> h{1};
    for (std::size_t i = 0; i <= count; ++i) {
        const uint64_t prev = h.back();
        const int64_t k = static_cast<int64_t>(i) + 13;
        uint64_t cand = prev + 1;
        while (true) {
            if (!sigma.defined(cand)) throw std::out_of_range("heights_schedule: sigma table exhausted");
            if (exceeds(sigma(cand) - sigma(prev), k)) break;
            ++cand;
        }
        h.push_back(cand);
    }
    return h;
}

/// -3 r log2 r.
inline double entropy_upper_bound(const Rational &r) {
    if (!(r > 0) || !(r < Rational(1, 4))) throw std::invalid_argument("entropy_upper_bound: need 0 < r < 1/4");
    const double x = r.get_d();
    return -3.0 * x * std::log2(x);
}

struct ConstructionParams {
    enum class Mode { faithful, empirical };

    Rational r{1, 256};
    Rational epsilon{1, 10};
    Mode mode = Mode::empirical;
    Sigma sigma = Sigma::identity();
    unsigned stage_cap = 24;
    // empirical mode: Pi_0 and Delta_0 have height 2*h0, every stage folds by `fold`
    uint64_t h0 = 256;
    uint64_t fold = 2;
    // faithful mode: R_s searched in [height minimum, rs_cap]; when no M passes
    // the well-distributedness test, strict mode fails the stage and relaxed
    // mode keeps the height minimum and records the best value seen
    uint64_t rs_cap = 64;
    bool strict_wd = true;

    void validate() const {
        if (!(r > 0) || !(r < Rational(1, 4))) throw std::invalid_argument("ConstructionParams: need 0 < r < 1/4");
        if (!(epsilon > 0) || !(epsilon < Rational(1, 4)))
            throw std::invalid_argument("ConstructionParams: need 0 < epsilon < 1/4");
        if (entropy_upper_bound(r) > epsilon.get_d())
            throw std::invalid_argument("ConstructionParams: -3 r log r exceeds epsilon");
        if (mode == Mode::empirical && (h0 == 0 || fold < 2))
            throw std::invalid_argument("ConstructionParams: need h0 >= 1 and fold >= 2");
    }
};

struct StageState {
    unsigned s = 0;
    SymGadget delta, pi;
    std::vector<uint64_t> heights; // h_{-2}..h_s
    uint64_t column_height = 0;    // every column of Pi_s and Delta_s
    uint64_t fold = 1;             // R_s, 1 at stage 0
    Rational delta_mass, pi_mass;
    Rational gamma;                // lambda(Delta'') / lambda(Pi_{s-1})
    Rational routing;              // share of Delta'' among the pieces, gamma / (1 + gamma)
    std::optional<Rational> wd;    // well-distributedness of Pi_{s-1} u Delta'' in Pi_s
    bool wd_ok = true;
    std::string diagnostics;
};

class StageFailure : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Pi_0 from [0,1/2-r) and [1/2+r,1), each cut into 2 h0 parts and stacked;
/// Delta_0 as the 2 h0-fold of the two height-1 columns [1/2-r,1/2) and
/// [1/2,1/2+r), so that its names are uniform.
inline std::pair<SymGadget, SymGadget> init_gadgets(const Rational &r, uint64_t h0) {
    if (!(r > 0) || !(r < Rational(1, 4))) throw std::invalid_argument("init_gadgets: need 0 < r < 1/4");
    if (h0 == 0) throw std::invalid_argument("init_gadgets: h0 must be positive");
    const Partition part(r);
    const Rational half(1, 2);
    const uint64_t hh = 2 * h0;
    const auto tower = [&](const Rational &from, const Rational &to) {
        const Rational w = (to - from) / Rational(static_cast<unsigned long>(hh));
        std::vector<Interval> lv;
        for (uint64_t j = 0; j < hh; ++j)
            lv.emplace_back(from + w * Rational(static_cast<unsigned long>(j)), from + w * Rational(static_cast<unsigned long>(j + 1)));
        return Column(std::move(lv), part);
    };
    auto pi0 = sym_base(Gadget({tower(Rational(0), half - r), tower(half + r, Rational(1))}), "pi0");
    auto coin = sym_base(Gadget({Column({Interval(half - r, half)}, part), Column({Interval(half, half + r)}, part)}), "delta-base");
    return {sym_mfold(coin, hh), pi0};
}

/// 2^{-s+1} r
inline Rational expected_delta_mass(const Rational &r, unsigned s) {
    return pow2(1 - static_cast<long>(s)) * r;
}

/// gamma as the printed form would give it, with denominator 1 - 2^{-s+2}
/// (no r); undefined at s = 2.
inline std::optional<Rational> printed_gamma(const Rational &r, unsigned s) {
    const Rational den = 1 - pow2(2 - static_cast<long>(s));
    if (den == 0) return std::nullopt;
    return expected_delta_mass(r, s) / den;
}

/// The interleaved Delta / Pi construction, built lazily stage by stage.
class Construction {
public:
    explicit Construction(ConstructionParams p) : p_(std::move(p)) {
        p_.validate();
        uint64_t h0 = p_.h0;
        if (p_.mode == ConstructionParams::Mode::faithful) {
            heights_ = heights_schedule(p_.sigma, p_.r, 2);
            h0 = heights_[2];
        } else {
            heights_ = {1, h0 / 2 > 0 ? h0 / 2 : 1, h0};
        }
        StageState st;
        std::tie(st.delta, st.pi) = init_gadgets(p_.r, h0);
        st.heights = heights_;
        st.column_height = 2 * h0;
        st.delta_mass = st.delta->support;
        st.pi_mass = st.pi->support;
        check_masses(st);
        stages_.push_back(std::move(st));
    }

    const ConstructionParams &params() const { return p_; }
    std::size_t built() const { return stages_.size(); }

    const StageState &stage(unsigned s) {
        if (s > p_.stage_cap) throw StageFailure("stage " + std::to_string(s) + " beyond the stage cap");
        while (stages_.size() <= s) stages_.push_back(step(stages_.back()));
        return stages_[s];
    }

    /// Column height of stage s without building symbolic gadgets in
    /// empirical mode.
    uint64_t column_height(unsigned s) {
        if (p_.mode == ConstructionParams::Mode::empirical) {
            uint64_t h = 2 * p_.h0;
            for (unsigned t = 0; t < s; ++t) {
                if (h > UINT64_MAX / p_.fold) throw std::overflow_error("column height overflow");
                h *= p_.fold;
            }
            return h;
        }
        return stage(s).column_height;
    }
    uint64_t fold(unsigned s) { return p_.mode == ConstructionParams::Mode::empirical ? (s == 0 ? 1 : p_.fold) : stage(s).fold; }

    /// Probability that a piece of the stage-s fold is a Delta'' column.
    Rational routing(unsigned s) const {
        const Rational d = expected_delta_mass(p_.r, s);
        const Rational pi_prev = 1 - expected_delta_mass(p_.r, s - 1);
        const Rational gamma = d / pi_prev;
        return gamma / (1 + gamma);
    }

    /// P(x) within eps: the name measure over Pi_s u Delta_s at the first
    /// stage whose top band (starts too close to the top to see l(x) symbols)
    /// has mass at most eps. The result is a lower bound; the band is the gap.
    Rational measure_query(const BinaryWord &x, const Rational &eps) {
        if (!(eps > 0)) throw std::invalid_argument("measure_query: eps must be positive");
        const unsigned s = query_stage(x.size(), eps);
        const auto &st = stage(s);
        return gadget_name_measure(sym_union(st.pi, st.delta), x);
    }

    unsigned query_stage(std::size_t l, const Rational &eps) {
        for (unsigned s = 0; s <= p_.stage_cap; ++s) {
            const uint64_t h = column_height(s);
            if (h <= l + 1) continue;
            const Rational band = Rational(static_cast<unsigned long>(l > 0 ? l - 1 : 0)) / Rational(static_cast<unsigned long>(h));
            if (band <= eps) return s;
        }
        throw StageFailure("measure_query: tolerance not reachable within the stage cap");
    }

private:
    static void check_masses(const StageState &st) {
        const Rational r = st.delta_mass + st.pi_mass;
        if (r != 1) throw std::logic_error("stage masses do not sum to 1");
    }

    StageState step(const StageState &prev) {
        StageState st;
        st.s = prev.s + 1;
        const unsigned s = st.s;
        const std::vector<Rational> halves{Rational(1, 2), Rational(1, 2)};
        const auto d1 = sym_cut(prev.delta, halves, 0);
        const auto d2 = sym_cut(prev.delta, halves, 1);
        const auto joined = sym_union(prev.pi, d2);
        st.gamma = d2->support / prev.pi->support;
        st.routing = st.gamma / (1 + st.gamma);
        std::string diag;
        uint64_t fold = p_.fold;
        if (p_.mode == ConstructionParams::Mode::faithful) {
            while (heights_.size() < s + 3) heights_ = heights_schedule(p_.sigma, p_.r, heights_.size() - 1);
            const uint64_t need = 2 * heights_[s + 2];
            const uint64_t rmin = std::max<uint64_t>(2, (need + prev.column_height - 1) / prev.column_height);
            const Rational eps(1, s);
            std::optional<Rational> best;
            uint64_t chosen = 0;
            for (uint64_t m = rmin; m <= std::max(rmin, p_.rs_cap); ++m) {
                Rational v;
                try {
                    v = well_distributedness_mfold(joined, m);
                } catch (const std::length_error &) {
                    diag += "well-distributedness not computable (too many column classes); ";
                    break;
                }
                if (!best || v < *best) best = v;
                if (v < eps) {
                    chosen = m;
                    st.wd = v;
                    break;
                }
            }
            if (chosen == 0) {
                diag += "no R in [" + std::to_string(rmin) + ", " + std::to_string(std::max(rmin, p_.rs_cap)) +
                        "] reaches well-distributedness < 1/" + std::to_string(s);
                if (best) diag += ", best " + std::to_string(best->get_d());
                diag += "; ";
                if (p_.strict_wd) throw StageFailure("stage " + std::to_string(s) + ": " + diag);
                chosen = rmin;
                st.wd_ok = false;
                st.wd = best;
            }
            fold = chosen;
            st.heights = std::vector<uint64_t>(heights_.begin(), heights_.begin() + static_cast<std::ptrdiff_t>(s + 3));
        } else {
            try {
                st.wd = well_distributedness_mfold(joined, fold);
                st.wd_ok = *st.wd < Rational(1, s);
            } catch (const std::length_error &) {
                st.wd_ok = false;
                diag += "well-distributedness not computed (too many column classes); ";
            }
            st.heights = prev.heights;
            st.heights.push_back(prev.column_height * fold / 2);
        }
        st.fold = fold;
        st.column_height = prev.column_height * fold;
        st.pi = sym_mfold(joined, fold);
        st.delta = sym_mfold(d1, fold);
        st.delta_mass = st.delta->support;
        st.pi_mass = st.pi->support;
        check_masses(st);
        if (st.delta_mass != expected_delta_mass(p_.r, s)) throw std::logic_error("Delta mass off the schedule");
        const auto pg = printed_gamma(p_.r, s);
        diag += "gamma " + to_string(st.gamma) + ", printed-denominator form " + (pg ? to_string(*pg) : std::string("undefined"));
        st.diagnostics = diag;
        return st;
    }

    ConstructionParams p_;
    std::vector<uint64_t> heights_;
    std::vector<StageState> stages_;
};

/// Stage layout used by the long-word evaluator and the sampler: column
/// heights H_0..H_S, folds R_1..R_S and routing probabilities q_1..q_S.
struct Layout {
    std::vector<uint64_t> height;
    std::vector<uint64_t> fold;    // fold[t], t >= 1
    std::vector<double> q;         // q[t] = P(piece of a Pi_t column is Delta''), t >= 1
    double pi_mass_top = 0;        // lambda(Pi_S)
    unsigned top() const { return static_cast<unsigned>(height.size() - 1); }

    /// Layout up to the first stage with column height >= min_height.
    static Layout from(Construction &c, uint64_t min_height) {
        Layout l;
        unsigned s = 0;
        for (;; ++s) {
            l.height.push_back(c.column_height(s));
            l.fold.push_back(c.fold(s));
            l.q.push_back(s == 0 ? 0.0 : c.routing(s).get_d());
            if (l.height.back() >= min_height) break;
            if (s >= c.params().stage_cap) throw StageFailure("layout: stage cap reached before the requested height");
        }
        l.pi_mass_top = Rational(1 - expected_delta_mass(c.params().r, s)).get_d();
        return l;
    }
};

/// log2 of the name measure over Pi_S u Delta_S for long words, in O(n S R)
/// time. Pieces of a Pi_t column are independent: Delta'' with probability
/// q_t and Pi_{t-1} otherwise; Delta names are uniform and Pi_0 names are all
/// zeros. Per level it keeps, for the mixture nu_t and for Pi_t,
///   V[i]: log P(block == x[i..i+H_t))
///   G[a]: log P(block ends with x[0..a))
///   F[i]: log P(block starts with x[i..n))
///   occ:  log E(#occurrences of x inside a block)
/// and builds the next level from them.
inline double hierarchical_log2_measure(const Layout &lay, const BinaryWord &x) {
    const std::size_t n = x.size();
    if (n == 0) return 0.0;
    std::vector<std::size_t> ones(n + 1, 0);
    for (std::size_t i = 0; i < n; ++i) ones[i + 1] = ones[i] + x[i];
    const auto zeros = [&](std::size_t a, std::size_t b) { return ones[b] == ones[a]; };

    struct Level {
        uint64_t h = 0;
        std::vector<double> v, g, f; // v: i in [0, n-h]; g: a in [0, min(n,h)]; f: index i - fbase for i in [fbase, n]
        std::size_t fbase = 0;
        double occ = neg_inf;
        double V(std::size_t i) const { return v[i]; }
        double Fv(std::size_t i) const { return f[i - fbase]; }
    };
    const auto make = [&](uint64_t h) {
        Level L;
        L.h = h;
        if (n >= h) L.v.assign(n - h + 1, neg_inf);
        L.g.assign(std::min<uint64_t>(n, h) + 1, neg_inf);
        L.fbase = n > h ? n - h : 0;
        L.f.assign(n - L.fbase + 1, neg_inf);
        L.g[0] = 0.0;
        L.f.back() = 0.0;
        return L;
    };
    const auto log_occ_count = [&](uint64_t h) {
        return h >= n ? std::log2(static_cast<double>(h - n + 1)) : neg_inf;
    };

    // Pi_0
    Level pi = make(lay.height[0]);
    for (std::size_t i = 0; i < pi.v.size(); ++i) pi.v[i] = zeros(i, i + pi.h) ? 0.0 : neg_inf;
    for (std::size_t a = 1; a < pi.g.size(); ++a) pi.g[a] = zeros(0, a) ? 0.0 : neg_inf;
    for (std::size_t i = pi.fbase; i < n; ++i) pi.f[i - pi.fbase] = zeros(i, n) ? 0.0 : neg_inf;
    pi.occ = zeros(0, n) ? log_occ_count(pi.h) : neg_inf;

    const auto mix = [&](const Level &p, double q) {
        // nu = (1-q) Pi + q Delta at the same height
        Level m = make(p.h);
        const double lq = std::log2(q), lp = std::log2(1 - q);
        const double dh = -static_cast<double>(p.h);
        for (std::size_t i = 0; i < m.v.size(); ++i) m.v[i] = log2_add(lp + p.v[i], lq + dh);
        for (std::size_t a = 1; a < m.g.size(); ++a) m.g[a] = log2_add(lp + p.g[a], lq - static_cast<double>(a));
        for (std::size_t i = m.fbase; i < n; ++i)
            m.f[i - m.fbase] = log2_add(lp + p.f[i - p.fbase], lq - static_cast<double>(n - i));
        m.occ = log2_add(lp + p.occ, lq + log_occ_count(p.h) - static_cast<double>(n));
        return m;
    };

    for (unsigned t = 1; t <= lay.top(); ++t) {
        const Level nu = mix(pi, lay.q[t]);
        const uint64_t hp = nu.h, R = lay.fold[t];
        Level next = make(lay.height[t]);
        const auto run = [&](std::size_t from, uint64_t k) {
            double s = 0;
            for (uint64_t b = 0; b < k && s != neg_inf; ++b) s += nu.V(from + b * hp);
            return s;
        };
        for (std::size_t i = 0; i < next.v.size(); ++i) next.v[i] = run(i, R);
        for (std::size_t a = 1; a < next.g.size(); ++a) {
            const uint64_t k = a / hp, rr = a % hp;
            next.g[a] = (rr > 0 ? nu.g[rr] : 0.0) + (k > 0 ? run(rr, k) : 0.0);
        }
        for (std::size_t i = next.fbase; i < n; ++i) {
            const uint64_t len = n - i, k = len / hp, rr = len % hp;
            double s = k > 0 ? run(i, k) : 0.0;
            if (rr > 0 && s != neg_inf) s += nu.Fv(i + k * hp);
            next.f[i - next.fbase] = s;
        }
        // occurrences inside one piece, then those straddling piece boundaries
        double occ = nu.occ == neg_inf ? neg_inf : std::log2(static_cast<double>(R)) + nu.occ;
        const std::size_t amax = std::min<uint64_t>(n - 1, hp);
        for (std::size_t a = 1; a <= amax; ++a) {
            const uint64_t rest = n - a, k = rest / hp, rr = rest % hp;
            const uint64_t touched = 1 + k + (rr > 0 ? 1 : 0);
            if (touched > R) continue;
            double s = nu.g[a];
            if (s == neg_inf) continue;
            if (k > 0) s += run(a, k);
            if (rr > 0 && s != neg_inf) s += nu.Fv(a + k * hp);
            if (s == neg_inf) continue;
            occ = log2_add(occ, s + std::log2(static_cast<double>(R - touched + 1)));
        }
        next.occ = occ;
        pi = std::move(next);
    }
    const double h = static_cast<double>(lay.height.back());
    const double delta_occ = log_occ_count(lay.height.back()) - static_cast<double>(n);
    return log2_add(std::log2(lay.pi_mass_top / h) + pi.occ, std::log2((1 - lay.pi_mass_top) / h) + delta_occ);
}

/// Appends the part [lo, hi) of a level-t block to out: a Delta'' block is
/// uniform bits, a Pi_0 block is zeros, and a Pi_t block is fold[t] pieces,
/// each Delta'' with probability q[t] and Pi_{t-1} otherwise. Only touched
/// pieces are drawn.
inline void generate_block(const Layout &lay, std::mt19937_64 &rng, bool is_delta, unsigned t, uint64_t lo, uint64_t hi,
                           BinaryWord &out) {
    if (is_delta) {
        for (uint64_t count = hi - lo; count > 0;) {
            const uint64_t w = rng();
            for (unsigned b = 0; b < 64 && count > 0; ++b, --count) out.push_back(static_cast<uint8_t>((w >> b) & 1));
        }
        return;
    }
    if (t == 0) {
        for (uint64_t i = lo; i < hi; ++i) out.push_back(0);
        return;
    }
    const uint64_t hp = lay.height[t - 1];
    for (uint64_t b = lo / hp; b * hp < hi; ++b) {
        const bool d = unit_double(rng) < lay.q[t];
        const uint64_t a = std::max(lo, b * hp), e = std::min(hi, (b + 1) * hp);
        generate_block(lay, rng, d, t - 1, a - b * hp, e - b * hp, out);
    }
}

/// Trajectory names drawn from the stage-S gadgets: a column of Pi_S u
/// Delta_S with probability proportional to its measure, then a start level
/// chosen uniformly among those with at least n symbols left.
inline BinaryWord sample_trajectory(const Layout &lay, uint64_t seed, std::size_t n) {
    const uint64_t H = lay.height.back();
    if (n > H) throw std::invalid_argument("sample_trajectory: length exceeds the column height");
    std::mt19937_64 rng(seed);
    BinaryWord out;
    out.reserve(n);
    const bool top_delta = unit_double(rng) >= lay.pi_mass_top;
    const uint64_t room = H - n + 1;
    const uint64_t off = std::min(static_cast<uint64_t>(unit_double(rng) * static_cast<double>(room)), room - 1);
    generate_block(lay, rng, top_delta, lay.top(), off, off + n, out);
    return out;
}

/// The measure P of the construction as an oracle. prob() is the exact name
/// measure at the stage chosen from eps; log2_prob() uses the hierarchical
/// evaluator at a stage whose columns are `depth` times longer than x and is
/// a lower bound on log2 P.
class Theorem1Measure final : public MeasureOracle {
public:
    explicit Theorem1Measure(std::shared_ptr<Construction> c, uint64_t depth = 64) : c_(std::move(c)), depth_(depth) {}

    std::string name() const override { return "theorem1"; }
    Construction &construction() const { return *c_; }

    Rational prob(const BinaryWord &x, const Rational &eps) const override { return c_->measure_query(x, eps); }

    double log2_prob(const BinaryWord &x) const override {
        return hierarchical_log2_measure(layout(x.size()), x);
    }

    /// [log S, log(S + band)] with band = (n-1) / H_S, the mass of starts
    /// too close to the top.
    std::pair<double, double> log2_prob_bounds(const BinaryWord &x) const override {
        const auto lay = layout(x.size());
        const double lo = hierarchical_log2_measure(lay, x);
        const double band = x.empty() ? 0.0 : static_cast<double>(x.size() - 1) / static_cast<double>(lay.height.back());
        return {lo, band > 0 ? log2_add(lo, std::log2(band)) : lo};
    }

    Layout layout(std::size_t n) const {
        const uint64_t want = std::max<uint64_t>(2, n) * depth_;
        return Layout::from(*c_, want);
    }

private:
    std::shared_ptr<Construction> c_;
    uint64_t depth_;
};

inline BinaryWord sample_sequence(Construction &c, uint64_t seed, std::size_t n, unsigned stage) {
    Layout lay = Layout::from(c, c.column_height(stage));
    if (lay.top() != stage) throw std::logic_error("sample_sequence: layout mismatch");
    if (n > lay.height.back()) throw std::invalid_argument("sample_sequence: stage columns shorter than n");
    return sample_trajectory(lay, seed, n);
}

} // namespace lzr

#endif
