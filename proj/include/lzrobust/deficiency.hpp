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

#ifndef LZROBUST_DEFICIENCY_HPP
#define LZROBUST_DEFICIENCY_HPP

#include "coder.hpp"
#include "measure.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <memory>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace lzr {

/// Exact word probability, as used by the exact-arithmetic procedures below.
using WordMeasure = std::function<Rational(const BinaryWord &)>;

/// Wraps an oracle whose prob() is exact (Bernoulli, Markov, tables).
inline WordMeasure exact_measure(std::shared_ptr<const MeasureOracle> p) {
    return [p = std::move(p)](const BinaryWord &x) { return p->prob(x, Rational(1, 1u << 30)); };
}

/// A P-supermartingale. value() returns nullopt for +infinity (positive
/// numerator over P(x) = 0); 0/0 is 0.
struct Supermartingale {
    std::function<std::optional<Rational>(const BinaryWord &)> value;
    WordMeasure measure;

    std::optional<Rational> operator()(const BinaryWord &x) const { return value(x); }
};

/// M = Q / P with the 0/0 = 0 convention.
inline std::optional<Rational> ratio_or_inf(const Rational &q, const Rational &p) {
    if (p == 0) return q == 0 ? std::optional<Rational>(Rational(0)) : std::nullopt;
    return Rational(q / p);
}

/// First word (breadth first, length < depth) where M(empty) <= 1 or
/// M(x) >= M(x0) P(0|x) + M(x1) P(1|x) fails; nullopt when none does.
/// Children with P(x nu) = 0 contribute 0.
inline std::optional<BinaryWord> find_supermartingale_violation(const Supermartingale &m, std::size_t depth) {
    const auto root = m(BinaryWord());
    if (root && *root > 1) return BinaryWord();
    std::vector<BinaryWord> level{BinaryWord()};
    for (std::size_t l = 0; l < depth; ++l) {
        std::vector<BinaryWord> next;
        for (const auto &x : level) {
            const Rational px = m.measure(x);
            if (px == 0) continue;
            const auto mx = m(x);
            Rational rhs = 0;
            bool infinite = false;
            for (uint8_t b = 0; b < 2; ++b) {
                auto y = x;
                y.push_back(b);
                const Rational py = m.measure(y);
                next.push_back(std::move(y));
                if (py == 0) continue;
                const auto my = m(next.back());
                if (!my) {
                    infinite = true;
                    continue;
                }
                rhs += *my * py / px;
            }
            if (mx && (infinite || *mx < rhs)) return x;
        }
        level = std::move(next);
    }
    return std::nullopt;
}

/// Which codewords enter Q(x).
enum class Horizon {
    exact_length, // words of length exactly D extending x: Q is additive
    up_to,        // words y with x <= y and l(y) <= D: Q(x) >= 2^-L(x)
};

/// Q(x) = sum of 2^-l(code(y)) over the words y extending x inside the
/// horizon, and M = Q / P. The code is enumerated once on all words of
/// length <= D; the enumerated codewords must form a prefix-free set.
class CodeMartingale {
public:
    CodeMartingale(const Coder &coder, WordMeasure p, std::size_t depth, Horizon mode = Horizon::up_to)
        : p_(std::move(p)), depth_(depth), mode_(mode) {
        if (depth > 20) throw std::invalid_argument("CodeMartingale: depth above 20");
        std::vector<BitString> codes;
        own_.resize(depth + 1);
        for (std::size_t l = 0; l <= depth; ++l) {
            own_[l].resize(std::size_t{1} << l);
            for (std::size_t v = 0; v < own_[l].size(); ++v) {
                const auto x = word(l, v);
                BitString c = coder.encode(x);
                own_[l][v] = pow2(-static_cast<long>(c.size()));
                if (mode == Horizon::up_to || l == depth) codes.push_back(std::move(c));
            }
        }
        std::sort(codes.begin(), codes.end());
        for (std::size_t i = 1; i < codes.size(); ++i) {
            const auto &a = codes[i - 1], &b = codes[i];
            if (a.size() <= b.size() && b.prefix(a.size()) == a)
                throw std::invalid_argument("CodeMartingale: " + coder.name() + " is not prefix-free on the horizon");
        }
        // q_[l][v] = own (when counted) + children
        q_.resize(depth + 1);
        q_[depth] = own_[depth];
        for (std::size_t l = depth; l-- > 0;) {
            q_[l].resize(std::size_t{1} << l);
            for (std::size_t v = 0; v < q_[l].size(); ++v) {
                Rational s = q_[l + 1][2 * v] + q_[l + 1][2 * v + 1];
                if (mode == Horizon::up_to) s += own_[l][v];
                q_[l][v] = s;
            }
        }
    }

    std::size_t depth() const { return depth_; }
    Horizon mode() const { return mode_; }

    Rational q(const BinaryWord &x) const { return q_.at(check(x))[index(x)]; }
    /// 2^-L(x)
    Rational code_weight(const BinaryWord &x) const { return own_.at(check(x))[index(x)]; }
    std::optional<Rational> operator()(const BinaryWord &x) const { return ratio_or_inf(q(x), p_(x)); }

    Supermartingale supermartingale() const {
        auto self = std::make_shared<CodeMartingale>(*this);
        return {[self](const BinaryWord &x) { return (*self)(x); }, p_};
    }

private:
    std::size_t check(const BinaryWord &x) const {
        if (x.size() > depth_) throw std::out_of_range("CodeMartingale: word beyond the horizon");
        return x.size();
    }
    static std::size_t index(const BinaryWord &x) {
        std::size_t v = 0;
        for (std::size_t i = 0; i < x.size(); ++i) v = (v << 1) | x[i];
        return v;
    }
    static BinaryWord word(std::size_t l, std::size_t v) {
        BinaryWord x;
        for (std::size_t i = l; i-- > 0;) x.push_back(static_cast<uint8_t>((v >> i) & 1));
        return x;
    }

    WordMeasure p_;
    std::size_t depth_;
    Horizon mode_;
    std::vector<std::vector<Rational>> own_, q_;
};

inline Supermartingale martingale_from_code(const Coder &coder, WordMeasure p, std::size_t depth,
                                            Horizon mode = Horizon::up_to) {
    return CodeMartingale(coder, std::move(p), depth, mode).supermartingale();
}

/// The words of `a` with no proper prefix in `a`; their cylinders partition
/// the union of all cylinders of `a`.
inline std::vector<BinaryWord> minimal_words(std::vector<BinaryWord> a) {
    std::sort(a.begin(), a.end());
    a.erase(std::unique(a.begin(), a.end()), a.end());
    std::vector<BinaryWord> out;
    for (auto &y : a) {
        // in sorted order a prefix comes before its extensions
        if (!out.empty() && out.back().size() <= y.size() && y.prefix(out.back().size()) == out.back()) continue;
        out.push_back(std::move(y));
    }
    return out;
}

/// P of the union of the cylinders of `a`.
inline Rational cylinder_mass(const std::vector<BinaryWord> &a, const WordMeasure &p) {
    Rational s = 0;
    for (const auto &y : minimal_words(a)) s += p(y);
    return s;
}

struct SelectResult {
    std::vector<BinaryWord> kept;     // A'
    std::vector<BinaryWord> removed;  // A minus A'
    Rational mass;                    // P(A~)
    Rational kept_mass;               // P(A'~)
    std::optional<Rational> threshold; // M(x) / ((1-mu) P(A~|x)); nullopt when M(x) is infinite
};

/// Drop from A every y having a prefix y^j, l(x) <= j <= l(y), with
/// M(y^j) above M(x) / ((1 - mu) P(A~|x)), and every word extending a dropped
/// one. What is left has mass > mu P(A~) and M stays under the threshold
/// along every kept word.
inline SelectResult select_subset(const std::vector<BinaryWord> &a, const BinaryWord &x, const WordMeasure &p,
                                  const Supermartingale &m, const Rational &mu) {
    if (!(mu > 0) || !(mu < 1)) throw std::invalid_argument("select_subset: need 0 < mu < 1");
    for (const auto &y : a)
        if (y.size() < x.size() || y.prefix(x.size()) != x) throw std::invalid_argument("select_subset: word does not extend x");
    const Rational px = p(x);
    if (px == 0) throw std::invalid_argument("select_subset: P(x) = 0");
    SelectResult res;
    res.mass = cylinder_mass(a, p);
    if (res.mass == 0) throw std::invalid_argument("select_subset: P(A~) = 0");
    const auto mx = m(x);
    if (mx) res.threshold = *mx / ((1 - mu) * (res.mass / px));

    const auto exceeds = [&](const BinaryWord &z) {
        if (!res.threshold) return false;
        const auto v = m(z);
        return !v || *v > *res.threshold;
    };
    std::vector<BinaryWord> a1;
    for (const auto &y : a) {
        for (std::size_t j = x.size(); j <= y.size(); ++j) {
            if (exceeds(y.prefix(j))) {
                a1.push_back(y);
                break;
            }
        }
    }
    for (const auto &y : a) {
        const bool drop = std::any_of(a1.begin(), a1.end(), [&](const BinaryWord &z) {
            return z.size() <= y.size() && y.prefix(z.size()) == z;
        });
        (drop ? res.removed : res.kept).push_back(y);
    }
    res.kept_mass = cylinder_mass(res.kept, p);
    return res;
}

struct SelectCheck {
    bool mass_ok = false;  // P(A'~) > mu P(A~)
    bool bound_ok = false; // M(y^j) <= threshold on every kept word
    std::string detail;
    bool ok() const { return mass_ok && bound_ok; }
};

/// Independent check of both conclusions, recomputing every quantity.
inline SelectCheck verify_select_subset(const std::vector<BinaryWord> &a, const BinaryWord &x, const WordMeasure &p,
                                        const Supermartingale &m, const Rational &mu, const SelectResult &res) {
    SelectCheck c;
    for (const auto &y : res.kept)
        if (std::find(a.begin(), a.end(), y) == a.end()) {
            c.detail = "kept word not in A";
            return c;
        }
    const Rational mass = cylinder_mass(a, p), kept = cylinder_mass(res.kept, p);
    c.mass_ok = kept > mu * mass;
    if (!c.mass_ok) c.detail = "mass " + to_string(kept) + " <= mu * " + to_string(mass);
    const auto mx = m(x);
    c.bound_ok = true;
    if (!mx) return c; // the bound is +infinity
    const Rational bound = *mx / ((1 - mu) * (mass / p(x)));
    for (const auto &y : res.kept) {
        for (std::size_t j = x.size(); j <= y.size(); ++j) {
            const auto v = m(y.prefix(j));
            if (!v || *v > bound) {
                c.bound_ok = false;
                c.detail = "bound exceeded at " + y.prefix(j).to_string();
                return c;
            }
        }
    }
    return c;
}

/// Candidate for the floating-point selection: log2 P(y) and log2 M at the
/// checked prefixes of y.
struct LogCandidate {
    double log2_prob = neg_inf;
    std::vector<double> log2_m;
};

struct LogSelectResult {
    std::vector<std::size_t> kept;
    double log2_threshold = 0;
    double log2_mass = neg_inf, log2_kept_mass = neg_inf;
};

/// select_subset for long words, with pairwise incomparable candidates
/// (so the cylinder mass is a plain sum) and M known only at checkpoints.
inline LogSelectResult select_subset_log(std::span<const LogCandidate> cands, double log2_px, double log2_mx, double mu) {
    if (!(mu > 0) || !(mu < 1)) throw std::invalid_argument("select_subset_log: need 0 < mu < 1");
    LogSelectResult res;
    for (const auto &c : cands) res.log2_mass = log2_add(res.log2_mass, c.log2_prob);
    if (res.log2_mass == neg_inf) throw std::invalid_argument("select_subset_log: candidate mass is 0");
    res.log2_threshold = log2_mx - std::log2(1 - mu) - (res.log2_mass - log2_px);
    for (std::size_t i = 0; i < cands.size(); ++i) {
        const auto &v = cands[i].log2_m;
        if (std::all_of(v.begin(), v.end(), [&](double lm) { return lm <= res.log2_threshold; })) {
            res.kept.push_back(i);
            res.log2_kept_mass = log2_add(res.log2_kept_mass, cands[i].log2_prob);
        }
    }
    return res;
}

/// -log2 P(x) - L(x) with the lower end of the oracle's enclosure of
/// log2 P(x), so the value never understates the surrogate.
inline double surrogate_deficiency(const BinaryWord &x, const MeasureOracle &p, const Coder &code) {
    const double lp = p.log2_prob_bounds(x).first;
    if (lp == neg_inf) throw std::domain_error("surrogate_deficiency: zero probability estimate");
    return -lp - static_cast<double>(code.code_length(x));
}

/// log2 P^(x) with P^ queried at tolerance P^/4, refining until it holds.
inline double query_log2_prob(const MeasureOracle &p, const BinaryWord &x, unsigned max_rounds = 64) {
    Rational eps(1, 4);
    for (unsigned i = 0; i < max_rounds; ++i) {
        const Rational v = p.prob(x, eps);
        if (v > 0 && 4 * eps <= v) return log2_rational(v);
        eps = v > 0 ? Rational(v / 4) : Rational(eps / 16);
    }
    throw std::domain_error("query_log2_prob: zero probability estimate");
}

struct DeficiencyCurve {
    std::vector<std::size_t> n;
    std::vector<double> neg_log2_prob;
    std::vector<std::size_t> code_bits;
    std::vector<double> value; // d^(n)

    double max() const { return value.empty() ? neg_inf : *std::max_element(value.begin(), value.end()); }
};

/// The surrogate at prefix lengths stride, 2 stride, ... (and l(omega)).
inline DeficiencyCurve deficiency_curve(const BinaryWord &omega, const MeasureOracle &p, const Coder &code,
                                        std::size_t stride) {
    if (stride == 0) throw std::invalid_argument("deficiency_curve: stride must be positive");
    DeficiencyCurve c;
    for (std::size_t k = stride; k <= omega.size(); k += stride) c.n.push_back(k);
    if (!omega.empty() && (c.n.empty() || c.n.back() != omega.size())) c.n.push_back(omega.size());
    const auto lp = p.prefix_log2_probs(omega, c.n);
    c.code_bits = code.prefix_lengths(omega, c.n);
    for (std::size_t i = 0; i < c.n.size(); ++i) {
        if (lp[i] == neg_inf) throw std::domain_error("deficiency_curve: zero probability estimate");
        c.neg_log2_prob.push_back(-lp[i]);
        c.value.push_back(-lp[i] - static_cast<double>(c.code_bits[i]));
    }
    return c;
}

} // namespace lzr

#endif
