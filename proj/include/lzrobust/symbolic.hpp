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

#ifndef LZROBUST_SYMBOLIC_HPP
#define LZROBUST_SYMBOLIC_HPP

#include "cutstack.hpp"

#include <json.hpp>

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

namespace lzr {

struct SymNode;
using SymGadget = std::shared_ptr<const SymNode>;

/// Composition tree over explicit base gadgets. Nodes are immutable and may
/// be shared, so a tree is really a DAG; every query memoizes by node.
struct SymNode {
    enum class Kind { base, cut, stack, mfold, unite };

    Kind kind;
    std::vector<SymGadget> kids;
    std::shared_ptr<const Gadget> base; // base only
    std::vector<Rational> gamma;        // cut: the full vector
    std::size_t copy = 0;               // cut: which copy
    uint64_t m = 1;                     // mfold
    std::string label;

    Rational width, support;
    BigInt columns;
    std::map<uint64_t, Rational> heights; // height -> total width

    Rational scale() const { return gamma[copy]; }
};

namespace detail {

inline std::map<uint64_t, Rational> convolve(const std::map<uint64_t, Rational> &a, const std::map<uint64_t, Rational> &b,
                                             const Rational &w) {
    std::map<uint64_t, Rational> out;
    for (const auto &[ha, wa] : a)
        for (const auto &[hb, wb] : b) {
            if (ha > UINT64_MAX - hb) throw std::overflow_error("symbolic gadget: height overflow");
            out[ha + hb] += wa * wb / w;
        }
    if (out.size() > 100000) throw std::length_error("symbolic gadget: too many distinct heights");
    return out;
}

} // namespace detail

inline SymGadget sym_base(Gadget g, std::string label = "base") {
    if (g.size() == 0) throw std::invalid_argument("sym_base: empty gadget");
    auto n = std::make_shared<SymNode>();
    n->kind = SymNode::Kind::base;
    n->label = std::move(label);
    n->width = g.width();
    n->support = g.support();
    n->columns = static_cast<unsigned long>(g.size());
    for (const auto &c : g.columns()) n->heights[c.height()] += c.width();
    n->base = std::make_shared<const Gadget>(std::move(g));
    return n;
}

/// Copy `index` of the cut of g by gamma.
inline SymGadget sym_cut(const SymGadget &g, std::vector<Rational> gamma, std::size_t index) {
    Rational s = 0;
    for (const auto &x : gamma) {
        if (!(x > 0)) throw std::invalid_argument("sym_cut: entries must be positive");
        s += x;
    }
    if (s != 1 || index >= gamma.size()) throw std::invalid_argument("sym_cut: bad cut vector");
    auto n = std::make_shared<SymNode>();
    n->kind = SymNode::Kind::cut;
    n->kids = {g};
    n->gamma = std::move(gamma);
    n->copy = index;
    const Rational f = n->scale();
    n->width = g->width * f;
    n->support = g->support * f;
    n->columns = g->columns;
    for (const auto &[h, w] : g->heights) n->heights[h] = w * f;
    return n;
}

inline SymGadget sym_union(const SymGadget &a, const SymGadget &b) {
    auto n = std::make_shared<SymNode>();
    n->kind = SymNode::Kind::unite;
    n->kids = {a, b};
    n->width = a->width + b->width;
    n->support = a->support + b->support;
    n->columns = a->columns + b->columns;
    n->heights = a->heights;
    for (const auto &[h, w] : b->heights) n->heights[h] += w;
    return n;
}

inline SymGadget sym_stack(const SymGadget &u, const SymGadget &l) {
    if (u->width != l->width) throw std::invalid_argument("sym_stack: width mismatch");
    auto n = std::make_shared<SymNode>();
    n->kind = SymNode::Kind::stack;
    n->kids = {u, l};
    n->width = u->width;
    n->support = u->support + l->support;
    n->columns = u->columns * l->columns;
    n->heights = detail::convolve(u->heights, l->heights, u->width);
    return n;
}

inline SymGadget sym_mfold(const SymGadget &g, uint64_t m) {
    if (m == 0) throw std::invalid_argument("sym_mfold: M must be positive");
    auto n = std::make_shared<SymNode>();
    n->kind = SymNode::Kind::mfold;
    n->kids = {g};
    n->m = m;
    n->width = g->width / Rational(static_cast<unsigned long>(m));
    n->support = g->support;
    mpz_pow_ui(n->columns.get_mpz_t(), g->columns.get_mpz_t(), m);
    // heights of the M-fold: M-fold convolution of the normalized height law
    std::map<uint64_t, Rational> unit;
    for (const auto &[h, w] : g->heights) unit[h] = w / g->width;
    std::map<uint64_t, Rational> acc{{0, Rational(1)}}, pw = unit;
    for (uint64_t e = m; e > 0; e >>= 1) {
        if (e & 1) acc = detail::convolve(acc, pw, Rational(1));
        if (e > 1) pw = detail::convolve(pw, pw, Rational(1));
    }
    for (auto &[h, w] : acc) n->heights[h] = w * n->width;
    return n;
}

/// Explicit gadget produced by the same operations; only for small trees.
inline Gadget materialize(const SymGadget &g, std::size_t max_columns = 4096) {
    if (g->columns > static_cast<unsigned long>(max_columns))
        throw std::length_error("materialize: gadget has too many columns");
    std::unordered_map<const SymNode *, Gadget> memo;
    const auto rec = [&](auto &&self, const SymGadget &n) -> Gadget {
        if (auto it = memo.find(n.get()); it != memo.end()) return it->second;
        Gadget out;
        switch (n->kind) {
        case SymNode::Kind::base: out = *n->base; break;
        case SymNode::Kind::cut: out = cut_into_copies(self(self, n->kids[0]), n->gamma)[n->copy]; break;
        case SymNode::Kind::unite: out = union_gadgets(self(self, n->kids[0]), self(self, n->kids[1])); break;
        case SymNode::Kind::stack: out = stack_gadgets(self(self, n->kids[0]), self(self, n->kids[1])); break;
        case SymNode::Kind::mfold:
            out = independent_cut_stack(self(self, n->kids[0]), static_cast<std::size_t>(n->m), max_columns);
            break;
        }
        memo.emplace(n.get(), out);
        return out;
    };
    return rec(rec, g);
}

/// For every factor y = x[i..j) of a query word x, four masses over columns
/// (each column weighted by its width):
///   A: name starts with y       E: name equals y
///   S: number of levels whose remaining name extends y
///   T: number of levels whose remaining name is exactly y
/// S is the name measure; T is the boundary term of its additivity.
struct NameTables {
    std::size_t l = 0;
    std::vector<Rational> a, e, s, t;

    explicit NameTables(std::size_t len = 0)
        : l(len), a((len + 1) * (len + 1)), e((len + 1) * (len + 1)), s((len + 1) * (len + 1)), t((len + 1) * (len + 1)) {}
    std::size_t at(std::size_t i, std::size_t j) const { return i * (l + 1) + j; }
    void scale(const Rational &f) {
        for (auto *v : {&a, &e, &s, &t})
            for (auto &q : *v) q *= f;
    }
};

namespace detail {

inline NameTables base_tables(const Gadget &g, const BinaryWord &x) {
    const std::size_t l = x.size();
    NameTables tb(l);
    for (const auto &c : g.columns()) {
        const auto &nm = c.name();
        const std::size_t h = nm.size();
        const Rational w = c.width();
        for (std::size_t i = 0; i <= l; ++i) {
            tb.a[tb.at(i, i)] += w;
            tb.s[tb.at(i, i)] += w * static_cast<unsigned long>(h);
            for (std::size_t p = 0; p < h; ++p) {
                // longest common prefix of x[i..] and nm[p..]
                std::size_t k = 0;
                while (i + k < l && p + k < h && x[i + k] == nm[p + k]) ++k;
                for (std::size_t j = i + 1; j <= i + k; ++j) {
                    tb.s[tb.at(i, j)] += w;
                    if (p == 0) tb.a[tb.at(i, j)] += w;
                    if (p + (j - i) == h) {
                        tb.t[tb.at(i, j)] += w;
                        if (p == 0) tb.e[tb.at(i, j)] += w;
                    }
                }
            }
        }
    }
    return tb;
}

// One stacking step f := f * g where g is given by tables gt scaled by gs
// (gt values times gs are g's masses) and w is the common width.
inline NameTables stack_step(const NameTables &f, const NameTables &gt, const Rational &gs, const Rational &w) {
    const std::size_t l = f.l;
    NameTables out(l);
    const Rational inv = 1 / w;
    for (std::size_t i = 0; i <= l; ++i)
        for (std::size_t j = i; j <= l; ++j) {
            const std::size_t ij = f.at(i, j);
            Rational sa = 0, se = 0, ss = 0, st = 0;
            for (std::size_t k = i + 1; k < j; ++k) {
                const std::size_t pre = f.at(i, k), suf = f.at(k, j);
                if (f.e[pre] != 0) {
                    sa += f.e[pre] * gt.a[suf];
                    se += f.e[pre] * gt.e[suf];
                }
                if (f.t[pre] != 0) {
                    ss += f.t[pre] * gt.a[suf];
                    st += f.t[pre] * gt.e[suf];
                }
            }
            const Rational c = gs * inv;
            out.a[ij] = f.a[ij] + sa * c;
            out.e[ij] = se * c;
            out.s[ij] = f.s[ij] + ss * c + gt.s[ij] * gs;
            out.t[ij] = gt.t[ij] * gs + st * c;
        }
    return out;
}

} // namespace detail

/// Dynamic program over the composition tree. An M-fold is iterated
/// |x|+2 times at most: beyond |x| pieces A, E and T are frozen and S grows
/// by a constant, so the rest is extrapolated exactly.
inline NameTables name_tables(const SymGadget &g, const BinaryWord &x) {
    std::unordered_map<const SymNode *, NameTables> memo;
    const std::size_t l = x.size();
    const auto rec = [&](auto &&self, const SymGadget &n) -> const NameTables & {
        if (auto it = memo.find(n.get()); it != memo.end()) return it->second;
        NameTables out(l);
        switch (n->kind) {
        case SymNode::Kind::base: out = detail::base_tables(*n->base, x); break;
        case SymNode::Kind::cut:
            out = self(self, n->kids[0]);
            out.scale(n->scale());
            break;
        case SymNode::Kind::unite: {
            const auto &p = self(self, n->kids[0]);
            const auto &q = self(self, n->kids[1]);
            out = p;
            for (std::size_t k = 0; k < out.a.size(); ++k) {
                out.a[k] += q.a[k];
                out.e[k] += q.e[k];
                out.s[k] += q.s[k];
                out.t[k] += q.t[k];
            }
            break;
        }
        case SymNode::Kind::stack: {
            const auto &u = self(self, n->kids[0]);
            const auto &lo = self(self, n->kids[1]);
            out = detail::stack_step(u, lo, Rational(1), n->width);
            break;
        }
        case SymNode::Kind::mfold: {
            const auto &g0 = self(self, n->kids[0]);
            const Rational inv_m = Rational(1) / Rational(static_cast<unsigned long>(n->m));
            out = g0;
            out.scale(inv_m);
            const uint64_t iters = std::min<uint64_t>(n->m, l + 2);
            NameTables prev = out;
            for (uint64_t step = 2; step <= iters; ++step) {
                prev = out;
                out = detail::stack_step(out, g0, inv_m, n->width);
            }
            if (n->m > iters) {
                const Rational more(static_cast<unsigned long>(n->m - iters));
                for (std::size_t k = 0; k < out.s.size(); ++k) out.s[k] += more * (out.s[k] - prev.s[k]);
            }
            break;
        }
        }
        return memo.emplace(n.get(), std::move(out)).first->second;
    };
    return rec(rec, g);
}

inline Rational gadget_name_measure(const SymGadget &g, const BinaryWord &x) {
    const auto tb = name_tables(g, x);
    return tb.s[tb.at(0, x.size())];
}

inline Rational gadget_exact_tail_measure(const SymGadget &g, const BinaryWord &x) {
    const auto tb = name_tables(g, x);
    return tb.t[tb.at(0, x.size())];
}

/// Sum over all words y of length l of the name measure of y:
/// sum over columns of width * max(0, h - l + 1) for l >= 1.
inline Rational name_mass_at_length(const SymGadget &g, std::size_t l) {
    if (l == 0) return g->support;
    Rational s = 0;
    for (const auto &[h, w] : g->heights)
        if (h + 1 > l) s += w * Rational(static_cast<unsigned long>(h + 1 - l));
    return s;
}

/// Name measure renormalized so that words of each length carry the full
/// support. Starts near the top see shorter names, which makes the raw measure
/// lose a factor (h-l+1)/h; on a gadget whose names are uniform this version
/// gives exactly 2^-l times the support.
inline Rational stationary_name_measure(const SymGadget &g, const BinaryWord &x) {
    const Rational mass = name_mass_at_length(g, x.size());
    if (mass == 0) return 0;
    return gadget_name_measure(g, x) * g->support / mass;
}

/// Columns grouped by (width, height), with multiplicities.
struct ColumnClass {
    Rational width;
    uint64_t height = 0;
    BigInt count;
};

namespace detail {

inline std::vector<ColumnClass> merge_classes(std::vector<ColumnClass> v) {
    std::map<std::pair<Rational, uint64_t>, BigInt> m;
    for (auto &c : v) m[{c.width, c.height}] += c.count;
    std::vector<ColumnClass> out;
    for (auto &[k, cnt] : m) out.push_back({k.first, k.second, cnt});
    return out;
}

// All vectors of k non-negative integers summing to m.
template <class F> void for_each_composition(std::size_t k, uint64_t m, F &&f) {
    std::vector<uint64_t> n(k, 0);
    const auto rec = [&](auto &&self, std::size_t i, uint64_t left) -> void {
        if (i + 1 == k) {
            n[i] = left;
            f(n);
            return;
        }
        for (uint64_t c = 0; c <= left; ++c) {
            n[i] = c;
            self(self, i + 1, left - c);
        }
    };
    if (k > 0) rec(rec, 0, m);
}

inline BigInt binomial(uint64_t n, uint64_t k) {
    BigInt r;
    mpz_bin_uiui(r.get_mpz_t(), n, k);
    return r;
}

inline Rational rpow(const Rational &b, uint64_t e) {
    Rational r;
    mpz_pow_ui(r.get_num_mpz_t(), b.get_num_mpz_t(), e);
    mpz_pow_ui(r.get_den_mpz_t(), b.get_den_mpz_t(), e);
    return r;
}

} // namespace detail

inline std::vector<ColumnClass> column_classes(const SymGadget &g, std::size_t cap = 200000) {
    std::unordered_map<const SymNode *, std::vector<ColumnClass>> memo;
    const auto rec = [&](auto &&self, const SymGadget &n) -> std::vector<ColumnClass> {
        if (auto it = memo.find(n.get()); it != memo.end()) return it->second;
        std::vector<ColumnClass> out;
        switch (n->kind) {
        case SymNode::Kind::base:
            for (const auto &c : n->base->columns()) out.push_back({c.width(), c.height(), BigInt(1)});
            break;
        case SymNode::Kind::cut:
            out = self(self, n->kids[0]);
            for (auto &c : out) c.width *= n->scale();
            break;
        case SymNode::Kind::unite: {
            out = self(self, n->kids[0]);
            const auto q = self(self, n->kids[1]);
            out.insert(out.end(), q.begin(), q.end());
            break;
        }
        case SymNode::Kind::stack: {
            const auto u = self(self, n->kids[0]);
            const auto l = self(self, n->kids[1]);
            for (const auto &a : u)
                for (const auto &b : l) out.push_back({a.width * b.width / n->width, a.height + b.height, a.count * b.count});
            break;
        }
        case SymNode::Kind::mfold: {
            const auto base = self(self, n->kids[0]);
            const Rational w = n->kids[0]->width;
            const BigInt total = detail::binomial(n->m + base.size() - 1, base.size() - 1);
            if (total > static_cast<unsigned long>(cap)) throw std::length_error("column_classes: too many classes");
            detail::for_each_composition(base.size(), n->m, [&](const std::vector<uint64_t> &cnt) {
                ColumnClass c{n->width, 0, BigInt(1)};
                uint64_t left = n->m;
                for (std::size_t i = 0; i < base.size(); ++i) {
                    if (cnt[i] == 0) continue;
                    c.width *= detail::rpow(base[i].width / w, cnt[i]);
                    c.height += cnt[i] * base[i].height;
                    BigInt pc;
                    mpz_pow_ui(pc.get_mpz_t(), base[i].count.get_mpz_t(), cnt[i]);
                    c.count *= detail::binomial(left, cnt[i]) * pc;
                    left -= cnt[i];
                }
                out.push_back(std::move(c));
            });
            break;
        }
        }
        out = detail::merge_classes(std::move(out));
        if (out.size() > cap) throw std::length_error("column_classes: too many classes");
        memo.emplace(n.get(), out);
        return out;
    };
    return rec(rec, g);
}

namespace detail {

// E|Bin(m, p) - c| = (mp - c) + 2 E[(c - X)^+].
inline Rational binomial_abs_dev(uint64_t m, const Rational &p, const Rational &c) {
    Rational s = Rational(static_cast<unsigned long>(m)) * p - c;
    const Rational q = 1 - p;
    for (uint64_t k = 0; k <= m && Rational(static_cast<unsigned long>(k)) < c; ++k)
        s += 2 * Rational(binomial(m, k)) * rpow(p, k) * rpow(q, m - k) * (c - Rational(static_cast<unsigned long>(k)));
    return s;
}

} // namespace detail

/// Well-distributedness of L in its M-fold, by the product factorization:
/// a column E = (d_1..d_M) meets D in n_D(E) copies of D, so
/// lambda(E^ cap D^) = w(E) h_D n_D(E) and the sum runs over count vectors.
/// With equal heights h this is (W h / M) sum_D E|Bin(M, p_D) - M m p_D|.
inline Rational well_distributedness_mfold(const SymGadget &l, uint64_t m, std::size_t max_columns = 12) {
    const auto cls = column_classes(l);
    const Rational w = l->width;
    const Rational mass = l->support;
    const Rational mm(static_cast<unsigned long>(m));
    if (cls.size() == 1 || l->heights.size() == 1) {
        const uint64_t h = cls[0].height;
        Rational sum = 0;
        for (const auto &c : cls) {
            const Rational p = c.width / w;
            sum += Rational(c.count) * detail::binomial_abs_dev(m, p, mm * mass * p);
        }
        return w * Rational(static_cast<unsigned long>(h)) / mm * sum;
    }
    // unequal heights: enumerate count vectors over individual columns
    std::vector<const ColumnClass *> cols;
    for (const auto &c : cls) {
        if (c.count > static_cast<unsigned long>(max_columns) || cols.size() + c.count.get_ui() > max_columns)
            throw std::length_error("well_distributedness: too many columns with unequal heights");
        for (unsigned long k = 0; k < c.count.get_ui(); ++k) cols.push_back(&c);
    }
    Rational total = 0;
    detail::for_each_composition(cols.size(), m, [&](const std::vector<uint64_t> &n) {
        Rational prob = 1;
        uint64_t left = m, hsum = 0;
        for (std::size_t d = 0; d < cols.size(); ++d) {
            if (n[d] == 0) continue;
            prob *= Rational(detail::binomial(left, n[d])) * detail::rpow(cols[d]->width / w, n[d]);
            left -= n[d];
            hsum += n[d] * cols[d]->height;
        }
        Rational inner = 0;
        for (std::size_t d = 0; d < cols.size(); ++d) {
            const Rational p = cols[d]->width / w;
            inner += Rational(static_cast<unsigned long>(cols[d]->height)) *
                     abs_diff(Rational(static_cast<unsigned long>(n[d])), Rational(static_cast<unsigned long>(hsum)) * w * p);
        }
        total += prob * inner;
    });
    return total * w / mm;
}

/// Symbolic well-distributedness; u must be l itself or an M-fold of l.
inline Rational well_distributedness(const SymGadget &l, const SymGadget &u) {
    if (u.get() == l.get()) {
        Rational s = 0, sq = 0;
        for (const auto &c : column_classes(l)) {
            const Rational md = c.width * Rational(static_cast<unsigned long>(c.height));
            s += Rational(c.count) * (md - md * md);
            sq += Rational(c.count) * md * md;
        }
        return s + l->support * l->support - sq;
    }
    if (u->kind == SymNode::Kind::mfold && u->kids[0].get() == l.get()) return well_distributedness_mfold(l, u->m);
    throw std::invalid_argument("well_distributedness: U is not built from L by a single M-fold");
}

struct FindRsResult {
    std::optional<uint64_t> m;
    uint64_t best_m = 0;
    Rational best_value;
    bool found() const { return m.has_value(); }
};

/// Smallest M <= cap with well-distributedness below eps.
inline FindRsResult find_Rs(const SymGadget &g, const Rational &eps, uint64_t cap) {
    if (!(eps > 0)) throw std::invalid_argument("find_Rs: eps must be positive");
    FindRsResult res;
    for (uint64_t m = 1; m <= cap; ++m) {
        const Rational v = well_distributedness_mfold(g, m);
        if (res.best_m == 0 || v < res.best_value) {
            res.best_value = v;
            res.best_m = m;
        }
        if (v < eps) {
            res.m = m;
            return res;
        }
    }
    return res;
}

/// JSON: a node list (children by id, shared nodes listed once) and the
/// interval tables of the base gadgets.
inline nlohmann::json dump_json(const SymGadget &g) {
    nlohmann::json nodes = nlohmann::json::array();
    std::unordered_map<const SymNode *, std::size_t> ids;
    const auto q = [](const Rational &r) { return to_string(r); };
    const auto rec = [&](auto &&self, const SymGadget &n) -> std::size_t {
        if (auto it = ids.find(n.get()); it != ids.end()) return it->second;
        std::vector<std::size_t> kids;
        for (const auto &k : n->kids) kids.push_back(self(self, k));
        nlohmann::json j;
        j["id"] = nodes.size();
        j["width"] = q(n->width);
        j["support"] = q(n->support);
        j["columns"] = n->columns.get_str();
        switch (n->kind) {
        case SymNode::Kind::base: {
            j["op"] = "base";
            j["label"] = n->label;
            nlohmann::json cols = nlohmann::json::array();
            for (const auto &c : n->base->columns()) {
                nlohmann::json lv = nlohmann::json::array();
                for (const auto &iv : c.levels()) lv.push_back({q(iv.left), q(iv.right)});
                cols.push_back({{"name", c.name().to_string()}, {"levels", lv}});
            }
            j["table"] = cols;
            break;
        }
        case SymNode::Kind::cut: {
            j["op"] = "cut";
            nlohmann::json gm = nlohmann::json::array();
            for (const auto &x : n->gamma) gm.push_back(q(x));
            j["gamma"] = gm;
            j["copy"] = n->copy;
            break;
        }
        case SymNode::Kind::unite: j["op"] = "union"; break;
        case SymNode::Kind::stack: j["op"] = "stack"; break;
        case SymNode::Kind::mfold:
            j["op"] = "mfold";
            j["M"] = n->m;
            break;
        }
        j["children"] = kids;
        const std::size_t id = nodes.size();
        nodes.push_back(std::move(j));
        ids.emplace(n.get(), id);
        return id;
    };
    const std::size_t root = rec(rec, g);
    return {{"root", root}, {"nodes", nodes}};
}

} // namespace lzr

#endif
