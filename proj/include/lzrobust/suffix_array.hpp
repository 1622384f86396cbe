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

#ifndef LZROBUST_SUFFIX_ARRAY_HPP
#define LZROBUST_SUFFIX_ARRAY_HPP

#include "bits.hpp"

#include <algorithm>
#include <cstdint>
#include <functional>
#include <limits>
#include <vector>

namespace lzr {

/// Suffix array by prefix doubling with two-pass counting sort, O(n log n).
inline std::vector<int32_t> suffix_array(const BinaryWord &x) {
    const auto n = static_cast<int32_t>(x.size());
    std::vector<int32_t> sa(n), rank(n), tmp(n), cnt;
    if (n == 0) return sa;
    for (int32_t i = 0; i < n; ++i) {
        sa[i] = i;
        rank[i] = x[i];
    }
    std::sort(sa.begin(), sa.end(), [&](int32_t a, int32_t b) { return rank[a] < rank[b] || (rank[a] == rank[b] && a < b); });
    int32_t classes = 2;
    std::vector<int32_t> by_second(n);
    for (int32_t k = 1;; k <<= 1) {
        // order by second key: suffixes without a second half first
        int32_t p = 0;
        for (int32_t i = n - k; i < n; ++i)
            if (i >= 0) by_second[p++] = i;
        for (int32_t i = 0; i < n; ++i)
            if (sa[i] >= k) by_second[p++] = sa[i] - k;
        cnt.assign(static_cast<std::size_t>(std::max(classes, 2)), 0);
        for (int32_t i = 0; i < n; ++i) ++cnt[rank[i]];
        for (std::size_t c = 1; c < cnt.size(); ++c) cnt[c] += cnt[c - 1];
        for (int32_t i = n; i-- > 0;) sa[--cnt[rank[by_second[i]]]] = by_second[i];
        tmp[sa[0]] = 0;
        classes = 1;
        for (int32_t i = 1; i < n; ++i) {
            const int32_t a = sa[i - 1], b = sa[i];
            const int32_t ra2 = a + k < n ? rank[a + k] : -1;
            const int32_t rb2 = b + k < n ? rank[b + k] : -1;
            if (rank[a] != rank[b] || ra2 != rb2) ++classes;
            tmp[b] = classes - 1;
        }
        rank.swap(tmp);
        if (classes == n || k >= n) break;
    }
    return sa;
}

/// Kasai: lcp[k] = lcp(suffix sa[k-1], suffix sa[k]); lcp[0] = 0.
inline std::vector<int32_t> lcp_array(const BinaryWord &x, const std::vector<int32_t> &sa) {
    const auto n = static_cast<int32_t>(x.size());
    std::vector<int32_t> rank(n), lcp(n, 0);
    for (int32_t i = 0; i < n; ++i) rank[sa[i]] = i;
    int32_t h = 0;
    for (int32_t i = 0; i < n; ++i) {
        if (rank[i] == 0) {
            h = 0;
            continue;
        }
        const int32_t j = sa[rank[i] - 1];
        while (i + h < n && j + h < n && x[i + h] == x[j + h]) ++h;
        lcp[rank[i]] = h;
        if (h > 0) --h;
    }
    return lcp;
}

/// Bottom-up segment tree over int32 with an associative op, plus descents
/// that find the nearest index whose value satisfies a predicate that is
/// monotone in the aggregate (min < v, max >= v, ...).
template <class Op>
class SegTree {
public:
    SegTree(std::vector<int32_t> values, int32_t identity, Op op = Op{}) : n_(values.size()), id_(identity), op_(op) {
        sz_ = 1;
        while (sz_ < n_) sz_ <<= 1;
        t_.assign(2 * sz_, id_);
        std::copy(values.begin(), values.end(), t_.begin() + static_cast<std::ptrdiff_t>(sz_));
        for (std::size_t i = sz_; i-- > 1;) t_[i] = op_(t_[2 * i], t_[2 * i + 1]);
    }

    void set(std::size_t i, int32_t v) {
        i += sz_;
        t_[i] = v;
        for (i >>= 1; i >= 1; i >>= 1) t_[i] = op_(t_[2 * i], t_[2 * i + 1]);
    }

    /// Aggregate over [l, r] inclusive.
    int32_t query(std::size_t l, std::size_t r) const {
        int32_t left = id_, right = id_;
        for (l += sz_, r += sz_ + 1; l < r; l >>= 1, r >>= 1) {
            if (l & 1) left = op_(left, t_[l++]);
            if (r & 1) right = op_(t_[--r], right);
        }
        return op_(left, right);
    }

    /// Largest k <= r with pred(value[k]), or -1.
    template <class Pred>
    std::ptrdiff_t rightmost(std::ptrdiff_t r, Pred pred) const {
        if (r < 0) return -1;
        return rightmost_(1, 0, sz_ - 1, static_cast<std::size_t>(r), pred);
    }

    /// Smallest k >= l with pred(value[k]), or n.
    template <class Pred>
    std::size_t leftmost(std::size_t l, Pred pred) const {
        if (l >= n_) return n_;
        const auto k = leftmost_(1, 0, sz_ - 1, l, pred);
        return k < 0 || static_cast<std::size_t>(k) >= n_ ? n_ : static_cast<std::size_t>(k);
    }

private:
    template <class Pred>
    std::ptrdiff_t rightmost_(std::size_t node, std::size_t lo, std::size_t hi, std::size_t r, Pred &pred) const {
        if (lo > r || !pred(t_[node])) return -1;
        if (lo == hi) return static_cast<std::ptrdiff_t>(lo);
        const std::size_t mid = (lo + hi) / 2;
        const auto k = rightmost_(2 * node + 1, mid + 1, hi, r, pred);
        return k >= 0 ? k : rightmost_(2 * node, lo, mid, r, pred);
    }

    template <class Pred>
    std::ptrdiff_t leftmost_(std::size_t node, std::size_t lo, std::size_t hi, std::size_t l, Pred &pred) const {
        if (hi < l || !pred(t_[node])) return -1;
        if (lo == hi) return static_cast<std::ptrdiff_t>(lo);
        const std::size_t mid = (lo + hi) / 2;
        const auto k = leftmost_(2 * node, lo, mid, l, pred);
        return k >= 0 ? k : leftmost_(2 * node + 1, mid + 1, hi, l, pred);
    }

    std::size_t n_, sz_;
    int32_t id_;
    Op op_;
    std::vector<int32_t> t_;
};

struct MinOp {
    int32_t operator()(int32_t a, int32_t b) const { return std::min(a, b); }
};
struct MaxOp {
    int32_t operator()(int32_t a, int32_t b) const { return std::max(a, b); }
};

/// Longest previous factor oracle: given a set of inserted source positions,
/// returns for position i the longest match among them and the largest
/// source attaining it (or any length floor passed in).
class MatchFinder {
public:
    explicit MatchFinder(const BinaryWord &x)
        : n_(x.size()), sa_(suffix_array(x)), rank_(n_), lcp_(lcp_array(x, sa_), std::numeric_limits<int32_t>::max()),
          live_(std::vector<int32_t>(n_, -1), -1) {
        for (std::size_t k = 0; k < n_; ++k) rank_[static_cast<std::size_t>(sa_[k])] = static_cast<int32_t>(k);
    }

    void insert(std::size_t j) { live_.set(static_cast<std::size_t>(rank_[j]), static_cast<int32_t>(j)); }
    void erase(std::size_t j) { live_.set(static_cast<std::size_t>(rank_[j]), -1); }

    /// Longest common prefix of suffix i with any inserted suffix.
    std::size_t longest(std::size_t i) const {
        const auto r = static_cast<std::size_t>(rank_[i]);
        std::size_t best = 0;
        const auto nonneg = [](int32_t v) { return v >= 0; };
        const auto left = live_.rightmost(static_cast<std::ptrdiff_t>(r) - 1, nonneg);
        if (left >= 0) best = static_cast<std::size_t>(lcp_.query(static_cast<std::size_t>(left) + 1, r));
        const auto right = live_.leftmost(r + 1, nonneg);
        if (right < n_) best = std::max(best, static_cast<std::size_t>(lcp_.query(r + 1, right)));
        return best;
    }

    /// Largest inserted j with lcp(i, j) >= len (len >= 1), or -1.
    std::ptrdiff_t latest_source(std::size_t i, std::size_t len) const {
        const auto r = static_cast<std::size_t>(rank_[i]);
        const auto L = static_cast<int32_t>(len);
        const auto below = [L](int32_t v) { return v < L; };
        const auto lo_break = lcp_.rightmost(static_cast<std::ptrdiff_t>(r), below);
        const std::size_t lo = lo_break < 0 ? 0 : static_cast<std::size_t>(lo_break);
        const std::size_t hi = lcp_.leftmost(r + 1, below) - 1;
        return live_.query(lo, hi);
    }

private:
    std::size_t n_;
    std::vector<int32_t> sa_;
    std::vector<int32_t> rank_;
    SegTree<MinOp> lcp_;
    SegTree<MaxOp> live_;
};

} // namespace lzr

#endif
