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

#ifndef LZROBUST_LZ78_HPP
#define LZROBUST_LZ78_HPP

#include "coder.hpp"

#include <algorithm>
#include <cstdint>
#include <optional>
#include <vector>

namespace lzr {

/// One subblock of the incremental parse: x[start, start+length). The last
/// symbol is `new_symbol` unless the phrase is the incomplete tail.
struct Phrase {
    std::size_t start = 0;
    std::size_t length = 0;
    std::optional<uint8_t> new_symbol;
    uint32_t reference = 0; // trie node of the previously seen part
};

struct PhraseParse {
    std::vector<Phrase> phrases;
    std::size_t covered = 0;
};

namespace detail {

struct TrieNode {
    int32_t child[2] = {-1, -1};
    int32_t parent = -1;
    uint32_t depth = 0;
    std::size_t first_start = 0; // where the phrase that created this node starts
};

/// Phrase trie plus the list of nodes that can still be extended. A node with
/// both children can never be the reference of a complete phrase.
class PhraseTrie {
public:
    PhraseTrie() {
        nodes_.emplace_back();
        open_.push_back(0);
        open_pos_.push_back(0);
    }

    const TrieNode &node(uint32_t v) const { return nodes_[v]; }
    std::size_t size() const { return nodes_.size(); }
    std::size_t open_count() const { return open_.size(); }
    uint32_t open_index(uint32_t v) const { return open_pos_[v]; }
    uint32_t open_at(std::size_t i) const { return open_[i]; }
    bool is_leaf(uint32_t v) const { return nodes_[v].child[0] < 0 && nodes_[v].child[1] < 0; }

    uint32_t add_child(uint32_t v, uint8_t b, std::size_t start) {
        const auto id = static_cast<uint32_t>(nodes_.size());
        TrieNode n;
        n.parent = static_cast<int32_t>(v);
        n.depth = nodes_[v].depth + 1;
        n.first_start = start;
        nodes_.push_back(n);
        nodes_[v].child[b] = static_cast<int32_t>(id);
        if (nodes_[v].child[1 - b] >= 0) {
            // v is full: swap-remove from the open list
            const uint32_t i = open_pos_[v];
            const uint32_t last = open_.back();
            open_[i] = last;
            open_pos_[last] = i;
            open_.pop_back();
            open_pos_[v] = UINT32_MAX;
        }
        open_pos_.push_back(static_cast<uint32_t>(open_.size()));
        open_.push_back(id);
        return id;
    }

    uint32_t ancestor_at_depth(uint32_t v, uint32_t d) const {
        while (nodes_[v].depth > d) v = static_cast<uint32_t>(nodes_[v].parent);
        return v;
    }

private:
    std::vector<TrieNode> nodes_;
    std::vector<uint32_t> open_;
    std::vector<uint32_t> open_pos_;
};

} // namespace detail

/// Greedy incremental parse: each phrase is the shortest extension of a
/// previously seen phrase that has not been seen itself.
inline PhraseParse lz78_parse(const BinaryWord &x) {
    PhraseParse parse;
    detail::PhraseTrie trie;
    uint32_t cur = 0;
    std::size_t start = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const uint8_t b = x[i];
        const int32_t c = trie.node(cur).child[b];
        if (c >= 0) {
            cur = static_cast<uint32_t>(c);
            continue;
        }
        parse.phrases.push_back({start, i + 1 - start, b, cur});
        trie.add_child(cur, b, start);
        cur = 0;
        start = i + 1;
    }
    if (start < x.size()) parse.phrases.push_back({start, x.size() - start, std::nullopt, cur});
    parse.covered = x.size();
    return parse;
}

/// Variant 1 of Lempel-Ziv. Codeword layout:
///   encode_int(n+1) ++ encode_int(c+1) ++ c complete phrases ++ [incomplete tail]
/// where c counts complete phrases. In the default index form a complete phrase
/// is the phase-in index of its reference among the trie's non-full nodes,
/// followed by the new symbol only when the reference is a leaf (otherwise the
/// symbol is forced). The tail is the phase-in node id among all nodes.
/// The coordinate form stores (length, start of an earlier occurrence, symbol)
/// with encode_int fields instead.
class Lz78Coder final : public Coder {
public:
    using Coder::decode;
    using Coder::encode;

    enum class Reference { index, coordinate };

    explicit Lz78Coder(Reference ref = Reference::index) : ref_(ref) {}

    std::string name() const override { return ref_ == Reference::index ? "lz78" : "lz78-coord"; }

    void encode(const BinaryWord &x, BitString &out) const override {
        const auto run = scan(x);
        encode_int(x.size() + 1, out);
        encode_int(run.complete + 1, out);
        out.append(run.body);
    }

    BinaryWord decode(BitReader &in) const override {
        const uint64_t n = decode_int(in) - 1;
        const uint64_t c = decode_int(in) - 1;
        if (c > n) throw MalformedInput("lz78: more phrases than symbols");
        BinaryWord out;
        out.reserve(n);
        detail::PhraseTrie trie;
        for (uint64_t k = 0; k < c; ++k) {
            uint32_t v = 0;
            uint8_t b = 0;
            if (ref_ == Reference::index) {
                const uint64_t idx = decode_phased(in, trie.open_count());
                v = trie.open_at(idx);
                if (trie.is_leaf(v)) b = in.read_bit();
                else b = trie.node(v).child[0] < 0 ? 0 : 1;
            } else {
                v = read_coordinate(in, trie, out);
                b = in.read_bit();
                if (trie.node(v).child[b] >= 0) throw MalformedInput("lz78: phrase already in dictionary");
            }
            const std::size_t start = out.size();
            copy_path(trie, v, out);
            out.push_back(b);
            if (out.size() > n) throw MalformedInput("lz78: phrases overrun the declared length");
            trie.add_child(v, b, start);
        }
        if (out.size() < n) {
            const std::size_t rem = n - out.size();
            uint32_t v = 0;
            if (ref_ == Reference::index) {
                const uint64_t id = decode_phased(in, trie.size());
                v = static_cast<uint32_t>(id);
            } else {
                v = read_coordinate(in, trie, out);
            }
            if (trie.node(v).depth != rem) throw MalformedInput("lz78: tail length mismatch");
            copy_path(trie, v, out);
        }
        return out;
    }

    std::vector<std::size_t> prefix_lengths(const BinaryWord &x, std::span<const std::size_t> ns) const override {
        const auto run = scan(x);
        std::vector<std::size_t> out;
        out.reserve(ns.size());
        for (auto n : ns) {
            // complete phrases ending at or before n
            const auto it = std::upper_bound(run.ends.begin(), run.ends.end(), n);
            const auto c = static_cast<std::size_t>(it - run.ends.begin());
            std::size_t bits = int_code_length(n + 1) + int_code_length(c + 1) + run.cum_cost[c];
            const std::size_t done = c == 0 ? 0 : run.ends[c - 1];
            if (done < n) {
                const auto rem = static_cast<uint32_t>(n - done);
                const uint32_t v = run.trie.ancestor_at_depth(run.refs[c], rem);
                if (ref_ == Reference::index) bits += phased_length(v, c + 1);
                else bits += int_code_length(rem + 1) + int_code_length(run.trie.node(v).first_start + 1);
            }
            out.push_back(bits);
        }
        return out;
    }

    Reference reference() const { return ref_; }

private:
    struct Scan {
        BitString body;
        std::size_t complete = 0;
        std::vector<std::size_t> ends;     // end offset of each complete phrase
        std::vector<std::size_t> cum_cost; // bits of the first k complete phrases
        std::vector<uint32_t> refs;        // reference node of every phrase (incl. tail)
        detail::PhraseTrie trie;
    };

    Scan scan(const BinaryWord &x) const {
        Scan s;
        s.cum_cost.push_back(0);
        uint32_t cur = 0;
        std::size_t start = 0;
        for (std::size_t i = 0; i < x.size(); ++i) {
            const uint8_t b = x[i];
            const int32_t c = s.trie.node(cur).child[b];
            if (c >= 0) {
                cur = static_cast<uint32_t>(c);
                continue;
            }
            const std::size_t before = s.body.size();
            if (ref_ == Reference::index) {
                encode_phased(s.trie.open_index(cur), s.trie.open_count(), s.body);
                if (s.trie.is_leaf(cur)) s.body.push_back(b);
            } else {
                write_coordinate(s.trie, cur, s.body);
                s.body.push_back(b);
            }
            s.trie.add_child(cur, b, start);
            s.refs.push_back(cur);
            s.ends.push_back(i + 1);
            s.cum_cost.push_back(s.cum_cost.back() + (s.body.size() - before));
            ++s.complete;
            cur = 0;
            start = i + 1;
        }
        s.refs.push_back(cur);
        if (start < x.size()) {
            if (ref_ == Reference::index) encode_phased(cur, s.trie.size(), s.body);
            else write_coordinate(s.trie, cur, s.body);
        }
        return s;
    }

    static void write_coordinate(const detail::PhraseTrie &trie, uint32_t v, BitString &out) {
        const auto &n = trie.node(v);
        encode_int(n.depth + 1, out);
        if (n.depth > 0) encode_int(n.first_start + 1, out);
    }

    static uint32_t read_coordinate(BitReader &in, const detail::PhraseTrie &trie, const BinaryWord &out) {
        const uint64_t len = decode_int(in) - 1;
        if (len == 0) return 0;
        const uint64_t start = decode_int(in) - 1;
        if (start + len > out.size()) throw MalformedInput("lz78: coordinate beyond decoded text");
        uint32_t v = 0;
        for (uint64_t i = 0; i < len; ++i) {
            const int32_t c = trie.node(v).child[out[start + i]];
            if (c < 0) throw MalformedInput("lz78: coordinate does not name a phrase");
            v = static_cast<uint32_t>(c);
        }
        return v;
    }

    static void copy_path(const detail::PhraseTrie &trie, uint32_t v, BinaryWord &out) {
        const auto &n = trie.node(v);
        const std::size_t from = n.first_start;
        for (uint32_t i = 0; i < n.depth; ++i) out.push_back(out[from + i]);
    }

    Reference ref_;
};

} // namespace lzr

#endif
