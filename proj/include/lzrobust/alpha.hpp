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

#ifndef LZROBUST_ALPHA_HPP
#define LZROBUST_ALPHA_HPP

#include "deficiency.hpp"
#include "lz78.hpp"
#include "seeds.hpp"
#include "theorem1.hpp"

#include <json.hpp>

#include <algorithm>
#include <memory>
#include <random>
#include <string>
#include <vector>

namespace lzr {

struct AlphaParams {
    unsigned steps = 6;          // fragments after alpha(0)
    unsigned even_level = 5;     // incompressible fragments are Delta'' blocks of height H_e
    uint64_t growth = 8;         // odd step: extend to a multiple of H_e that is >= growth * l(alpha)
    unsigned candidates = 4;     // sampled extensions per odd attempt
    unsigned max_retries = 16;
    unsigned checkpoints = 4;    // prefixes where log M is checked per candidate
    double mu = 0.5;
    double min_random_ratio = 0.8;
    uint64_t seed = 1;
    uint64_t depth = 64;         // evaluator depth, see Theorem1Measure
};

enum class FragmentKind { sparse, incompressible };

inline std::string to_string(FragmentKind k) { return k == FragmentKind::sparse ? "sparse" : "incompressible"; }

struct AlphaFragment {
    unsigned k = 0;
    std::size_t begin = 0, end = 0;
    unsigned stage = 0;           // largest s with h_s = H_s / 2 <= end
    FragmentKind kind = FragmentKind::sparse;
    double ones_frequency = 0;    // of the new part
    double lz78_local_ratio = 0;  // (L(alpha(k)) - L(alpha(k-1))) / length of the new part
    double log2_prob = 0;         // lower end of log2 P(alpha(k))
    double deficiency = 0;        // surrogate at the end
    unsigned tries = 0;
    std::size_t candidates = 0, kept = 0;

    bool odd() const { return k % 2 == 1; }
};

struct AlphaTrace {
    BinaryWord word;
    std::size_t initial_length = 0;
    std::vector<AlphaFragment> fragments;
    std::string code;

    nlohmann::json to_json() const {
        nlohmann::json j;
        j["length"] = word.size();
        j["initial_length"] = initial_length;
        j["surrogate_code"] = code;
        j["fragments"] = nlohmann::json::array();
        for (const auto &f : fragments) {
            j["fragments"].push_back({{"k", f.k},
                                      {"begin", f.begin},
                                      {"end", f.end},
                                      {"stage", f.stage},
                                      {"parity", f.odd() ? "odd" : "even"},
                                      {"kind", to_string(f.kind)},
                                      {"ones_frequency", f.ones_frequency},
                                      {"lz78_local_ratio", f.lz78_local_ratio},
                                      {"log2_prob", f.log2_prob},
                                      {"deficiency", f.deficiency},
                                      {"tries", f.tries},
                                      {"candidates", f.candidates},
                                      {"kept", f.kept}});
        }
        return j;
    }
};

/// Fragment end lengths: alpha(0) = H_0, odd steps grow to the first
/// multiple of H_e at least growth times the current length, even steps add
/// one H_e block.
inline std::vector<std::size_t> alpha_lengths(const Layout &lay, const AlphaParams &ap) {
    if (ap.even_level > lay.top()) throw std::invalid_argument("alpha_lengths: even level above the layout");
    const uint64_t he = lay.height[ap.even_level];
    std::vector<std::size_t> len{lay.height[0]};
    for (unsigned k = 1; k <= ap.steps; ++k) {
        const uint64_t cur = len.back();
        if (k % 2 == 1) {
            const uint64_t want = std::max(ap.growth * cur, cur + 1);
            len.push_back((want + he - 1) / he * he);
        } else {
            len.push_back(cur + he);
        }
    }
    return len;
}

/// Appends Pi_t blocks covering [from, to), each the largest aligned block
/// that fits, as one path through the Pi hierarchy.
inline void append_pi_path(const Layout &lay, std::mt19937_64 &rng, uint64_t from, uint64_t to, BinaryWord &out) {
    for (uint64_t p = from; p < to;) {
        unsigned t = 0;
        while (t < lay.top() && p % lay.height[t + 1] == 0 && p + lay.height[t + 1] <= to) ++t;
        if (p % lay.height[t] != 0 || p + lay.height[t] > to)
            throw std::invalid_argument("append_pi_path: range is not aligned to H_0");
        generate_block(lay, rng, false, t, 0, lay.height[t], out);
        p += lay.height[t];
    }
}

/// Builds alpha(0) < alpha(1) < ... on the empirical construction: alpha(0)
/// is a Pi_0 name, odd steps append a sparse Pi path chosen by the
/// bounded-increase selection, even steps append a seeded random Delta''
/// block. The surrogate deficiency uses `code`.
inline AlphaTrace build_alpha(std::shared_ptr<Construction> c, const AlphaParams &ap, const Coder &code) {
    if (!(ap.mu > 0 && ap.mu < 1)) throw std::invalid_argument("build_alpha: need 0 < mu < 1");
    if (ap.candidates == 0 || ap.checkpoints == 0) throw std::invalid_argument("build_alpha: need candidates and checkpoints");
    const double r = c->params().r.get_d();
    Layout probe = Layout::from(*c, c->column_height(ap.even_level));
    const auto lengths = alpha_lengths(probe, ap);
    const Layout lay = Layout::from(*c, std::max<uint64_t>(lengths.back(), c->column_height(ap.even_level)));
    const uint64_t he = lay.height[ap.even_level];
    const Theorem1Measure measure(c, ap.depth);
    const Lz78Coder lz;

    const auto stage_of = [&](std::size_t n) {
        unsigned s = 0;
        while (s < lay.top() && lay.height[s + 1] / 2 <= n) ++s;
        return s;
    };
    const auto ones = [](const BinaryWord &w, std::size_t from) {
        std::size_t k = 0;
        for (std::size_t i = from; i < w.size(); ++i) k += w[i];
        return k;
    };

    AlphaTrace tr;
    tr.code = code.name();
    tr.word = BinaryWord(static_cast<std::size_t>(lay.height[0]), 0);
    tr.initial_length = tr.word.size();
    double lp_prev = measure.log2_prob(tr.word);
    double d_prev = -lp_prev - static_cast<double>(code.code_length(tr.word));
    std::size_t lz_prev = lz.code_length(tr.word);

    for (unsigned k = 1; k <= ap.steps; ++k) {
        AlphaFragment f;
        f.k = k;
        f.begin = tr.word.size();
        f.end = lengths[k];
        const std::size_t n_new = f.end - f.begin;
        BinaryWord chosen;
        if (k % 2 == 1) {
            f.kind = FragmentKind::sparse;
            std::vector<std::size_t> ns;
            for (unsigned i = 1; i <= ap.checkpoints; ++i) ns.push_back(f.begin + n_new * i / ap.checkpoints);
            for (unsigned attempt = 0; attempt < ap.max_retries && chosen.empty(); ++attempt) {
                ++f.tries;
                std::vector<BinaryWord> words;
                std::vector<LogCandidate> cands;
                for (unsigned j = 0; j < ap.candidates; ++j) {
                    std::mt19937_64 rng(derive_seed(ap.seed, "alpha-odd", (uint64_t{k} << 40) | (uint64_t{attempt} << 20) | j));
                    BinaryWord w = tr.word;
                    w.reserve(f.end);
                    append_pi_path(lay, rng, f.begin, f.end, w);
                    if (static_cast<double>(ones(w, f.begin)) > 2 * r * static_cast<double>(n_new)) continue;
                    LogCandidate lc;
                    const auto lps = measure.prefix_log2_probs(w, ns);
                    const auto lens = code.prefix_lengths(w, ns);
                    lc.log2_prob = lps.back();
                    for (std::size_t i = 0; i < ns.size(); ++i) lc.log2_m.push_back(-lps[i] - static_cast<double>(lens[i]));
                    cands.push_back(std::move(lc));
                    words.push_back(std::move(w));
                }
                f.candidates += words.size();
                if (words.empty()) continue;
                const auto sel = select_subset_log(cands, lp_prev, d_prev, ap.mu);
                f.kept = sel.kept.size();
                if (sel.kept.empty()) continue;
                std::size_t best = sel.kept.front();
                for (auto i : sel.kept)
                    if (cands[i].log2_m.back() < cands[best].log2_m.back()) best = i;
                chosen = std::move(words[best]);
                f.log2_prob = cands[best].log2_prob;
                f.deficiency = cands[best].log2_m.back();
            }
            if (chosen.empty())
                throw StageFailure("build_alpha: no sparse candidate with ones-frequency <= 2r at step " + std::to_string(k) +
                                   " after " + std::to_string(ap.max_retries) + " attempts");
        } else {
            f.kind = FragmentKind::incompressible;
            for (unsigned attempt = 0; attempt < ap.max_retries && chosen.empty(); ++attempt) {
                ++f.tries;
                std::mt19937_64 rng(derive_seed(ap.seed, "alpha-even", (uint64_t{k} << 20) | attempt));
                BinaryWord w = tr.word;
                generate_block(lay, rng, true, ap.even_level, 0, he, w);
                const double local = (static_cast<double>(lz.code_length(w)) - static_cast<double>(lz_prev)) / static_cast<double>(n_new);
                if (local >= ap.min_random_ratio) chosen = std::move(w);
            }
            if (chosen.empty()) throw StageFailure("build_alpha: random block failed the LZ78 ratio test at step " + std::to_string(k));
            f.candidates = f.kept = 1;
            f.log2_prob = measure.log2_prob(chosen);
            f.deficiency = -f.log2_prob - static_cast<double>(code.code_length(chosen));
        }
        tr.word = std::move(chosen);
        const std::size_t lz_now = lz.code_length(tr.word);
        f.lz78_local_ratio = (static_cast<double>(lz_now) - static_cast<double>(lz_prev)) / static_cast<double>(n_new);
        f.ones_frequency = static_cast<double>(ones(tr.word, f.begin)) / static_cast<double>(n_new);
        f.stage = stage_of(f.end);
        if (f.end < lay.height[f.stage] / 2) throw std::logic_error("build_alpha: fragment shorter than h_s");
        lz_prev = lz_now;
        lp_prev = f.log2_prob;
        d_prev = f.deficiency;
        tr.fragments.push_back(f);
    }
    return tr;
}

} // namespace lzr

#endif
