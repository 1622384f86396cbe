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

// Acceptance run: one PASS/FAIL line per criterion. Exit status is the
// number of failed criteria. `acceptance 1 4` runs only criteria 1 and 4.

#include <lzrobust/lzrobust.hpp>

#include "random_gadgets.hpp"
#include "random_trees.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <memory>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

using namespace lzr;

namespace {

struct Outcome {
    bool pass = false;
    std::string detail;
};

Rational Q(long n, long d = 1) {
    Rational q(n, d);
    q.canonicalize();
    return q;
}

std::string fmt(double v, int prec = 4) {
    std::ostringstream s;
    s.setf(std::ios::fixed);
    s.precision(prec);
    s << v;
    return s.str();
}

BinaryWord word_of(uint64_t bits, std::size_t l) {
    BinaryWord x;
    for (std::size_t i = 0; i < l; ++i) x.push_back(static_cast<uint8_t>((bits >> i) & 1u));
    return x;
}

// 1. masses and uniform names on Delta
Outcome exact_identities() {
    const Rational r = Q(1, 256);
    std::size_t checked = 0;
    ConstructionParams emp;
    emp.h0 = 8;
    ConstructionParams fai;
    fai.mode = ConstructionParams::Mode::faithful;
    fai.strict_wd = false;
    fai.rs_cap = 8;
    for (auto p : {emp, fai}) {
        Construction c(p);
        for (unsigned s = 0; s <= 4; ++s) {
            const auto &st = c.stage(s);
            const Rational d = pow2(1 - static_cast<long>(s)) * r;
            if (st.delta_mass != d || st.pi_mass != 1 - d)
                return {false, "stage " + std::to_string(s) + " masses " + to_string(st.delta_mass) + ", " + to_string(st.pi_mass)};
            ++checked;
        }
    }
    // Remark 1: every word up to length 8, then random words up to h/2 on
    // small empirical heights and up to 48 on faithful heights (the exact
    // evaluation grows like l^3)
    std::size_t words = 0;
    std::mt19937_64 rng(derive_seed(1, "acceptance-remark1"));
    ConstructionParams tiny;
    tiny.h0 = 4;
    for (auto [p, cap] : {std::pair{tiny, std::size_t{1} << 20}, std::pair{fai, std::size_t{48}}}) {
        Construction c(p);
        for (unsigned s = 0; s <= 3; ++s) {
            const auto &st = c.stage(s);
            const std::size_t half = std::min<std::size_t>(st.column_height / 2, cap);
            const auto check = [&](const BinaryWord &x) {
                ++words;
                return stationary_name_measure(st.delta, x) == st.delta_mass * pow2(-static_cast<long>(x.size()));
            };
            for (std::size_t l = 1; l <= std::min<std::size_t>(half, 8); ++l)
                for (uint64_t b = 0; b < (uint64_t{1} << l); ++b)
                    if (!check(word_of(b, l))) return {false, "Remark 1 fails at stage " + std::to_string(s) + " on " + word_of(b, l).to_string()};
            for (int t = 0; t < 12; ++t) {
                const auto x = random_word(rng, 1 + rng() % half);
                if (!check(x)) return {false, "Remark 1 fails at stage " + std::to_string(s) + " length " + std::to_string(x.size())};
            }
            // the longest allowed length, once per stage
            if (!check(random_word(rng, half))) return {false, "Remark 1 fails at stage " + std::to_string(s) + " length " + std::to_string(half)};
        }
    }
    return {true, std::to_string(checked) + " stage mass pairs, " + std::to_string(words) + " Delta words"};
}

// 2. symbolic gadget queries against explicit enumeration
Outcome oracle_equivalence() {
    std::mt19937_64 rng(derive_seed(1, "acceptance-oracle"));
    std::size_t instances = 0, queries = 0, wd = 0;
    while (instances < 300) {
        SymGadget inner;
        const auto s = lzr::testing::random_tree(rng, &inner);
        if (inner->columns > 3) continue;
        const auto g = materialize(s);
        for (int q = 0; q < 4; ++q) {
            const auto x = lzr::testing::random_word(rng, rng() % 6);
            ++queries;
            if (gadget_name_measure(s, x) != gadget_name_measure(g, x) ||
                gadget_exact_tail_measure(s, x) != gadget_exact_tail_measure(g, x))
                return {false, "name measure differs on instance " + std::to_string(instances) + " word " + x.to_string()};
        }
        if (s != inner) {
            ++wd;
            if (well_distributedness(inner, s) != well_distributedness(materialize(inner), g))
                return {false, "well-distributedness differs on instance " + std::to_string(instances)};
        }
        ++instances;
    }
    return {wd >= 200, std::to_string(instances) + " instances, " + std::to_string(queries) + " name queries, " +
                           std::to_string(wd) + " M-fold well-distributedness checks"};
}

// 3. bounded-increase selection
Outcome selection() {
    std::mt19937_64 rng(derive_seed(1, "acceptance-select"));
    const std::vector<Rational> mus{Q(1, 10), Q(1, 4), Q(1, 2), Q(3, 4), Q(9, 10)};
    std::size_t instances = 0, pruned = 0;
    while (instances < 1500) {
        const std::size_t depth = 1 + rng() % 10;
        const lzr::testing::RandomTree tree(rng, depth);
        const auto p = tree.measure();
        const auto m = tree.martingale();
        const auto x = lzr::testing::random_word(rng, rng() % std::min<std::size_t>(depth, 4));
        if (p(x) == 0) continue;
        std::vector<BinaryWord> a;
        for (int k = 0, c = 1 + static_cast<int>(rng() % 10); k < c; ++k)
            a.push_back(x + lzr::testing::random_word(rng, rng() % (depth - x.size() + 1)));
        if (cylinder_mass(a, p) == 0) continue;
        const Rational mu = mus[rng() % mus.size()];
        const auto res = select_subset(a, x, p, m, mu);
        const auto check = verify_select_subset(a, x, p, m, mu, res);
        if (!check.ok()) return {false, "instance " + std::to_string(instances) + ": " + check.detail};
        pruned += !res.removed.empty();
        ++instances;
    }
    return {true, std::to_string(instances) + " instances, " + std::to_string(pruned) + " with removals, 0 failures"};
}

// 4. universality on two sources
Outcome universality() {
    bool ok = true;
    std::string detail;
    for (const char *spec : {"bernoulli:1/5", "flip:1/10"}) {
        const auto src = parse_source(spec).source;
        const double h = src.entropy_rate();
        const auto xm = src.sample(derive_seed(1, "acceptance-univ-mixture"), 100000);
        const double mix = static_cast<double>(MixtureCoder().code_length(xm)) / 1e5;
        const auto xl = src.sample(derive_seed(1, "acceptance-univ-lz78"), std::size_t{1} << 20);
        const double lz = static_cast<double>(Lz78Coder().code_length(xl)) / static_cast<double>(std::size_t{1} << 20);
        const bool good = std::abs(mix - h) <= 0.02 && lz >= h - 0.02 && lz <= h + 0.15;
        ok = ok && good;
        detail += std::string(detail.empty() ? "" : "; ") + spec + ": H " + fmt(h) + ", mixture " + fmt(mix) + ", lz78 " + fmt(lz);
    }
    return {ok, detail};
}

// 5 and 6 share one oscillation run
const ExperimentResult &oscillation_run() {
    static const ExperimentResult res = run_oscillation(ExperimentConfig::defaults("oscillation"));
    return res;
}

Outcome oscillation() {
    const auto &s = oscillation_run().summary;
    std::string detail = "length " + std::to_string(s["alpha"]["length"].get<std::size_t>());
    std::size_t odd = 0, even = 0;
    for (const auto &f : s["alpha"]["fragments"]) (f["parity"] == "odd" ? odd : even)++;
    for (const auto &c : s["coders"])
        detail += "; " + c["coder"].get<std::string>() + (c["ok"].get<bool>() ? " ok" : " NOT ok");
    const bool shape = odd >= 3 && even >= 3 && s["alpha"]["length"].get<std::size_t>() >= (std::size_t{1} << 20);
    return {shape && s["oscillation_ok"].get<bool>(), detail};
}

Outcome deficiency_tracking() {
    const auto &d = oscillation_run().summary["deficiency"];
    const bool bound = d["within_bound"].get<bool>(), control = d["control_ok"].get<bool>();
    std::string detail = "curve max " + fmt(d["max"].get<double>(), 1) + (bound ? " within" : " ABOVE") + " sigma(n) + c0; control " +
                         fmt(d["control_value"].get<double>(), 1) + (control ? " > " : " <= ") +
                         fmt(d["control_threshold"].get<double>(), 1);
    return {bound && control, detail};
}

// 7. block realization on the flip chain
Outcome block_realization() {
    auto cfg = ExperimentConfig::defaults("robustness");
    cfg.sources = {"flip:1/10"};
    const auto s = run_robustness(cfg).summary["results"][0];
    std::string detail = "H " + fmt(s["entropy"].get<double>()) + ", limits";
    for (const auto &v : s["block_limits"]) detail += " " + fmt(v.get<double>());
    const bool dec = s["blocks_decreasing"].get<bool>(), near = s["largest_block_within_0.1"].get<bool>();
    detail += dec ? ", decreasing" : ", NOT decreasing";
    detail += near ? ", N=2^14 within 0.1" : ", N=2^14 NOT within 0.1";
    return {dec && near, detail};
}

// 8. round trip, separation and the integer code
Outcome hygiene() {
    const std::vector<std::string> specs{"lz78", "lz78-coord", "lzwin", "lzwin:256", "block:64", "block:64:mixture", "mixture", "verbatim"};
    constexpr std::size_t words = 10000;
    std::mt19937_64 rng(derive_seed(1, "acceptance-hygiene"));
    std::vector<BinaryWord> corpus;
    for (std::size_t i = 0; i < words; ++i) {
        const std::size_t n = i % 10 == 0 ? rng() % 2000 : rng() % 96;
        const unsigned one_in = std::vector<unsigned>{2, 2, 3, 10, 100, 0}[rng() % 6];
        BinaryWord x;
        for (std::size_t j = 0; j < n; ++j) x.push_back(one_in ? static_cast<uint8_t>(rng() % one_in == 0) : 0);
        corpus.push_back(std::move(x));
    }
    for (const auto &spec : specs) {
        const auto coder = make_coder(spec);
        std::vector<std::pair<BinaryWord, BinaryWord>> pairs;
        for (std::size_t i = 0; i < words; ++i) {
            if (coder->decode(coder->encode(corpus[i])) != corpus[i]) return {false, spec + " round trip fails on word " + std::to_string(i)};
            pairs.emplace_back(corpus[i], corpus[(i * 7919 + 1) % words]);
        }
        const auto rep = decodability_check(*coder, pairs);
        if (!rep.ok()) return {false, spec + ": " + std::to_string(rep.failures) + " separation failures"};
    }
    std::set<std::string> codes;
    double kraft = 0;
    for (uint64_t k = 1; k <= (uint64_t{1} << 16); ++k) {
        const auto c = encode_int(k);
        if (decode_int(c).first != k) return {false, "encode_int round trip fails at " + std::to_string(k)};
        kraft += std::ldexp(1.0, -static_cast<int>(c.size()));
        codes.insert(c.to_string());
    }
    // in sorted order a prefix sits right before one of its extensions
    for (auto it = codes.begin(), nx = std::next(it); nx != codes.end(); ++it, ++nx)
        if (nx->starts_with(*it)) return {false, "encode_int not prefix-free: " + *it + " / " + *nx};
    if (kraft > 1) return {false, "encode_int Kraft sum " + fmt(kraft, 6)};
    return {true, std::to_string(specs.size()) + " coders x " + std::to_string(words) + " words, encode_int Kraft sum " + fmt(kraft, 6)};
}

} // namespace

int main(int argc, char **argv) {
    struct Criterion {
        int id;
        const char *name;
        double budget_s; // 0: no limit
        std::function<Outcome()> run;
    };
    const std::vector<Criterion> all{{1, "exact identities", 60, exact_identities},
                                     {2, "cutting-and-stacking oracle equivalence", 0, oracle_equivalence},
                                     {3, "bounded-increase selection", 0, selection},
                                     {4, "universality", 300, universality},
                                     {5, "oscillation", 600, oscillation},
                                     {6, "deficiency tracking", 0, deficiency_tracking},
                                     {7, "block realization", 0, block_realization},
                                     {8, "coder hygiene", 0, hygiene}};
    std::set<int> only;
    for (int i = 1; i < argc; ++i) only.insert(std::stoi(argv[i]));
    int failed = 0;
    for (const auto &c : all) {
        if (!only.empty() && !only.count(c.id)) continue;
        const auto t0 = std::chrono::steady_clock::now();
        Outcome o;
        try {
            o = c.run();
        } catch (const std::exception &e) {
            o = {false, std::string("exception: ") + e.what()};
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        if (c.budget_s > 0 && secs > c.budget_s) {
            o.pass = false;
            o.detail += "; over the " + fmt(c.budget_s, 0) + " s budget";
        }
        failed += !o.pass;
        std::printf("CRITERION %d %s: %s (%s; %.1f s)\n", c.id, o.pass ? "PASS" : "FAIL", c.name, o.detail.c_str(), secs);
        std::fflush(stdout);
    }
    return failed;
}
