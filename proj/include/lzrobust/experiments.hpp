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

#ifndef LZROBUST_EXPERIMENTS_HPP
#define LZROBUST_EXPERIMENTS_HPP

#include "alpha.hpp"
#include "block.hpp"
#include "kt.hpp"
#include "lz78.hpp"
#include "lzwindow.hpp"
#include "seeds.hpp"
#include "sources.hpp"

#include <json.hpp>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <memory>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace lzr {

/// Coder from a short spec: lz78, lz78-coord, lzwin[:W], block:N[:INNER],
/// mixture[:KMAX], verbatim.
inline std::shared_ptr<const Coder> make_coder(const std::string &spec) {
    const auto colon = spec.find(':');
    const std::string head = spec.substr(0, colon);
    const std::string rest = colon == std::string::npos ? "" : spec.substr(colon + 1);
    if (head == "lz78" && rest.empty()) return std::make_shared<Lz78Coder>();
    if (head == "lz78-coord" && rest.empty()) return std::make_shared<Lz78Coder>(Lz78Coder::Reference::coordinate);
    if (head == "lzwin") return rest.empty() ? std::make_shared<LzWindowCoder>() : std::make_shared<LzWindowCoder>(std::stoull(rest));
    if (head == "mixture") return std::make_shared<MixtureCoder>(rest.empty() ? default_kmax : static_cast<unsigned>(std::stoul(rest)));
    if (head == "verbatim" && rest.empty()) return std::make_shared<VerbatimCoder>();
    if (head == "block" && !rest.empty()) {
        const auto c2 = rest.find(':');
        const std::size_t n = std::stoull(rest.substr(0, c2));
        return std::make_shared<BlockCoder>(n, make_coder(c2 == std::string::npos ? "lz78" : rest.substr(c2 + 1)));
    }
    throw std::invalid_argument("unknown coder '" + spec + "'");
}

struct NamedSource {
    std::string label;
    MarkovSource source;
};

/// "bernoulli:P", "flip:P", "markov:FILE", or an object {"label", "order", "rows"}.
inline NamedSource parse_source(const nlohmann::json &j) {
    if (j.is_object()) return {j.value("label", std::string("markov")), MarkovSource::from_json(j)};
    const std::string s = j.get<std::string>();
    const auto colon = s.find(':');
    if (colon == std::string::npos) throw std::invalid_argument("source spec needs KIND:ARG, got '" + s + "'");
    const std::string kind = s.substr(0, colon), arg = s.substr(colon + 1);
    if (kind == "bernoulli") return {s, MarkovSource::bernoulli(parse_rational(arg))};
    if (kind == "flip") return {s, MarkovSource::flip_chain(parse_rational(arg))};
    if (kind == "markov") {
        std::ifstream in(arg);
        if (!in) throw std::runtime_error("cannot open " + arg);
        return {s, MarkovSource::from_json(nlohmann::json::parse(in))};
    }
    throw std::invalid_argument("unknown source kind '" + kind + "'");
}

/// Slowly growing bound for the deficiency curve: log2, sqrt or id.
inline double eval_sigma(const std::string &name, double n) {
    if (name == "log2") return std::log2(std::max(1.0, n));
    if (name == "sqrt") return std::sqrt(n);
    if (name == "id") return n;
    throw std::invalid_argument("unknown sigma '" + name + "'");
}

struct ExperimentConfig {
    std::string experiment = "oscillation";
    uint64_t seed = 1;
    std::string output_dir;

    // oscillation
    ConstructionParams construction;
    AlphaParams alpha;
    std::vector<std::string> coders{"lz78", "lzwin", "block:4096", "mixture"};
    std::string surrogate_code = "lz78";
    std::string sigma = "log2";
    double c0 = 32;
    std::size_t control_n = 10000;
    std::size_t stride = 1u << 14;
    double incompressible_min = 0.8, odd_end_max = 0.25, swing_min = 0.1;

    // robustness and universality
    std::vector<nlohmann::json> sources{"bernoulli:1/5", "flip:1/10"};
    std::size_t n = 1u << 20;
    std::size_t mixture_n = 100000;
    std::vector<std::size_t> block_lengths{64, 1024, 16384};

    static ExperimentConfig defaults(const std::string &experiment) {
        ExperimentConfig c;
        c.experiment = experiment;
        if (experiment == "robustness") {
            c.coders = {"lz78"};
            c.stride = 1u << 16;
        } else if (experiment == "universality") {
            c.coders = {"mixture", "lz78"};
            c.stride = 1u << 14;
        }
        return c;
    }

    static ExperimentConfig from_json(const nlohmann::json &j) {
        ExperimentConfig c = defaults(j.at("experiment").get<std::string>());
        c.seed = j.value("seed", c.seed);
        c.output_dir = j.value("output_dir", c.output_dir);
        if (j.contains("theorem1")) {
            const auto &t = j["theorem1"];
            if (t.contains("r")) c.construction.r = parse_rational(t["r"].get<std::string>());
            if (t.contains("epsilon")) c.construction.epsilon = parse_rational(t["epsilon"].get<std::string>());
            c.construction.h0 = t.value("h0", c.construction.h0);
            c.construction.fold = t.value("fold", c.construction.fold);
        }
        if (j.contains("alpha")) {
            const auto &a = j["alpha"];
            c.alpha.steps = a.value("steps", c.alpha.steps);
            c.alpha.even_level = a.value("even_level", c.alpha.even_level);
            c.alpha.growth = a.value("growth", c.alpha.growth);
            c.alpha.candidates = a.value("candidates", c.alpha.candidates);
            c.alpha.checkpoints = a.value("checkpoints", c.alpha.checkpoints);
            c.alpha.max_retries = a.value("max_retries", c.alpha.max_retries);
            if (a.contains("mu")) c.alpha.mu = parse_rational(a["mu"].get<std::string>()).get_d();
            c.alpha.min_random_ratio = a.value("min_random_ratio", c.alpha.min_random_ratio);
            c.alpha.depth = a.value("depth", c.alpha.depth);
        }
        if (j.contains("coders")) c.coders = j["coders"].get<std::vector<std::string>>();
        c.surrogate_code = j.value("surrogate_code", c.surrogate_code);
        c.sigma = j.value("sigma", c.sigma);
        c.c0 = j.value("c0", c.c0);
        c.control_n = j.value("control_n", c.control_n);
        c.stride = j.value("stride", c.stride);
        if (j.contains("thresholds")) {
            const auto &t = j["thresholds"];
            c.incompressible_min = t.value("incompressible", c.incompressible_min);
            c.odd_end_max = t.value("odd_end", c.odd_end_max);
            c.swing_min = t.value("swing", c.swing_min);
        }
        if (j.contains("sources")) c.sources = j["sources"].get<std::vector<nlohmann::json>>();
        c.n = j.value("n", c.n);
        c.mixture_n = j.value("mixture_n", c.mixture_n);
        if (j.contains("block_lengths")) c.block_lengths = j["block_lengths"].get<std::vector<std::size_t>>();
        c.construction.validate();
        return c;
    }

    nlohmann::json to_json() const {
        return {{"experiment", experiment},
                {"seed", seed},
                {"output_dir", output_dir},
                {"theorem1",
                 {{"r", to_string(construction.r)},
                  {"epsilon", to_string(construction.epsilon)},
                  {"h0", construction.h0},
                  {"fold", construction.fold}}},
                {"alpha",
                 {{"steps", alpha.steps},
                  {"even_level", alpha.even_level},
                  {"growth", alpha.growth},
                  {"candidates", alpha.candidates},
                  {"checkpoints", alpha.checkpoints},
                  {"max_retries", alpha.max_retries},
                  {"mu", to_string(Rational(alpha.mu))},
                  {"min_random_ratio", alpha.min_random_ratio},
                  {"depth", alpha.depth}}},
                {"coders", coders},
                {"surrogate_code", surrogate_code},
                {"sigma", sigma},
                {"c0", c0},
                {"control_n", control_n},
                {"stride", stride},
                {"thresholds", {{"incompressible", incompressible_min}, {"odd_end", odd_end_max}, {"swing", swing_min}}},
                {"sources", sources},
                {"n", n},
                {"mixture_n", mixture_n},
                {"block_lengths", block_lengths}};
    }
};

/// Writes through a temporary file and a rename, so readers never see a
/// partial result.
inline void write_file_atomic(const std::filesystem::path &path, const std::string &content) {
    if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
    const auto tmp = path.string() + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw std::runtime_error("cannot write " + tmp);
        out << content;
    }
    std::filesystem::rename(tmp, path);
}

inline std::string fmt_double(double v) {
    std::ostringstream s;
    s << std::setprecision(10) << v;
    return s.str();
}

struct ExperimentResult {
    nlohmann::json summary;
    std::vector<std::pair<std::string, std::string>> files; // name, content

    void write(const std::string &dir) const {
        if (dir.empty()) return;
        for (const auto &[name, content] : files) write_file_atomic(std::filesystem::path(dir) / name, content);
        write_file_atomic(std::filesystem::path(dir) / "summary.json", summary.dump(2) + "\n");
    }
};

/// Oscillation on alpha for every configured coder, the deficiency curve of
/// alpha and the fair-coin control.
inline ExperimentResult run_oscillation(const ExperimentConfig &cfg) {
    ExperimentResult res;
    ConstructionParams cp = cfg.construction;
    cp.mode = ConstructionParams::Mode::empirical;
    auto c = std::make_shared<Construction>(cp);
    AlphaParams ap = cfg.alpha;
    ap.seed = derive_seed(cfg.seed, "alpha");
    const auto surrogate = make_coder(cfg.surrogate_code);
    const auto tr = build_alpha(c, ap, *surrogate);
    const BinaryWord &w = tr.word;

    std::vector<std::size_t> ends{tr.initial_length};
    for (const auto &f : tr.fragments) ends.push_back(f.end);

    std::ostringstream curves, frags;
    curves << "coder,n,bits,ratio\n";
    frags << "coder,k,kind,begin,end,prefix_ratio,local_ratio\n";
    nlohmann::json coders = nlohmann::json::array();
    bool all_ok = true;
    for (const auto &spec : cfg.coders) {
        const auto coder = make_coder(spec);
        for (const auto &pt : ratio_curve(*coder, w, cfg.stride))
            curves << spec << ',' << pt.n << ',' << pt.bits << ',' << fmt_double(pt.ratio_d()) << '\n';
        const auto bits = coder->prefix_lengths(w, ends);
        double local_min = INFINITY, odd_max = -INFINITY, pmax = -INFINITY, pmin = INFINITY;
        for (std::size_t i = 1; i < ends.size(); ++i) {
            const auto &f = tr.fragments[i - 1];
            const double prefix = static_cast<double>(bits[i]) / static_cast<double>(ends[i]);
            const double local = (static_cast<double>(bits[i]) - static_cast<double>(bits[i - 1])) /
                                 static_cast<double>(ends[i] - ends[i - 1]);
            frags << spec << ',' << f.k << ',' << to_string(f.kind) << ',' << f.begin << ',' << f.end << ','
                  << fmt_double(prefix) << ',' << fmt_double(local) << '\n';
            if (f.kind == FragmentKind::incompressible) local_min = std::min(local_min, local);
            if (f.odd()) odd_max = std::max(odd_max, prefix);
            pmax = std::max(pmax, prefix);
            pmin = std::min(pmin, prefix);
        }
        const bool ok = local_min >= cfg.incompressible_min && odd_max <= cfg.odd_end_max && pmax - pmin >= cfg.swing_min;
        all_ok = all_ok && ok;
        coders.push_back({{"coder", spec},
                          {"name", coder->name()},
                          {"incompressible_local_min", local_min},
                          {"odd_end_prefix_max", odd_max},
                          {"prefix_max", pmax},
                          {"prefix_min", pmin},
                          {"swing", pmax - pmin},
                          {"ok", ok}});
    }

    // deficiency at fragment ends and powers of two
    std::vector<std::size_t> checks(ends.begin(), ends.end());
    for (std::size_t p = 1024; p <= w.size(); p *= 2) checks.push_back(p);
    std::sort(checks.begin(), checks.end());
    checks.erase(std::unique(checks.begin(), checks.end()), checks.end());
    const Theorem1Measure measure(c, ap.depth);
    const auto lp = measure.prefix_log2_probs(w, checks);
    const auto lens = surrogate->prefix_lengths(w, checks);
    std::ostringstream def;
    def << "n,neg_log2_prob,code_bits,deficiency,bound\n";
    bool def_ok = true;
    double def_max = -INFINITY;
    for (std::size_t i = 0; i < checks.size(); ++i) {
        const double d = -lp[i] - static_cast<double>(lens[i]);
        const double bound = eval_sigma(cfg.sigma, static_cast<double>(checks[i])) + cfg.c0;
        def_ok = def_ok && d <= bound;
        def_max = std::max(def_max, d);
        def << checks[i] << ',' << fmt_double(-lp[i]) << ',' << lens[i] << ',' << fmt_double(d) << ',' << fmt_double(bound) << '\n';
    }
    const auto fair = MarkovSource::bernoulli(Rational(1, 2)).sample(derive_seed(cfg.seed, "control"), cfg.control_n);
    const double control = surrogate_deficiency(fair, measure, *surrogate);
    const double control_need = 0.5 * static_cast<double>(cfg.control_n) * -std::log2(1 - cp.r.get_d());

    res.files = {{"ratio_curves.csv", curves.str()}, {"fragments.csv", frags.str()}, {"deficiency.csv", def.str()}};
    res.summary = {{"config", cfg.to_json()},
                   {"alpha", tr.to_json()},
                   {"coders", coders},
                   {"oscillation_ok", all_ok},
                   {"deficiency",
                    {{"max", def_max},
                     {"sigma", cfg.sigma},
                     {"c0", cfg.c0},
                     {"checkpoints", checks.size()},
                     {"within_bound", def_ok},
                     {"control_n", cfg.control_n},
                     {"control_value", control},
                     {"control_threshold", control_need},
                     {"control_ok", control > control_need}}}};
    return res;
}

/// Ratio curves of each coder and of its block realizations per source.
inline ExperimentResult run_robustness(const ExperimentConfig &cfg) {
    ExperimentResult res;
    std::ostringstream csv;
    csv << "source,coder,block,n,bits,ratio\n";
    nlohmann::json rows = nlohmann::json::array();
    for (const auto &sj : cfg.sources) {
        const auto src = parse_source(sj);
        for (const auto &spec : cfg.coders) {
            const auto rep = robustness_experiment(src.source, make_coder(spec), cfg.n, cfg.block_lengths,
                                                   derive_seed(cfg.seed, "source:" + src.label), cfg.stride);
            for (const auto &pt : rep.full)
                csv << src.label << ',' << spec << ",0," << pt.n << ',' << pt.bits << ',' << fmt_double(pt.ratio_d()) << '\n';
            for (const auto &[blk, curve] : rep.blocks)
                for (const auto &pt : curve)
                    csv << src.label << ',' << spec << ',' << blk << ',' << pt.n << ',' << pt.bits << ',' << fmt_double(pt.ratio_d())
                        << '\n';
            const auto lim = rep.block_limits();
            bool monotone = true;
            for (std::size_t i = 1; i < lim.size(); ++i) monotone = monotone && lim[i] < lim[i - 1];
            rows.push_back({{"source", src.label},
                            {"coder", spec},
                            {"entropy", rep.entropy},
                            {"final_ratio", rep.final_ratio()},
                            {"block_lengths", cfg.block_lengths},
                            {"block_limits", lim},
                            {"blocks_decreasing", monotone},
                            {"final_within_band", rep.final_ratio() >= rep.entropy - 0.02 && rep.final_ratio() <= rep.entropy + 0.15},
                            {"largest_block_within_0.1", lim.empty() ? false : std::abs(lim.back() - rep.entropy) <= 0.1}});
        }
    }
    res.files = {{"robustness.csv", csv.str()}};
    res.summary = {{"config", cfg.to_json()}, {"results", rows}};
    return res;
}

inline const char *universality_header() { return "source,entropy,coder,n,bits_per_symbol\n"; }

/// Per-symbol code length of each coder against the entropy rate. The
/// mixture runs on mixture_n symbols, the others on n.
inline ExperimentResult run_universality(const ExperimentConfig &cfg) {
    ExperimentResult res;
    std::ostringstream csv;
    csv << universality_header();
    nlohmann::json rows = nlohmann::json::array();
    for (const auto &sj : cfg.sources) {
        const auto src = parse_source(sj);
        const double h = src.source.entropy_rate();
        for (const auto &spec : cfg.coders) {
            const auto coder = make_coder(spec);
            const bool mixture = spec.rfind("mixture", 0) == 0;
            const std::size_t n = mixture ? cfg.mixture_n : cfg.n;
            const auto x = src.source.sample(derive_seed(cfg.seed, "source:" + src.label), n);
            const auto curve = ratio_curve(*coder, x, cfg.stride);
            double lo = INFINITY;
            for (const auto &pt : curve) {
                csv << src.label << ',' << fmt_double(h) << ',' << spec << ',' << pt.n << ',' << fmt_double(pt.ratio_d()) << '\n';
                lo = std::min(lo, pt.ratio_d());
            }
            const double fin = curve.back().ratio_d();
            rows.push_back({{"source", src.label},
                            {"entropy", h},
                            {"coder", spec},
                            {"n", n},
                            {"final", fin},
                            {"final_minus_entropy", fin - h},
                            {"min_over_checkpoints", lo},
                            {"above_entropy_minus_0.02", lo >= h - 0.02}});
        }
    }
    res.files = {{"universality.csv", csv.str()}};
    res.summary = {{"config", cfg.to_json()}, {"results", rows}};
    return res;
}

inline ExperimentResult run_experiment(const ExperimentConfig &cfg) {
    if (cfg.experiment == "oscillation") return run_oscillation(cfg);
    if (cfg.experiment == "robustness") return run_robustness(cfg);
    if (cfg.experiment == "universality") return run_universality(cfg);
    throw std::invalid_argument("unknown experiment '" + cfg.experiment + "'");
}

} // namespace lzr

#endif
