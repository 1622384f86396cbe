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

// lzr: command-line front end to the lzrobust library.

#include <lzrobust/lzrobust.hpp>

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

using namespace lzr;

namespace {

// Input words are container files (see pack_stream) unless --text is given,
// in which case the file holds '0' and '1' characters; anything else is skipped.
BinaryWord read_word(const std::string &path, bool text) {
    if (!text) return read_stream_file(path);
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open for reading: " + path);
    BinaryWord w;
    for (char ch; in.get(ch);)
        if (ch == '0' || ch == '1') w.push_back(static_cast<uint8_t>(ch - '0'));
    return w;
}

void write_word(const std::string &path, const BinaryWord &w, bool text) {
    if (!text) return write_stream_file(path, w);
    write_file_atomic(path, w.to_string() + "\n");
}

// CSV goes to FILE, or stdout when FILE is empty or "-".
void emit(const std::string &path, const std::string &content) {
    if (path.empty() || path == "-")
        std::cout << content;
    else
        write_file_atomic(path, content);
}

Sigma read_sigma(const std::string &arg) {
    if (arg.empty() || arg == "id") return Sigma::identity();
    std::ifstream in(arg);
    if (!in) throw std::runtime_error("cannot open sigma table " + arg);
    std::stringstream ss;
    ss << in.rdbuf();
    const std::string s = ss.str();
    std::vector<int64_t> t;
    const auto first = s.find_first_not_of(" \t\r\n");
    if (first != std::string::npos && s[first] == '[') {
        t = nlohmann::json::parse(s).get<std::vector<int64_t>>();
    } else {
        std::istringstream is(s);
        for (int64_t v; is >> v;) t.push_back(v);
    }
    if (t.empty()) throw std::invalid_argument("sigma table " + arg + " is empty");
    return Sigma::from_table(std::move(t));
}

struct ConstructionOpts {
    std::string r = "1/256", epsilon = "1/10", mode = "empirical", sigma = "id";
    uint64_t h0 = 256, fold = 2, rs_cap = 64;
    unsigned stage_cap = 24;
    bool relaxed = false;

    void add(CLI::App *app) {
        app->add_option("--r", r, "sparsity r as a fraction");
        app->add_option("--epsilon", epsilon, "entropy budget");
        app->add_option("--mode", mode, "faithful or empirical")->check(CLI::IsMember({"faithful", "empirical"}));
        app->add_option("--sigma", sigma, "'id' or a file with sigma(0..N-1)");
        app->add_option("--h0", h0, "empirical mode: base half-height");
        app->add_option("--fold", fold, "empirical mode: fold per stage");
        app->add_option("--rs-cap", rs_cap, "faithful mode: largest fold searched");
        app->add_option("--stage-cap", stage_cap);
        app->add_flag("--relaxed", relaxed, "faithful mode: keep stages that miss the well-distributedness bound");
    }

    ConstructionParams params() const {
        ConstructionParams p;
        p.r = parse_rational(r);
        p.epsilon = parse_rational(epsilon);
        p.mode = mode == "faithful" ? ConstructionParams::Mode::faithful : ConstructionParams::Mode::empirical;
        p.sigma = read_sigma(sigma);
        p.h0 = h0;
        p.fold = fold;
        p.rs_cap = rs_cap;
        p.stage_cap = stage_cap;
        p.strict_wd = !relaxed;
        return p;
    }
};

nlohmann::json stage_json(const StageState &st) {
    nlohmann::json j{{"stage", st.s},
                     {"column_height", st.column_height},
                     {"fold", st.fold},
                     {"heights", st.heights},
                     {"delta_mass", to_string(st.delta_mass)},
                     {"pi_mass", to_string(st.pi_mass)},
                     {"gamma", to_string(st.gamma)},
                     {"routing", to_string(st.routing)},
                     {"wd_ok", st.wd_ok},
                     {"diagnostics", st.diagnostics}};
    j["wd"] = st.wd ? nlohmann::json(to_string(*st.wd)) : nlohmann::json(nullptr);
    if (st.wd) j["wd_approx"] = Rational(*st.wd).get_d();
    j["delta_columns"] = st.delta->columns.get_str();
    j["pi_columns"] = st.pi->columns.get_str();
    return j;
}

std::shared_ptr<const MeasureOracle> make_measure(const std::string &spec, const ConstructionOpts &co, uint64_t depth) {
    if (spec == "theorem1") return std::make_shared<Theorem1Measure>(std::make_shared<Construction>(co.params()), depth);
    return std::make_shared<MarkovSource>(parse_source(spec).source);
}

std::string ratio_csv(const RatioCurve &c) {
    std::string out = "n,bits,ratio\n";
    for (const auto &p : c) out += std::to_string(p.n) + "," + std::to_string(p.bits) + "," + fmt_double(p.ratio_d()) + "\n";
    return out;
}

std::vector<std::size_t> checkpoints(std::size_t n, std::size_t stride) {
    if (stride == 0) throw std::invalid_argument("stride must be positive");
    std::vector<std::size_t> ns;
    for (std::size_t k = stride; k < n; k += stride) ns.push_back(k);
    if (n > 0) ns.push_back(n);
    return ns;
}

} // namespace

int main(int argc, char **argv) {
    CLI::App app{"lzr: LZ robustness toolkit"};
    app.require_subcommand(1);

    // encode / decode
    std::string coder_name = "lz78", in_path, out_path, csv_path;
    uint64_t window = 0, block = 4096, stride = 1u << 14, seed = 1;
    bool text = false;
    const auto coder_spec = [&] {
        if (coder_name == "lzwin" && window) return "lzwin:" + std::to_string(window);
        if (coder_name == "block") return "block:" + std::to_string(block);
        return coder_name;
    };
    auto *enc = app.add_subcommand("encode", "compress a word");
    enc->add_option("--coder", coder_name, "lz78, lz78-coord, lzwin, block, mixture, verbatim");
    enc->add_option("--window", window, "lzwin window in symbols");
    enc->add_option("--block", block, "block length N for the block coder");
    enc->add_option("--in", in_path)->required();
    enc->add_option("--out", out_path)->required();
    enc->add_flag("--text", text, "input is ASCII 0/1");
    enc->callback([&] {
        const auto coder = make_coder(coder_spec());
        const auto x = read_word(in_path, text);
        const auto code = coder->encode(x);
        write_stream_file(out_path, code);
        std::cout << coder->name() << ": " << x.size() << " symbols -> " << code.size() << " bits\n";
    });

    auto *dec = app.add_subcommand("decode", "decompress a code");
    dec->add_option("--coder", coder_name);
    dec->add_option("--window", window);
    dec->add_option("--block", block);
    dec->add_option("--in", in_path)->required();
    dec->add_option("--out", out_path)->required();
    dec->add_flag("--text", text, "write ASCII 0/1");
    dec->callback([&] {
        const auto coder = make_coder(coder_spec());
        write_word(out_path, coder->decode(read_stream_file(in_path)), text);
    });

    auto *rc = app.add_subcommand("ratio-curve", "compression ratio of every stride-th prefix");
    rc->add_option("--coder", coder_name);
    rc->add_option("--window", window);
    rc->add_option("--block", block);
    rc->add_option("--in", in_path)->required();
    rc->add_option("--stride", stride);
    rc->add_option("--csv", csv_path);
    rc->add_flag("--text", text);
    rc->callback([&] { emit(csv_path, ratio_csv(ratio_curve(*make_coder(coder_spec()), read_word(in_path, text), stride))); });

    unsigned kmax = default_kmax;
    auto *mix = app.add_subcommand("mixture", "KT mixture: -log rho per symbol and code length");
    mix->add_option("--kmax", kmax);
    mix->add_option("--in", in_path)->required();
    mix->add_option("--stride", stride);
    mix->add_option("--csv", csv_path);
    mix->add_flag("--text", text);
    mix->callback([&] {
        const auto x = read_word(in_path, text);
        const auto ns = checkpoints(x.size(), stride);
        const MixtureMeasure rho(kmax);
        const MixtureCoder coder(kmax);
        const auto lp = rho.prefix_log2_probs(x, ns);
        const auto bits = coder.prefix_lengths(x, ns);
        std::string out = "n,neg_log2_rho_per_symbol,code_bits\n";
        for (std::size_t i = 0; i < ns.size(); ++i)
            out += std::to_string(ns[i]) + "," + fmt_double(-lp[i] / static_cast<double>(ns[i])) + "," + std::to_string(bits[i]) + "\n";
        emit(csv_path, out);
    });

    // gadgets of the construction
    ConstructionOpts gco;
    unsigned gstage = 0;
    std::string which = "pi";
    uint64_t mfold = 0;
    auto *gad = app.add_subcommand("gadget", "inspect the gadgets of one stage");
    gad->require_subcommand(1);
    auto *gdump = gad->add_subcommand("dump", "symbolic gadget as JSON");
    auto *gstats = gad->add_subcommand("stats", "masses, heights and column counts");
    auto *gwd = gad->add_subcommand("wd", "well-distributedness of a stage in the next");
    for (auto *s : {gdump, gstats}) {
        gco.add(s);
        s->add_option("--stage", gstage);
    }
    gdump->add_option("--which", which)->check(CLI::IsMember({"pi", "delta", "union"}));
    gdump->add_option("--out", out_path);
    gdump->callback([&] {
        Construction c(gco.params());
        const auto &st = c.stage(gstage);
        const SymGadget g = which == "pi" ? st.pi : which == "delta" ? st.delta : sym_union(st.pi, st.delta);
        emit(out_path, dump_json(g).dump(2) + "\n");
    });
    gstats->callback([&] {
        Construction c(gco.params());
        std::cout << stage_json(c.stage(gstage)).dump(2) << "\n";
    });
    gco.add(gwd);
    gwd->add_option("--against", gstage, "stage s: Pi_{s-1} u Delta'' inside Pi_s")->required();
    gwd->add_option("--mfold", mfold, "also evaluate the M-fold of Pi_{s-1} for this M");
    gwd->callback([&] {
        if (gstage == 0) throw std::invalid_argument("--against needs a stage >= 1");
        Construction c(gco.params());
        const auto &st = c.stage(gstage);
        nlohmann::json j{{"stage", gstage}, {"fold", st.fold}, {"wd_ok", st.wd_ok}, {"diagnostics", st.diagnostics}};
        j["wd"] = st.wd ? nlohmann::json(to_string(*st.wd)) : nlohmann::json(nullptr);
        if (st.wd) j["wd_approx"] = Rational(*st.wd).get_d();
        if (mfold) {
            const Rational v = well_distributedness_mfold(c.stage(gstage - 1).pi, mfold);
            j["mfold"] = {{"m", mfold}, {"value", to_string(v)}, {"approx", v.get_d()}};
        }
        std::cout << j.dump(2) << "\n";
    });

    // theorem1 build | alpha | sample
    ConstructionOpts tco;
    unsigned stages = 4, steps = 6;
    std::size_t len = 1u << 16;
    std::string json_path, surrogate = "lz78";
    AlphaParams ap;
    auto *th = app.add_subcommand("theorem1", "the sparse-measure construction");
    th->require_subcommand(1);
    auto *tbuild = th->add_subcommand("build", "build stages 0..S and print their state");
    tco.add(tbuild);
    tbuild->add_option("--stages", stages);
    tbuild->add_option("--out", out_path);
    tbuild->callback([&] {
        Construction c(tco.params());
        nlohmann::json j = nlohmann::json::array();
        for (unsigned s = 0; s <= stages; ++s) {
            try {
                j.push_back(stage_json(c.stage(s)));
            } catch (const StageFailure &e) {
                j.push_back({{"stage", s}, {"failure", e.what()}});
                break;
            }
        }
        emit(out_path, j.dump(2) + "\n");
    });
    auto *talpha = th->add_subcommand("alpha", "build the oscillating word");
    tco.add(talpha);
    talpha->add_option("--steps", steps);
    talpha->add_option("--seed", seed);
    talpha->add_option("--even-level", ap.even_level);
    talpha->add_option("--candidates", ap.candidates);
    talpha->add_option("--depth", ap.depth);
    talpha->add_option("--code", surrogate, "code for the surrogate deficiency");
    talpha->add_option("--out", out_path)->required();
    talpha->add_option("--json", json_path, "trace as JSON");
    talpha->add_flag("--text", text);
    talpha->callback([&] {
        auto c = std::make_shared<Construction>(tco.params());
        ap.steps = steps;
        ap.seed = seed;
        const auto tr = build_alpha(c, ap, *make_coder(surrogate));
        write_word(out_path, tr.word, text);
        if (!json_path.empty()) emit(json_path, tr.to_json().dump(2) + "\n");
        std::cout << "alpha: " << tr.word.size() << " symbols, " << tr.fragments.size() << " fragments\n";
    });
    unsigned sstage = 0;
    auto *tsample = th->add_subcommand("sample", "a typical sequence of the measure");
    tco.add(tsample);
    tsample->add_option("--seed", seed);
    tsample->add_option("--len", len);
    tsample->add_option("--stage", sstage, "stage whose columns are sampled; default: the first tall enough");
    tsample->add_option("--out", out_path)->required();
    tsample->add_flag("--text", text);
    tsample->callback([&] {
        Construction c(tco.params());
        unsigned s = sstage;
        if (s == 0)
            while (c.column_height(s) < len) ++s;
        write_word(out_path, sample_sequence(c, seed, len, s), text);
    });

    // deficiency
    ConstructionOpts dco;
    std::string measure_spec = "theorem1", code_spec = "lz78", sigma_name = "log2";
    uint64_t depth = 64;
    auto *def = app.add_subcommand("deficiency", "surrogate deficiency -log P(x[0..n)) - L(x[0..n))");
    dco.add(def);
    def->add_option("--measure", measure_spec, "theorem1, bernoulli:P, flip:P or markov:FILE");
    def->add_option("--code", code_spec);
    def->add_option("--depth", depth, "theorem1 evaluator depth");
    def->add_option("--in", in_path)->required();
    def->add_option("--stride", stride);
    def->add_option("--csv", csv_path);
    def->add_flag("--text", text);
    def->callback([&] {
        const auto x = read_word(in_path, text);
        const auto m = make_measure(measure_spec, dco, depth);
        const auto curve = deficiency_curve(x, *m, *make_coder(code_spec), stride);
        std::string out = "n,neg_log2_prob,code_bits,deficiency\n";
        for (std::size_t i = 0; i < curve.n.size(); ++i)
            out += std::to_string(curve.n[i]) + "," + fmt_double(curve.neg_log2_prob[i]) + "," + std::to_string(curve.code_bits[i]) +
                   "," + fmt_double(curve.value[i]) + "\n";
        emit(csv_path, out);
    });

    // sources
    std::string source_spec = "bernoulli:1/2";
    std::size_t n = 1u << 20;
    std::vector<std::size_t> blocks{64, 1024, 16384};
    auto *src = app.add_subcommand("source", "finite-state sources");
    src->require_subcommand(1);
    auto *ssample = src->add_subcommand("sample", "draw a sample");
    auto *sentropy = src->add_subcommand("entropy", "entropy rate in bits per symbol");
    auto *srob = src->add_subcommand("robustness", "ratio curves of a coder and its block versions");
    for (auto *s : {ssample, sentropy, srob}) s->add_option("--source", source_spec, "bernoulli:P, flip:P or markov:FILE");
    ssample->add_option("--seed", seed);
    ssample->add_option("--len", len);
    ssample->add_option("--out", out_path)->required();
    ssample->add_flag("--text", text);
    ssample->callback([&] { write_word(out_path, parse_source(source_spec).source.sample(seed, len), text); });
    sentropy->callback([&] { std::cout << fmt_double(parse_source(source_spec).source.entropy_rate()) << "\n"; });
    srob->add_option("--coder", coder_name);
    srob->add_option("--window", window);
    srob->add_option("--n", n);
    srob->add_option("--blocks", blocks);
    srob->add_option("--seed", seed);
    srob->add_option("--stride", stride);
    srob->add_option("--csv", csv_path);
    srob->callback([&] {
        const auto ns = parse_source(source_spec);
        const auto rep = robustness_experiment(ns.source, make_coder(coder_spec()), n, blocks, seed, stride);
        std::string out = "curve,n,bits,ratio\n";
        const auto rows = [&](const std::string &label, const RatioCurve &c) {
            for (const auto &p : c) out += label + "," + std::to_string(p.n) + "," + std::to_string(p.bits) + "," + fmt_double(p.ratio_d()) + "\n";
        };
        rows("full", rep.full);
        for (const auto &[blk, c] : rep.blocks) rows("block-" + std::to_string(blk), c);
        emit(csv_path, out);
        std::cerr << "entropy " << fmt_double(rep.entropy) << ", final ratio " << fmt_double(rep.final_ratio()) << "\n";
    });

    // experiment run CONFIG
    std::string config_path, out_dir;
    auto *exp = app.add_subcommand("experiment", "configured experiments");
    exp->require_subcommand(1);
    auto *erun = exp->add_subcommand("run", "run one experiment from a JSON config");
    erun->add_option("config", config_path)->required()->check(CLI::ExistingFile);
    erun->add_option("--out", out_dir, "output directory, overrides output_dir");
    erun->callback([&] {
        std::ifstream in(config_path);
        auto cfg = ExperimentConfig::from_json(nlohmann::json::parse(in));
        if (!out_dir.empty()) cfg.output_dir = out_dir;
        const auto res = run_experiment(cfg);
        res.write(cfg.output_dir);
        std::cout << res.summary.dump(2) << "\n";
    });

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError &e) {
        return app.exit(e);
    } catch (const MalformedInput &e) {
        std::cerr << "lzr: malformed input: " << e.what() << "\n";
        return 3;
    } catch (const StageFailure &e) {
        std::cerr << "lzr: stage failure: " << e.what() << "\n";
        return 4;
    } catch (const std::exception &e) {
        std::cerr << "lzr: " << e.what() << "\n";
        return 2;
    }
    return 0;
}
