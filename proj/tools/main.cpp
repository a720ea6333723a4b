// Command-line front end: model validation, simulation, SPRT runs,
// exponent analyses and the built-in example/gadget constructions.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>

#include <CLI11.hpp>
#include <json.hpp>

#include "hmmsprt/deterministic.hpp"
#include "hmmsprt/equivalence.hpp"
#include "hmmsprt/errors.hpp"
#include "hmmsprt/examples.hpp"
#include "hmmsprt/lyapunov.hpp"
#include "hmmsprt/model_io.hpp"
#include "hmmsprt/sprt.hpp"
#include "hmmsprt/support_chain.hpp"

using namespace hmmsprt;
using nlohmann::json;

namespace {

struct Global {
    std::uint64_t seed = 0;
    unsigned threads = 0;
    std::string format = "text";  // text | csv | structured
};

std::string fnum(double v) {
    if (std::isinf(v)) return v < 0 ? "-inf" : "inf";
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return buf;
}

json num_json(double v) {
    if (std::isinf(v)) return v < 0 ? json("-inf") : json("inf");
    return json(v);
}

struct Reporter {
    const Global& g;
    std::string command;
    json body = json::object();
    std::string text;
    std::string csv;
    std::chrono::steady_clock::time_point start =
        std::chrono::steady_clock::now();

    Reporter(const Global& g, std::string cmd) : g(g), command(std::move(cmd)) {}

    void model(const ModelFile& mf) { body["model_digest"] = model_digest(mf); }

    int emit() {
        if (g.format == "structured") {
            json out;
            out["command"] = command;
            out["seed"] = g.seed;
            for (auto it = body.begin(); it != body.end(); ++it)
                out[it.key()] = it.value();
            out["timing_ms"] =
                std::chrono::duration<double, std::milli>(
                    std::chrono::steady_clock::now() - start)
                    .count();
            std::cout << out.dump(2) << "\n";
        } else if (g.format == "csv" && !csv.empty()) {
            std::cout << csv;
        } else {
            std::cout << text;
        }
        return 0;
    }
};

const char* verdict_name(SprtVerdict v) {
    switch (v) {
        case SprtVerdict::Pi1: return "pi1";
        case SprtVerdict::Pi2: return "pi2";
        case SprtVerdict::Undecided: return "undecided";
    }
    return "?";
}

Dist named_dist(const ModelFile& mf, const std::string& name) {
    auto it = mf.initial_distributions.find(name);
    if (it != mf.initial_distributions.end()) return it->second;
    // fall back to a Dirac distribution on a state of that name
    return dirac(mf.hmm, name);
}

std::string support_name(const Hmm& h, std::uint64_t mask) {
    std::string out = "{";
    bool first = true;
    for (std::size_t q = 0; q < h.num_states(); ++q)
        if (mask >> q & 1) {
            if (!first) out += ",";
            out += h.states[q];
            first = false;
        }
    return out + "}";
}

int cmd_validate(const Global& g, const std::string& path) {
    Reporter rep(g, "validate");
    ModelFile mf = load_model(path);  // throws with a named row on failure
    rep.model(mf);
    rep.body["states"] = mf.hmm.num_states();
    rep.body["letters"] = mf.hmm.num_letters();
    rep.body["valid"] = true;
    rep.text = "valid model: " + std::to_string(mf.hmm.num_states()) +
               " states, " + std::to_string(mf.hmm.num_letters()) +
               " letters, " + std::to_string(mf.initial_distributions.size()) +
               " named distributions\n";
    return rep.emit();
}

int cmd_sample(const Global& g, const std::string& path, const std::string& pi,
               std::size_t steps) {
    ModelFile mf = load_model(path);
    Reporter rep(g, "sample");
    rep.model(mf);
    Rng rng = Rng::stream(g.seed, 0);
    Run run = sample_run(mf.hmm, named_dist(mf, pi), steps, rng);
    json letters = json::array(), states = json::array();
    std::string line;
    for (std::size_t i = 0; i < run.letters.size(); ++i) {
        if (i) line += " ";
        line += mf.hmm.alphabet[run.letters[i]];
        letters.push_back(mf.hmm.alphabet[run.letters[i]]);
    }
    for (int s : run.states) states.push_back(mf.hmm.states[s]);
    rep.body["letters"] = letters;
    rep.body["states"] = states;
    rep.text = line + "\n";
    rep.csv = "step,letter\n";
    for (std::size_t i = 0; i < run.letters.size(); ++i)
        rep.csv += std::to_string(i + 1) + "," +
                   mf.hmm.alphabet[run.letters[i]] + "\n";
    return rep.emit();
}

int cmd_sprt(const Global& g, const std::string& path, const std::string& pi1,
             const std::string& pi2, double alpha, double beta,
             std::optional<double> log_alpha, std::optional<double> log_beta,
             const std::string& sampler, std::size_t replicas,
             std::size_t max_steps) {
    ModelFile mf = load_model(path);
    Thresholds th = log_alpha || log_beta
                        ? Thresholds::from_log_error_bounds(
                              log_alpha.value_or(std::log(alpha)),
                              log_beta.value_or(std::log(beta)))
                        : Thresholds::from_error_bounds(alpha, beta);
    auto stats = mc_sprt(mf.hmm, named_dist(mf, pi1), named_dist(mf, pi2), th,
                         replicas, max_steps, g.seed, sampler == "pi1",
                         g.threads);
    Reporter rep(g, "sprt");
    rep.model(mf);
    rep.body["thresholds"] = {{"log_lower", th.log_lower},
                              {"log_upper", th.log_upper}};
    rep.body["replicas"] = stats.replicas;
    rep.body["sampler"] = sampler;
    rep.body["count_pi1"] = stats.count_pi1;
    rep.body["count_pi2"] = stats.count_pi2;
    rep.body["count_undecided"] = stats.count_undecided;
    rep.body["error_rate"] = stats.error_rate;
    rep.body["error_stderr"] = stats.error_stderr;
    rep.body["mean_stopping_time"] = stats.mean_stopping_time;
    rep.body["stopping_quartiles"] = {stats.stopping_quartiles[0],
                                      stats.stopping_quartiles[1],
                                      stats.stopping_quartiles[2]};
    rep.body["undecided_fraction"] = stats.undecided_fraction;
    rep.body["zero_mass_count"] = stats.zero_mass_count;
    rep.body["zero_mass_mean_n"] = stats.zero_mass_mean_n;
    rep.body["threshold_count"] = stats.threshold_count;
    rep.body["threshold_mean_n"] = stats.threshold_mean_n;

    std::string t;
    t += "sprt: " + std::to_string(replicas) + " replicas sampled from " +
         sampler + "\n";
    t += "  thresholds: A = " + fnum(th.log_lower) + ", B = " +
         fnum(th.log_upper) + "\n";
    t += "  verdicts: pi1 " + std::to_string(stats.count_pi1) + ", pi2 " +
         std::to_string(stats.count_pi2) + ", undecided " +
         std::to_string(stats.count_undecided) + "\n";
    t += "  error rate: " + fnum(stats.error_rate) + " (stderr " +
         fnum(stats.error_stderr) + ")\n";
    t += "  stopping time: mean " + fnum(stats.mean_stopping_time) +
         ", quartiles " + fnum(stats.stopping_quartiles[0]) + "/" +
         fnum(stats.stopping_quartiles[1]) + "/" +
         fnum(stats.stopping_quartiles[2]) + "\n";
    t += "  stopped by zero mass: " + std::to_string(stats.zero_mass_count) +
         " (mean n " + fnum(stats.zero_mass_mean_n) + "), by threshold: " +
         std::to_string(stats.threshold_count) + " (mean n " +
         fnum(stats.threshold_mean_n) + ")\n";
    rep.text = t;

    rep.csv = "replica,verdict,stopped_at,final_log_ratio\n";
    for (const auto& o : stats.outcomes)
        rep.csv += std::to_string(o.replica) + "," + verdict_name(o.verdict) +
                   "," +
                   (o.stopped_at ? std::to_string(*o.stopped_at) : "") + "," +
                   fnum(o.final_log_ratio) + "\n";
    return rep.emit();
}

int cmd_loglik(const Global& g, const std::string& path, const std::string& pi1,
               const std::string& pi2, const std::string& sampler,
               std::size_t steps, const std::string& out_path) {
    ModelFile mf = load_model(path);
    Dist p1 = named_dist(mf, pi1), p2 = named_dist(mf, pi2);
    const Dist& s = sampler == "pi1" ? p1 : p2;
    auto series = loglik_series(mf.hmm, s, p1, p2, steps, g.seed);
    std::string csv = "step,log_likelihood\n";
    for (std::size_t i = 0; i < series.size(); ++i)
        csv += std::to_string(i) + "," + fnum(series[i]) + "\n";
    if (!out_path.empty()) {
        std::ofstream out(out_path);
        if (!out) throw Error("cannot write '" + out_path + "'");
        out << csv;
    }
    Reporter rep(g, "loglik");
    rep.model(mf);
    rep.body["steps"] = steps;
    rep.body["final"] = num_json(series.back());
    json arr = json::array();
    for (double v : series) arr.push_back(num_json(v));
    rep.body["series"] = arr;
    rep.csv = csv;
    rep.text = !out_path.empty()
                   ? "wrote " + std::to_string(series.size()) + " rows to " +
                         out_path + "\n"
                   : csv;
    return rep.emit();
}

int cmd_exponents(const Global& g, const std::string& path,
                  const std::string& pi1, const std::string& pi2,
                  bool mc_refine, std::size_t node_cap, std::size_t budget) {
    ModelFile mf = load_model(path);
    Dist p1 = named_dist(mf, pi1), p2 = named_dist(mf, pi2);
    auto chain = build_support_chain(mf.hmm, p1, p2, node_cap);
    auto profile = exponent_profile(mf.hmm, p1, p2, node_cap, budget);

    Reporter rep(g, "exponents");
    rep.model(mf);
    json entries = json::array();
    std::string t = "exponent profile (" +
                    std::to_string(profile.entries.size()) +
                    " bottom SCCs, bound " +
                    std::to_string(profile.state_bound) + "):\n";
    std::string c = "class,probability,estimate\n";
    for (const auto& e : profile.entries) {
        std::optional<double> est;
        if (mc_refine && e.cls == ExponentClass::NegFinite)
            est = refine_exponent_estimate(mf.hmm, chain, e.component, 100000,
                                           g.seed);
        json j;
        j["class"] = exponent_class_name(e.cls);
        j["probability"] = rat_str(e.probability);
        if (est) j["estimate"] = *est;
        entries.push_back(j);
        t += "  " + std::string(exponent_class_name(e.cls)) + "  " +
             rat_str(e.probability) +
             (est ? "  (slope approx " + fnum(*est) + ")" : "") + "\n";
        c += std::string(exponent_class_name(e.cls)) + "," +
             rat_str(e.probability) + "," + (est ? fnum(*est) : "") + "\n";
    }
    rep.body["profile"] = entries;
    rep.body["negfinite_handles"] = profile.negfinite_handles;
    rep.body["bound"] = profile.state_bound;
    rep.text = t;
    rep.csv = c;
    return rep.emit();
}

int cmd_support_chain(const Global& g, const std::string& path,
                      const std::string& pi1, const std::string& pi2,
                      const std::string& dot_path, std::size_t node_cap) {
    ModelFile mf = load_model(path);
    Dist p1 = named_dist(mf, pi1), p2 = named_dist(mf, pi2);
    auto chain = build_support_chain(mf.hmm, p1, p2, node_cap);
    auto classes = classify_bottom_sccs(mf.hmm, chain);

    std::string dot = "digraph support_chain {\n";
    for (std::size_t i = 0; i < chain.nodes.size(); ++i) {
        auto [s, q] = chain.nodes[i];
        int comp = chain.scc.component_of[i];
        std::string color = "white";
        std::string label = support_name(mf.hmm, s) + "," + mf.hmm.states[q];
        for (std::size_t k = 0; k < chain.bottom_components.size(); ++k)
            if (chain.bottom_components[k] == comp) {
                label += "\\n" + std::string(exponent_class_name(classes[k]));
                switch (classes[k]) {
                    case ExponentClass::NegInf: color = "lightcoral"; break;
                    case ExponentClass::Zero: color = "lightblue"; break;
                    case ExponentClass::NegFinite: color = "lightgreen"; break;
                    case ExponentClass::UnknownFinite: color = "gray"; break;
                }
            }
        dot += "  n" + std::to_string(i) + " [label=\"" + label +
               "\" style=filled fillcolor=" + color + "];\n";
    }
    for (std::size_t i = 0; i < chain.nodes.size(); ++i)
        for (std::size_t j = 0; j < chain.nodes.size(); ++j)
            if (chain.t.at(i, j) != 0)
                dot += "  n" + std::to_string(i) + " -> n" + std::to_string(j) +
                       " [label=\"" + rat_str(chain.t.at(i, j)) + "\"];\n";
    dot += "}\n";
    if (!dot_path.empty()) {
        std::ofstream out(dot_path);
        if (!out) throw Error("cannot write '" + dot_path + "'");
        out << dot;
    }

    Reporter rep(g, "support-chain");
    rep.model(mf);
    rep.body["nodes"] = chain.nodes.size();
    rep.body["bottom_sccs"] = chain.bottom_components.size();
    json cls = json::array();
    for (auto c : classes) cls.push_back(exponent_class_name(c));
    rep.body["bottom_classes"] = cls;
    rep.text = "support chain: " + std::to_string(chain.nodes.size()) +
               " nodes, " + std::to_string(chain.bottom_components.size()) +
               " bottom SCCs\n";
    if (dot_path.empty()) rep.text += dot;
    return rep.emit();
}

int cmd_lyapunov(const Global& g, const std::string& path, std::size_t n,
                 std::size_t replicas) {
    ModelFile mf = load_model(path);
    McConfig cfg;
    cfg.n = n;
    cfg.replicas = replicas;
    cfg.seed = g.seed;
    cfg.threads = g.threads;
    auto cands = candidate_exponents(mf.hmm, cfg);

    Reporter rep(g, "lyapunov");
    rep.model(mf);
    json arr = json::array();
    std::string t = "candidate likelihood exponents (" +
                    std::to_string(cands.size()) + " right-bottom SCCs):\n";
    std::string c =
        "scc_id,lambda1,stderr1,lambda2,stderr2,diff,stderr_diff\n";
    for (std::size_t i = 0; i < cands.size(); ++i) {
        const auto& cand = cands[i];
        json j;
        j["scc_id"] = i;
        j["pairs"] = cand.r_nodes.size();
        j["defined"] = cand.defined;
        j["dead_fraction"] = cand.dead_fraction;
        if (cand.defined) {
            j["lambda1"] = cand.lambda1.mean;
            j["stderr1"] = cand.lambda1.stderr_;
            j["lambda2"] = cand.lambda2.mean;
            j["stderr2"] = cand.lambda2.stderr_;
            j["diff"] = cand.difference;
            j["stderr_diff"] = cand.difference_stderr;
        }
        arr.push_back(j);
        if (cand.defined) {
            t += "  R" + std::to_string(i) + ": lambda1 " +
                 fnum(cand.lambda1.mean) + " +- " + fnum(cand.lambda1.stderr_) +
                 ", lambda2 " + fnum(cand.lambda2.mean) + " +- " +
                 fnum(cand.lambda2.stderr_) + ", diff " +
                 fnum(cand.difference) + " +- " + fnum(cand.difference_stderr) +
                 "\n";
            c += std::to_string(i) + "," + fnum(cand.lambda1.mean) + "," +
                 fnum(cand.lambda1.stderr_) + "," + fnum(cand.lambda2.mean) +
                 "," + fnum(cand.lambda2.stderr_) + "," +
                 fnum(cand.difference) + "," + fnum(cand.difference_stderr) +
                 "\n";
        } else {
            t += "  R" + std::to_string(i) +
                 ": all trajectories dead (contributes only -inf)\n";
            c += std::to_string(i) + ",,,,,,\n";
        }
    }
    rep.body["candidates"] = arr;
    rep.text = t;
    rep.csv = c;
    return rep.emit();
}

int cmd_det_exponents(const Global& g, const std::string& path,
                      const std::string& q1, const std::string& q2) {
    ModelFile mf = load_model(path);
    auto exps = exact_exponents(mf.hmm, mf.hmm.state_index(q1),
                                mf.hmm.state_index(q2));
    Reporter rep(g, "det-exponents");
    rep.model(mf);
    json arr = json::array();
    std::string t = "exact likelihood exponents:\n";
    std::string c = "exponent,value,probability,class\n";
    for (const auto& [value, prob] : exps) {
        const char* cls = value.is_neg_infinity() ? "neg-infinity"
                          : value.is_zero()       ? "zero"
                                                  : "negative-finite";
        json j;
        j["exponent"] = value.str();
        j["value"] = num_json(value.to_double());
        j["probability"] = rat_str(prob);
        j["class"] = cls;
        arr.push_back(j);
        t += "  " + value.str() + "  (" + fnum(value.to_double()) + ")  " +
             "probability " + rat_str(prob) + "  [" + cls + "]\n";
        c += "\"" + value.str() + "\"," + fnum(value.to_double()) + "," +
             rat_str(prob) + "," + cls + "\n";
    }
    rep.body["exponents"] = arr;
    rep.text = t;
    rep.csv = c;
    return rep.emit();
}

int cmd_distance(const Global& g, const std::string& path,
                 const std::string& pi1, const std::string& pi2,
                 std::size_t depth, std::size_t budget) {
    ModelFile mf = load_model(path);
    Dist p1 = named_dist(mf, pi1), p2 = named_dist(mf, pi2);
    auto verdict = distinguishability(mf.hmm, p1, p2, budget);
    const char* name = verdict.kind == Distinguishability::Distinguishable
                           ? "distinguishable"
                       : verdict.kind == Distinguishability::NotDistinguishable
                           ? "not-distinguishable"
                           : "unknown";
    Reporter rep(g, "distance");
    rep.model(mf);
    rep.body["verdict"] = name;
    rep.body["explored"] = verdict.explored;
    if (verdict.kind == Distinguishability::NotDistinguishable) {
        std::string w;
        for (int a : verdict.witness) w += mf.hmm.alphabet[a];
        rep.body["witness"] = w;
        rep.body["witness_conditionals_equivalent"] =
            verdict.witness_conditionals_equivalent;
    }
    json bn = json::array();
    std::string c = "n,B_n\n";
    for (std::size_t n = 0; n <= depth; ++n) {
        Rational b = tv_min_mass(mf.hmm, p1, p2, n);
        bn.push_back(rat_str(b));
        c += std::to_string(n) + "," + rat_str(b) + "\n";
    }
    rep.body["B_n"] = bn;
    rep.text = std::string("verdict: ") + name + "\n" + c;
    rep.csv = c;
    return rep.emit();
}

int cmd_gadget(const Global& g, const std::string& kind,
               const std::string& instance_path, const std::string& out_path) {
    MortalityInstance inst = load_mortality(instance_path);
    ModelFile mf;
    if (kind == "mortality-einf")
        mf = mortality_to_einf_gadget(inst);
    else if (kind == "mortality-e0")
        mf = mortality_to_e0_gadget(inst);
    else
        throw Error("unknown gadget '" + kind +
                    "' (expected mortality-einf or mortality-e0)");
    std::string body = model_to_json(mf) + "\n";
    if (!out_path.empty()) {
        std::ofstream out(out_path);
        if (!out) throw Error("cannot write '" + out_path + "'");
        out << body;
    }
    Reporter rep(g, "gadget");
    rep.model(mf);
    rep.body["kind"] = kind;
    rep.body["states"] = mf.hmm.num_states();
    rep.text = out_path.empty() ? body : "wrote model to " + out_path + "\n";
    return rep.emit();
}

int cmd_example(const Global& g, const std::string& name,
                const std::string& out_path) {
    Reporter rep(g, "example");
    if (name.empty()) {
        json arr = json::array();
        std::string t = "built-in examples:\n";
        for (const auto& f : builtin_fixtures()) {
            arr.push_back({{"name", f.name}, {"description", f.description}});
            t += "  " + f.name + ": " + f.description + "\n";
        }
        rep.body["examples"] = arr;
        rep.text = t;
        return rep.emit();
    }
    const Fixture& f = fixture(name);
    std::string body = model_to_json(f.model) + "\n";
    if (!out_path.empty()) {
        std::ofstream out(out_path);
        if (!out) throw Error("cannot write '" + out_path + "'");
        out << body;
    }
    rep.model(f.model);
    rep.body["name"] = f.name;
    rep.body["description"] = f.description;
    json exp = json::object();
    for (const auto& [k, v] : f.expected) exp[k] = v;
    rep.body["expected"] = exp;
    rep.text = out_path.empty() ? body : "wrote model to " + out_path + "\n";
    return rep.emit();
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"analysis of likelihood ratios and the SPRT over hidden "
                 "Markov models"};
    app.require_subcommand(1);
    Global g;
    app.add_option("--seed", g.seed, "master random seed")->capture_default_str();
    app.add_option("--threads", g.threads,
                   "worker threads for Monte Carlo loops (0 = auto)");
    app.add_option("--format", g.format, "output format")
        ->check(CLI::IsMember({"text", "csv", "structured"}))
        ->capture_default_str();

    std::function<int()> action;

    {
        auto* c = app.add_subcommand("validate", "check a model file");
        auto file = std::make_shared<std::string>();
        c->add_option("file", *file)->required();
        c->callback([&, file] { action = [&, file] { return cmd_validate(g, *file); }; });
    }
    {
        auto* c = app.add_subcommand("sample", "sample an observation run");
        auto file = std::make_shared<std::string>();
        auto pi = std::make_shared<std::string>("pi1");
        auto steps = std::make_shared<std::size_t>(20);
        c->add_option("file", *file)->required();
        c->add_option("--pi", *pi, "initial distribution or state name");
        c->add_option("--steps", *steps);
        c->callback([&, file, pi, steps] {
            action = [&, file, pi, steps] {
                return cmd_sample(g, *file, *pi, *steps);
            };
        });
    }
    {
        auto* c = app.add_subcommand("sprt", "Monte Carlo SPRT harness");
        auto file = std::make_shared<std::string>();
        auto pi1 = std::make_shared<std::string>("pi1");
        auto pi2 = std::make_shared<std::string>("pi2");
        auto alpha = std::make_shared<double>(0.01);
        auto beta = std::make_shared<double>(0.01);
        auto log_alpha = std::make_shared<std::optional<double>>();
        auto log_beta = std::make_shared<std::optional<double>>();
        auto sampler = std::make_shared<std::string>("pi2");
        auto replicas = std::make_shared<std::size_t>(1000);
        auto max_steps = std::make_shared<std::size_t>(1000000);
        c->add_option("file", *file)->required();
        c->add_option("--pi1", *pi1);
        c->add_option("--pi2", *pi2);
        c->add_option("--alpha", *alpha);
        c->add_option("--beta", *beta);
        c->add_option("--log-alpha", *log_alpha,
                      "ln(alpha), for bounds below double range");
        c->add_option("--log-beta", *log_beta, "ln(beta)");
        c->add_option("--sampler", *sampler)
            ->check(CLI::IsMember({"pi1", "pi2"}));
        c->add_option("--replicas", *replicas);
        c->add_option("--max-steps", *max_steps);
        c->callback([&, file, pi1, pi2, alpha, beta, log_alpha, log_beta,
                     sampler, replicas, max_steps] {
            action = [&, file, pi1, pi2, alpha, beta, log_alpha, log_beta,
                      sampler, replicas, max_steps] {
                return cmd_sprt(g, *file, *pi1, *pi2, *alpha, *beta, *log_alpha,
                                *log_beta, *sampler, *replicas, *max_steps);
            };
        });
    }
    {
        auto* c = app.add_subcommand("loglik", "log-likelihood series");
        auto file = std::make_shared<std::string>();
        auto pi1 = std::make_shared<std::string>("pi1");
        auto pi2 = std::make_shared<std::string>("pi2");
        auto sampler = std::make_shared<std::string>("pi2");
        auto steps = std::make_shared<std::size_t>(1000);
        auto out = std::make_shared<std::string>();
        c->add_option("file", *file)->required();
        c->add_option("--pi1", *pi1);
        c->add_option("--pi2", *pi2);
        c->add_option("--sampler", *sampler)
            ->check(CLI::IsMember({"pi1", "pi2"}));
        c->add_option("--steps", *steps);
        c->add_option("--out", *out, "write CSV here");
        c->callback([&, file, pi1, pi2, sampler, steps, out] {
            action = [&, file, pi1, pi2, sampler, steps, out] {
                return cmd_loglik(g, *file, *pi1, *pi2, *sampler, *steps, *out);
            };
        });
    }
    {
        auto* c = app.add_subcommand("exponents", "likelihood exponent profile");
        auto file = std::make_shared<std::string>();
        auto pi1 = std::make_shared<std::string>("pi1");
        auto pi2 = std::make_shared<std::string>("pi2");
        auto refine = std::make_shared<bool>(false);
        auto cap = std::make_shared<std::size_t>(100000);
        auto budget = std::make_shared<std::size_t>(100000);
        c->add_option("file", *file)->required();
        c->add_option("--pi1", *pi1);
        c->add_option("--pi2", *pi2);
        c->add_flag("--mc-refine", *refine,
                    "estimate negative-finite exponents numerically");
        c->add_option("--node-cap", *cap);
        c->add_option("--budget", *budget);
        c->callback([&, file, pi1, pi2, refine, cap, budget] {
            action = [&, file, pi1, pi2, refine, cap, budget] {
                return cmd_exponents(g, *file, *pi1, *pi2, *refine, *cap,
                                     *budget);
            };
        });
    }
    {
        auto* c = app.add_subcommand("support-chain",
                                     "support-tracking Markov chain");
        auto file = std::make_shared<std::string>();
        auto pi1 = std::make_shared<std::string>("pi1");
        auto pi2 = std::make_shared<std::string>("pi2");
        auto dot = std::make_shared<std::string>();
        auto cap = std::make_shared<std::size_t>(100000);
        c->add_option("file", *file)->required();
        c->add_option("--pi1", *pi1);
        c->add_option("--pi2", *pi2);
        c->add_option("--dot", *dot, "write the chain graph in DOT format");
        c->add_option("--node-cap", *cap);
        c->callback([&, file, pi1, pi2, dot, cap] {
            action = [&, file, pi1, pi2, dot, cap] {
                return cmd_support_chain(g, *file, *pi1, *pi2, *dot, *cap);
            };
        });
    }
    {
        auto* c = app.add_subcommand("lyapunov",
                                     "candidate exponents via matrix systems");
        auto file = std::make_shared<std::string>();
        auto n = std::make_shared<std::size_t>(100000);
        auto replicas = std::make_shared<std::size_t>(32);
        c->add_option("file", *file)->required();
        c->add_option("--n", *n, "trajectory length");
        c->add_option("--replicas", *replicas);
        c->callback([&, file, n, replicas] {
            action = [&, file, n, replicas] {
                return cmd_lyapunov(g, *file, *n, *replicas);
            };
        });
    }
    {
        auto* c = app.add_subcommand("det-exponents",
                                     "exact exponents for deterministic models");
        auto file = std::make_shared<std::string>();
        auto q1 = std::make_shared<std::string>();
        auto q2 = std::make_shared<std::string>();
        c->add_option("file", *file)->required();
        c->add_option("--q1", *q1, "start state tracked in the numerator")
            ->required();
        c->add_option("--q2", *q2, "start state generating observations")
            ->required();
        c->callback([&, file, q1, q2] {
            action = [&, file, q1, q2] {
                return cmd_det_exponents(g, *file, *q1, *q2);
            };
        });
    }
    {
        auto* c = app.add_subcommand("distance",
                                     "distinguishability and min-mass bounds");
        auto file = std::make_shared<std::string>();
        auto pi1 = std::make_shared<std::string>("pi1");
        auto pi2 = std::make_shared<std::string>("pi2");
        auto depth = std::make_shared<std::size_t>(6);
        auto budget = std::make_shared<std::size_t>(100000);
        c->add_option("file", *file)->required();
        c->add_option("--pi1", *pi1);
        c->add_option("--pi2", *pi2);
        c->add_option("--depth", *depth, "compute B_0..B_depth");
        c->add_option("--budget", *budget);
        c->callback([&, file, pi1, pi2, depth, budget] {
            action = [&, file, pi1, pi2, depth, budget] {
                return cmd_distance(g, *file, *pi1, *pi2, *depth, *budget);
            };
        });
    }
    {
        auto* c = app.add_subcommand("gadget",
                                     "mortality-instance constructions");
        auto kind = std::make_shared<std::string>();
        auto file = std::make_shared<std::string>();
        auto out = std::make_shared<std::string>();
        c->add_option("kind", *kind, "mortality-einf or mortality-e0")
            ->required();
        c->add_option("file", *file, "mortality instance file")->required();
        c->add_option("--out", *out, "write the model here");
        c->callback([&, kind, file, out] {
            action = [&, kind, file, out] {
                return cmd_gadget(g, *kind, *file, *out);
            };
        });
    }
    {
        auto* c = app.add_subcommand("example", "built-in example models");
        auto name = std::make_shared<std::string>();
        auto out = std::make_shared<std::string>();
        c->add_option("name", *name, "fixture name (omit to list)");
        c->add_option("--out", *out, "write the model here");
        c->callback([&, name, out] {
            action = [&, name, out] { return cmd_example(g, *name, *out); };
        });
    }

    // allow the global --seed/--threads/--format after the subcommand too
    for (auto* sub : app.get_subcommands(nullptr)) sub->fallthrough();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }
    try {
        return action();
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
