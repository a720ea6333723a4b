#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <cmath>

#include "hmmsprt/deterministic.hpp"
#include "hmmsprt/equivalence.hpp"
#include "hmmsprt/errors.hpp"
#include "hmmsprt/examples.hpp"
#include "hmmsprt/lyapunov.hpp"
#include "hmmsprt/model_io.hpp"
#include "hmmsprt/sprt.hpp"
#include "hmmsprt/support_chain.hpp"

namespace py = pybind11;
using namespace hmmsprt;

namespace {

// Rationals cross the boundary as "p/q" strings; Python's Fraction
// round-trips them losslessly.
std::string r(const Rational& v) { return rat_str(v); }

Dist named_dist(const ModelFile& mf, const std::string& name) {
    auto it = mf.initial_distributions.find(name);
    if (it != mf.initial_distributions.end()) return it->second;
    return dirac(mf.hmm, name);
}

Word parse_word(const Hmm& h, const std::vector<std::string>& letters) {
    Word w;
    for (const auto& a : letters) w.push_back(h.letter_index(a));
    return w;
}

const char* dist_verdict(Distinguishability d) {
    switch (d) {
        case Distinguishability::Distinguishable: return "distinguishable";
        case Distinguishability::NotDistinguishable:
            return "not-distinguishable";
        case Distinguishability::Unknown: return "unknown";
    }
    return "?";
}

MortalityInstance instance_from(
    const std::vector<std::string>& states,
    const std::vector<std::string>& alphabet,
    const std::vector<std::vector<std::vector<int>>>& phi) {
    MortalityInstance inst;
    inst.states = states;
    inst.alphabet = alphabet;
    inst.phi = phi;
    return inst;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "likelihood-ratio and SPRT analysis over hidden Markov models";

    py::register_exception<Error>(m, "AnalysisError");

    py::class_<ModelFile>(m, "Model")
        .def_static("from_json", &parse_model, py::arg("text"))
        .def_static("from_file", &load_model, py::arg("path"))
        .def_property_readonly(
            "states", [](const ModelFile& mf) { return mf.hmm.states; })
        .def_property_readonly(
            "alphabet", [](const ModelFile& mf) { return mf.hmm.alphabet; })
        .def_property_readonly("distributions",
                               [](const ModelFile& mf) {
                                   std::vector<std::string> names;
                                   for (const auto& [k, v] :
                                        mf.initial_distributions)
                                       names.push_back(k);
                                   return names;
                               })
        .def("to_json", &model_to_json)
        .def("digest", &model_digest)
        .def("save", &save_model, py::arg("path"));

    m.def("list_examples", [] {
        std::vector<py::dict> out;
        for (const auto& f : builtin_fixtures()) {
            py::dict d;
            d["name"] = f.name;
            d["description"] = f.description;
            out.push_back(d);
        }
        return out;
    });
    m.def("example", [](const std::string& name) { return fixture(name).model; },
          py::arg("name"));

    m.def(
        "trace_prob",
        [](const ModelFile& mf, const std::string& pi,
           const std::vector<std::string>& word) {
            return r(trace_prob(mf.hmm, named_dist(mf, pi),
                                parse_word(mf.hmm, word)));
        },
        py::arg("model"), py::arg("pi"), py::arg("word"));

    m.def(
        "sample_word",
        [](const ModelFile& mf, const std::string& pi, std::size_t steps,
           std::uint64_t seed) {
            Rng rng = Rng::stream(seed, 0);
            Run run = sample_run(mf.hmm, named_dist(mf, pi), steps, rng);
            std::vector<std::string> letters;
            for (int a : run.letters) letters.push_back(mf.hmm.alphabet[a]);
            return letters;
        },
        py::arg("model"), py::arg("pi"), py::arg("steps"), py::arg("seed") = 0);

    m.def(
        "are_equivalent",
        [](const ModelFile& mf, const std::string& pi1, const std::string& pi2) {
            return are_equivalent(mf.hmm, named_dist(mf, pi1),
                                  named_dist(mf, pi2));
        },
        py::arg("model"), py::arg("pi1"), py::arg("pi2"));

    m.def(
        "distinguishability",
        [](const ModelFile& mf, const std::string& pi1, const std::string& pi2,
           std::size_t budget) {
            auto v = distinguishability(mf.hmm, named_dist(mf, pi1),
                                        named_dist(mf, pi2), budget);
            py::dict d;
            d["verdict"] = dist_verdict(v.kind);
            d["explored"] = v.explored;
            if (v.kind == Distinguishability::NotDistinguishable) {
                std::string w;
                for (int a : v.witness) w += mf.hmm.alphabet[a];
                d["witness"] = w;
                d["witness_conditionals_equivalent"] =
                    v.witness_conditionals_equivalent;
            }
            return d;
        },
        py::arg("model"), py::arg("pi1"), py::arg("pi2"),
        py::arg("budget") = 100000);

    m.def(
        "tv_min_mass",
        [](const ModelFile& mf, const std::string& pi1, const std::string& pi2,
           std::size_t n) {
            return r(tv_min_mass(mf.hmm, named_dist(mf, pi1),
                                 named_dist(mf, pi2), n));
        },
        py::arg("model"), py::arg("pi1"), py::arg("pi2"), py::arg("n"));

    m.def(
        "sprt",
        [](const ModelFile& mf, const std::string& pi1, const std::string& pi2,
           double alpha, double beta, std::size_t replicas,
           std::size_t max_steps, std::uint64_t seed, const std::string& sampler,
           unsigned threads) {
            auto th = Thresholds::from_error_bounds(alpha, beta);
            auto stats = mc_sprt(mf.hmm, named_dist(mf, pi1),
                                 named_dist(mf, pi2), th, replicas, max_steps,
                                 seed, sampler == "pi1", threads);
            py::dict d;
            d["replicas"] = stats.replicas;
            d["count_pi1"] = stats.count_pi1;
            d["count_pi2"] = stats.count_pi2;
            d["count_undecided"] = stats.count_undecided;
            d["error_rate"] = stats.error_rate;
            d["error_stderr"] = stats.error_stderr;
            d["mean_stopping_time"] = stats.mean_stopping_time;
            d["undecided_fraction"] = stats.undecided_fraction;
            d["zero_mass_count"] = stats.zero_mass_count;
            d["threshold_count"] = stats.threshold_count;
            return d;
        },
        py::arg("model"), py::arg("pi1"), py::arg("pi2"), py::arg("alpha"),
        py::arg("beta"), py::arg("replicas") = 1000,
        py::arg("max_steps") = 1000000, py::arg("seed") = 0,
        py::arg("sampler") = "pi2", py::arg("threads") = 0);

    m.def(
        "loglik_series",
        [](const ModelFile& mf, const std::string& sampler,
           const std::string& pi1, const std::string& pi2, std::size_t n,
           std::uint64_t seed) {
            return loglik_series(mf.hmm, named_dist(mf, sampler),
                                 named_dist(mf, pi1), named_dist(mf, pi2), n,
                                 seed);
        },
        py::arg("model"), py::arg("sampler"), py::arg("pi1"), py::arg("pi2"),
        py::arg("n"), py::arg("seed") = 0);

    m.def("slope_estimate", &slope_estimate, py::arg("series"),
          py::arg("burn_in_fraction") = 0.1);

    m.def(
        "exponent_profile",
        [](const ModelFile& mf, const std::string& pi1, const std::string& pi2) {
            auto profile = exponent_profile(mf.hmm, named_dist(mf, pi1),
                                            named_dist(mf, pi2));
            std::vector<py::dict> out;
            for (const auto& e : profile.entries) {
                py::dict d;
                d["class"] = exponent_class_name(e.cls);
                d["probability"] = r(e.probability);
                out.push_back(d);
            }
            return out;
        },
        py::arg("model"), py::arg("pi1"), py::arg("pi2"));

    m.def(
        "prob_e0",
        [](const ModelFile& mf, const std::string& pi1, const std::string& pi2) {
            return r(prob_E0(mf.hmm, named_dist(mf, pi1), named_dist(mf, pi2)));
        },
        py::arg("model"), py::arg("pi1"), py::arg("pi2"));
    m.def(
        "prob_einf",
        [](const ModelFile& mf, const std::string& pi1, const std::string& pi2) {
            return r(prob_Einf(mf.hmm, named_dist(mf, pi1),
                               named_dist(mf, pi2)));
        },
        py::arg("model"), py::arg("pi1"), py::arg("pi2"));

    m.def(
        "det_exponents",
        [](const ModelFile& mf, const std::string& q1, const std::string& q2) {
            auto exps = exact_exponents(mf.hmm, mf.hmm.state_index(q1),
                                        mf.hmm.state_index(q2));
            std::vector<py::dict> out;
            for (const auto& [value, prob] : exps) {
                py::dict d;
                d["exponent"] = value.str();
                d["value"] = value.to_double();
                d["probability"] = r(prob);
                d["is_neg_infinity"] = value.is_neg_infinity();
                d["is_zero"] = value.is_zero();
                out.push_back(d);
            }
            return out;
        },
        py::arg("model"), py::arg("q1"), py::arg("q2"));

    m.def("is_deterministic",
          [](const ModelFile& mf) { return is_deterministic(mf.hmm); });

    m.def(
        "candidate_exponents",
        [](const ModelFile& mf, std::size_t n, std::size_t replicas,
           std::uint64_t seed, unsigned threads) {
            McConfig cfg;
            cfg.n = n;
            cfg.replicas = replicas;
            cfg.seed = seed;
            cfg.threads = threads;
            auto cands = candidate_exponents(mf.hmm, cfg);
            std::vector<py::dict> out;
            for (const auto& c : cands) {
                py::dict d;
                d["defined"] = c.defined;
                d["dead_fraction"] = c.dead_fraction;
                if (c.defined) {
                    d["lambda1"] = c.lambda1.mean;
                    d["lambda2"] = c.lambda2.mean;
                    d["difference"] = c.difference;
                    d["difference_stderr"] = c.difference_stderr;
                }
                out.push_back(d);
            }
            return out;
        },
        py::arg("model"), py::arg("n") = 100000, py::arg("replicas") = 32,
        py::arg("seed") = 0, py::arg("threads") = 0);

    m.def(
        "mortality_gadget",
        [](const std::string& kind, const std::vector<std::string>& states,
           const std::vector<std::string>& alphabet,
           const std::vector<std::vector<std::vector<int>>>& phi) {
            MortalityInstance inst = instance_from(states, alphabet, phi);
            if (kind == "einf") return mortality_to_einf_gadget(inst);
            if (kind == "e0") return mortality_to_e0_gadget(inst);
            throw Error("gadget kind must be 'einf' or 'e0'");
        },
        py::arg("kind"), py::arg("states"), py::arg("alphabet"), py::arg("phi"));

    m.def(
        "brute_force_mortal",
        [](const std::vector<std::string>& states,
           const std::vector<std::string>& alphabet,
           const std::vector<std::vector<std::vector<int>>>& phi) {
            return brute_force_mortal(instance_from(states, alphabet, phi));
        },
        py::arg("states"), py::arg("alphabet"), py::arg("phi"));
}
