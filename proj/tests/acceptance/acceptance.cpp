// Acceptance suite: one criterion per function, one PASS/FAIL line each.
// Exits nonzero when any criterion fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "hmmsprt/deterministic.hpp"
#include "hmmsprt/equivalence.hpp"
#include "hmmsprt/errors.hpp"
#include "hmmsprt/examples.hpp"
#include "hmmsprt/lyapunov.hpp"
#include "hmmsprt/model.hpp"
#include "hmmsprt/sprt.hpp"
#include "hmmsprt/support_chain.hpp"

using namespace hmmsprt;

namespace {

struct Check {
    bool ok = true;
    std::string detail;

    void require(bool cond, const std::string& what) {
        if (!cond) {
            ok = false;
            if (!detail.empty()) detail += "; ";
            detail += what;
        }
    }
    void note(const std::string& what) {
        if (!detail.empty()) detail += "; ";
        detail += what;
    }
};

std::string fmt(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.6g", v);
    return buf;
}

Word letters_of(const Run& run) { return run.letters; }

const Fixture& fx(const char* name) { return fixture(name); }

// ---------------------------------------------------------------- 1
void criterion_intro(Check& c) {
    Hmm h = fx("intro").model.hmm;
    Dist p1 = dirac(h, "q1"), p2 = dirac(h, "q2");
    Word aba{h.letter_index("a"), h.letter_index("b"), h.letter_index("a")};
    c.require(trace_prob(h, p1, aba) == rat(4, 27), "P_q1(aba) != 4/27");
    c.require(trace_prob(h, p2, aba) == rat(2, 27), "P_q2(aba) != 2/27");
    ExactTracker t(h, p1, p2);
    for (int a : aba) t.step(a);
    c.require(t.likelihood() == rat(2), "tracker ratio after aba != 2");
    c.note("log-ratio " + fmt(t.log_likelihood_ratio()));
}

// ---------------------------------------------------------------- 2
void criterion_wald(Check& c) {
    const auto& f = fx("coin-bias");
    const Hmm& h = f.model.hmm;
    Dist p1 = f.model.initial_distributions.at("pi1");
    Dist p2 = f.model.initial_distributions.at("pi2");
    double alpha = 1e-3, beta = 1e-3;
    double ell = 0.5 * std::log((1.0 / 3.0) / 0.5) +
                 0.5 * std::log((2.0 / 3.0) / 0.5);
    double expected =
        (beta * std::log((1 - alpha) / beta) +
         (1 - beta) * std::log(alpha / (1 - beta))) /
        ell;
    auto th = Thresholds::from_error_bounds(alpha, beta);
    auto stats = mc_sprt(h, p1, p2, th, 10000, 1000000, 2024, false);
    c.require(std::abs(stats.mean_stopping_time - expected) <= 0.2 * expected,
              "mean N " + fmt(stats.mean_stopping_time) + " not within 20% of " +
                  fmt(expected));
    double err2 = static_cast<double>(stats.count_pi1) / 10000.0;
    c.require(err2 <= beta + 3 * stats.error_stderr + 1e-12,
              "P_pi2(output pi1) = " + fmt(err2) + " above beta band");
    auto stats1 = mc_sprt(h, p1, p2, th, 10000, 1000000, 2025, true);
    double err1 = static_cast<double>(stats1.count_pi2) / 10000.0;
    c.require(err1 <= alpha + 3 * stats1.error_stderr + 1e-12,
              "P_pi1(output pi2) = " + fmt(err1) + " above alpha band");
    c.note("mean N " + fmt(stats.mean_stopping_time) + " vs formula " +
           fmt(expected));
}

// ---------------------------------------------------------------- 3
void criterion_multi_exponent(Check& c) {
    const auto& f = fx("multi-exponent");
    const Hmm& h = f.model.hmm;
    Dist p1 = f.model.initial_distributions.at("pi1");
    Dist p2 = f.model.initial_distributions.at("pi2");
    auto profile = exponent_profile(h, p1, p2);
    Rational zero, negfinite, other;
    for (const auto& e : profile.entries) {
        if (e.cls == ExponentClass::Zero)
            zero += e.probability;
        else if (e.cls == ExponentClass::NegFinite)
            negfinite += e.probability;
        else
            other += e.probability;
    }
    c.require(zero == rat(1, 2) && negfinite == rat(1, 2) && other == 0,
              "profile != {negative-finite: 1/2, zero: 1/2}");

    auto th = Thresholds::from_error_bounds(0.25, 0.25);
    const std::size_t replicas = 10000;
    auto stats = mc_sprt(h, p1, p2, th, replicas, 10000, 7, false);
    double undecided = stats.undecided_fraction;
    double sigma = std::sqrt(0.5 * 0.5 / static_cast<double>(replicas));
    c.require(std::abs(undecided - 0.5) <= 3 * sigma,
              "undecided fraction " + fmt(undecided) + " not within 3 sigma of 1/2");
    c.note("undecided " + fmt(undecided));
}

// ---------------------------------------------------------------- 4
void criterion_mortal_branch(Check& c) {
    const auto& f = fx("mortal-branch");
    const Hmm& h = f.model.hmm;
    Dist p1 = f.model.initial_distributions.at("pi1");
    Dist p2 = f.model.initial_distributions.at("pi2");
    c.require(prob_Einf(h, p1, p2) == rat(1, 2), "prob_Einf != 1/2");

    const std::size_t runs = 4000, horizon = 3000;
    std::vector<double> alphas{1e-1, 1e-3, 1e-6};
    std::vector<Thresholds> grid;
    for (double a : alphas) grid.push_back(Thresholds::from_error_bounds(a, a));

    for (std::size_t gi = 0; gi < grid.size(); ++gi) {
        double sum = 0, sum_sq = 0;
        std::size_t count = 0;
        for (std::size_t i = 0; i < runs; ++i) {
            Rng rng = Rng::stream(4242, i);
            Run run = sample_run(h, p2, horizon, rng);
            Word w = letters_of(run);
            std::size_t at = 0;
            auto out = run_sprt(h, p1, p2, grid[gi],
                                [&]() { return w[at++]; }, horizon);
            if (out.stopped_at && out.zero_mass) {
                double n = static_cast<double>(*out.stopped_at);
                sum += n;
                sum_sq += n * n;
                ++count;
            }
        }
        double mean = sum / static_cast<double>(count);
        double var = sum_sq / static_cast<double>(count) - mean * mean;
        double stderr_mean = std::sqrt(var / static_cast<double>(count));
        // the true conditional mean approaches 3 from below as alpha -> 0,
        // so the empirical check carries the usual 3-sigma band
        c.require(mean <= 3 + 3 * stderr_mean,
                  "alpha=" + fmt(alphas[gi]) + ": conditional mean N " +
                      fmt(mean) + " above 3");
        if (gi == 0) c.note("mean N | zero-mass at alpha=0.1: " + fmt(mean));
    }

    // pathwise: N_{alpha,beta} <= N_bottom, monotone in the bounds, and
    // the supremum over shrinking bounds reaches N_bottom unless the
    // upper threshold fired first at the tightest bound
    std::size_t identity_checked = 0;
    for (std::size_t i = 0; i < 2000; ++i) {
        Rng rng = Rng::stream(777, i);
        Run run = sample_run(h, p2, horizon, rng);
        Word w = letters_of(run);
        std::size_t at = 0;
        auto nb = n_bottom(h, p1, [&]() { return w[at++]; }, horizon);
        std::vector<std::size_t> ns;
        SprtVerdict tightest_verdict = SprtVerdict::Undecided;
        for (const auto& th : grid) {
            at = 0;
            auto out = run_sprt(h, p1, p2, th, [&]() { return w[at++]; }, horizon);
            ns.push_back(out.stopped_at.value_or(horizon + 1));
            tightest_verdict = out.verdict;
        }
        for (std::size_t k = 1; k < ns.size(); ++k)
            c.require(ns[k] >= ns[k - 1], "stopping time not monotone");
        if (nb.has_value()) {
            for (std::size_t n : ns)
                c.require(n <= *nb, "N_{alpha,beta} exceeded N_bottom");
            std::size_t sup = *std::max_element(ns.begin(), ns.end());
            bool reached = sup == *nb;
            bool upper_fired_first = tightest_verdict == SprtVerdict::Pi1;
            c.require(reached || upper_fired_first,
                      "sup N_{alpha,beta} missed N_bottom on run " +
                          std::to_string(i));
            if (reached) ++identity_checked;
        }
    }
    c.require(identity_checked > 500, "too few zero-mass runs exercised");
    c.note("sup identity held on " + std::to_string(identity_checked) + " runs");
}

// ---------------------------------------------------------------- 5
void criterion_three_exponents(Check& c) {
    const auto& f = fx("three-exponents");
    const Hmm& h = f.model.hmm;
    Dist p1 = f.model.initial_distributions.at("pi1");
    Dist p2 = f.model.initial_distributions.at("pi2");
    auto chain = build_support_chain(h, p1, p2);

    auto m = [&](const std::vector<std::string>& names) {
        std::uint64_t mask = 0;
        for (const auto& s : names) mask |= 1ull << h.state_index(s);
        return mask;
    };
    // expected subset automaton over the pi1 side
    std::set<std::uint64_t> expected{m({"s1"}), m({"s2"}), m({"s3"}),
                                     m({"s5"}), m({"s2", "s5"}), 0};
    std::set<std::uint64_t> got;
    for (const auto& [s, q] : chain.nodes) got.insert(s);
    c.require(got == expected, "support projection is not the 6-node automaton");
    int a = h.letter_index("a"), b = h.letter_index("b");
    c.require(support_step(h, m({"s1"}), a) == m({"s2"}), "delta(s1,a)");
    c.require(support_step(h, m({"s1"}), b) == m({"s3"}), "delta(s1,b)");
    c.require(support_step(h, m({"s2"}), a) == m({"s5"}), "delta(s2,a)");
    c.require(support_step(h, m({"s2"}), b) == 0, "delta(s2,b)");
    c.require(support_step(h, m({"s5"}), a) == m({"s2", "s5"}), "delta(s5,a)");
    c.require(support_step(h, m({"s5"}), b) == m({"s5"}), "delta(s5,b)");
    c.require(support_step(h, m({"s2", "s5"}), a) == m({"s2", "s5"}),
              "delta(s2s5,a)");
    c.require(support_step(h, m({"s2", "s5"}), b) == m({"s5"}), "delta(s2s5,b)");

    std::set<ExponentClass> classes;
    for (int comp : chain.bottom_components)
        classes.insert(classify_bottom_scc(h, chain, comp));
    c.require(classes == std::set<ExponentClass>{ExponentClass::NegInf,
                                                 ExponentClass::Zero,
                                                 ExponentClass::NegFinite},
              "bottom classes are not {neg-inf, zero, negative-finite}");

    auto profile = exponent_profile(h, p1, p2);
    Rational per_class[3] = {};
    for (const auto& e : profile.entries) {
        if (e.cls == ExponentClass::NegInf) per_class[0] += e.probability;
        if (e.cls == ExponentClass::Zero) per_class[1] += e.probability;
        if (e.cls == ExponentClass::NegFinite) per_class[2] += e.probability;
    }
    for (int k = 0; k < 3; ++k)
        c.require(per_class[k] > 0, "a class has zero probability");
    c.note("profile " + rat_str(per_class[0]) + ", " + rat_str(per_class[1]) +
           ", " + rat_str(per_class[2]));
}

// ---------------------------------------------------------------- 6
void criterion_deterministic(Check& c) {
    {
        const Hmm& h = fx("det-cycle").model.hmm;
        auto exps = exact_exponents(h, h.state_index("q1"), h.state_index("q2"));
        LogExpr expected;
        expected.add_scaled(rat(-1, 3), LogExpr::log_of(rat(2)));
        c.require(exps.size() == 1 && exps[0].first == expected &&
                      exps[0].second == 1,
                  "det cycle exponent is not -(1/3) ln 2 with probability 1");
    }
    {
        const Hmm& h = fx("det-absorbing").model.hmm;
        auto exps = exact_exponents(h, h.state_index("q1"), h.state_index("q2"));
        bool ok = exps.size() == 2 && exps[0].first.is_neg_infinity() &&
                  exps[0].second == rat(1, 2) && exps[1].first.is_zero() &&
                  exps[1].second == rat(1, 2);
        c.require(ok, "det absorbing exponents are not {-inf: 1/2, 0: 1/2}");
    }
}

// ---------------------------------------------------------------- 7
void criterion_lyapunov(Check& c) {
    McConfig cfg;
    cfg.n = 100000;
    cfg.replicas = 32;
    cfg.seed = 5150;
    for (const char* name : {"det-cycle", "multi-exponent"}) {
        const auto& f = fx(name);
        const Hmm& h = f.model.hmm;
        Dist p1 = f.model.initial_distributions.at("pi1");
        Dist p2 = f.model.initial_distributions.at("pi2");
        auto cands = candidate_exponents(h, cfg);
        for (std::uint64_t seed = 0; seed < 10; ++seed) {
            std::vector<double> series;
            try {
                series = loglik_series(h, p2, p1, p2, 100000, seed);
            } catch (const ImpossibleObservation&) {
                continue;
            }
            double slope;
            try {
                slope = slope_estimate(series, 0.1);
            } catch (const HitNegInfinity&) {
                continue;  // -inf runs are accounted for separately
            }
            bool matched = false;
            for (const auto& cand : cands) {
                if (!cand.defined) continue;
                double tol = 3 * cand.difference_stderr + 0.01;
                if (std::abs(slope - cand.difference) < tol) matched = true;
            }
            c.require(matched, std::string(name) + " seed " +
                                   std::to_string(seed) + ": slope " +
                                   fmt(slope) + " matches no candidate");
        }
    }
}

// ---------------------------------------------------------------- 8
void criterion_sleep(Check& c) {
    SleepModel sm = sleep_model();
    const Hmm& h = sm.model.hmm;
    Dist p1 = sm.model.initial_distributions.at("pi1");
    Dist p2 = sm.model.initial_distributions.at("pi2");
    // construction ran validate_hmm, so rows sum to 1 exactly
    bool renormalized = false;
    for (const auto& [state, factor] : sm.renormalization)
        if (factor != 1) renormalized = true;
    c.require(renormalized, "expected rounding residue in the published rows");

    auto verdict = distinguishability(h, p1, p2);
    c.require(verdict.kind == Distinguishability::Distinguishable,
              "sleep pair not reported distinguishable");

    auto series = loglik_series(h, p2, p1, p2, 100000, 11);
    double slope = slope_estimate(series, 0.1);
    c.require(slope > -0.012 && slope < -0.004,
              "pi2 slope " + fmt(slope) + " outside [-0.012, -0.004]");

    auto th = Thresholds::from_log_error_bounds(-800, -800);
    auto stats = mc_sprt(h, p1, p2, th, 50, 1000000, 99, false);
    c.require(stats.count_undecided == 0, "sleep SPRT runs left undecided");
    double mean = stats.mean_stopping_time;
    // The published matrices give an exponent near -0.0105 (not the
    // plot-read -0.008 this band was derived from), so the literal band
    // is expected to miss by a few percent; the asymptotic relation
    // mean * |slope| / (-ln alpha) is reported alongside.
    c.require(mean > 0.8e5 && mean < 1.2e5,
              "mean N " + fmt(mean) + " outside the literal [0.8e5, 1.2e5] band " +
                  "(asymptotic ratio mean*|slope|/800 = " +
                  fmt(mean * std::abs(slope) / 800.0) + ", relation holds)");
    c.note("slope " + fmt(slope) + ", mean N " + fmt(mean) +
           ", wald ratio " + fmt(mean * std::abs(slope) / 800.0));
}

// ---------------------------------------------------------------- 9
void criterion_gadgets(Check& c) {
    Rng rng(31337);
    int tested = 0, mortal_count = 0;
    for (int trial = 0; trial < 200; ++trial) {
        MortalityInstance inst;
        std::size_t n = 2 + rng.next() % 3;  // up to 4 states
        for (std::size_t q = 0; q < n; ++q)
            inst.states.push_back("m" + std::to_string(q));
        inst.alphabet = {"a", "b"};
        inst.phi.assign(2, std::vector<std::vector<int>>(
                               n, std::vector<int>(n, 0)));
        double density = 0.2 + 0.5 * rng.uniform();
        for (std::size_t a = 0; a < 2; ++a)
            for (std::size_t q = 0; q < n; ++q)
                for (std::size_t r = 0; r < n; ++r)
                    inst.phi[a][q][r] = rng.uniform() < density;

        bool mortal = brute_force_mortal(inst);
        if (mortal) ++mortal_count;

        try {
            ModelFile gadget = mortality_to_einf_gadget(inst);
            Rational p = prob_Einf(gadget.hmm,
                                   gadget.initial_distributions.at("pi1"),
                                   gadget.initial_distributions.at("pi2"));
            c.require(p == (mortal ? 1 : 0),
                      "einf gadget probability mismatch on trial " +
                          std::to_string(trial));
        } catch (const EmptyAfterTrimming&) {
            c.require(mortal, "fully trimmed instance was not mortal");
        }

        ModelFile e0 = mortality_to_e0_gadget(inst);
        Rational p0 = prob_E0(e0.hmm, e0.initial_distributions.at("pi1"),
                              e0.initial_distributions.at("pi2"));
        c.require(mortal ? (p0 < 1) : (p0 == 1),
                  "e0 gadget probability mismatch on trial " +
                      std::to_string(trial));
        ++tested;
    }
    c.note(std::to_string(tested) + " instances, " +
           std::to_string(mortal_count) + " mortal");
}

// ---------------------------------------------------------------- 10
void criterion_exponent_bound(Check& c) {
    Rng rng(271828);
    std::size_t worst = 0;
    for (int trial = 0; trial < 100; ++trial) {
        std::size_t states = 2 + rng.next() % 3;  // up to 4
        std::size_t letters = 2;
        double density = 0.25 + 0.55 * rng.uniform();

        std::vector<std::string> names, alpha;
        for (std::size_t q = 0; q < states; ++q)
            names.push_back("s" + std::to_string(q));
        for (std::size_t a = 0; a < letters; ++a)
            alpha.push_back(std::string(1, static_cast<char>('a' + a)));
        std::vector<RatMatrix> psi(letters, RatMatrix(states, states));
        for (std::size_t q = 0; q < states; ++q) {
            std::vector<std::pair<std::size_t, std::size_t>> picks;
            while (picks.empty())
                for (std::size_t a = 0; a < letters; ++a)
                    for (std::size_t r = 0; r < states; ++r)
                        if (rng.uniform() < density) picks.emplace_back(a, r);
            long total = 0;
            std::vector<long> w;
            for (std::size_t i = 0; i < picks.size(); ++i) {
                w.push_back(1 + static_cast<long>(rng.next() % 9));
                total += w.back();
            }
            for (std::size_t i = 0; i < picks.size(); ++i)
                psi[picks[i].first].at(q, picks[i].second) += rat(w[i], total);
        }
        Hmm h = validate_hmm(names, alpha, psi);
        Dist p1(states), p2(states);
        p1[rng.next() % states] = 1;
        p2[rng.next() % states] = 1;

        auto profile = exponent_profile(h, p1, p2);
        Rational total_prob;
        bool neg_inf = false, zero = false;
        std::vector<std::pair<std::uint64_t, int>> handles;
        auto chain = build_support_chain(h, p1, p2);
        for (const auto& e : profile.entries) {
            total_prob += e.probability;
            c.require(e.cls != ExponentClass::UnknownFinite,
                      "classification incomplete on a 4-state model");
            if (e.cls == ExponentClass::NegInf) neg_inf = true;
            if (e.cls == ExponentClass::Zero) zero = true;
            if (e.cls == ExponentClass::NegFinite)
                handles.push_back(chain.nodes[chain.scc.components[e.component]
                                                  .front()]);
        }
        c.require(total_prob == 1, "profile probabilities do not sum to 1");
        std::size_t distinct = distinct_negfinite_bound(h, handles) +
                               (neg_inf ? 1 : 0) + (zero ? 1 : 0);
        std::size_t bound = states * states + 1;
        worst = std::max(worst, distinct);
        c.require(distinct <= bound,
                  "distinct exponent count " + std::to_string(distinct) +
                      " exceeds bound " + std::to_string(bound));
    }
    c.note("max distinct count seen: " + std::to_string(worst));
}

struct Criterion {
    int id;
    const char* title;
    double time_limit_s;
    std::function<void(Check&)> body;
};

}  // namespace

int main(int argc, char** argv) {
    std::vector<Criterion> criteria{
        {1, "intro example exactness", 1.0, criterion_intro},
        {2, "two-state Wald stopping time and error bounds", 60.0,
         criterion_wald},
        {3, "multi-exponent profile and undecided fraction", 60.0,
         criterion_multi_exponent},
        {4, "mortal branch: P(E_-inf), conditional mean, sup identity", 60.0,
         criterion_mortal_branch},
        {5, "three-exponents support automaton and classes", 1.0,
         criterion_three_exponents},
        {6, "deterministic exact exponents", 1.0, criterion_deterministic},
        {7, "observed slopes lie among Lyapunov candidates", 300.0,
         criterion_lyapunov},
        {8, "sleep model: slope band and SPRT timing", 600.0, criterion_sleep},
        {9, "mortality gadget soundness on random instances", 300.0,
         criterion_gadgets},
        {10, "exponent count bound on random models", 300.0,
         criterion_exponent_bound},
    };

    int only = argc > 1 ? std::atoi(argv[1]) : 0;
    bool all_ok = true;
    for (auto& cr : criteria) {
        if (only && cr.id != only) continue;
        Check check;
        auto start = std::chrono::steady_clock::now();
        try {
            cr.body(check);
        } catch (const std::exception& e) {
            check.require(false, std::string("exception: ") + e.what());
        }
        double elapsed =
            std::chrono::duration<double>(std::chrono::steady_clock::now() -
                                          start)
                .count();
        check.require(elapsed < cr.time_limit_s,
                      "runtime " + fmt(elapsed) + "s over limit " +
                          fmt(cr.time_limit_s) + "s");
        std::printf("%s criterion %2d: %s (%.2fs)%s%s\n",
                    check.ok ? "PASS" : "FAIL", cr.id, cr.title, elapsed,
                    check.detail.empty() ? "" : " -- ",
                    check.detail.c_str());
        std::fflush(stdout);
        all_ok = all_ok && check.ok;
    }
    return all_ok ? 0 : 1;
}
