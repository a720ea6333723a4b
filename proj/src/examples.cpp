#include "hmmsprt/examples.hpp"

#include <set>

#include "hmmsprt/errors.hpp"

namespace hmmsprt {

namespace {

RatMatrix matrix2(const std::vector<std::string>& entries) {
    RatMatrix m(2, 2);
    for (int i = 0; i < 4; ++i) m.data[i] = parse_rational(entries[i]);
    return m;
}

RatMatrix matrix_n(std::size_t n, const std::vector<std::string>& entries) {
    RatMatrix m(n, n);
    for (std::size_t i = 0; i < n * n; ++i) m.data[i] = parse_rational(entries[i]);
    return m;
}

ModelFile intro_model() {
    ModelFile mf;
    mf.hmm = validate_hmm(
        {"q1", "q2"}, {"a", "b"},
        {matrix2({"1/3", "0", "0", "2/3"}), matrix2({"0", "2/3", "1/3", "0"})});
    mf.initial_distributions["pi1"] = dirac(mf.hmm, "q1");
    mf.initial_distributions["pi2"] = dirac(mf.hmm, "q2");
    return mf;
}

ModelFile coin_bias_model() {
    ModelFile mf;
    mf.hmm = validate_hmm(
        {"s1", "s2"}, {"a", "b"},
        {matrix2({"1/3", "0", "0", "1/2"}), matrix2({"2/3", "0", "0", "1/2"})});
    mf.initial_distributions["pi1"] = dirac(mf.hmm, "s1");
    mf.initial_distributions["pi2"] = dirac(mf.hmm, "s2");
    return mf;
}

ModelFile multi_exponent_model() {
    // s1 branches once; afterwards the ratio either drifts down (via s2)
    // or freezes (via s3), so two exponents coexist.
    std::vector<std::string> a{
        "0", "1/4", "0",   "0",
        "0", "1/3", "0",   "0",
        "0", "0",   "1/2", "0",
        "0", "0",   "0",   "1/2"};
    std::vector<std::string> b{
        "0", "0",   "3/4", "0",
        "0", "2/3", "0",   "0",
        "0", "0",   "1/2", "0",
        "0", "0",   "0",   "1/2"};
    ModelFile mf;
    mf.hmm = validate_hmm({"s1", "s2", "s3", "s4"}, {"a", "b"},
                          {matrix_n(4, a), matrix_n(4, b)});
    mf.initial_distributions["pi1"] = dirac(mf.hmm, "s1");
    mf.initial_distributions["pi2"] = dirac(mf.hmm, "s4");
    return mf;
}

ModelFile mortal_branch_model() {
    // like multi-exponent, but the frozen branch can only emit 'a', so a
    // 'b' there kills the tracked mass
    std::vector<std::string> a{
        "0", "1/4", "0", "0",
        "0", "1/3", "0", "0",
        "0", "0",   "1", "0",
        "0", "0",   "0", "1/2"};
    std::vector<std::string> b{
        "0", "0",   "3/4", "0",
        "0", "2/3", "0",   "0",
        "0", "0",   "0",   "0",
        "0", "0",   "0",   "1/2"};
    ModelFile mf;
    mf.hmm = validate_hmm({"s1", "s2", "s3", "s4"}, {"a", "b"},
                          {matrix_n(4, a), matrix_n(4, b)});
    mf.initial_distributions["pi1"] = dirac(mf.hmm, "s1");
    mf.initial_distributions["pi2"] = dirac(mf.hmm, "s4");
    return mf;
}

ModelFile three_exponents_model() {
    // all three behaviours reachable: the tracked mass can die, freeze,
    // or drift at a finite negative rate through the s2/s5 loop
    std::vector<std::string> a{
        "0", "1/4", "0",   "0",   "0",
        "0", "0",   "0",   "0",   "1",
        "0", "0",   "1/2", "0",   "0",
        "0", "0",   "0",   "1/2", "0",
        "0", "1/3", "0",   "0",   "1/3"};
    std::vector<std::string> b{
        "0", "0", "3/4", "0",   "0",
        "0", "0", "0",   "0",   "0",
        "0", "0", "1/2", "0",   "0",
        "0", "0", "0",   "1/2", "0",
        "0", "0", "0",   "0",   "1/3"};
    ModelFile mf;
    mf.hmm = validate_hmm({"s1", "s2", "s3", "s4", "s5"}, {"a", "b"},
                          {matrix_n(5, a), matrix_n(5, b)});
    mf.initial_distributions["pi1"] = dirac(mf.hmm, "s1");
    mf.initial_distributions["pi2"] = dirac(mf.hmm, "s4");
    return mf;
}

ModelFile det_cycle_model() {
    ModelFile mf;
    mf.hmm = validate_hmm(
        {"q1", "q2"}, {"a", "b"},
        {matrix2({"2/3", "0", "0", "1/3"}), matrix2({"0", "1/3", "2/3", "0"})});
    mf.initial_distributions["pi1"] = dirac(mf.hmm, "q1");
    mf.initial_distributions["pi2"] = dirac(mf.hmm, "q2");
    return mf;
}

ModelFile det_absorbing_model() {
    ModelFile mf;
    mf.hmm = validate_hmm(
        {"q1", "q2"}, {"a", "b"},
        {matrix2({"0", "1", "0", "1/2"}), matrix2({"0", "0", "0", "1/2"})});
    mf.initial_distributions["pi1"] = dirac(mf.hmm, "q1");
    mf.initial_distributions["pi2"] = dirac(mf.hmm, "q2");
    return mf;
}

const char* kT1[5][5] = {
    {"0.793", "0.099", "0.035", "0.064", "0.009"},
    {"0.078", "0.769", "0.006", "0.144", "0.003"},
    {"0.018", "0.004", "0.833", "0.134", "0.012"},
    {"0.022", "0.094", "0.054", "0.827", "0.002"},
    {"0.011", "0.005", "0.035", "0.005", "0.945"},
};
// published transposed: columns sum to ~1, rows do not (0.84..1.25),
// so the entry for i -> j lives at [j][i]
const char* kT2[5][5] = {
    {"0.641", "0.109", "0.031", "0.040", "0.015"},
    {"0.202", "0.699", "0.008", "0.089", "0.003"},
    {"0.026", "0.002", "0.823", "0.062", "0.035"},
    {"0.123", "0.189", "0.114", "0.808", "0.016"},
    {"0.007", "0.001", "0.024", "0.001", "0.931"},
};
const char* kO[5][5] = {
    {"0.9172", "0.0803", "0", "0.0002", "0.0024"},
    {"0.0719", "0.8606", "0", "0.0665", "0.0010"},
    {"0", "0.0007", "0.8546", "0.1055", "0.0392"},
    {"0.0008", "0.0998", "0.0663", "0.8257", "0.0075"},
    {"0.0109", "0.0094", "0.1046", "0.0334", "0.8416"},
};

}  // namespace

SleepModel sleep_model() {
    Rational t1[5][5], t2[5][5], o[5][5];
    for (int i = 0; i < 5; ++i)
        for (int j = 0; j < 5; ++j) {
            t1[i][j] = parse_rational(kT1[i][j]);
            t2[i][j] = parse_rational(kT2[j][i]);
            o[i][j] = parse_rational(kO[i][j]);
        }

    std::vector<std::string> states;
    for (int i = 1; i <= 5; ++i) states.push_back("h" + std::to_string(i));
    for (int i = 1; i <= 5; ++i) states.push_back("d" + std::to_string(i));
    std::vector<std::string> alphabet;
    for (int k = 1; k <= 5; ++k) alphabet.push_back("a" + std::to_string(k));

    std::vector<RatMatrix> psi(5, RatMatrix(10, 10));
    for (int k = 0; k < 5; ++k)
        for (int i = 0; i < 5; ++i)
            for (int j = 0; j < 5; ++j) {
                psi[k].at(i, j) = t1[i][j] * o[i][k];
                psi[k].at(5 + i, 5 + j) = t2[i][j] * o[i][k];
            }

    SleepModel out;
    for (int q = 0; q < 10; ++q) {
        Rational row_sum;
        for (int k = 0; k < 5; ++k)
            for (int j = 0; j < 10; ++j) row_sum += psi[k].at(q, j);
        if (row_sum != 1) {
            for (int k = 0; k < 5; ++k)
                for (int j = 0; j < 10; ++j) psi[k].at(q, j) /= row_sum;
        }
        out.renormalization.emplace_back(states[q], row_sum);
    }

    out.model.hmm = validate_hmm(states, alphabet, psi);
    out.model.initial_distributions["pi1"] = dirac(out.model.hmm, "h1");
    out.model.initial_distributions["pi2"] = dirac(out.model.hmm, "d1");
    return out;
}

MortalityInstance demo_mortality_instance() {
    MortalityInstance inst;
    inst.states = {"m0", "m1"};
    inst.alphabet = {"a", "b"};
    inst.phi = {
        {{0, 1}, {0, 1}},  // a
        {{1, 1}, {0, 0}},  // b
    };
    return inst;
}

namespace {

MortalityInstance trim_zero_rows(MortalityInstance inst) {
    while (true) {
        std::size_t n = inst.states.size();
        if (n == 0) throw EmptyAfterTrimming("all states were removed");
        std::vector<bool> dead(n, true);
        for (std::size_t q = 0; q < n; ++q)
            for (const auto& mat : inst.phi)
                for (std::size_t r = 0; r < n; ++r)
                    if (mat[q][r]) dead[q] = false;
        std::vector<int> keep;
        for (std::size_t q = 0; q < n; ++q)
            if (!dead[q]) keep.push_back(static_cast<int>(q));
        if (keep.size() == n) return inst;
        MortalityInstance next;
        next.alphabet = inst.alphabet;
        for (int q : keep) next.states.push_back(inst.states[q]);
        for (const auto& mat : inst.phi) {
            std::vector<std::vector<int>> sub(keep.size(),
                                              std::vector<int>(keep.size()));
            for (std::size_t i = 0; i < keep.size(); ++i)
                for (std::size_t j = 0; j < keep.size(); ++j)
                    sub[i][j] = mat[keep[i]][keep[j]];
            next.phi.push_back(std::move(sub));
        }
        inst = std::move(next);
    }
}

}  // namespace

ModelFile mortality_to_einf_gadget(const MortalityInstance& raw) {
    MortalityInstance inst = trim_zero_rows(raw);
    std::size_t n = inst.states.size();
    std::size_t letters = inst.alphabet.size();

    std::vector<std::string> states = inst.states;
    states.push_back("src");  // fresh state generating uniform letters

    std::vector<RatMatrix> psi(letters, RatMatrix(n + 1, n + 1));
    for (std::size_t q = 0; q < n; ++q) {
        long nonzeros = 0;
        for (const auto& mat : inst.phi)
            for (std::size_t r = 0; r < n; ++r) nonzeros += mat[q][r];
        for (std::size_t a = 0; a < letters; ++a)
            for (std::size_t r = 0; r < n; ++r)
                if (inst.phi[a][q][r]) psi[a].at(q, r) = rat(1, nonzeros);
    }
    for (std::size_t a = 0; a < letters; ++a)
        psi[a].at(n, n) = rat(1, static_cast<long>(letters));

    ModelFile mf;
    mf.hmm = validate_hmm(states, inst.alphabet, psi);
    Dist pi1(n + 1);
    for (std::size_t q = 0; q < n; ++q) pi1[q] = rat(1, static_cast<long>(n));
    mf.initial_distributions["pi1"] = pi1;
    mf.initial_distributions["pi2"] = dirac(mf.hmm, "src");
    return mf;
}

ModelFile mortality_to_e0_gadget(const MortalityInstance& inst) {
    std::size_t n = inst.states.size();
    std::size_t letters = inst.alphabet.size();
    std::size_t total = n + 2;  // + sink, + generator
    std::size_t sink = n, gen = n + 1;

    std::vector<std::string> states = inst.states;
    states.push_back("sink");
    states.push_back("gen");
    std::vector<std::string> alphabet = inst.alphabet;
    alphabet.push_back("$");

    // 0/1 pattern first, then uniform probabilities per row
    std::vector<std::vector<std::vector<int>>> pattern(
        letters + 1,
        std::vector<std::vector<int>>(total, std::vector<int>(total, 0)));
    for (std::size_t a = 0; a < letters; ++a) {
        for (std::size_t q = 0; q < n; ++q)
            for (std::size_t r = 0; r < n; ++r) pattern[a][q][r] = inst.phi[a][q][r];
        pattern[a][gen][gen] = 1;  // generator loops on every base letter
    }
    for (std::size_t q = 0; q < total; ++q) pattern[letters][q][sink] = 1;

    std::vector<RatMatrix> psi(letters + 1, RatMatrix(total, total));
    for (std::size_t q = 0; q < total; ++q) {
        long nonzeros = 0;
        for (const auto& mat : pattern)
            for (std::size_t r = 0; r < total; ++r) nonzeros += mat[q][r];
        for (std::size_t a = 0; a <= letters; ++a)
            for (std::size_t r = 0; r < total; ++r)
                if (pattern[a][q][r]) psi[a].at(q, r) = rat(1, nonzeros);
    }

    ModelFile mf;
    mf.hmm = validate_hmm(states, alphabet, psi);
    Dist pi1(total);
    for (std::size_t q = 0; q < n; ++q) pi1[q] = rat(1, static_cast<long>(n));
    mf.initial_distributions["pi1"] = pi1;
    mf.initial_distributions["pi2"] = dirac(mf.hmm, "gen");
    return mf;
}

bool brute_force_mortal(const MortalityInstance& inst) {
    std::size_t n = inst.states.size();
    if (n > 24) throw CapExceeded("brute-force mortality capped at 24 states");
    std::uint32_t full = n == 32 ? ~0u : (1u << n) - 1;
    std::set<std::uint32_t> seen{full};
    std::vector<std::uint32_t> queue{full};
    while (!queue.empty()) {
        std::uint32_t s = queue.back();
        queue.pop_back();
        if (s == 0) return true;
        for (const auto& mat : inst.phi) {
            std::uint32_t t = 0;
            for (std::size_t q = 0; q < n; ++q) {
                if (!(s >> q & 1)) continue;
                for (std::size_t r = 0; r < n; ++r)
                    if (mat[q][r]) t |= 1u << r;
            }
            if (seen.insert(t).second) queue.push_back(t);
        }
    }
    return false;
}

const std::vector<Fixture>& builtin_fixtures() {
    static const std::vector<Fixture> fixtures = [] {
        std::vector<Fixture> fs;
        fs.push_back({"intro",
                      "two-state loop/swap model; the states are distinguishable",
                      intro_model(),
                      {{"trace_prob(pi1, aba)", "4/27"},
                       {"trace_prob(pi2, aba)", "2/27"},
                       {"log_ratio(aba)", "ln 2"},
                       {"distinguishable", "yes"}}});
        fs.push_back({"coin-bias",
                      "two independent biased coins; i.i.d. log-ratio increments",
                      coin_bias_model(),
                      {{"slope(pi2)", "1/2 ln(2/3) + 1/2 ln(4/3)"},
                       {"wald_formula", "applies exactly"}}});
        fs.push_back({"multi-exponent",
                      "first letter selects between a drifting and a frozen ratio",
                      multi_exponent_model(),
                      {{"profile", "negative-finite 1/2, zero 1/2"},
                       {"undecided_fraction(alpha=beta=1/4)", "1/2"}}});
        fs.push_back({"mortal-branch",
                      "frozen branch replaced by one that dies on letter b",
                      mortal_branch_model(),
                      {{"prob_Einf", "1/2"},
                       {"sup_mean_N_given_dead", "3"}}});
        fs.push_back({"three-exponents",
                      "support automaton with dead, frozen and drifting classes",
                      three_exponents_model(),
                      {{"classes", "neg-infinity, negative-finite, zero"},
                       {"support_dfa_size", "6"}}});
        fs.push_back({"det-cycle",
                      "deterministic two-state cycle with exact exponent",
                      det_cycle_model(),
                      {{"exponent", "(-1/3) ln 2"}, {"probability", "1"}}});
        fs.push_back({"det-absorbing",
                      "deterministic model whose ratio dies or freezes",
                      det_absorbing_model(),
                      {{"exponents", "-inf: 1/2, 0: 1/2"}}});
        fs.push_back({"gadget-einf-demo",
                      "zero-pattern gadget for the demo mortality instance",
                      mortality_to_einf_gadget(demo_mortality_instance()),
                      {{"prob_Einf", "1"}, {"mortal", "yes (word ab)"}}});
        fs.push_back({"gadget-e0-demo",
                      "end-marker gadget for the demo mortality instance",
                      mortality_to_e0_gadget(demo_mortality_instance()),
                      {{"prob_E0", "< 1"}}});
        fs.push_back({"sleep", "ten-state block model from EEG sleep staging",
                      sleep_model().model,
                      {{"distinguishable", "yes"},
                       {"slope(pi2)", "approx -0.008"}}});
        return fs;
    }();
    return fixtures;
}

const Fixture& fixture(const std::string& name) {
    for (const auto& f : builtin_fixtures())
        if (f.name == name) return f;
    throw UnknownSymbol("no fixture named '" + name + "'");
}

}  // namespace hmmsprt
