#pragma once

#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include "hmmsprt/equivalence.hpp"
#include "hmmsprt/model.hpp"

namespace hmmsprt {

enum class ExponentClass { NegInf, Zero, NegFinite, UnknownFinite };

const char* exponent_class_name(ExponentClass c);

// Markov chain over (support of the pi1-belief, current pi2-state),
// materialized only for nodes reachable from iota.
struct SupportChain {
    std::vector<std::pair<std::uint64_t, int>> nodes;
    RatMatrix t;  // row-stochastic
    Dist iota;
    SccDecomposition scc;
    std::vector<int> bottom_components;

    int node_index(std::uint64_t support, int state) const;
};

SupportChain build_support_chain(const Hmm& h, const Dist& pi1, const Dist& pi2,
                                 std::size_t node_cap = 100000);

// NegInf is structural (the SCC contains an empty support); Zero vs
// NegFinite is the distinguishability of (uniform on S, Dirac on q) for
// any representative node, well-defined per bottom SCC.
ExponentClass classify_bottom_scc(const Hmm& h, const SupportChain& chain,
                                  int component,
                                  std::size_t budget = 100000);

std::vector<ExponentClass> classify_bottom_sccs(const Hmm& h,
                                                const SupportChain& chain,
                                                std::size_t budget = 100000);

Rational prob_E0(const Hmm& h, const Dist& pi1, const Dist& pi2,
                 std::size_t node_cap = 100000, std::size_t budget = 100000);
Rational prob_Einf(const Hmm& h, const Dist& pi1, const Dist& pi2,
                   std::size_t node_cap = 100000);

struct ExponentProfileEntry {
    ExponentClass cls;
    int component;           // bottom SCC index in chain.scc
    Rational probability;    // exact hitting probability from iota
    std::optional<double> estimate;  // optional MC slope refinement
};

struct ExponentProfile {
    std::vector<ExponentProfileEntry> entries;  // probabilities sum to 1
    std::size_t negfinite_handles = 0;
    std::size_t state_bound = 0;  // |Q|^2 + 1
};

ExponentProfile exponent_profile(const Hmm& h, const Dist& pi1, const Dist& pi2,
                                 std::size_t node_cap = 100000,
                                 std::size_t budget = 100000);

// Numeric slope refinement for one profile entry (Monte Carlo).
double refine_exponent_estimate(const Hmm& h, const SupportChain& chain,
                                int component, std::size_t steps,
                                std::uint64_t seed);

}  // namespace hmmsprt
