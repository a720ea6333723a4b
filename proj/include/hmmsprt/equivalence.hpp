#pragma once

#include <cstdint>
#include <optional>

#include "hmmsprt/model.hpp"

namespace hmmsprt {

// Exact trace equivalence: both distributions give every finite word
// the same probability.
bool are_equivalent(const Hmm& h, const Dist& pi1, const Dist& pi2);

enum class Distinguishability { Distinguishable, NotDistinguishable, Unknown };

struct DistinguishabilityVerdict {
    Distinguishability kind = Distinguishability::Unknown;
    // For NotDistinguishable: a word of positive probability under both
    // distributions at which overlapping (trace-equivalent) belief mass
    // exists. When the full normalized conditionals are themselves
    // equivalent, witness_conditionals_equivalent is set.
    Word witness;
    bool witness_conditionals_equivalent = false;
    std::size_t explored = 0;
};

// Decides whether the total variation distance is 1.
//
// Explores the reachable support pairs (supp(pi1 Psi(w)), supp(pi2 Psi(w)))
// and tests each pair for trace-equivalent nonzero sub-beliefs with an
// exact LP over the forward space. A feasible pair certifies
// NotDistinguishable (conditioned on that prefix, a bounded-below share
// of the likelihood ratio survives forever); an exhausted frontier with
// no feasible pair yields Distinguishable. Unknown only on budget
// exhaustion (the pair space is finite but exponential in |Q|).
DistinguishabilityVerdict distinguishability(const Hmm& h, const Dist& pi1,
                                             const Dist& pi2,
                                             std::size_t budget = 100000);

// Internal entry point reused by the support-chain classifier: the same
// procedure starting from explicit support masks.
DistinguishabilityVerdict distinguishability_masks(const Hmm& h,
                                                   std::uint64_t s1,
                                                   std::uint64_t s2,
                                                   std::size_t budget = 100000);

// B_n = sum over length-n words of min(||pi1 Psi(w)||, ||pi2 Psi(w)||);
// an exact upper bound on 1 - d(pi1, pi2), non-increasing in n.
Rational tv_min_mass(const Hmm& h, const Dist& pi1, const Dist& pi2,
                     std::size_t n, std::size_t word_cap = 1000000);

}  // namespace hmmsprt
