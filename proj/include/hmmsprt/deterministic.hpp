#pragma once

#include <utility>
#include <vector>

#include "hmmsprt/logexpr.hpp"
#include "hmmsprt/model.hpp"

namespace hmmsprt {

// Every row of every Psi(a) has at most one nonzero entry.
bool is_deterministic(const Hmm& h);

// Pair construction for a deterministic HMM: states are the reachable
// pairs (state tracked for pi1, state tracked for pi2) plus a sink for
// runs whose pi1-mass dies; observations are exact log-likelihood
// ratios, merged when equal.
struct PairHmm {
    std::vector<std::pair<int, int>> pair_states;  // reachable pairs
    bool has_bot = false;
    int bot_index = -1;    // == pair_states.size() when present
    int start_index = 0;   // index of (q1, q2)
    std::vector<LogExpr> observations;
    std::vector<RatMatrix> psi;  // per observation

    std::size_t num_states() const {
        return pair_states.size() + (has_bot ? 1 : 0);
    }
    RatMatrix embedded() const;
};

PairHmm build_pair_hmm(const Hmm& h, int q1, int q2);

// Exact expected log-ratio per step inside a bottom SCC (stationary
// distribution times per-state average observation).
LogExpr average_observation(const PairHmm& a_hat, const std::vector<int>& comp);

// Exponent values with their exact probabilities, grouped by exact
// LogExpr equality; the sink contributes -infinity.
std::vector<std::pair<LogExpr, Rational>> exact_exponents(const Hmm& h, int q1,
                                                          int q2);

}  // namespace hmmsprt
