#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "hmmsprt/graph.hpp"
#include "hmmsprt/linalg.hpp"
#include "hmmsprt/rng.hpp"

namespace hmmsprt {

using Word = std::vector<int>;  // letter indices

struct Run {
    std::vector<int> states;  // length n+1
    Word letters;             // length n
};

// Nonnegative matrix per letter; an HMM is the row-stochastic case.
struct MatrixSystem {
    std::vector<std::string> states;
    std::vector<std::string> alphabet;
    std::vector<RatMatrix> psi;

    std::size_t num_states() const { return states.size(); }
    std::size_t num_letters() const { return alphabet.size(); }
    int state_index(const std::string& name) const;
    int letter_index(const std::string& name) const;
};

struct Hmm : MatrixSystem {};

using Dist = RatVector;

struct MarkovChain {
    std::vector<std::string> states;
    RatMatrix t;
};

// Checks shape, nonnegativity and exact row-stochasticity
// (sum over letters and successors equals 1 for every state).
Hmm validate_hmm(std::vector<std::string> states,
                 std::vector<std::string> alphabet,
                 std::vector<RatMatrix> psi);

// Dirac distribution helpers.
Dist dirac(const MatrixSystem& m, int state);
Dist dirac(const MatrixSystem& m, const std::string& state);
Dist uniform_on(const MatrixSystem& m, std::uint64_t support_mask);
void check_dist(const MatrixSystem& m, const Dist& pi);

RatMatrix psi_word(const MatrixSystem& m, const Word& w);
Rational trace_prob(const Hmm& h, const Dist& pi, const Word& w);

// Support sets are 64-bit masks; support-based analyses are capped at
// 64 states (they are exponential in |Q| anyway).
std::uint64_t support_mask(const RatVector& v);
std::uint64_t support_step(const MatrixSystem& m, std::uint64_t support, int letter);
void require_mask_capacity(const MatrixSystem& m);

MarkovChain embedded_chain(const Hmm& h);

// Graph with an edge wherever the matrix entry is positive.
Digraph graph_of(const RatMatrix& t);
Digraph graph_of(const MatrixSystem& m);  // of the summed matrix

MatrixSystem restrict_system(const MatrixSystem& m, const std::vector<int>& keep);

Run sample_run(const Hmm& h, const Dist& pi, std::size_t n, Rng& rng);

// Exact stationary distribution of an irreducible chain.
Dist stationary_distribution(const MarkovChain& mc);

// Exact probabilities of eventually entering each target set, starting
// from iota. Targets must be disjoint unions of bottom SCCs.
RatVector hitting_probabilities(const MarkovChain& mc, const Dist& iota,
                                const std::vector<std::vector<int>>& targets);

// Basis of span{ Psi(w) 1^T : w } as canonical echelon rows; closed
// under left multiplication by every Psi(a).
std::vector<RatVector> forward_space(const MatrixSystem& m);

// Precomputed tables for fast simulation and log-domain tracking.
struct HmmSim {
    struct Outcome {
        double cum;  // cumulative probability within the state's row
        int letter;
        int target;
    };
    std::vector<std::vector<Outcome>> rows;          // per state
    std::vector<std::vector<double>> psi_d;          // per letter, row-major
    std::vector<std::vector<std::uint8_t>> psi_pos;  // zero pattern per letter
    std::size_t n = 0;

    explicit HmmSim(const Hmm& h);
    int sample_initial(const Dist& pi, Rng& rng) const;
    // Samples (letter, next state) from the current state.
    Outcome step(int state, Rng& rng) const;
};

}  // namespace hmmsprt
