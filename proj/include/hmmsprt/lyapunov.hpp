#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "hmmsprt/model.hpp"

namespace hmmsprt {

// Graph over Q1 x Q2 with an edge when some letter moves both sides.
struct ProductGraph {
    Digraph g;
    std::size_t n1 = 0, n2 = 0;

    int index(int q1, int q2) const { return q1 * static_cast<int>(n2) + q2; }
    std::pair<int, int> pair_of(int node) const {
        return {node / static_cast<int>(n2), node % static_cast<int>(n2)};
    }
};

ProductGraph product_graph(const MatrixSystem& m1, const MatrixSystem& m2);

// SCCs R of the self-product graph whose right projection is a bottom
// SCC of the embedded chain; at most |Q|^2 of them.
std::vector<std::vector<int>> right_bottom_sccs(const Hmm& h);

struct GeneralizedLyapunovSystem {
    // matrix system over pair states, driven by (letter, next H-state)
    MatrixSystem m;
    Hmm h2;  // strongly connected, emits (letter, next state)
    std::vector<std::pair<int, int>> m_pairs;  // original pair per m-state
    std::vector<int> h_states;                 // original state per h2-state
    int m_start = 0;  // a pair state whose right component is h_start
    int h_start = 0;
};

// For a right-bottom SCC R: the numerator system over R and the
// denominator system over the SCC containing the diagonal of Q_R.
std::pair<GeneralizedLyapunovSystem, GeneralizedLyapunovSystem>
build_generalized_systems(const Hmm& h, const std::vector<int>& r_nodes);

struct LyapunovSystem {
    MatrixSystem m;           // strongly connected support graph
    std::vector<Rational> rho;  // full-support letter distribution
};

// Interval-atom construction: the H-state emission distributions are
// overlaid on [0,1); the atoms become i.i.d. letters with probabilities
// equal to their lengths, preserving the exponent exactly.
LyapunovSystem generalized_to_plain(const GeneralizedLyapunovSystem& s);

struct LyapunovEstimate {
    double mean = 0.0;
    double stderr_ = 0.0;
    std::size_t n = 0;
    std::size_t replicas = 0;
    double dead_fraction = 0.0;
};

LyapunovEstimate mc_lyapunov(const LyapunovSystem& s, int start, std::size_t n,
                             std::size_t replicas, std::uint64_t seed,
                             unsigned threads = 0);

LyapunovEstimate mc_lyapunov(const GeneralizedLyapunovSystem& s, std::size_t n,
                             std::size_t replicas, std::uint64_t seed,
                             unsigned threads = 0);

struct CandidateExponent {
    std::vector<int> r_nodes;  // product-graph nodes of R
    LyapunovEstimate lambda1, lambda2;
    double difference = 0.0;
    double difference_stderr = 0.0;
    double dead_fraction = 0.0;  // paired runs whose numerator mass died
    bool defined = false;        // false when every paired run died
};

struct McConfig {
    std::size_t n = 100000;
    std::size_t replicas = 32;
    std::uint64_t seed = 0;
    unsigned threads = 0;
};

// One candidate likelihood exponent per right-bottom SCC; both systems
// are driven by the same sampled runs so the difference is estimated
// directly with paired variance.
std::vector<CandidateExponent> candidate_exponents(const Hmm& h,
                                                   const McConfig& cfg = {});

// Sound upper bound on the number of distinct negative-finite exponent
// values across profile handles: handles are merged when the right-bottom
// SCCs reachable from their pair supports coincide (equal reachable sets
// force equal exponents), and the result is capped by the number of
// reachable right-bottom SCCs.
std::size_t distinct_negfinite_bound(
    const Hmm& h, const std::vector<std::pair<std::uint64_t, int>>& handles);

}  // namespace hmmsprt
