#pragma once

#include <string>
#include <vector>

#include "hmmsprt/model.hpp"
#include "hmmsprt/rng.hpp"

namespace hmmsprt::testing {

inline RatMatrix mat(std::size_t n, const std::vector<std::string>& entries) {
    RatMatrix m(n, n);
    for (std::size_t i = 0; i < n * n; ++i) m.data[i] = parse_rational(entries[i]);
    return m;
}

inline Hmm intro_hmm() {
    return validate_hmm({"q1", "q2"}, {"a", "b"},
                        {mat(2, {"1/3", "0", "0", "2/3"}),
                         mat(2, {"0", "2/3", "1/3", "0"})});
}

// Random HMM with exact rational rows: weights are small random
// integers normalized by the exact row total.
inline Hmm random_hmm(std::size_t states, std::size_t letters, Rng& rng,
                      double density = 0.6) {
    std::vector<std::string> names, alpha;
    for (std::size_t q = 0; q < states; ++q) names.push_back("s" + std::to_string(q));
    for (std::size_t a = 0; a < letters; ++a)
        alpha.push_back(std::string(1, static_cast<char>('a' + a)));
    std::vector<RatMatrix> psi(letters, RatMatrix(states, states));
    for (std::size_t q = 0; q < states; ++q) {
        std::vector<std::pair<std::size_t, std::size_t>> picks;
        while (picks.empty()) {
            for (std::size_t a = 0; a < letters; ++a)
                for (std::size_t r = 0; r < states; ++r)
                    if (rng.uniform() < density) picks.emplace_back(a, r);
        }
        long total = 0;
        std::vector<long> weights;
        for (std::size_t i = 0; i < picks.size(); ++i) {
            long w = 1 + static_cast<long>(rng.next() % 9);
            weights.push_back(w);
            total += w;
        }
        for (std::size_t i = 0; i < picks.size(); ++i)
            psi[picks[i].first].at(q, picks[i].second) += rat(weights[i], total);
    }
    return validate_hmm(names, alpha, psi);
}

// Random distribution over the states with exact rational entries.
inline Dist random_dist(std::size_t states, Rng& rng) {
    std::vector<long> weights(states, 0);
    long total = 0;
    for (std::size_t q = 0; q < states; ++q) {
        if (rng.uniform() < 0.5) weights[q] = 1 + static_cast<long>(rng.next() % 5);
        total += weights[q];
    }
    if (total == 0) {
        weights[rng.next() % states] = 1;
        total = 1;
    }
    Dist pi(states);
    for (std::size_t q = 0; q < states; ++q) pi[q] = rat(weights[q], total);
    return pi;
}

inline Word word_of(const Hmm& h, const std::string& letters) {
    Word w;
    for (char c : letters) w.push_back(h.letter_index(std::string(1, c)));
    return w;
}

}  // namespace hmmsprt::testing
