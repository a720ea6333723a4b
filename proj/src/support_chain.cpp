#include "hmmsprt/support_chain.hpp"

#include <map>

#include "hmmsprt/errors.hpp"
#include "hmmsprt/sprt.hpp"

namespace hmmsprt {

const char* exponent_class_name(ExponentClass c) {
    switch (c) {
        case ExponentClass::NegInf: return "neg-infinity";
        case ExponentClass::Zero: return "zero";
        case ExponentClass::NegFinite: return "negative-finite";
        case ExponentClass::UnknownFinite: return "unknown-finite";
    }
    return "?";
}

int SupportChain::node_index(std::uint64_t support, int state) const {
    for (std::size_t i = 0; i < nodes.size(); ++i)
        if (nodes[i].first == support && nodes[i].second == state)
            return static_cast<int>(i);
    return -1;
}

SupportChain build_support_chain(const Hmm& h, const Dist& pi1, const Dist& pi2,
                                 std::size_t node_cap) {
    check_dist(h, pi1);
    check_dist(h, pi2);
    require_mask_capacity(h);
    std::size_t n = h.num_states();
    std::uint64_t s0 = support_mask(pi1);

    std::map<std::pair<std::uint64_t, int>, int> index;
    std::vector<std::pair<std::uint64_t, int>> nodes;
    std::vector<int> queue;
    auto intern = [&](std::uint64_t s, int q) {
        auto key = std::make_pair(s, q);
        auto it = index.find(key);
        if (it != index.end()) return it->second;
        if (nodes.size() >= node_cap)
            throw NodeCapExceeded("support chain exceeds " +
                                  std::to_string(node_cap) + " nodes");
        int id = static_cast<int>(nodes.size());
        index[key] = id;
        nodes.push_back(key);
        queue.push_back(id);
        return id;
    };

    for (std::size_t q = 0; q < n; ++q)
        if (pi2[q] != 0) intern(s0, static_cast<int>(q));

    // first pass materializes the nodes, second fills the matrix
    std::vector<std::uint64_t> delta(h.num_letters());
    for (std::size_t at = 0; at < queue.size(); ++at) {
        auto [s, q] = nodes[queue[at]];
        for (std::size_t a = 0; a < h.num_letters(); ++a) {
            std::uint64_t s2 = support_step(h, s, static_cast<int>(a));
            for (std::size_t r = 0; r < n; ++r)
                if (h.psi[a].at(q, r) != 0) intern(s2, static_cast<int>(r));
        }
    }

    SupportChain chain;
    chain.nodes = nodes;
    chain.t = RatMatrix(nodes.size(), nodes.size());
    for (std::size_t i = 0; i < nodes.size(); ++i) {
        auto [s, q] = nodes[i];
        for (std::size_t a = 0; a < h.num_letters(); ++a) {
            std::uint64_t s2 = support_step(h, s, static_cast<int>(a));
            for (std::size_t r = 0; r < n; ++r) {
                const Rational& p = h.psi[a].at(q, static_cast<int>(r));
                if (p == 0) continue;
                int j = index.at({s2, static_cast<int>(r)});
                chain.t.at(i, j) += p;
            }
        }
    }
    chain.iota.assign(nodes.size(), Rational(0));
    for (std::size_t q = 0; q < n; ++q)
        if (pi2[q] != 0) chain.iota[index.at({s0, static_cast<int>(q)})] = pi2[q];
    chain.scc = scc_decompose(graph_of(chain.t));
    chain.bottom_components = chain.scc.bottom;
    return chain;
}

ExponentClass classify_bottom_scc(const Hmm& h, const SupportChain& chain,
                                  int component, std::size_t budget) {
    const auto& comp = chain.scc.components[component];
    for (int node : comp)
        if (chain.nodes[node].first == 0) return ExponentClass::NegInf;
    auto [s, q] = chain.nodes[comp.front()];
    auto verdict = distinguishability_masks(h, s, 1ull << q, budget);
    switch (verdict.kind) {
        case Distinguishability::NotDistinguishable: return ExponentClass::Zero;
        case Distinguishability::Distinguishable: return ExponentClass::NegFinite;
        case Distinguishability::Unknown: return ExponentClass::UnknownFinite;
    }
    return ExponentClass::UnknownFinite;
}

std::vector<ExponentClass> classify_bottom_sccs(const Hmm& h,
                                                const SupportChain& chain,
                                                std::size_t budget) {
    std::vector<ExponentClass> out;
    out.reserve(chain.bottom_components.size());
    for (int c : chain.bottom_components)
        out.push_back(classify_bottom_scc(h, chain, c, budget));
    return out;
}

namespace {

MarkovChain chain_as_markov(const SupportChain& chain) {
    MarkovChain mc;
    mc.states.resize(chain.nodes.size());
    for (std::size_t i = 0; i < chain.nodes.size(); ++i)
        mc.states[i] = "n" + std::to_string(i);
    mc.t = chain.t;
    return mc;
}

}  // namespace

Rational prob_Einf(const Hmm& h, const Dist& pi1, const Dist& pi2,
                   std::size_t node_cap) {
    SupportChain chain = build_support_chain(h, pi1, pi2, node_cap);
    std::vector<int> target;
    for (int c : chain.bottom_components) {
        const auto& comp = chain.scc.components[c];
        bool neg_inf = false;
        for (int node : comp)
            if (chain.nodes[node].first == 0) neg_inf = true;
        if (neg_inf) target.insert(target.end(), comp.begin(), comp.end());
    }
    if (target.empty()) return Rational(0);
    auto probs = hitting_probabilities(chain_as_markov(chain), chain.iota, {target});
    return probs[0];
}

Rational prob_E0(const Hmm& h, const Dist& pi1, const Dist& pi2,
                 std::size_t node_cap, std::size_t budget) {
    SupportChain chain = build_support_chain(h, pi1, pi2, node_cap);
    std::vector<int> target;
    for (int c : chain.bottom_components) {
        ExponentClass cls = classify_bottom_scc(h, chain, c, budget);
        if (cls == ExponentClass::UnknownFinite)
            throw ClassificationIncomplete(
                "distinguishability budget exhausted on a bottom SCC");
        if (cls == ExponentClass::Zero) {
            const auto& comp = chain.scc.components[c];
            target.insert(target.end(), comp.begin(), comp.end());
        }
    }
    if (target.empty()) return Rational(0);
    auto probs = hitting_probabilities(chain_as_markov(chain), chain.iota, {target});
    return probs[0];
}

ExponentProfile exponent_profile(const Hmm& h, const Dist& pi1, const Dist& pi2,
                                 std::size_t node_cap, std::size_t budget) {
    SupportChain chain = build_support_chain(h, pi1, pi2, node_cap);
    ExponentProfile profile;
    std::size_t nq = h.num_states();
    profile.state_bound = nq * nq + 1;

    std::vector<std::vector<int>> targets;
    for (int c : chain.bottom_components)
        targets.push_back(chain.scc.components[c]);
    auto probs = hitting_probabilities(chain_as_markov(chain), chain.iota, targets);

    for (std::size_t k = 0; k < chain.bottom_components.size(); ++k) {
        int c = chain.bottom_components[k];
        ExponentClass cls = classify_bottom_scc(h, chain, c, budget);
        if (cls == ExponentClass::NegFinite || cls == ExponentClass::UnknownFinite)
            ++profile.negfinite_handles;
        profile.entries.push_back({cls, c, probs[k], std::nullopt});
    }
    return profile;
}

double refine_exponent_estimate(const Hmm& h, const SupportChain& chain,
                                int component, std::size_t steps,
                                std::uint64_t seed) {
    auto [s, q] = chain.nodes[chain.scc.components[component].front()];
    if (s == 0) return -std::numeric_limits<double>::infinity();
    Dist pi1 = uniform_on(h, s);
    Dist pi2 = dirac(h, q);
    auto series = loglik_series(h, pi2, pi1, pi2, steps, seed);
    return slope_estimate(series, 0.1);
}

}  // namespace hmmsprt
