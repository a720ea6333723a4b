#include "hmmsprt/deterministic.hpp"

#include <algorithm>
#include <map>

#include "hmmsprt/errors.hpp"

namespace hmmsprt {

bool is_deterministic(const Hmm& h) {
    for (const auto& p : h.psi)
        for (std::size_t q = 0; q < h.num_states(); ++q) {
            int nonzero = 0;
            for (std::size_t r = 0; r < h.num_states(); ++r)
                if (p.at(q, r) != 0) ++nonzero;
            if (nonzero > 1) return false;
        }
    return true;
}

namespace {

// Unique successor of q under letter a, or -1 when the row is zero.
int det_target(const Hmm& h, int a, int q) {
    for (std::size_t r = 0; r < h.num_states(); ++r)
        if (h.psi[a].at(q, r) != 0) return static_cast<int>(r);
    return -1;
}

}  // namespace

RatMatrix PairHmm::embedded() const {
    RatMatrix t(num_states(), num_states());
    for (const auto& p : psi)
        for (std::size_t i = 0; i < t.data.size(); ++i) t.data[i] += p.data[i];
    return t;
}

PairHmm build_pair_hmm(const Hmm& h, int q1, int q2) {
    if (!is_deterministic(h))
        throw NotDeterministic("the exact algorithm needs a deterministic HMM");

    PairHmm out;
    std::map<std::pair<int, int>, int> index;
    auto intern = [&](int a, int b) {
        auto key = std::make_pair(a, b);
        auto it = index.find(key);
        if (it != index.end()) return it->second;
        int id = static_cast<int>(out.pair_states.size());
        index[key] = id;
        out.pair_states.push_back(key);
        return id;
    };
    out.start_index = intern(q1, q2);

    struct Edge {
        int from, to;       // pair indices; to == -1 encodes the sink
        LogExpr obs;
        Rational prob;
    };
    std::vector<Edge> edges;
    for (std::size_t at = 0; at < out.pair_states.size(); ++at) {
        auto [p1, p2] = out.pair_states[at];
        for (std::size_t a = 0; a < h.num_letters(); ++a) {
            int r2 = det_target(h, static_cast<int>(a), p2);
            if (r2 == -1) continue;  // letter impossible on the pi2 side
            Rational prob = h.psi[a].at(p2, r2);
            int r1 = det_target(h, static_cast<int>(a), p1);
            if (r1 == -1) {
                out.has_bot = true;
                edges.push_back({static_cast<int>(at), -1,
                                 LogExpr::neg_infinity(), prob});
            } else {
                LogExpr obs = LogExpr::log_of(h.psi[a].at(p1, r1) /
                                              h.psi[a].at(p2, r2));
                int to = intern(r1, r2);
                edges.push_back({static_cast<int>(at), to, std::move(obs), prob});
            }
        }
    }

    std::size_t n = out.pair_states.size() + (out.has_bot ? 1 : 0);
    if (out.has_bot) out.bot_index = static_cast<int>(out.pair_states.size());

    // one matrix per distinct observation value; equal ratios arising
    // from different letters are merged by summing their probabilities
    auto obs_index = [&](const LogExpr& e) {
        for (std::size_t i = 0; i < out.observations.size(); ++i)
            if (out.observations[i] == e) return static_cast<int>(i);
        out.observations.push_back(e);
        out.psi.emplace_back(n, n);
        return static_cast<int>(out.observations.size()) - 1;
    };
    for (const auto& e : edges) {
        int k = obs_index(e.obs);
        int to = e.to == -1 ? out.bot_index : e.to;
        out.psi[k].at(e.from, to) += e.prob;
    }
    if (out.has_bot) {
        int k = obs_index(LogExpr::neg_infinity());
        out.psi[k].at(out.bot_index, out.bot_index) = 1;
    }
    return out;
}

LogExpr average_observation(const PairHmm& a_hat, const std::vector<int>& comp) {
    // stationary distribution of the embedded chain restricted to comp
    RatMatrix full = a_hat.embedded();
    MarkovChain sub;
    sub.t = RatMatrix(comp.size(), comp.size());
    sub.states.resize(comp.size());
    for (std::size_t i = 0; i < comp.size(); ++i) {
        sub.states[i] = std::to_string(comp[i]);
        for (std::size_t j = 0; j < comp.size(); ++j)
            sub.t.at(i, j) = full.at(comp[i], comp[j]);
    }
    Dist mu = stationary_distribution(sub);

    LogExpr result;
    for (std::size_t i = 0; i < comp.size(); ++i) {
        // nu_i = sum over observations of (row mass) * observation
        for (std::size_t k = 0; k < a_hat.observations.size(); ++k) {
            Rational mass;
            for (std::size_t j = 0; j < a_hat.num_states(); ++j)
                mass += a_hat.psi[k].at(comp[i], j);
            if (mass != 0) result.add_scaled(mu[i] * mass, a_hat.observations[k]);
        }
    }
    return result;
}

std::vector<std::pair<LogExpr, Rational>> exact_exponents(const Hmm& h, int q1,
                                                          int q2) {
    PairHmm a_hat = build_pair_hmm(h, q1, q2);
    RatMatrix t = a_hat.embedded();
    auto scc = scc_decompose(graph_of(t));

    MarkovChain mc;
    mc.t = t;
    mc.states.resize(a_hat.num_states());
    for (std::size_t i = 0; i < mc.states.size(); ++i)
        mc.states[i] = "p" + std::to_string(i);

    std::vector<std::vector<int>> targets;
    std::vector<LogExpr> values;
    for (int c : scc.bottom) {
        const auto& comp = scc.components[c];
        bool is_bot = a_hat.has_bot &&
                      std::find(comp.begin(), comp.end(), a_hat.bot_index) !=
                          comp.end();
        targets.push_back(comp);
        values.push_back(is_bot ? LogExpr::neg_infinity()
                                : average_observation(a_hat, comp));
    }
    Dist iota(a_hat.num_states());
    iota[a_hat.start_index] = 1;
    RatVector probs = hitting_probabilities(mc, iota, targets);

    // group bottom SCCs sharing the same exact exponent
    std::vector<std::pair<LogExpr, Rational>> result;
    for (std::size_t k = 0; k < values.size(); ++k) {
        if (probs[k] == 0) continue;
        bool merged = false;
        for (auto& [value, prob] : result)
            if (value == values[k]) {
                prob += probs[k];
                merged = true;
                break;
            }
        if (!merged) result.emplace_back(values[k], probs[k]);
    }
    std::sort(result.begin(), result.end(), [](const auto& a, const auto& b) {
        if (a.first.is_neg_infinity() != b.first.is_neg_infinity())
            return a.first.is_neg_infinity();
        return a.first.to_double() < b.first.to_double();
    });
    return result;
}

}  // namespace hmmsprt
