#include "hmmsprt/model.hpp"

#include <algorithm>

#include "hmmsprt/errors.hpp"

namespace hmmsprt {

int MatrixSystem::state_index(const std::string& name) const {
    for (std::size_t i = 0; i < states.size(); ++i)
        if (states[i] == name) return static_cast<int>(i);
    throw UnknownSymbol("unknown state '" + name + "'");
}

int MatrixSystem::letter_index(const std::string& name) const {
    for (std::size_t i = 0; i < alphabet.size(); ++i)
        if (alphabet[i] == name) return static_cast<int>(i);
    throw UnknownSymbol("unknown letter '" + name + "'");
}

Hmm validate_hmm(std::vector<std::string> states,
                 std::vector<std::string> alphabet,
                 std::vector<RatMatrix> psi) {
    if (states.empty()) throw ParseError("model has no states");
    if (alphabet.empty()) throw ParseError("model has no letters");
    if (psi.size() != alphabet.size())
        throw ParseError("one transition matrix per letter required");
    std::size_t n = states.size();
    for (std::size_t a = 0; a < psi.size(); ++a) {
        if (psi[a].rows != n || psi[a].cols != n)
            throw ParseError("matrix for letter '" + alphabet[a] + "' is not " +
                             std::to_string(n) + "x" + std::to_string(n));
        for (const auto& e : psi[a].data)
            if (e < 0)
                throw NegativeEntry("negative entry in matrix for letter '" +
                                    alphabet[a] + "'");
    }
    for (std::size_t q = 0; q < n; ++q) {
        Rational sum;
        for (std::size_t a = 0; a < psi.size(); ++a)
            for (std::size_t r = 0; r < n; ++r) sum += psi[a].at(q, r);
        if (sum != 1) {
            Rational deficit = 1 - sum;
            throw NonStochastic("row of state '" + states[q] +
                                "' sums to " + rat_str(sum) +
                                " (deficit " + rat_str(deficit) + ")");
        }
    }
    Hmm h;
    h.states = std::move(states);
    h.alphabet = std::move(alphabet);
    h.psi = std::move(psi);
    return h;
}

Dist dirac(const MatrixSystem& m, int state) {
    Dist pi(m.num_states());
    pi[state] = 1;
    return pi;
}

Dist dirac(const MatrixSystem& m, const std::string& state) {
    return dirac(m, m.state_index(state));
}

Dist uniform_on(const MatrixSystem& m, std::uint64_t support) {
    Dist pi(m.num_states());
    int count = 0;
    for (std::size_t q = 0; q < m.num_states(); ++q)
        if (support >> q & 1) ++count;
    if (count == 0) throw Error("uniform distribution on an empty support");
    for (std::size_t q = 0; q < m.num_states(); ++q)
        if (support >> q & 1) pi[q] = rat(1, count);
    return pi;
}

void check_dist(const MatrixSystem& m, const Dist& pi) {
    if (pi.size() != m.num_states())
        throw ParseError("distribution has wrong dimension");
    Rational sum;
    for (const auto& p : pi) {
        if (p < 0) throw NegativeEntry("negative probability in distribution");
        sum += p;
    }
    if (sum != 1) throw NonStochastic("distribution sums to " + rat_str(sum));
}

RatMatrix psi_word(const MatrixSystem& m, const Word& w) {
    RatMatrix acc = RatMatrix::identity(m.num_states());
    for (int a : w) acc = mat_mul(acc, m.psi.at(a));
    return acc;
}

Rational trace_prob(const Hmm& h, const Dist& pi, const Word& w) {
    RatVector v = pi;
    for (int a : w) v = vec_mat(v, h.psi.at(a));
    return l1_norm(v);
}

std::uint64_t support_mask(const RatVector& v) {
    std::uint64_t mask = 0;
    for (std::size_t q = 0; q < v.size(); ++q)
        if (v[q] != 0) mask |= 1ull << q;
    return mask;
}

void require_mask_capacity(const MatrixSystem& m) {
    if (m.num_states() > 64)
        throw CapExceeded("support-set analyses are limited to 64 states");
}

std::uint64_t support_step(const MatrixSystem& m, std::uint64_t support, int letter) {
    const RatMatrix& p = m.psi.at(letter);
    std::uint64_t out = 0;
    for (std::size_t q = 0; q < m.num_states(); ++q) {
        if (!(support >> q & 1)) continue;
        for (std::size_t r = 0; r < m.num_states(); ++r)
            if (p.at(q, r) != 0) out |= 1ull << r;
    }
    return out;
}

MarkovChain embedded_chain(const Hmm& h) {
    std::size_t n = h.num_states();
    MarkovChain mc;
    mc.states = h.states;
    mc.t = RatMatrix(n, n);
    for (const auto& p : h.psi)
        for (std::size_t i = 0; i < n * n; ++i) mc.t.data[i] += p.data[i];
    return mc;
}

Digraph graph_of(const RatMatrix& t) {
    Digraph g(t.rows);
    for (std::size_t i = 0; i < t.rows; ++i)
        for (std::size_t j = 0; j < t.cols; ++j)
            if (t.at(i, j) != 0) g.add_edge(static_cast<int>(i), static_cast<int>(j));
    return g;
}

Digraph graph_of(const MatrixSystem& m) {
    std::size_t n = m.num_states();
    Digraph g(n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            for (const auto& p : m.psi)
                if (p.at(i, j) != 0) {
                    g.add_edge(static_cast<int>(i), static_cast<int>(j));
                    break;
                }
        }
    return g;
}

MatrixSystem restrict_system(const MatrixSystem& m, const std::vector<int>& keep) {
    MatrixSystem out;
    out.alphabet = m.alphabet;
    for (int q : keep) out.states.push_back(m.states[q]);
    for (const auto& p : m.psi) {
        RatMatrix sub(keep.size(), keep.size());
        for (std::size_t i = 0; i < keep.size(); ++i)
            for (std::size_t j = 0; j < keep.size(); ++j)
                sub.at(i, j) = p.at(keep[i], keep[j]);
        out.psi.push_back(std::move(sub));
    }
    return out;
}

HmmSim::HmmSim(const Hmm& h) : n(h.num_states()) {
    rows.resize(n);
    psi_d.resize(h.num_letters());
    psi_pos.resize(h.num_letters());
    for (std::size_t a = 0; a < h.num_letters(); ++a) {
        psi_d[a].resize(n * n);
        psi_pos[a].resize(n * n);
        for (std::size_t i = 0; i < n * n; ++i) {
            psi_d[a][i] = rat_double(h.psi[a].data[i]);
            psi_pos[a][i] = h.psi[a].data[i] != 0;
        }
    }
    for (std::size_t q = 0; q < n; ++q) {
        double cum = 0.0;
        for (std::size_t a = 0; a < h.num_letters(); ++a)
            for (std::size_t r = 0; r < n; ++r) {
                if (h.psi[a].at(q, r) == 0) continue;
                cum += rat_double(h.psi[a].at(q, r));
                rows[q].push_back({cum, static_cast<int>(a), static_cast<int>(r)});
            }
        if (!rows[q].empty()) rows[q].back().cum = 1.0;
    }
}

int HmmSim::sample_initial(const Dist& pi, Rng& rng) const {
    double u = rng.uniform();
    double cum = 0.0;
    int last = -1;
    for (std::size_t q = 0; q < pi.size(); ++q) {
        if (pi[q] == 0) continue;
        last = static_cast<int>(q);
        cum += rat_double(pi[q]);
        if (u < cum) return last;
    }
    return last;
}

HmmSim::Outcome HmmSim::step(int state, Rng& rng) const {
    const auto& row = rows[state];
    double u = rng.uniform();
    for (const auto& o : row)
        if (u < o.cum) return o;
    return row.back();
}

Run sample_run(const Hmm& h, const Dist& pi, std::size_t n, Rng& rng) {
    check_dist(h, pi);
    HmmSim sim(h);
    Run run;
    run.states.push_back(sim.sample_initial(pi, rng));
    for (std::size_t i = 0; i < n; ++i) {
        auto o = sim.step(run.states.back(), rng);
        run.letters.push_back(o.letter);
        run.states.push_back(o.target);
    }
    return run;
}

Dist stationary_distribution(const MarkovChain& mc) {
    std::size_t n = mc.t.rows;
    auto scc = scc_decompose(graph_of(mc.t));
    if (scc.components.size() != 1)
        throw NotIrreducible("chain is not irreducible (" +
                             std::to_string(scc.components.size()) + " SCCs)");
    // mu (T - I) = 0 with one equation replaced by sum(mu) = 1
    RatMatrix a(n, n);
    RatVector b(n);
    for (std::size_t j = 0; j < n; ++j) {
        for (std::size_t i = 0; i < n; ++i) a.at(j, i) = mc.t.at(i, j);
        a.at(j, j) -= 1;
    }
    for (std::size_t i = 0; i < n; ++i) a.at(n - 1, i) = 1;
    b[n - 1] = 1;
    return solve_linear(a, b);
}

RatVector hitting_probabilities(const MarkovChain& mc, const Dist& iota,
                                const std::vector<std::vector<int>>& targets) {
    std::size_t n = mc.t.rows;
    std::vector<int> target_of(n, -1);
    for (std::size_t k = 0; k < targets.size(); ++k)
        for (int q : targets[k]) {
            if (target_of[q] != -1) throw TargetNotClosed("targets overlap");
            target_of[q] = static_cast<int>(k);
        }
    auto scc = scc_decompose(graph_of(mc.t));
    for (std::size_t k = 0; k < targets.size(); ++k)
        for (int q : targets[k]) {
            int c = scc.component_of[q];
            if (!scc.is_bottom(c))
                throw TargetNotClosed("target state '" + mc.states[q] +
                                      "' is not in a bottom SCC");
            for (int r : scc.components[c])
                if (target_of[r] != static_cast<int>(k))
                    throw TargetNotClosed("target splits the bottom SCC of '" +
                                          mc.states[q] + "'");
        }

    // Bottom SCCs outside every target absorb with probability 0; only
    // genuinely transient states enter the linear system.
    std::vector<int> transient;
    std::vector<int> pos(n, -1);
    for (std::size_t q = 0; q < n; ++q)
        if (target_of[q] == -1 && !scc.is_bottom(scc.component_of[q])) {
            pos[q] = static_cast<int>(transient.size());
            transient.push_back(static_cast<int>(q));
        }

    RatVector result(targets.size());
    std::size_t m = transient.size();
    RatMatrix hit(m, targets.size());
    if (m > 0) {
        RatMatrix a(m, m);
        RatMatrix b(m, targets.size());
        for (std::size_t i = 0; i < m; ++i) {
            int q = transient[i];
            for (std::size_t r = 0; r < n; ++r) {
                const Rational& p = mc.t.at(q, r);
                if (p == 0) continue;
                if (target_of[r] != -1)
                    b.at(i, target_of[r]) += p;
                else if (pos[r] != -1)
                    a.at(i, pos[r]) -= p;
                // mass entering a non-target bottom SCC never hits any target
            }
            a.at(i, i) += 1;
        }
        hit = solve_linear_multi(a, b);
    }
    for (std::size_t q = 0; q < n; ++q) {
        if (iota[q] == 0) continue;
        if (target_of[q] != -1)
            result[target_of[q]] += iota[q];
        else if (pos[q] != -1)
            for (std::size_t k = 0; k < targets.size(); ++k)
                result[k] += iota[q] * hit.at(pos[q], k);
    }
    return result;
}

std::vector<RatVector> forward_space(const MatrixSystem& m) {
    std::size_t n = m.num_states();
    EchelonBasis basis(n);
    std::vector<RatVector> queue;
    RatVector ones(n, Rational(1));
    basis.insert(ones);
    queue.push_back(ones);
    while (!queue.empty()) {
        RatVector v = std::move(queue.back());
        queue.pop_back();
        for (const auto& p : m.psi) {
            RatVector next = mat_vec(p, v);
            if (basis.insert(next)) queue.push_back(std::move(next));
        }
    }
    return basis.rows();
}

}  // namespace hmmsprt
