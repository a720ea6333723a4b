#include "hmmsprt/lyapunov.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <map>
#include <set>
#include <thread>

#include "hmmsprt/errors.hpp"
#include "hmmsprt/rng.hpp"

namespace hmmsprt {

ProductGraph product_graph(const MatrixSystem& m1, const MatrixSystem& m2) {
    if (m1.alphabet != m2.alphabet)
        throw AlphabetMismatch("product graph needs a shared alphabet");
    ProductGraph pg;
    pg.n1 = m1.num_states();
    pg.n2 = m2.num_states();
    pg.g = Digraph(pg.n1 * pg.n2);
    for (std::size_t a = 0; a < m1.num_letters(); ++a) {
        for (std::size_t q1 = 0; q1 < pg.n1; ++q1)
            for (std::size_t r1 = 0; r1 < pg.n1; ++r1) {
                if (m1.psi[a].at(q1, r1) == 0) continue;
                for (std::size_t q2 = 0; q2 < pg.n2; ++q2)
                    for (std::size_t r2 = 0; r2 < pg.n2; ++r2) {
                        if (m2.psi[a].at(q2, r2) == 0) continue;
                        pg.g.add_edge(pg.index(static_cast<int>(q1), static_cast<int>(q2)),
                                      pg.index(static_cast<int>(r1), static_cast<int>(r2)));
                    }
            }
    }
    // dedupe adjacency built per letter
    for (auto& adj : pg.g.adj) {
        std::sort(adj.begin(), adj.end());
        adj.erase(std::unique(adj.begin(), adj.end()), adj.end());
    }
    return pg;
}

std::vector<std::vector<int>> right_bottom_sccs(const Hmm& h) {
    ProductGraph pg = product_graph(h, h);
    auto prod_scc = scc_decompose(pg.g);
    auto emb_scc = scc_decompose(graph_of(h));

    std::vector<std::set<int>> bottom_sets;
    for (int c : emb_scc.bottom)
        bottom_sets.emplace_back(emb_scc.components[c].begin(),
                                 emb_scc.components[c].end());

    std::vector<std::vector<int>> result;
    for (const auto& comp : prod_scc.components) {
        std::set<int> right;
        for (int node : comp) right.insert(pg.pair_of(node).second);
        for (const auto& bs : bottom_sets)
            if (right == bs) {
                result.push_back(comp);
                break;
            }
    }
    std::sort(result.begin(), result.end());
    return result;
}

namespace {

std::string pair_name(const Hmm& h, int q1, int q2) {
    return h.states[q1] + "|" + h.states[q2];
}

}  // namespace

std::pair<GeneralizedLyapunovSystem, GeneralizedLyapunovSystem>
build_generalized_systems(const Hmm& h, const std::vector<int>& r_nodes) {
    ProductGraph pg = product_graph(h, h);
    std::set<int> qr_set;
    for (int node : r_nodes) qr_set.insert(pg.pair_of(node).second);
    std::vector<int> qr(qr_set.begin(), qr_set.end());
    std::vector<int> qr_pos(h.num_states(), -1);
    for (std::size_t i = 0; i < qr.size(); ++i) qr_pos[qr[i]] = static_cast<int>(i);

    // H2 emits (letter, next state) and is strongly connected because
    // Q_R is a bottom SCC of the embedded chain.
    std::vector<std::string> h2_states;
    for (int q : qr) h2_states.push_back(h.states[q]);
    std::vector<std::string> h2_alpha;
    for (std::size_t a = 0; a < h.num_letters(); ++a)
        for (int r : qr) h2_alpha.push_back(h.alphabet[a] + "|" + h.states[r]);
    std::vector<RatMatrix> h2_psi;
    for (std::size_t a = 0; a < h.num_letters(); ++a)
        for (std::size_t ri = 0; ri < qr.size(); ++ri) {
            RatMatrix m(qr.size(), qr.size());
            for (std::size_t p = 0; p < qr.size(); ++p)
                m.at(p, ri) = h.psi[a].at(qr[p], qr[ri]);
            h2_psi.push_back(std::move(m));
        }
    Hmm h2 = validate_hmm(h2_states, h2_alpha, h2_psi);
    if (scc_decompose(graph_of(h2)).components.size() != 1)
        throw Error("driving system is not strongly connected");

    auto build_m = [&](const std::vector<int>& nodes) {
        MatrixSystem m;
        m.alphabet = h2_alpha;
        std::map<int, int> pos;
        std::vector<std::pair<int, int>> pairs;
        for (int node : nodes) {
            pos[node] = static_cast<int>(pairs.size());
            auto [a, b] = pg.pair_of(node);
            pairs.emplace_back(a, b);
            m.states.push_back(pair_name(h, a, b));
        }
        for (std::size_t a = 0; a < h.num_letters(); ++a)
            for (std::size_t ri = 0; ri < qr.size(); ++ri) {
                RatMatrix mat(pairs.size(), pairs.size());
                int r2 = qr[ri];
                for (std::size_t u = 0; u < pairs.size(); ++u) {
                    auto [p1, p2] = pairs[u];
                    (void)p2;
                    for (std::size_t v = 0; v < pairs.size(); ++v) {
                        auto [t1, t2] = pairs[v];
                        if (t2 != r2) continue;
                        mat.at(u, v) = h.psi[a].at(p1, t1);
                    }
                }
                m.psi.push_back(std::move(mat));
            }
        return std::make_pair(m, pairs);
    };

    GeneralizedLyapunovSystem s1;
    std::tie(s1.m, s1.m_pairs) = build_m(r_nodes);
    s1.h2 = h2;
    s1.h_states = qr;
    s1.m_start = 0;
    s1.h_start = qr_pos[s1.m_pairs[0].second];

    // denominator: the SCC containing the diagonal vertices of Q_R
    auto prod_scc = scc_decompose(pg.g);
    int diag_comp = prod_scc.component_of[pg.index(qr[0], qr[0])];
    for (int q : qr)
        if (prod_scc.component_of[pg.index(q, q)] != diag_comp)
            throw Error("diagonal vertices split across SCCs");
    GeneralizedLyapunovSystem s2;
    std::tie(s2.m, s2.m_pairs) = build_m(prod_scc.components[diag_comp]);
    s2.h2 = h2;
    s2.h_states = qr;
    s2.h_start = s1.h_start;
    int diag_state = qr[s1.h_start];
    s2.m_start = -1;
    for (std::size_t i = 0; i < s2.m_pairs.size(); ++i)
        if (s2.m_pairs[i] == std::make_pair(diag_state, diag_state))
            s2.m_start = static_cast<int>(i);
    if (s2.m_start < 0) throw Error("diagonal start pair missing");
    return {std::move(s1), std::move(s2)};
}

LyapunovSystem generalized_to_plain(const GeneralizedLyapunovSystem& s) {
    const Hmm& h2 = s.h2;
    std::size_t nh = h2.num_states();

    // overlay the cumulative emission breakpoints of every H-state
    std::set<Rational> cuts;
    cuts.insert(Rational(0));
    cuts.insert(Rational(1));
    for (std::size_t p = 0; p < nh; ++p) {
        Rational acc;
        for (std::size_t a = 0; a < h2.num_letters(); ++a)
            for (std::size_t q = 0; q < nh; ++q) {
                const Rational& w = h2.psi[a].at(p, q);
                if (w == 0) continue;
                acc += w;
                cuts.insert(acc);
            }
    }
    std::vector<Rational> points(cuts.begin(), cuts.end());

    // cell lookup: which (letter, successor) of state p covers an atom
    struct Cell {
        Rational hi;
        int letter;
        int target;
    };
    std::vector<std::vector<Cell>> cells(nh);
    for (std::size_t p = 0; p < nh; ++p) {
        Rational acc;
        for (std::size_t a = 0; a < h2.num_letters(); ++a)
            for (std::size_t q = 0; q < nh; ++q) {
                const Rational& w = h2.psi[a].at(p, q);
                if (w == 0) continue;
                acc += w;
                cells[p].push_back({acc, static_cast<int>(a), static_cast<int>(q)});
            }
    }

    LyapunovSystem out;
    out.m.states = s.m.states;
    std::size_t nm = s.m.states.size();
    for (std::size_t j = 0; j + 1 < points.size(); ++j) {
        const Rational& lo = points[j];
        out.rho.push_back(points[j + 1] - lo);
        out.m.alphabet.push_back("u" + std::to_string(j));
        RatMatrix mat(nm, nm);
        for (std::size_t u = 0; u < nm; ++u) {
            int p = -1;  // h2-state matching the right component of u
            for (std::size_t i = 0; i < s.h_states.size(); ++i)
                if (s.h_states[i] == s.m_pairs[u].second) p = static_cast<int>(i);
            if (p < 0) continue;
            const Cell* cell = nullptr;
            for (const auto& c : cells[p])
                if (lo < c.hi) {
                    cell = &c;
                    break;
                }
            if (!cell) continue;
            // the cell's letter is already an index into the shared
            // (letter, successor) alphabet of the driving system
            for (std::size_t v = 0; v < nm; ++v)
                mat.at(u, v) = s.m.psi[cell->letter].at(u, v);
        }
        out.m.psi.push_back(std::move(mat));
    }

    Rational total;
    for (const auto& r : out.rho) total += r;
    if (total != 1) throw Error("atom lengths do not sum to 1");
    return out;
}

namespace {

struct SparseLetter {
    struct Entry {
        int from, to;
        double w;
    };
    std::vector<Entry> entries;
};

std::vector<SparseLetter> sparsify(const MatrixSystem& m) {
    std::vector<SparseLetter> out(m.num_letters());
    for (std::size_t a = 0; a < m.num_letters(); ++a)
        for (std::size_t i = 0; i < m.num_states(); ++i)
            for (std::size_t j = 0; j < m.num_states(); ++j) {
                const Rational& w = m.psi[a].at(i, j);
                if (w != 0)
                    out[a].entries.push_back({static_cast<int>(i),
                                              static_cast<int>(j), rat_double(w)});
            }
    return out;
}

// One renormalized vector-propagation step; returns false on death.
bool propagate(const SparseLetter& letter, const std::vector<double>& v,
               std::vector<double>& next, double& log_acc) {
    std::fill(next.begin(), next.end(), 0.0);
    bool alive = false;
    for (const auto& e : letter.entries) {
        if (v[e.from] == 0.0) continue;
        next[e.to] += v[e.from] * e.w;
        alive = true;
    }
    if (!alive) return false;
    double norm = 0.0;
    for (double x : next) norm += x;
    if (norm <= 0.0) return false;
    for (double& x : next) x /= norm;
    log_acc += std::log(norm);
    return true;
}

template <typename ReplicaFn>
void parallel_replicas(std::size_t replicas, unsigned threads, ReplicaFn fn) {
    unsigned nthreads = threads ? threads : std::thread::hardware_concurrency();
    nthreads = std::max(1u, std::min<unsigned>(nthreads, replicas));
    std::atomic<std::size_t> next{0};
    auto worker = [&]() {
        while (true) {
            std::size_t i = next.fetch_add(1);
            if (i >= replicas) break;
            fn(i);
        }
    };
    if (nthreads == 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        for (unsigned t = 0; t < nthreads; ++t) pool.emplace_back(worker);
        for (auto& t : pool) t.join();
    }
}

LyapunovEstimate summarize(const std::vector<double>& values, std::size_t n,
                           std::size_t replicas) {
    LyapunovEstimate est;
    est.n = n;
    est.replicas = replicas;
    std::size_t alive = values.size();
    est.dead_fraction =
        static_cast<double>(replicas - alive) / static_cast<double>(replicas);
    if (alive == 0)
        throw AllTrajectoriesDead("every sampled trajectory hit zero mass");
    double mean = 0.0;
    for (double v : values) mean += v;
    mean /= static_cast<double>(alive);
    double var = 0.0;
    for (double v : values) var += (v - mean) * (v - mean);
    if (alive > 1) var /= static_cast<double>(alive - 1);
    est.mean = mean;
    est.stderr_ = alive > 1 ? std::sqrt(var / static_cast<double>(alive)) : 0.0;
    return est;
}

}  // namespace

LyapunovEstimate mc_lyapunov(const LyapunovSystem& s, int start, std::size_t n,
                             std::size_t replicas, std::uint64_t seed,
                             unsigned threads) {
    if (n < 1 || replicas < 1) throw Error("n and replicas must be >= 1");
    auto letters = sparsify(s.m);
    std::vector<double> cum(s.rho.size());
    double acc = 0.0;
    for (std::size_t i = 0; i < s.rho.size(); ++i) {
        acc += rat_double(s.rho[i]);
        cum[i] = acc;
    }
    cum.back() = 1.0;

    std::vector<std::vector<double>> results(replicas);
    parallel_replicas(replicas, threads, [&](std::size_t i) {
        Rng rng = Rng::stream(seed, i);
        std::vector<double> v(s.m.num_states(), 0.0), next(s.m.num_states());
        v[start] = 1.0;
        double log_acc = 0.0;
        for (std::size_t step = 0; step < n; ++step) {
            double u = rng.uniform();
            std::size_t a = 0;
            while (a + 1 < cum.size() && u >= cum[a]) ++a;
            if (!propagate(letters[a], v, next, log_acc)) return;  // dead
            v.swap(next);
        }
        results[i] = {log_acc / static_cast<double>(n)};
    });
    std::vector<double> values;
    for (auto& r : results)
        if (!r.empty()) values.push_back(r[0]);
    return summarize(values, n, replicas);
}

namespace {

// Per-state sampling table for the (letter, next state) process of H2.
struct H2Sampler {
    struct Outcome {
        double cum;
        int letter;  // h2 letter index
        int target;  // h2 state index
    };
    std::vector<std::vector<Outcome>> rows;

    explicit H2Sampler(const Hmm& h2) {
        std::size_t nh = h2.num_states();
        rows.resize(nh);
        for (std::size_t p = 0; p < nh; ++p) {
            double acc = 0.0;
            for (std::size_t a = 0; a < h2.num_letters(); ++a)
                for (std::size_t q = 0; q < nh; ++q) {
                    const Rational& w = h2.psi[a].at(p, q);
                    if (w == 0) continue;
                    acc += rat_double(w);
                    rows[p].push_back({acc, static_cast<int>(a), static_cast<int>(q)});
                }
            if (!rows[p].empty()) rows[p].back().cum = 1.0;
        }
    }

    const Outcome& sample(int state, Rng& rng) const {
        double u = rng.uniform();
        for (const auto& o : rows[state])
            if (u < o.cum) return o;
        return rows[state].back();
    }
};

}  // namespace

LyapunovEstimate mc_lyapunov(const GeneralizedLyapunovSystem& s, std::size_t n,
                             std::size_t replicas, std::uint64_t seed,
                             unsigned threads) {
    if (n < 1 || replicas < 1) throw Error("n and replicas must be >= 1");
    auto letters = sparsify(s.m);
    H2Sampler sampler(s.h2);

    std::vector<std::vector<double>> results(replicas);
    parallel_replicas(replicas, threads, [&](std::size_t i) {
        Rng rng = Rng::stream(seed, i);
        std::vector<double> v(s.m.num_states(), 0.0), next(s.m.num_states());
        v[s.m_start] = 1.0;
        int hstate = s.h_start;
        double log_acc = 0.0;
        for (std::size_t step = 0; step < n; ++step) {
            const auto& o = sampler.sample(hstate, rng);
            hstate = o.target;
            if (!propagate(letters[o.letter], v, next, log_acc)) return;
            v.swap(next);
        }
        results[i] = {log_acc / static_cast<double>(n)};
    });
    std::vector<double> values;
    for (auto& r : results)
        if (!r.empty()) values.push_back(r[0]);
    return summarize(values, n, replicas);
}

std::vector<CandidateExponent> candidate_exponents(const Hmm& h,
                                                   const McConfig& cfg) {
    std::vector<CandidateExponent> out;
    for (const auto& r_nodes : right_bottom_sccs(h)) {
        auto [s1, s2] = build_generalized_systems(h, r_nodes);
        auto letters1 = sparsify(s1.m);
        auto letters2 = sparsify(s2.m);
        H2Sampler sampler(s1.h2);

        struct PairResult {
            bool alive = false;
            double l1 = 0.0, l2 = 0.0;
        };
        std::vector<PairResult> results(cfg.replicas);
        parallel_replicas(cfg.replicas, cfg.threads, [&](std::size_t i) {
            Rng rng = Rng::stream(cfg.seed, i);
            std::vector<double> v1(s1.m.num_states(), 0.0), n1(s1.m.num_states());
            std::vector<double> v2(s2.m.num_states(), 0.0), n2(s2.m.num_states());
            v1[s1.m_start] = 1.0;
            v2[s2.m_start] = 1.0;
            int hstate = s1.h_start;
            double acc1 = 0.0, acc2 = 0.0;
            for (std::size_t step = 0; step < cfg.n; ++step) {
                const auto& o = sampler.sample(hstate, rng);
                hstate = o.target;
                if (!propagate(letters1[o.letter], v1, n1, acc1)) return;
                v1.swap(n1);
                if (!propagate(letters2[o.letter], v2, n2, acc2)) return;
                v2.swap(n2);
            }
            double steps = static_cast<double>(cfg.n);
            results[i] = {true, acc1 / steps, acc2 / steps};
        });

        CandidateExponent cand;
        cand.r_nodes = r_nodes;
        std::vector<double> l1s, l2s, diffs;
        for (const auto& r : results)
            if (r.alive) {
                l1s.push_back(r.l1);
                l2s.push_back(r.l2);
                diffs.push_back(r.l1 - r.l2);
            }
        cand.dead_fraction =
            static_cast<double>(cfg.replicas - l1s.size()) /
            static_cast<double>(cfg.replicas);
        if (!l1s.empty()) {
            cand.defined = true;
            cand.lambda1 = summarize(l1s, cfg.n, cfg.replicas);
            cand.lambda2 = summarize(l2s, cfg.n, cfg.replicas);
            auto diff_est = summarize(diffs, cfg.n, cfg.replicas);
            cand.difference = diff_est.mean;
            cand.difference_stderr = diff_est.stderr_;
        }
        out.push_back(std::move(cand));
    }
    return out;
}

std::size_t distinct_negfinite_bound(
    const Hmm& h, const std::vector<std::pair<std::uint64_t, int>>& handles) {
    if (handles.empty()) return 0;
    ProductGraph pg = product_graph(h, h);
    auto rb = right_bottom_sccs(h);
    std::set<std::vector<int>> keys;
    for (const auto& [support, state] : handles) {
        std::vector<int> seeds;
        for (std::size_t q1 = 0; q1 < h.num_states(); ++q1)
            if (support >> q1 & 1)
                seeds.push_back(pg.index(static_cast<int>(q1), state));
        auto reach = reachable(pg.g, seeds);
        std::vector<int> key;
        for (std::size_t k = 0; k < rb.size(); ++k)
            for (int node : rb[k])
                if (reach[node]) {
                    key.push_back(static_cast<int>(k));
                    break;
                }
        keys.insert(key);
    }
    return std::min(keys.size(), rb.size());
}

}  // namespace hmmsprt
