#include <doctest.h>

#include <cmath>
#include "helpers.hpp"
#include "hmmsprt/errors.hpp"
#include "hmmsprt/graph.hpp"
#include "hmmsprt/lp.hpp"
#include "hmmsprt/model.hpp"

using namespace hmmsprt;
using namespace hmmsprt::testing;

namespace {

Digraph random_digraph(std::size_t n, double density, Rng& rng) {
    Digraph g(n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            if (rng.uniform() < density) g.add_edge(static_cast<int>(i),
                                                    static_cast<int>(j));
    return g;
}

// transitive closure by repeated squaring of the boolean adjacency
std::vector<std::vector<bool>> closure(const Digraph& g) {
    std::size_t n = g.n;
    std::vector<std::vector<bool>> r(n, std::vector<bool>(n, false));
    for (std::size_t i = 0; i < n; ++i) {
        r[i][i] = true;
        for (int j : g.adj[i]) r[i][j] = true;
    }
    for (std::size_t k = 0; k < n; ++k)
        for (std::size_t i = 0; i < n; ++i)
            if (r[i][k])
                for (std::size_t j = 0; j < n; ++j)
                    if (r[k][j]) r[i][j] = true;
    return r;
}

}  // namespace

TEST_CASE("single node without edges is one trivial bottom SCC") {
    Digraph g(1);
    auto scc = scc_decompose(g);
    REQUIRE(scc.components.size() == 1);
    CHECK(scc.bottom == std::vector<int>{0});
}

TEST_CASE("scc components agree with mutual reachability") {
    Rng rng(29);
    for (int trial = 0; trial < 20; ++trial) {
        Digraph g = random_digraph(7, 0.25, rng);
        auto scc = scc_decompose(g);
        auto reach = closure(g);
        // same component iff mutually reachable
        for (std::size_t i = 0; i < g.n; ++i)
            for (std::size_t j = 0; j < g.n; ++j) {
                bool same = scc.component_of[i] == scc.component_of[j];
                CHECK(same == (reach[i][j] && reach[j][i]));
            }
        // components partition the nodes
        std::size_t total = 0;
        for (const auto& c : scc.components) total += c.size();
        CHECK(total == g.n);
        // condensation is acyclic: components are emitted successors-first
        for (std::size_t c = 0; c < scc.components.size(); ++c)
            for (int d : scc.condensation[c]) CHECK(static_cast<std::size_t>(d) < c);
    }
}

TEST_CASE("reachable closure") {
    Digraph g(4);
    g.add_edge(0, 1);
    g.add_edge(1, 2);
    g.add_edge(3, 0);
    auto r = reachable(g, {0});
    CHECK(r == std::vector<bool>{true, true, true, false});
    CHECK(reachable(g, {}) == std::vector<bool>(4, false));
    auto all = reachable(g, {0, 1, 2, 3});
    CHECK(all == std::vector<bool>(4, true));
}

TEST_CASE("solve_linear identity and a 2x2 system") {
    RatMatrix eye = RatMatrix::identity(3);
    RatVector b{rat(1), rat(2), rat(3)};
    CHECK(solve_linear(eye, b) == b);

    RatMatrix a(2, 2);
    a.at(0, 0) = 2;
    a.at(0, 1) = 1;
    a.at(1, 0) = 1;
    a.at(1, 1) = 1;
    RatVector rhs{rat(3), rat(2)};
    RatVector x = solve_linear(a, rhs);
    CHECK(x == RatVector{rat(1), rat(1)});
}

TEST_CASE("solve_linear throws on singular input") {
    RatMatrix a(2, 2);
    a.at(0, 0) = 1;
    a.at(0, 1) = 2;
    a.at(1, 0) = 2;
    a.at(1, 1) = 4;
    CHECK_THROWS_AS(solve_linear(a, RatVector{rat(1), rat(1)}), Singular);
}

TEST_CASE("solve_linear residual is exactly zero on random systems") {
    Rng rng(31);
    for (int trial = 0; trial < 10; ++trial) {
        RatMatrix a(5, 5);
        for (auto& e : a.data)
            e = rat(static_cast<long>(rng.next() % 7) - 3,
                    1 + static_cast<long>(rng.next() % 4));
        RatVector b(5);
        for (auto& e : b)
            e = rat(static_cast<long>(rng.next() % 9) - 4,
                    1 + static_cast<long>(rng.next() % 3));
        RatVector x;
        try {
            x = solve_linear(a, b);
        } catch (const Singular&) {
            continue;
        }
        RatVector ax = mat_vec(a, x);
        for (std::size_t i = 0; i < 5; ++i) CHECK(ax[i] == b[i]);
    }
}

TEST_CASE("stationary distribution of a two-state chain") {
    MarkovChain mc;
    mc.states = {"u", "v"};
    mc.t = mat(2, {"2/3", "1/3", "2/3", "1/3"});
    Dist mu = stationary_distribution(mc);
    CHECK(mu == Dist{rat(2, 3), rat(1, 3)});
}

TEST_CASE("stationary distribution of the identity singleton") {
    MarkovChain mc;
    mc.states = {"u"};
    mc.t = mat(1, {"1"});
    CHECK(stationary_distribution(mc) == Dist{rat(1)});
}

TEST_CASE("stationary distribution is an exact fixed point on random chains") {
    Rng rng(37);
    int done = 0;
    while (done < 5) {
        Hmm h = random_hmm(4, 2, rng, 0.8);
        MarkovChain mc = embedded_chain(h);
        try {
            Dist mu = stationary_distribution(mc);
            RatVector mut = vec_mat(mu, mc.t);
            for (std::size_t q = 0; q < 4; ++q) CHECK(mut[q] == mu[q]);
            CHECK(l1_norm(mu) == 1);
            ++done;
        } catch (const NotIrreducible&) {
        }
    }
}

TEST_CASE("stationary distribution demands irreducibility") {
    MarkovChain mc;
    mc.states = {"u", "v"};
    mc.t = mat(2, {"1", "0", "0", "1"});
    CHECK_THROWS_AS(stationary_distribution(mc), NotIrreducible);
}

TEST_CASE("hitting probability of a target containing the start is 1") {
    MarkovChain mc;
    mc.states = {"u", "v"};
    mc.t = mat(2, {"1", "0", "1/2", "1/2"});
    Dist iota{rat(1), rat(0)};
    auto p = hitting_probabilities(mc, iota, {{0}});
    CHECK(p[0] == 1);
}

TEST_CASE("hitting probabilities on a fork") {
    // start splits 1/3 vs 2/3 into two absorbing states
    MarkovChain mc;
    mc.states = {"s", "l", "r"};
    mc.t = mat(3, {"0", "1/3", "2/3", "0", "1", "0", "0", "0", "1"});
    Dist iota{rat(1), rat(0), rat(0)};
    auto p = hitting_probabilities(mc, iota, {{1}, {2}});
    CHECK(p[0] == rat(1, 3));
    CHECK(p[1] == rat(2, 3));
}

TEST_CASE("hitting probabilities match simulation on a random absorbing chain") {
    // transient states feed two absorbing sinks with rational weights
    MarkovChain mc;
    mc.states = {"t0", "t1", "s0", "s1"};
    mc.t = mat(4, {"1/4", "1/4", "1/4", "1/4",
                   "0",   "1/3", "1/3", "1/3",
                   "0",   "0",   "1",   "0",
                   "0",   "0",   "0",   "1"});
    Dist iota{rat(1), rat(0), rat(0), rat(0)};
    auto p = hitting_probabilities(mc, iota, {{2}, {3}});
    CHECK(p[0] + p[1] == 1);

    Rng rng(41);
    const int reps = 200000;
    int hit0 = 0;
    for (int i = 0; i < reps; ++i) {
        int state = 0;
        for (int step = 0; step < 200 && state < 2; ++step) {
            double u = rng.uniform();
            double acc = 0.0;
            for (int r = 0; r < 4; ++r) {
                acc += rat_double(mc.t.at(state, r));
                if (u < acc) {
                    state = r;
                    break;
                }
            }
        }
        if (state == 2) ++hit0;
    }
    double est = hit0 / static_cast<double>(reps);
    double truth = rat_double(p[0]);
    double sigma = std::sqrt(truth * (1 - truth) / reps);
    CHECK(std::abs(est - truth) < 3 * sigma);
}

TEST_CASE("hitting_probabilities rejects non-closed targets") {
    MarkovChain mc;
    mc.states = {"u", "v"};
    mc.t = mat(2, {"1/2", "1/2", "0", "1"});
    Dist iota{rat(1), rat(0)};
    CHECK_THROWS_AS(hitting_probabilities(mc, iota, {{0}}), TargetNotClosed);
}

TEST_CASE("forward space of a single-state model") {
    Hmm h = validate_hmm({"q"}, {"a"}, {mat(1, {"1"})});
    auto basis = forward_space(h);
    REQUIRE(basis.size() == 1);
    CHECK(basis[0] == RatVector{rat(1)});
}

TEST_CASE("forward space of the intro model has dimension 2") {
    auto basis = forward_space(intro_hmm());
    CHECK(basis.size() == 2);
}

TEST_CASE("forward space is closed under every letter") {
    Rng rng(43);
    for (int trial = 0; trial < 10; ++trial) {
        Hmm h = random_hmm(4, 2, rng);
        auto rows = forward_space(h);
        EchelonBasis basis(4);
        for (const auto& r : rows) basis.insert(r);
        CHECK(basis.contains(RatVector(4, Rational(1))));
        for (const auto& r : rows)
            for (const auto& p : h.psi) CHECK(basis.contains(mat_vec(p, r)));
    }
}

TEST_CASE("lp_feasible basics") {
    // x1 + x2 = 1, x >= 0: feasible
    RatMatrix a(1, 2);
    a.at(0, 0) = 1;
    a.at(0, 1) = 1;
    CHECK(lp_feasible(a, {rat(1)}));
    // x1 - x2 = 0 and x1 + x2 = -1: infeasible for x >= 0
    RatMatrix b(2, 2);
    b.at(0, 0) = 1;
    b.at(0, 1) = -1;
    b.at(1, 0) = 1;
    b.at(1, 1) = 1;
    CHECK(!lp_feasible(b, {rat(0), rat(-1)}));
    // equality forcing a negative variable: x1 = -2
    RatMatrix c(1, 1);
    c.at(0, 0) = 1;
    CHECK(!lp_feasible(c, {rat(-2)}));
    CHECK(lp_feasible(c, {rat(2)}));
}
