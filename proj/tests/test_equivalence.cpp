#include <doctest.h>

#include "helpers.hpp"
#include "hmmsprt/equivalence.hpp"
#include "hmmsprt/errors.hpp"
#include "hmmsprt/examples.hpp"

using namespace hmmsprt;
using namespace hmmsprt::testing;

namespace {

// two observably identical states
Hmm twin_hmm() {
    return validate_hmm({"u", "v"}, {"a", "b"},
                        {mat(2, {"1/2", "0", "0", "1/2"}),
                         mat(2, {"1/2", "0", "0", "1/2"})});
}

}  // namespace

TEST_CASE("every distribution is equivalent to itself") {
    Rng rng(51);
    Hmm h = random_hmm(4, 2, rng);
    Dist pi = random_dist(4, rng);
    CHECK(are_equivalent(h, pi, pi));
}

TEST_CASE("intro states are not equivalent") {
    Hmm h = intro_hmm();
    CHECK(!are_equivalent(h, dirac(h, "q1"), dirac(h, "q2")));
}

TEST_CASE("twin states are equivalent and agree on all short words") {
    Hmm h = twin_hmm();
    Dist u = dirac(h, "u"), v = dirac(h, "v");
    REQUIRE(are_equivalent(h, u, v));
    std::vector<Word> words{{}};
    for (int len = 0; len < 2; ++len) {
        std::vector<Word> next;
        for (const auto& w : words)
            for (int a = 0; a < 2; ++a) {
                Word e = w;
                e.push_back(a);
                next.push_back(e);
            }
        for (const auto& w : next) CHECK(trace_prob(h, u, w) == trace_prob(h, v, w));
        words = next;
    }
}

TEST_CASE("are_equivalent is symmetric") {
    Rng rng(53);
    Hmm h = random_hmm(3, 2, rng);
    Dist p = random_dist(3, rng), q = random_dist(3, rng);
    CHECK(are_equivalent(h, p, q) == are_equivalent(h, q, p));
}

TEST_CASE("intro states are distinguishable") {
    Hmm h = intro_hmm();
    auto v = distinguishability(h, dirac(h, "q1"), dirac(h, "q2"));
    CHECK(v.kind == Distinguishability::Distinguishable);
}

TEST_CASE("deterministic absorbing model is not distinguishable") {
    const Fixture& f = fixture("det-absorbing");
    const Hmm& h = f.model.hmm;
    auto v = distinguishability(h, f.model.initial_distributions.at("pi1"),
                                f.model.initial_distributions.at("pi2"));
    REQUIRE(v.kind == Distinguishability::NotDistinguishable);
    CHECK(v.witness == word_of(h, "a"));
    CHECK(v.witness_conditionals_equivalent);
}

TEST_CASE("sleep model distributions are distinguishable") {
    const Fixture& f = fixture("sleep");
    auto v = distinguishability(f.model.hmm,
                                f.model.initial_distributions.at("pi1"),
                                f.model.initial_distributions.at("pi2"));
    CHECK(v.kind == Distinguishability::Distinguishable);
}

TEST_CASE("distinguishability reports Unknown when the budget is exhausted") {
    const Fixture& f = fixture("det-absorbing");
    auto v = distinguishability(f.model.hmm,
                                f.model.initial_distributions.at("pi1"),
                                f.model.initial_distributions.at("pi2"), 1);
    CHECK(v.kind == Distinguishability::Unknown);
}

TEST_CASE("distinguishable implies not equivalent") {
    Rng rng(57);
    for (int trial = 0; trial < 20; ++trial) {
        Hmm h = random_hmm(3, 2, rng);
        Dist p = random_dist(3, rng), q = random_dist(3, rng);
        auto v = distinguishability(h, p, q);
        if (v.kind == Distinguishability::Distinguishable)
            CHECK(!are_equivalent(h, p, q));
        if (are_equivalent(h, p, q))
            CHECK(v.kind == Distinguishability::NotDistinguishable);
    }
}

TEST_CASE("tv_min_mass base cases") {
    Hmm h = intro_hmm();
    Dist p = dirac(h, "q1"), q = dirac(h, "q2");
    CHECK(tv_min_mass(h, p, q, 0) == 1);
    CHECK(tv_min_mass(h, p, q, 1) == rat(2, 3));
}

TEST_CASE("tv_min_mass is 1 for equivalent distributions") {
    Hmm h = twin_hmm();
    for (std::size_t n = 0; n <= 4; ++n)
        CHECK(tv_min_mass(h, dirac(h, "u"), dirac(h, "v"), n) == 1);
}

TEST_CASE("tv_min_mass is non-increasing in n") {
    Rng rng(59);
    for (int trial = 0; trial < 5; ++trial) {
        Hmm h = random_hmm(3, 2, rng);
        Dist p = random_dist(3, rng), q = random_dist(3, rng);
        Rational prev = tv_min_mass(h, p, q, 0);
        for (std::size_t n = 1; n <= 5; ++n) {
            Rational cur = tv_min_mass(h, p, q, n);
            CHECK(cur <= prev);
            prev = cur;
        }
    }
}

TEST_CASE("tv_min_mass enforces the enumeration cap") {
    Hmm h = intro_hmm();
    CHECK_THROWS_AS(
        tv_min_mass(h, dirac(h, "q1"), dirac(h, "q2"), 30, 1000),
        CapExceeded);
}

TEST_CASE("not-distinguishable witnesses have positive mass on both sides") {
    Rng rng(63);
    int witnesses = 0;
    for (int trial = 0; trial < 40; ++trial) {
        Hmm h = random_hmm(3, 2, rng, 0.5);
        Dist p = random_dist(3, rng), q = random_dist(3, rng);
        auto v = distinguishability(h, p, q);
        REQUIRE(v.kind != Distinguishability::Unknown);
        if (v.kind == Distinguishability::NotDistinguishable) {
            ++witnesses;
            CHECK(trace_prob(h, p, v.witness) > 0);
            CHECK(trace_prob(h, q, v.witness) > 0);
        }
    }
    CHECK(witnesses > 0);  // the generator produces overlapping pairs too
}
