#pragma once

#include <cstdint>
#include <map>
#include <string>

#include "hmmsprt/rational.hpp"

namespace hmmsprt {

// Exact value of the form sum_p c_p ln p over primes p with rational
// coefficients, plus a distinguished -infinity. The canonical prime
// form makes equality a map comparison: {ln p} is linearly independent
// over the rationals.
class LogExpr {
  public:
    LogExpr() = default;  // the zero expression

    static LogExpr neg_infinity();
    // ln(y) for a positive rational y, factorized over primes.
    static LogExpr log_of(const Rational& y);

    bool is_neg_infinity() const { return neg_inf_; }
    bool is_zero() const { return !neg_inf_ && terms_.empty(); }

    // this += coeff * other; -infinity absorbs (coeff must be > 0 there).
    void add_scaled(const Rational& coeff, const LogExpr& other);

    bool operator==(const LogExpr& other) const = default;

    // -1/0/+1, exact: zero iff the canonical form is empty, otherwise
    // the sign of the real value via interval refinement.
    int sign() const;
    double to_double() const;  // relative error well below 1e-12; -inf allowed
    std::string str() const;

    const std::map<std::uint64_t, Rational>& terms() const { return terms_; }

  private:
    bool neg_inf_ = false;
    std::map<std::uint64_t, Rational> terms_;
};

// Trial division; inputs must fit in 64 bits (transition probabilities
// in practice have tiny numerators and denominators).
std::map<std::uint64_t, long> factorize(const Integer& value);

}  // namespace hmmsprt
