#include "hmmsprt/logexpr.hpp"

#include <mpfr.h>

#include <cmath>
#include <limits>
#include <sstream>

#include "hmmsprt/errors.hpp"

namespace hmmsprt {

std::map<std::uint64_t, long> factorize(const Integer& value) {
    if (value <= 0) throw Error("factorize expects a positive integer");
    if (!value.fits_ulong_p() || mpz_sizeinbase(value.get_mpz_t(), 2) > 64)
        throw FactorizationCapExceeded("factorization input exceeds 64 bits: " +
                                       value.get_str());
    std::uint64_t v = value.get_ui();
    std::map<std::uint64_t, long> out;
    auto take = [&](std::uint64_t p) {
        long e = 0;
        while (v % p == 0) {
            v /= p;
            ++e;
        }
        if (e) out[p] = e;
    };
    take(2);
    take(3);
    for (std::uint64_t d = 5; d <= v / d && d <= (1ull << 32); d += 6) {
        take(d);
        take(d + 2);
    }
    // any remainder after trial division up to 2^32 of a 64-bit input is prime
    if (v > 1) out[v] += 1;
    return out;
}

LogExpr LogExpr::neg_infinity() {
    LogExpr e;
    e.neg_inf_ = true;
    return e;
}

LogExpr LogExpr::log_of(const Rational& y) {
    if (y <= 0) throw Error("log_of expects a positive rational");
    LogExpr e;
    for (const auto& [p, k] : factorize(y.get_num())) e.terms_[p] += k;
    for (const auto& [p, k] : factorize(y.get_den())) e.terms_[p] -= k;
    for (auto it = e.terms_.begin(); it != e.terms_.end();)
        it = it->second == 0 ? e.terms_.erase(it) : std::next(it);
    return e;
}

void LogExpr::add_scaled(const Rational& coeff, const LogExpr& other) {
    if (neg_inf_) return;
    if (other.neg_inf_) {
        if (coeff <= 0) throw Error("-infinity requires a positive coefficient");
        neg_inf_ = true;
        terms_.clear();
        return;
    }
    if (coeff == 0) return;
    for (const auto& [p, c] : other.terms_) {
        Rational& slot = terms_[p];
        slot += coeff * c;
        if (slot == 0) terms_.erase(p);
    }
}

namespace {

// Evaluates sum c_p ln p at the given precision with a crude but safe
// error bound of one ulp per operation, scaled by the term count.
double eval_with_precision(const std::map<std::uint64_t, Rational>& terms,
                           mpfr_prec_t prec, double* abs_error) {
    mpfr_t acc, lnp, term;
    mpfr_inits2(prec, acc, lnp, term, static_cast<mpfr_ptr>(nullptr));
    mpfr_set_zero(acc, 1);
    double magnitude = 0.0;
    for (const auto& [p, c] : terms) {
        mpfr_set_ui(lnp, static_cast<unsigned long>(p), MPFR_RNDN);
        mpfr_log(lnp, lnp, MPFR_RNDN);
        mpfr_mul_q(term, lnp, c.get_mpq_t(), MPFR_RNDN);
        magnitude += std::fabs(mpfr_get_d(term, MPFR_RNDN));
        mpfr_add(acc, acc, term, MPFR_RNDN);
    }
    double value = mpfr_get_d(acc, MPFR_RNDN);
    if (abs_error) {
        double ulp_scale = std::ldexp(1.0, -static_cast<int>(prec) + 4);
        *abs_error = (magnitude + 1.0) * ulp_scale *
                     static_cast<double>(terms.size() + 1);
    }
    mpfr_clears(acc, lnp, term, static_cast<mpfr_ptr>(nullptr));
    return value;
}

}  // namespace

int LogExpr::sign() const {
    if (neg_inf_) return -1;
    if (terms_.empty()) return 0;
    // the canonical form is nonzero, so the real value is nonzero;
    // refine until the interval excludes zero
    for (mpfr_prec_t prec = 128; prec <= 1 << 20; prec *= 2) {
        double err = 0.0;
        double value = eval_with_precision(terms_, prec, &err);
        if (std::fabs(value) > err) return value > 0 ? 1 : -1;
    }
    throw Error("sign refinement did not converge");
}

double LogExpr::to_double() const {
    if (neg_inf_) return -std::numeric_limits<double>::infinity();
    return eval_with_precision(terms_, 256, nullptr);
}

std::string LogExpr::str() const {
    if (neg_inf_) return "-inf";
    if (terms_.empty()) return "0";
    std::ostringstream out;
    bool first = true;
    for (const auto& [p, c] : terms_) {
        if (!first) out << " + ";
        out << "(" << rat_str(c) << ") ln " << p;
        first = false;
    }
    return out.str();
}

}  // namespace hmmsprt
