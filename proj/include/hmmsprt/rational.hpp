#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <string>

namespace hmmsprt {

// All model probabilities are exact rationals; floats appear only in
// Monte Carlo estimators and log-domain trackers.
using Rational = mpq_class;
using Integer = mpz_class;

Rational rat(long num, long den = 1);

// Accepts "p/q", plain integers, and decimal literals like "0.793"
// (which become 793/1000 exactly).
Rational parse_rational(const std::string& text);

// "p/q", or just "p" when the denominator is 1.
std::string rat_str(const Rational& value);

double rat_double(const Rational& value);

// FNV-1a over the canonical "p/q" rendering; used for memo keys.
std::uint64_t rat_hash(const Rational& value);

}  // namespace hmmsprt
