#pragma once

#include <map>
#include <string>
#include <vector>

#include "hmmsprt/model_io.hpp"

namespace hmmsprt {

struct Fixture {
    std::string name;
    std::string description;
    ModelFile model;
    std::map<std::string, std::string> expected;  // documented expectations
};

// Built-in models used across the test and acceptance suites.
const std::vector<Fixture>& builtin_fixtures();
const Fixture& fixture(const std::string& name);

// Ten-state block model from EEG sleep staging data: two five-state
// chains sharing a discretized emission matrix. Rows are renormalized
// by their exact rational sums (the published decimals carry rounding
// residue); the factors are returned alongside.
struct SleepModel {
    ModelFile model;
    std::vector<std::pair<std::string, Rational>> renormalization;
};
SleepModel sleep_model();

// Mortality instance -> HMM pair with P(E_{-inf}) = 1 exactly when some
// matrix product is zero, 0 otherwise. States with zero rows in the
// summed matrix are removed iteratively first.
ModelFile mortality_to_einf_gadget(const MortalityInstance& inst);

// Mortality instance -> HMM pair with P(E_0) < 1 iff the instance is
// mortal: a fresh end-marker letter routes every state to a sink.
ModelFile mortality_to_e0_gadget(const MortalityInstance& inst);

// Subset-construction search over at most 2^|Q| supports.
bool brute_force_mortal(const MortalityInstance& inst);

MortalityInstance demo_mortality_instance();

}  // namespace hmmsprt
