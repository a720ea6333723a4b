#pragma once

#include <map>
#include <string>

#include "hmmsprt/model.hpp"

namespace hmmsprt {

struct ModelFile {
    Hmm hmm;
    std::map<std::string, Dist> initial_distributions;
};

// Keys: states, alphabet, transitions (letter -> row-major matrix of
// "p/q" strings or integers), optional initial_distributions. Unknown
// keys are rejected.
ModelFile parse_model(const std::string& json_text);
ModelFile load_model(const std::string& path);
std::string model_to_json(const ModelFile& mf);
void save_model(const ModelFile& mf, const std::string& path);

struct MortalityInstance {
    std::vector<std::string> states;
    std::vector<std::string> alphabet;
    std::vector<std::vector<std::vector<int>>> phi;  // per letter, 0/1
};

MortalityInstance parse_mortality(const std::string& json_text);
MortalityInstance load_mortality(const std::string& path);

// Stable content digest used in reports.
std::string model_digest(const ModelFile& mf);

}  // namespace hmmsprt
