#include "hmmsprt/model_io.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

#include "hmmsprt/errors.hpp"

namespace hmmsprt {

using nlohmann::json;

namespace {

Rational rational_from_json(const json& v) {
    if (v.is_string()) return parse_rational(v.get<std::string>());
    if (v.is_number_integer()) return Rational(static_cast<long>(v.get<long long>()));
    throw ParseError("matrix entries must be \"p/q\" strings or integers");
}

void check_keys(const json& obj, const std::set<std::string>& allowed,
                const std::string& where) {
    for (auto it = obj.begin(); it != obj.end(); ++it)
        if (!allowed.count(it.key()))
            throw ParseError("unknown key '" + it.key() + "' in " + where);
}

json parse_top(const std::string& text) {
    json doc = json::parse(text, nullptr, false);
    if (doc.is_discarded()) throw ParseError("not valid JSON");
    if (!doc.is_object()) throw ParseError("model file must be a JSON object");
    return doc;
}

std::string read_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

}  // namespace

ModelFile parse_model(const std::string& json_text) {
    json doc = parse_top(json_text);
    check_keys(doc, {"states", "alphabet", "transitions", "initial_distributions"},
               "model file");
    if (!doc.contains("states") || !doc.contains("alphabet") ||
        !doc.contains("transitions"))
        throw ParseError("model file needs states, alphabet and transitions");

    std::vector<std::string> states = doc["states"].get<std::vector<std::string>>();
    std::vector<std::string> alphabet =
        doc["alphabet"].get<std::vector<std::string>>();
    std::size_t n = states.size();

    const json& trans = doc["transitions"];
    if (!trans.is_object()) throw ParseError("transitions must be an object");
    std::vector<RatMatrix> psi;
    std::set<std::string> letters(alphabet.begin(), alphabet.end());
    for (auto it = trans.begin(); it != trans.end(); ++it)
        if (!letters.count(it.key()))
            throw UnknownSymbol("transition matrix for unknown letter '" +
                                it.key() + "'");
    for (const auto& a : alphabet) {
        if (!trans.contains(a))
            throw ParseError("missing transition matrix for letter '" + a + "'");
        const json& rows = trans[a];
        if (!rows.is_array() || rows.size() != n * n)
            throw ParseError("matrix for letter '" + a + "' must be row-major with " +
                             std::to_string(n * n) + " entries");
        RatMatrix m(n, n);
        for (std::size_t i = 0; i < n * n; ++i)
            m.data[i] = rational_from_json(rows[i]);
        psi.push_back(std::move(m));
    }

    ModelFile mf;
    mf.hmm = validate_hmm(std::move(states), std::move(alphabet), std::move(psi));

    if (doc.contains("initial_distributions")) {
        const json& dists = doc["initial_distributions"];
        if (!dists.is_object())
            throw ParseError("initial_distributions must be an object");
        for (auto it = dists.begin(); it != dists.end(); ++it) {
            if (!it.value().is_object())
                throw ParseError("distribution '" + it.key() +
                                 "' must map states to rationals");
            Dist pi(mf.hmm.num_states());
            for (auto jt = it.value().begin(); jt != it.value().end(); ++jt) {
                int q = mf.hmm.state_index(jt.key());
                pi[q] = rational_from_json(jt.value());
            }
            check_dist(mf.hmm, pi);
            mf.initial_distributions[it.key()] = std::move(pi);
        }
    }
    return mf;
}

ModelFile load_model(const std::string& path) { return parse_model(read_file(path)); }

std::string model_to_json(const ModelFile& mf) {
    json doc;
    doc["states"] = mf.hmm.states;
    doc["alphabet"] = mf.hmm.alphabet;
    json trans = json::object();
    for (std::size_t a = 0; a < mf.hmm.num_letters(); ++a) {
        json rows = json::array();
        for (const auto& e : mf.hmm.psi[a].data) rows.push_back(rat_str(e));
        trans[mf.hmm.alphabet[a]] = rows;
    }
    doc["transitions"] = trans;
    if (!mf.initial_distributions.empty()) {
        json dists = json::object();
        for (const auto& [name, pi] : mf.initial_distributions) {
            json d = json::object();
            for (std::size_t q = 0; q < pi.size(); ++q)
                if (pi[q] != 0) d[mf.hmm.states[q]] = rat_str(pi[q]);
            dists[name] = d;
        }
        doc["initial_distributions"] = dists;
    }
    return doc.dump(2);
}

void save_model(const ModelFile& mf, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw ParseError("cannot write '" + path + "'");
    out << model_to_json(mf) << "\n";
}

MortalityInstance parse_mortality(const std::string& json_text) {
    json doc = parse_top(json_text);
    check_keys(doc, {"states", "alphabet", "transitions"}, "mortality instance");
    if (!doc.contains("states") || !doc.contains("alphabet") ||
        !doc.contains("transitions"))
        throw ParseError("mortality instance needs states, alphabet, transitions");
    MortalityInstance m;
    m.states = doc["states"].get<std::vector<std::string>>();
    m.alphabet = doc["alphabet"].get<std::vector<std::string>>();
    std::size_t n = m.states.size();
    for (const auto& a : m.alphabet) {
        if (!doc["transitions"].contains(a))
            throw ParseError("missing matrix for letter '" + a + "'");
        const json& rows = doc["transitions"][a];
        if (!rows.is_array() || rows.size() != n * n)
            throw ParseError("matrix for letter '" + a + "' must have " +
                             std::to_string(n * n) + " entries");
        std::vector<std::vector<int>> mat(n, std::vector<int>(n));
        for (std::size_t i = 0; i < n * n; ++i) {
            if (!rows[i].is_number_integer())
                throw ParseError("mortality matrices must contain 0/1 integers");
            int v = rows[i].get<int>();
            if (v != 0 && v != 1)
                throw ParseError("mortality matrices must contain 0/1 integers");
            mat[i / n][i % n] = v;
        }
        m.phi.push_back(std::move(mat));
    }
    return m;
}

MortalityInstance load_mortality(const std::string& path) {
    return parse_mortality(read_file(path));
}

std::string model_digest(const ModelFile& mf) {
    std::string s = model_to_json(mf);
    std::uint64_t h = 1469598103934665603ull;
    for (char c : s) {
        h ^= static_cast<unsigned char>(c);
        h *= 1099511628211ull;
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

}  // namespace hmmsprt
