#include "hmmsprt/rational.hpp"

#include "hmmsprt/errors.hpp"

namespace hmmsprt {

Rational rat(long num, long den) {
    Rational r(num, den);
    r.canonicalize();
    return r;
}

Rational parse_rational(const std::string& text) {
    if (text.empty()) throw ParseError("empty rational literal");
    std::string s = text;
    auto dot = s.find('.');
    if (dot != std::string::npos) {
        // decimal literal: shift the point into a power-of-ten denominator
        std::string digits = s.substr(0, dot) + s.substr(dot + 1);
        std::size_t frac_len = s.size() - dot - 1;
        if (digits.empty() || digits == "-" || digits == "+")
            throw ParseError("bad rational literal '" + text + "'");
        for (std::size_t i = 0; i < digits.size(); ++i) {
            char c = digits[i];
            if (!(std::isdigit(static_cast<unsigned char>(c)) ||
                  (i == 0 && (c == '-' || c == '+'))))
                throw ParseError("bad rational literal '" + text + "'");
        }
        Integer num(digits, 10);
        Integer den(1);
        for (std::size_t i = 0; i < frac_len; ++i) den *= 10;
        Rational r(num, den);
        r.canonicalize();
        return r;
    }
    Rational r;
    if (r.set_str(s, 10) != 0)
        throw ParseError("bad rational literal '" + text + "'");
    r.canonicalize();
    if (r.get_den() <= 0) throw ParseError("nonpositive denominator in '" + text + "'");
    return r;
}

std::string rat_str(const Rational& value) {
    if (value.get_den() == 1) return value.get_num().get_str();
    return value.get_num().get_str() + "/" + value.get_den().get_str();
}

double rat_double(const Rational& value) { return value.get_d(); }

std::uint64_t rat_hash(const Rational& value) {
    std::string s = rat_str(value);
    std::uint64_t h = 1469598103934665603ull;
    for (char c : s) {
        h ^= static_cast<unsigned char>(c);
        h *= 1099511628211ull;
    }
    return h;
}

}  // namespace hmmsprt
