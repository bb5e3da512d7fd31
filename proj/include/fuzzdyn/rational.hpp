#pragma once

#include <cstdint>
#include <string>
#include <string_view>

#include <boost/rational.hpp>

#include "fuzzdyn/errors.hpp"

namespace fuzzdyn {

/// Exact distances, grades and thresholds. No floating point crosses any
/// interface of the library.
using Rational = boost::rational<std::int64_t>;

inline std::string to_string(const Rational& r) {
    if (r.denominator() == 1) return std::to_string(r.numerator());
    return std::to_string(r.numerator()) + "/" + std::to_string(r.denominator());
}

/// Parses "p/q", "p" or "-p/q". Whitespace is not accepted.
inline Rational parse_rational(std::string_view text) {
    auto parse_int = [&](std::string_view s) -> std::int64_t {
        if (s.empty()) throw InputError("malformed rational '" + std::string(text) + "'");
        std::size_t i = 0;
        bool negative = false;
        if (s[0] == '-' || s[0] == '+') {
            negative = s[0] == '-';
            i = 1;
        }
        if (i == s.size()) throw InputError("malformed rational '" + std::string(text) + "'");
        std::int64_t value = 0;
        for (; i < s.size(); ++i) {
            if (s[i] < '0' || s[i] > '9')
                throw InputError("malformed rational '" + std::string(text) + "'");
            if (value > (INT64_MAX - 9) / 10)
                throw InputError("rational out of range '" + std::string(text) + "'");
            value = value * 10 + (s[i] - '0');
        }
        return negative ? -value : value;
    };
    const auto slash = text.find('/');
    if (slash == std::string_view::npos) return Rational(parse_int(text));
    const auto num = parse_int(text.substr(0, slash));
    const auto den = parse_int(text.substr(slash + 1));
    if (den == 0) throw InputError("zero denominator in '" + std::string(text) + "'");
    return Rational(num, den);
}

}  // namespace fuzzdyn
