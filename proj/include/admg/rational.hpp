#pragma once

#include <gmpxx.h>

#include <stdexcept>
#include <string>

namespace admg {

/// Exact arbitrary-precision rational. All probability arithmetic in this
/// library is exact; there are no tolerances anywhere.
using Rational = mpq_class;

inline Rational rational_of(long num, long den = 1) {
    if (den == 0) throw std::invalid_argument("rational with zero denominator");
    Rational r(num, den);
    r.canonicalize();
    return r;
}

/// Parses "num/den" or "num". Throws std::invalid_argument on malformed input
/// or zero denominator.
inline Rational parse_rational(const std::string& text) {
    if (text.empty()) throw std::invalid_argument("empty rational literal");
    for (char c : text) {
        if (!(c == '/' || c == '-' || (c >= '0' && c <= '9')))
            throw std::invalid_argument("malformed rational literal '" + text + "'");
    }
    mpq_class r;
    if (r.set_str(text, 10) != 0) throw std::invalid_argument("malformed rational literal '" + text + "'");
    if (r.get_den() == 0) throw std::invalid_argument("rational with zero denominator '" + text + "'");
    r.canonicalize();
    return r;
}

/// Canonical GMP form: "num/den", denominator omitted when 1.
inline std::string format_rational(const Rational& r) { return r.get_str(); }

}  // namespace admg
