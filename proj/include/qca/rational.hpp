#pragma once

#include <cmath>
#include <cstdio>
#include <string>
#include <string_view>

#include <gmpxx.h>

#include "core.hpp"

namespace qca {

/// Exact rational with arbitrary-precision numerator and denominator.
using rational = mpq_class;

/// Always `p/q`, including `0/1` and `1/1`.
inline std::string to_string(const rational& r) {
    return r.get_num().get_str() + "/" + r.get_den().get_str();
}

/// Accepts `p/q` or a bare integer `p`.
inline rational parse_rational(std::string_view text) {
    std::string s(text);
    if (s.empty()) throw error(errc::parse, "empty rational");
    auto slash = s.find('/');
    try {
        mpz_class num(s.substr(0, slash), 10);
        mpz_class den(1);
        if (slash != std::string::npos) den = mpz_class(s.substr(slash + 1), 10);
        if (den == 0) throw error(errc::parse, "zero denominator in '" + s + "'");
        rational r(num, den);
        r.canonicalize();
        return r;
    } catch (const std::invalid_argument&) {
        throw error(errc::parse, "malformed rational '" + s + "'");
    }
}

/// log2 of a positive rational, accurate even when numerator or
/// denominator overflow a double.
inline double log2_of(const rational& r) {
    auto log2z = [](const mpz_class& z) {
        long exp = 0;
        double mant = mpz_get_d_2exp(&exp, z.get_mpz_t());
        return std::log2(mant) + static_cast<double>(exp);
    };
    return log2z(r.get_num()) - log2z(r.get_den());
}

/// Floats (entropies only) with 12 significant digits.
inline std::string format_float(double x) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.12g", x);
    return buf;
}

} // namespace qca
