#pragma once

// Built-in quasigroups: the 7-element example with two subquasigroups,
// Ledrappier rules, cyclic groups, the quaternion group, the nonabelian
// group of order 21, and direct products/powers of any of these.

#include <cctype>
#include <string>
#include <string_view>
#include <vector>

#include "quasigroup.hpp"

namespace qca {

namespace detail {

inline bool is_prime(long p) {
    if (p < 2) return false;
    for (long d = 2; d * d <= p; ++d)
        if (p % d == 0) return false;
    return true;
}

inline Quasigroup from_function(std::size_t n, Alphabet names, auto op) {
    std::vector<Symbol> t(n * n);
    for (Symbol a = 0; a < n; ++a)
        for (Symbol b = 0; b < n; ++b) t[a * n + b] = op(a, b);
    return validate_latin(t, std::move(names));
}

inline Quasigroup d7() {
    Alphabet names({"a1", "a2", "b1", "b2", "c1", "c2", "c3"});
    const char* rows[] = {
        "a1 a2 c1 c2 b2 b1 c3", "a2 a1 c2 c1 b1 c3 b2", "c1 c3 b1 b2 c2 a1 a2",
        "c3 c1 b2 b1 a1 a2 c2", "b1 b2 c3 a1 a2 c2 c1", "b2 c2 a1 a2 c3 c1 b1",
        "c2 b1 a2 c3 c1 b2 a1",
    };
    std::vector<Symbol> t;
    for (const char* r : rows) {
        auto w = names.parse_word(r);
        t.insert(t.end(), w.begin(), w.end());
    }
    return validate_latin(t, names);
}

inline Quasigroup quaternion() {
    // Element index = 2*unit + (negative ? 1 : 0), units ordered 1, i, j, k.
    Alphabet names({"1", "-1", "i", "-i", "j", "-j", "k", "-k"});
    // unit products: sign and unit of u*v for u, v in {1, i, j, k}
    static constexpr int sign[4][4] = {{1, 1, 1, 1}, {1, -1, 1, -1}, {1, -1, -1, 1}, {1, 1, -1, -1}};
    static constexpr int unit[4][4] = {{0, 1, 2, 3}, {1, 0, 3, 2}, {2, 3, 0, 1}, {3, 2, 1, 0}};
    return from_function(8, names, [](Symbol a, Symbol b) {
        const Symbol ua = a / 2, ub = b / 2;
        const bool neg = ((a % 2) ^ (b % 2) ^ (sign[ua][ub] < 0)) != 0;
        return static_cast<Symbol>(2 * unit[ua][ub] + (neg ? 1 : 0));
    });
}

inline Quasigroup nonabelian21() {
    // Z/7 x| Z/3 with (a,b)(c,d) = (a + 2^b c, b + d); 2 has order 3 mod 7.
    std::vector<std::string> names;
    for (int a = 0; a < 7; ++a)
        for (int b = 0; b < 3; ++b) names.push_back("x" + std::to_string(a) + "y" + std::to_string(b));
    static constexpr int pow2[3] = {1, 2, 4};
    return from_function(21, Alphabet(names), [](Symbol x, Symbol y) {
        const int a = static_cast<int>(x / 3), b = static_cast<int>(x % 3);
        const int c = static_cast<int>(y / 3), d = static_cast<int>(y % 3);
        return static_cast<Symbol>(((a + pow2[b] * c) % 7) * 3 + (b + d) % 3);
    });
}

} // namespace detail

/// Direct product; the pair (x, y) has index x * |q2| + y and name "(x,y)".
inline Quasigroup direct_product(const Quasigroup& q1, const Quasigroup& q2) {
    const std::size_t n1 = q1.order(), n2 = q2.order();
    std::vector<std::string> names;
    for (Symbol x = 0; x < n1; ++x)
        for (Symbol y = 0; y < n2; ++y)
            names.push_back("(" + q1.alphabet().name(x) + "," + q2.alphabet().name(y) + ")");
    return detail::from_function(n1 * n2, Alphabet(names), [&](Symbol a, Symbol b) {
        return static_cast<Symbol>(q1(a / n2, b / n2) * n2 + q2(a % n2, b % n2));
    });
}

/// k-fold direct power; tuple (x_1..x_k) has index sum x_i N^(k-i) and name
/// "(x_1,...,x_k)".
inline Quasigroup direct_power(const Quasigroup& q, std::size_t k) {
    if (k == 0) throw error(errc::bad_params, "power exponent must be positive");
    const std::size_t n = q.order();
    const std::uint64_t total = checked_pow(n, k);
    if (total > 4096) throw error(errc::too_large, "direct power too large");
    std::vector<std::string> names;
    Word w;
    for (std::uint64_t i = 0; i < total; ++i) {
        word_from_index(i, n, k, w);
        std::string s = "(";
        for (std::size_t j = 0; j < k; ++j) s += (j ? "," : "") + q.alphabet().name(w[j]);
        names.push_back(s + ")");
    }
    Word x, y, z(k);
    return detail::from_function(total, Alphabet(names), [&](Symbol a, Symbol b) {
        word_from_index(a, n, k, x);
        word_from_index(b, n, k, y);
        for (std::size_t j = 0; j < k; ++j) z[j] = q(x[j], y[j]);
        return static_cast<Symbol>(index_of_word(z, n));
    });
}

/// Atomic built-ins: "D7", "quaternion", "nonabelian21", "cyclic n",
/// "ledrappier p c0 c1" (a*b = c0 a + c1 b mod p).
inline Quasigroup builtin(std::string_view name, const std::vector<long>& params = {}) {
    auto need = [&](std::size_t k) {
        if (params.size() != k)
            throw error(errc::bad_params, std::string(name) + " takes " + std::to_string(k) + " parameter(s)");
    };
    if (name == "D7") {
        need(0);
        return detail::d7();
    }
    if (name == "quaternion") {
        need(0);
        return detail::quaternion();
    }
    if (name == "nonabelian21") {
        need(0);
        return detail::nonabelian21();
    }
    if (name == "cyclic") {
        need(1);
        const long n = params[0];
        if (n < 1 || n > 4096) throw error(errc::bad_params, "cyclic order must be in 1..4096");
        return detail::from_function(static_cast<std::size_t>(n), Alphabet::numbered(n),
                                     [n](Symbol a, Symbol b) { return static_cast<Symbol>((a + b) % n); });
    }
    if (name == "ledrappier") {
        need(3);
        const long p = params[0];
        if (!detail::is_prime(p) || p > 4096) throw error(errc::bad_params, "ledrappier modulus must be prime");
        const long c0 = ((params[1] % p) + p) % p, c1 = ((params[2] % p) + p) % p;
        if (c0 == 0 || c1 == 0) throw error(errc::bad_params, "ledrappier coefficients must be nonzero mod p");
        return detail::from_function(static_cast<std::size_t>(p), Alphabet::numbered(p), [=](Symbol a, Symbol b) {
            return static_cast<Symbol>((c0 * a + c1 * b) % p);
        });
    }
    throw error(errc::unknown_name, "unknown built-in '" + std::string(name) + "'");
}

namespace detail {

struct ExprParser {
    std::string_view s;
    std::size_t pos = 0;

    void skip() {
        while (pos < s.size() && std::isspace(static_cast<unsigned char>(s[pos]))) ++pos;
    }
    bool eat(char c) {
        skip();
        if (pos < s.size() && s[pos] == c) {
            ++pos;
            return true;
        }
        return false;
    }
    std::string ident() {
        skip();
        std::size_t b = pos;
        while (pos < s.size() && (std::isalnum(static_cast<unsigned char>(s[pos])) || s[pos] == '_')) ++pos;
        if (b == pos) throw error(errc::parse, "expected a name in '" + std::string(s) + "'");
        return std::string(s.substr(b, pos - b));
    }
    long integer() {
        skip();
        std::size_t b = pos;
        if (pos < s.size() && s[pos] == '-') ++pos;
        while (pos < s.size() && std::isdigit(static_cast<unsigned char>(s[pos]))) ++pos;
        if (b == pos) throw error(errc::parse, "expected an integer in '" + std::string(s) + "'");
        return std::stol(std::string(s.substr(b, pos - b)));
    }
    Quasigroup expr() {
        const std::string name = ident();
        if (name == "product") {
            if (!eat('(')) throw error(errc::parse, "product needs arguments");
            Quasigroup acc = expr();
            while (eat(',')) acc = direct_product(acc, expr());
            if (!eat(')')) throw error(errc::parse, "missing ')'");
            return acc;
        }
        if (name == "power") {
            if (!eat('(')) throw error(errc::parse, "power needs arguments");
            Quasigroup base = expr();
            if (!eat(',')) throw error(errc::parse, "power needs an exponent");
            long k = integer();
            if (!eat(')')) throw error(errc::parse, "missing ')'");
            if (k < 1) throw error(errc::bad_params, "power exponent must be positive");
            return direct_power(base, static_cast<std::size_t>(k));
        }
        std::vector<long> params;
        if (eat('(')) {
            if (!eat(')')) {
                do params.push_back(integer());
                while (eat(','));
                if (!eat(')')) throw error(errc::parse, "missing ')'");
            }
        }
        return builtin(name, params);
    }
};

} // namespace detail

/// Parses expressions such as `D7`, `cyclic(5)`, `ledrappier(5,2,3)`,
/// `product(cyclic(2),quaternion)` or `power(cyclic(7),4)`.
inline Quasigroup builtin_expr(std::string_view text) {
    detail::ExprParser p{text};
    Quasigroup q = p.expr();
    p.skip();
    if (p.pos != text.size()) throw error(errc::parse, "trailing input in '" + std::string(text) + "'");
    return q;
}

} // namespace qca
