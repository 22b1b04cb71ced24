#pragma once

// Linear algebra over prime fields F_p: polynomials, characteristic and
// minimal polynomials, factorization, rational canonical form and
// enumeration of invariant subspaces.

#include <algorithm>
#include <compare>
#include <random>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include <gmpxx.h>

#include "core.hpp"

namespace qca {

using Residue = std::uint32_t;

namespace detail {

inline bool prime_modulus(std::uint64_t p) {
    if (p < 2) return false;
    for (std::uint64_t d = 2; d * d <= p; ++d)
        if (p % d == 0) return false;
    return true;
}

inline Residue mul_mod(Residue a, Residue b, Residue p) {
    return static_cast<Residue>(std::uint64_t{a} * b % p);
}

inline Residue pow_mod(Residue a, std::uint64_t e, Residue p) {
    Residue r = 1 % p;
    while (e) {
        if (e & 1) r = mul_mod(r, a, p);
        a = mul_mod(a, a, p);
        e >>= 1;
    }
    return r;
}

inline Residue inv_mod(Residue a, Residue p) { return pow_mod(a, p - 2, p); }

inline void check_prime(std::uint64_t p) {
    if (p >= (std::uint64_t{1} << 31) || !prime_modulus(p))
        throw error(errc::bad_params, {static_cast<std::size_t>(p)}, "modulus must be a prime below 2^31");
}

} // namespace detail

/// Polynomial over F_p, coefficients in ascending degree, no trailing zeros.
class PolyFp {
public:
    explicit PolyFp(Residue p, std::vector<Residue> coeffs = {}) : p_(p), c_(std::move(coeffs)) {
        for (auto& v : c_) v %= p_;
        trim();
    }

    static PolyFp constant(Residue p, Residue v) { return PolyFp(p, {v}); }
    static PolyFp x(Residue p) { return PolyFp(p, {0, 1}); }
    /// x - root
    static PolyFp linear(Residue p, Residue root) { return PolyFp(p, {(p - root % p) % p, 1}); }

    Residue modulus() const noexcept { return p_; }
    const std::vector<Residue>& coeffs() const noexcept { return c_; }
    bool is_zero() const noexcept { return c_.empty(); }
    /// Degree; -1 for the zero polynomial.
    int degree() const noexcept { return static_cast<int>(c_.size()) - 1; }
    Residue lead() const noexcept { return c_.empty() ? 0 : c_.back(); }
    Residue operator[](std::size_t i) const noexcept { return i < c_.size() ? c_[i] : 0; }
    bool is_one() const noexcept { return c_.size() == 1 && c_[0] == 1; }

    PolyFp monic() const {
        if (is_zero()) return *this;
        const Residue inv = detail::inv_mod(lead(), p_);
        PolyFp r = *this;
        for (auto& v : r.c_) v = detail::mul_mod(v, inv, p_);
        return r;
    }

    Residue eval(Residue x) const {
        Residue r = 0;
        for (std::size_t i = c_.size(); i-- > 0;) r = (detail::mul_mod(r, x, p_) + c_[i]) % p_;
        return r;
    }

    PolyFp derivative() const {
        std::vector<Residue> d;
        for (std::size_t i = 1; i < c_.size(); ++i) d.push_back(detail::mul_mod(c_[i], static_cast<Residue>(i % p_), p_));
        return PolyFp(p_, d);
    }

    friend PolyFp operator+(const PolyFp& a, const PolyFp& b) {
        std::vector<Residue> r(std::max(a.c_.size(), b.c_.size()), 0);
        for (std::size_t i = 0; i < r.size(); ++i) r[i] = (a[i] + b[i]) % a.p_;
        return PolyFp(a.p_, r);
    }
    friend PolyFp operator-(const PolyFp& a, const PolyFp& b) {
        std::vector<Residue> r(std::max(a.c_.size(), b.c_.size()), 0);
        for (std::size_t i = 0; i < r.size(); ++i) r[i] = (a[i] + a.p_ - b[i]) % a.p_;
        return PolyFp(a.p_, r);
    }
    friend PolyFp operator*(const PolyFp& a, const PolyFp& b) {
        if (a.is_zero() || b.is_zero()) return PolyFp(a.p_);
        std::vector<Residue> r(a.c_.size() + b.c_.size() - 1, 0);
        for (std::size_t i = 0; i < a.c_.size(); ++i)
            for (std::size_t j = 0; j < b.c_.size(); ++j)
                r[i + j] = (r[i + j] + detail::mul_mod(a.c_[i], b.c_[j], a.p_)) % a.p_;
        return PolyFp(a.p_, r);
    }
    PolyFp scaled(Residue s) const {
        PolyFp r = *this;
        for (auto& v : r.c_) v = detail::mul_mod(v, s % p_, p_);
        r.trim();
        return r;
    }

    /// Quotient and remainder; `d` must be nonzero.
    friend std::pair<PolyFp, PolyFp> divmod(const PolyFp& a, const PolyFp& d) {
        if (d.is_zero()) throw error(errc::bad_params, "polynomial division by zero");
        const Residue p = a.p_;
        std::vector<Residue> rem = a.c_;
        const int dd = d.degree();
        if (a.degree() < dd) return {PolyFp(p), a};
        std::vector<Residue> q(a.c_.size() - d.c_.size() + 1, 0);
        const Residue inv = detail::inv_mod(d.lead(), p);
        for (int i = a.degree(); i >= dd; --i) {
            const Residue f = detail::mul_mod(rem[i], inv, p);
            q[i - dd] = f;
            if (!f) continue;
            for (int j = 0; j <= dd; ++j) rem[i - dd + j] = (rem[i - dd + j] + p - detail::mul_mod(f, d.c_[j], p)) % p;
        }
        return {PolyFp(p, q), PolyFp(p, rem)};
    }
    friend PolyFp operator/(const PolyFp& a, const PolyFp& d) { return divmod(a, d).first; }
    friend PolyFp operator%(const PolyFp& a, const PolyFp& d) { return divmod(a, d).second; }

    bool operator==(const PolyFp& o) const noexcept { return p_ == o.p_ && c_ == o.c_; }
    /// Degree first, then coefficients from the top down.
    std::strong_ordering operator<=>(const PolyFp& o) const noexcept {
        if (auto c = degree() <=> o.degree(); c != 0) return c;
        for (std::size_t i = c_.size(); i-- > 0;)
            if (auto c = c_[i] <=> o.c_[i]; c != 0) return c;
        return std::strong_ordering::equal;
    }

    /// e.g. "x^4 + 6x^3 + 6x^2 + 6x + 6"; "0" for the zero polynomial.
    std::string to_string() const {
        if (is_zero()) return "0";
        std::string s;
        for (std::size_t i = c_.size(); i-- > 0;) {
            if (!c_[i]) continue;
            if (!s.empty()) s += " + ";
            const bool show_coeff = c_[i] != 1 || i == 0;
            if (show_coeff) s += std::to_string(c_[i]);
            if (i >= 1) s += "x";
            if (i >= 2) s += "^" + std::to_string(i);
        }
        return s;
    }

private:
    void trim() {
        while (!c_.empty() && c_.back() == 0) c_.pop_back();
    }

    Residue p_;
    std::vector<Residue> c_;
};

/// Monic gcd (zero if both are zero).
inline PolyFp gcd(PolyFp a, PolyFp b) {
    while (!b.is_zero()) {
        PolyFp r = a % b;
        a = std::move(b);
        b = std::move(r);
    }
    return a.monic();
}

inline PolyFp lcm(const PolyFp& a, const PolyFp& b) {
    if (a.is_zero() || b.is_zero()) return PolyFp(a.modulus());
    return ((a * b) / gcd(a, b)).monic();
}

/// base^e mod m, with e an arbitrary-precision exponent.
inline PolyFp powmod(PolyFp base, const mpz_class& e, const PolyFp& m) {
    PolyFp r = PolyFp::constant(m.modulus(), 1) % m;
    base = base % m;
    const std::size_t bits = mpz_sizeinbase(e.get_mpz_t(), 2);
    for (std::size_t i = bits; i-- > 0;) {
        r = (r * r) % m;
        if (mpz_tstbit(e.get_mpz_t(), i)) r = (r * base) % m;
    }
    return r;
}

inline PolyFp power(const PolyFp& f, unsigned k) {
    PolyFp r = PolyFp::constant(f.modulus(), 1);
    for (unsigned i = 0; i < k; ++i) r = r * f;
    return r;
}

struct Factor {
    PolyFp poly;
    unsigned multiplicity;
    auto operator<=>(const Factor& o) const {
        if (auto c = poly <=> o.poly; c != 0) return c;
        return multiplicity <=> o.multiplicity;
    }
    bool operator==(const Factor&) const = default;
};

namespace detail {

// Square-free decomposition: (g, i) with f = prod g^i, each g square-free.
inline std::vector<Factor> squarefree(const PolyFp& f) {
    const Residue p = f.modulus();
    std::vector<Factor> out;
    auto pth_root = [p](const PolyFp& g) {
        std::vector<Residue> c;
        for (std::size_t i = 0; i < g.coeffs().size(); i += p) c.push_back(g.coeffs()[i]);
        return PolyFp(p, c);
    };
    if (f.degree() <= 0) return out;
    const PolyFp df = f.derivative();
    if (df.is_zero()) {
        for (auto& fac : squarefree(pth_root(f))) out.push_back({fac.poly, fac.multiplicity * p});
        return out;
    }
    PolyFp c = gcd(f, df);
    PolyFp w = f / c;
    unsigned i = 1;
    while (w.degree() > 0) {
        PolyFp y = gcd(w, c);
        PolyFp z = (w / y).monic();
        if (z.degree() > 0) out.push_back({z, i});
        ++i;
        w = y;
        c = c / y;
    }
    if (c.degree() > 0)
        for (auto& fac : squarefree(pth_root(c.monic()))) out.push_back({fac.poly, fac.multiplicity * p});
    return out;
}

// Distinct-degree split of a square-free monic polynomial: (g, d) where g is
// the product of its irreducible factors of degree d.
inline std::vector<std::pair<PolyFp, unsigned>> distinct_degree(PolyFp f) {
    const Residue p = f.modulus();
    std::vector<std::pair<PolyFp, unsigned>> out;
    PolyFp h = PolyFp::x(p) % f;
    const mpz_class pe(p);
    for (unsigned d = 1; 2 * static_cast<int>(d) <= f.degree(); ++d) {
        h = powmod(h, pe, f);
        PolyFp g = gcd(f, h - PolyFp::x(p));
        if (g.degree() > 0) {
            out.emplace_back(g, d);
            f = f / g;
            h = h % f;
        }
    }
    if (f.degree() > 0) out.emplace_back(f.monic(), static_cast<unsigned>(f.degree()));
    return out;
}

// Cantor-Zassenhaus equal-degree splitting.
inline void equal_degree(const PolyFp& f, unsigned d, std::mt19937_64& rng, std::vector<PolyFp>& out) {
    const Residue p = f.modulus();
    if (f.degree() == static_cast<int>(d)) {
        out.push_back(f.monic());
        return;
    }
    mpz_class pd;
    mpz_ui_pow_ui(pd.get_mpz_t(), p, d);
    const mpz_class half = (pd - 1) / 2;
    std::uniform_int_distribution<Residue> coeff(0, p - 1);
    for (;;) {
        std::vector<Residue> c(f.degree());
        for (auto& v : c) v = coeff(rng);
        PolyFp a(p, c);
        if (a.degree() <= 0) continue;
        PolyFp t(p);
        if (p == 2) {
            PolyFp s = a % f;
            t = s;
            for (unsigned i = 1; i < d; ++i) {
                s = (s * s) % f;
                t = t + s;
            }
        } else {
            t = powmod(a, half, f) - PolyFp::constant(p, 1);
        }
        PolyFp g = gcd(f, t);
        if (g.degree() > 0 && g.degree() < f.degree()) {
            equal_degree(g, d, rng, out);
            equal_degree(f / g, d, rng, out);
            return;
        }
    }
}

} // namespace detail

/// Monic irreducible factorization of a nonzero polynomial, sorted.
inline std::vector<Factor> factor(const PolyFp& f) {
    if (f.is_zero()) throw error(errc::bad_params, "cannot factor the zero polynomial");
    std::vector<Factor> out;
    std::mt19937_64 rng(0x51a7e5u);
    for (const auto& sf : detail::squarefree(f.monic()))
        for (const auto& [g, d] : detail::distinct_degree(sf.poly)) {
            std::vector<PolyFp> irr;
            detail::equal_degree(g, d, rng, irr);
            for (auto& h : irr) out.push_back({h, sf.multiplicity});
        }
    std::sort(out.begin(), out.end());
    // merge repeated irreducibles coming from different square-free parts
    std::vector<Factor> merged;
    for (auto& fac : out) {
        if (!merged.empty() && merged.back().poly == fac.poly)
            merged.back().multiplicity += fac.multiplicity;
        else
            merged.push_back(fac);
    }
    return merged;
}

/// Roots of f in F_p by exhaustive evaluation.
inline std::vector<Residue> roots(const PolyFp& f) {
    std::vector<Residue> r;
    for (Residue x = 0; x < f.modulus(); ++x)
        if (f.eval(x) == 0) r.push_back(x);
    return r;
}

using VectorFp = std::vector<Residue>;

/// Square matrix over F_p acting on column vectors.
class MatrixFp {
public:
    MatrixFp(Residue p, std::size_t dim, std::vector<Residue> entries) : p_(p), n_(dim), a_(std::move(entries)) {
        detail::check_prime(p);
        if (a_.size() != n_ * n_) throw error(errc::parse, "matrix needs dim*dim entries");
        for (auto& v : a_) v %= p_;
    }
    static MatrixFp identity(Residue p, std::size_t dim) {
        std::vector<Residue> e(dim * dim, 0);
        for (std::size_t i = 0; i < dim; ++i) e[i * dim + i] = 1;
        return MatrixFp(p, dim, e);
    }
    static MatrixFp zero(Residue p, std::size_t dim) { return MatrixFp(p, dim, std::vector<Residue>(dim * dim, 0)); }

    Residue modulus() const noexcept { return p_; }
    std::size_t dim() const noexcept { return n_; }
    const std::vector<Residue>& entries() const noexcept { return a_; }
    Residue operator()(std::size_t r, std::size_t c) const noexcept { return a_[r * n_ + c]; }
    Residue& operator()(std::size_t r, std::size_t c) noexcept { return a_[r * n_ + c]; }

    VectorFp apply(const VectorFp& v) const {
        VectorFp out(n_, 0);
        for (std::size_t r = 0; r < n_; ++r) {
            std::uint64_t acc = 0;
            for (std::size_t c = 0; c < n_; ++c) acc = (acc + std::uint64_t{(*this)(r, c)} * v[c]) % p_;
            out[r] = static_cast<Residue>(acc);
        }
        return out;
    }

    friend MatrixFp operator*(const MatrixFp& a, const MatrixFp& b) {
        MatrixFp r = zero(a.p_, a.n_);
        for (std::size_t i = 0; i < a.n_; ++i)
            for (std::size_t k = 0; k < a.n_; ++k) {
                const Residue f = a(i, k);
                if (!f) continue;
                for (std::size_t j = 0; j < a.n_; ++j) r(i, j) = (r(i, j) + detail::mul_mod(f, b(k, j), a.p_)) % a.p_;
            }
        return r;
    }
    friend MatrixFp operator+(const MatrixFp& a, const MatrixFp& b) {
        MatrixFp r = a;
        for (std::size_t i = 0; i < r.a_.size(); ++i) r.a_[i] = (r.a_[i] + b.a_[i]) % a.p_;
        return r;
    }
    MatrixFp negated() const {
        MatrixFp r = *this;
        for (auto& v : r.a_) v = (p_ - v) % p_;
        return r;
    }
    MatrixFp scaled(Residue s) const {
        MatrixFp r = *this;
        for (auto& v : r.a_) v = detail::mul_mod(v, s, p_);
        return r;
    }

    bool operator==(const MatrixFp&) const = default;

private:
    Residue p_;
    std::size_t n_;
    std::vector<Residue> a_;
};

/// f(M) by Horner's rule.
inline MatrixFp evaluate(const PolyFp& f, const MatrixFp& m) {
    MatrixFp r = MatrixFp::zero(m.modulus(), m.dim());
    const MatrixFp id = MatrixFp::identity(m.modulus(), m.dim());
    for (std::size_t i = f.coeffs().size(); i-- > 0;) r = r * m + id.scaled(f.coeffs()[i]);
    return r;
}

/// Reduced row echelon form of the given rows; zero rows are dropped.
inline std::vector<VectorFp> rref(std::vector<VectorFp> rows, Residue p) {
    if (rows.empty()) return rows;
    const std::size_t n = rows[0].size();
    std::size_t rank = 0;
    for (std::size_t col = 0; col < n && rank < rows.size(); ++col) {
        std::size_t piv = rank;
        while (piv < rows.size() && rows[piv][col] == 0) ++piv;
        if (piv == rows.size()) continue;
        std::swap(rows[rank], rows[piv]);
        const Residue inv = detail::inv_mod(rows[rank][col], p);
        for (auto& v : rows[rank]) v = detail::mul_mod(v, inv, p);
        for (std::size_t r = 0; r < rows.size(); ++r) {
            if (r == rank || rows[r][col] == 0) continue;
            const Residue f = rows[r][col];
            for (std::size_t c = 0; c < n; ++c) rows[r][c] = (rows[r][c] + p - detail::mul_mod(f, rows[rank][c], p)) % p;
        }
        ++rank;
    }
    rows.resize(rank);
    return rows;
}

inline std::size_t rank(const MatrixFp& m) {
    std::vector<VectorFp> rows(m.dim());
    for (std::size_t r = 0; r < m.dim(); ++r)
        rows[r].assign(m.entries().begin() + r * m.dim(), m.entries().begin() + (r + 1) * m.dim());
    return rref(std::move(rows), m.modulus()).size();
}

/// Characteristic polynomial det(xI - M) via similarity reduction to upper
/// Hessenberg form and the standard determinant recurrence.
inline PolyFp char_poly(const MatrixFp& m) {
    const Residue p = m.modulus();
    const std::size_t n = m.dim();
    MatrixFp h = m;
    for (std::size_t k = 1; k + 1 < n; ++k) {
        std::size_t piv = k;
        while (piv < n && h(piv, k - 1) == 0) ++piv;
        if (piv == n) continue;
        if (piv != k) {
            for (std::size_t c = 0; c < n; ++c) std::swap(h(piv, c), h(k, c));
            for (std::size_t r = 0; r < n; ++r) std::swap(h(r, piv), h(r, k));
        }
        const Residue inv = detail::inv_mod(h(k, k - 1), p);
        for (std::size_t i = k + 1; i < n; ++i) {
            const Residue t = detail::mul_mod(h(i, k - 1), inv, p);
            if (!t) continue;
            for (std::size_t c = 0; c < n; ++c) h(i, c) = (h(i, c) + p - detail::mul_mod(t, h(k, c), p)) % p;
            for (std::size_t r = 0; r < n; ++r) h(r, k) = (h(r, k) + detail::mul_mod(t, h(r, i), p)) % p;
        }
    }
    // chain[k] = char poly of the leading k x k block
    std::vector<PolyFp> chain{PolyFp::constant(p, 1)};
    for (std::size_t k = 1; k <= n; ++k) {
        PolyFp next = (PolyFp::x(p) - PolyFp::constant(p, h(k - 1, k - 1))) * chain[k - 1];
        Residue prod = 1;
        for (std::size_t i = k - 1; i-- > 0;) {
            prod = detail::mul_mod(prod, h(i + 1, i), p);
            const Residue coeff = detail::mul_mod(prod, h(i, k - 1), p);
            if (coeff) next = next - chain[i].scaled(coeff);
        }
        chain.push_back(next);
    }
    return chain.back();
}

/// Minimal polynomial of v under M: the first linear relation in the
/// Krylov sequence v, Mv, M^2 v, ...
inline PolyFp vector_min_poly(const MatrixFp& m, const VectorFp& v) {
    const Residue p = m.modulus();
    struct Row {
        VectorFp vec;
        std::size_t pivot;
        PolyFp comb;
    };
    std::vector<Row> basis;
    VectorFp u = v;
    PolyFp comb = PolyFp::constant(p, 1);
    for (;;) {
        VectorFp r = u;
        PolyFp c = comb;
        for (const auto& b : basis) {
            const Residue f = r[b.pivot];
            if (!f) continue;
            for (std::size_t i = 0; i < r.size(); ++i) r[i] = (r[i] + p - detail::mul_mod(f, b.vec[i], p)) % p;
            c = c - b.comb.scaled(f);
        }
        auto it = std::find_if(r.begin(), r.end(), [](Residue x) { return x != 0; });
        if (it == r.end()) return c.monic();
        const std::size_t piv = static_cast<std::size_t>(it - r.begin());
        const Residue inv = detail::inv_mod(r[piv], p);
        for (auto& x : r) x = detail::mul_mod(x, inv, p);
        basis.push_back({r, piv, c.scaled(inv)});
        u = m.apply(u);
        comb = comb * PolyFp::x(p);
    }
}

/// Minimal polynomial of M: lcm of the minimal polynomials of the standard
/// basis vectors.
inline PolyFp min_poly(const MatrixFp& m) {
    PolyFp acc = PolyFp::constant(m.modulus(), 1);
    for (std::size_t i = 0; i < m.dim(); ++i) {
        VectorFp e(m.dim(), 0);
        e[i] = 1;
        acc = lcm(acc, vector_min_poly(m, e));
    }
    return acc;
}

struct CharMinPoly {
    PolyFp characteristic;
    PolyFp minimal;
};

inline CharMinPoly char_min_poly(const MatrixFp& m) {
    CharMinPoly r{char_poly(m), min_poly(m)};
    if (!(r.characteristic % r.minimal).is_zero())
        throw error(errc::bad_params, "internal: minimal polynomial does not divide the characteristic polynomial");
    return r;
}

/// Companion matrix: ones on the subdiagonal, last column -c_0..-c_{r-1}.
inline MatrixFp companion(const PolyFp& f) {
    const PolyFp g = f.monic();
    const Residue p = g.modulus();
    const auto r = static_cast<std::size_t>(g.degree());
    MatrixFp m = MatrixFp::zero(p, r);
    for (std::size_t i = 1; i < r; ++i) m(i, i - 1) = 1;
    for (std::size_t i = 0; i < r; ++i) m(i, r - 1) = (p - g[i]) % p;
    return m;
}

struct RationalCanonicalForm {
    /// Invariant factors f_1 | f_2 | ... | f_L; the last one is the minimal
    /// polynomial and their product the characteristic polynomial.
    std::vector<PolyFp> blocks;
    bool simple = false;
};

/// Invariant factors from the elementary divisors: for each irreducible
/// factor f of the characteristic polynomial, the nullities of f(M)^k give
/// the sizes of the f-primary cyclic blocks; the j-th largest exponents of
/// all primes multiply into the j-th largest invariant factor.
inline RationalCanonicalForm rcf(const MatrixFp& m) {
    const Residue p = m.modulus();
    const std::size_t n = m.dim();
    const CharMinPoly cm = char_min_poly(m);
    std::vector<std::pair<PolyFp, std::vector<unsigned>>> primary;
    std::size_t blocks = 0;
    for (const auto& fac : factor(cm.characteristic)) {
        const auto d = static_cast<std::size_t>(fac.poly.degree());
        const MatrixFp fm = evaluate(fac.poly, m);
        std::vector<std::size_t> at_least{0}; // at_least[k] = # blocks of size >= k
        MatrixFp acc = MatrixFp::identity(p, n);
        std::size_t prev_null = 0;
        for (unsigned k = 1; k <= fac.multiplicity; ++k) {
            acc = acc * fm;
            const std::size_t null = n - rank(acc);
            at_least.push_back((null - prev_null) / d);
            prev_null = null;
        }
        at_least.push_back(0);
        std::vector<unsigned> exps;
        for (unsigned k = 1; k + 1 < at_least.size(); ++k)
            for (std::size_t c = at_least[k + 1]; c < at_least[k]; ++c) exps.push_back(k);
        std::sort(exps.rbegin(), exps.rend());
        blocks = std::max(blocks, exps.size());
        primary.emplace_back(fac.poly, std::move(exps));
    }
    RationalCanonicalForm out;
    for (std::size_t j = blocks; j-- > 0;) {
        PolyFp inv = PolyFp::constant(p, 1);
        for (const auto& [f, exps] : primary)
            if (j < exps.size()) inv = inv * power(f, exps[j]);
        out.blocks.push_back(inv);
    }
    if (n == 0) out.blocks.clear();
    out.simple = out.blocks.size() == 1;
    PolyFp prod = PolyFp::constant(p, 1);
    for (const auto& b : out.blocks) prod = prod * b;
    if (!(prod == cm.characteristic) || (!out.blocks.empty() && !(out.blocks.back() == cm.minimal)))
        throw error(errc::bad_params, "internal: invariant factors disagree with char/min polynomials");
    return out;
}

/// Block-diagonal matrix of the companion matrices of `blocks`.
inline MatrixFp rcf_matrix(const std::vector<PolyFp>& blocks, Residue p) {
    std::size_t n = 0;
    for (const auto& b : blocks) n += static_cast<std::size_t>(b.degree());
    MatrixFp out = MatrixFp::zero(p, n);
    std::size_t off = 0;
    for (const auto& b : blocks) {
        MatrixFp c = companion(b);
        for (std::size_t i = 0; i < c.dim(); ++i)
            for (std::size_t j = 0; j < c.dim(); ++j) out(off + i, off + j) = c(i, j);
        off += c.dim();
    }
    return out;
}

/// Subspace of F_p^N stored as its reduced row echelon basis.
struct Subspace {
    std::vector<VectorFp> basis;
    std::size_t dim() const noexcept { return basis.size(); }
    auto operator<=>(const Subspace& o) const {
        if (auto c = dim() <=> o.dim(); c != 0) return c;
        return basis <=> o.basis;
    }
    bool operator==(const Subspace&) const = default;
};

inline Subspace span_of(std::vector<VectorFp> vectors, Residue p) { return Subspace{rref(std::move(vectors), p)}; }

inline bool contains(const Subspace& u, VectorFp v, Residue p) {
    for (const auto& row : u.basis) {
        const auto piv = static_cast<std::size_t>(std::find_if(row.begin(), row.end(), [](Residue x) { return x; }) - row.begin());
        const Residue f = v[piv];
        if (!f) continue;
        for (std::size_t i = 0; i < v.size(); ++i) v[i] = (v[i] + p - detail::mul_mod(f, row[i], p)) % p;
    }
    return std::all_of(v.begin(), v.end(), [](Residue x) { return x == 0; });
}

inline bool is_invariant(const MatrixFp& m, const Subspace& u) {
    return std::all_of(u.basis.begin(), u.basis.end(),
                       [&](const VectorFp& b) { return contains(u, m.apply(b), m.modulus()); });
}

/// Cyclic subspace span{v, Mv, M^2 v, ...}.
inline Subspace cyclic_subspace(const MatrixFp& m, const VectorFp& v) {
    std::vector<VectorFp> vecs;
    VectorFp u = v;
    for (std::size_t i = 0; i < m.dim(); ++i) {
        vecs.push_back(u);
        u = m.apply(u);
    }
    return span_of(std::move(vecs), m.modulus());
}

inline Subspace subspace_sum(const Subspace& a, const Subspace& b, Residue p) {
    std::vector<VectorFp> v = a.basis;
    v.insert(v.end(), b.basis.begin(), b.basis.end());
    return span_of(std::move(v), p);
}

inline constexpr std::size_t subspace_family_limit = std::size_t{1} << 16;

/// Nonzero proper M-invariant subspaces: every cyclic subspace, then sums of
/// members with cyclic subspaces until nothing new appears. Sorted by
/// dimension, then basis. Needs p^N <= 2^20.
inline std::vector<Subspace> invariant_subspaces(const MatrixFp& m) {
    const Residue p = m.modulus();
    const std::size_t n = m.dim();
    const std::uint64_t total = checked_pow(p, n);
    if (total > enumeration_bound) throw error(errc::too_large, "p^N exceeds 2^20");
    std::set<Subspace> cyclic;
    VectorFp v;
    for (std::uint64_t i = 1; i < total; ++i) {
        Word w = word_from_index(i, p, n);
        v.assign(w.begin(), w.end());
        cyclic.insert(cyclic_subspace(m, v));
    }
    std::set<Subspace> family(cyclic.begin(), cyclic.end());
    std::vector<Subspace> work(family.begin(), family.end());
    while (!work.empty()) {
        Subspace u = std::move(work.back());
        work.pop_back();
        for (const auto& z : cyclic) {
            Subspace s = subspace_sum(u, z, p);
            if (s.dim() == u.dim()) continue;
            if (family.insert(s).second) {
                if (family.size() > subspace_family_limit) throw error(errc::too_large, "too many invariant subspaces");
                work.push_back(std::move(s));
            }
        }
    }
    std::vector<Subspace> out;
    for (const auto& s : family)
        if (s.dim() > 0 && s.dim() < n) out.push_back(s);
    return out;
}

} // namespace qca
