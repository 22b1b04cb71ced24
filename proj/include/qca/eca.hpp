#pragma once

// Endomorphic cellular automata on product group shifts A^N: affine
// decomposition, kernel words and the induced permutation rho, rho-orbits,
// linear coordinates on elementary abelian groups, and the audits of the two
// "single orbit" / "simple canonical form" equivalences.

#include <array>
#include <optional>
#include <vector>

#include "automaton.hpp"
#include "finite_field.hpp"
#include "group.hpp"

namespace qca {

struct AffineDecomposition {
    std::vector<Symbol> phi0; // phi(a, e)
    std::vector<Symbol> phi1; // phi(e, b)
    bool phi0_automorphism = false;
    bool phi1_automorphism = false;
    /// Bipermutativity of the rule, checked directly on its table.
    bool bipermutative = false;
};

namespace detail {

inline void check_same_alphabet(const LocalRule& rule, const GroupTable& g) {
    if (!rule.is_rnnca()) throw error(errc::not_rnnca, "expected a nearest-neighbour rule");
    if (rule.alphabet_size() != g.order())
        throw error(errc::alphabet_mismatch, {rule.alphabet_size(), g.order()}, "rule and group alphabets differ");
}

inline bool is_bijection(const std::vector<Symbol>& f) {
    std::vector<char> seen(f.size(), 0);
    for (Symbol s : f) {
        if (s >= f.size() || seen[s]) return false;
        seen[s] = 1;
    }
    return true;
}

} // namespace detail

/// Splits phi(a, b) = phi0(a) + phi1(b) over an abelian group. Throws
/// NotAffine with the first failing pair (a, b), or NotEndomorphism with
/// (which, x, y) when phi0 (which = 0) or phi1 (which = 1) is not additive.
inline AffineDecomposition decompose_affine(const LocalRule& rule, const GroupTable& g) {
    detail::check_same_alphabet(rule, g);
    if (!g.abelian()) throw error(errc::bad_params, "affine decomposition needs an abelian group");
    const auto n = static_cast<Symbol>(g.order());
    const Symbol e = g.identity();
    AffineDecomposition d;
    d.phi0.resize(n);
    d.phi1.resize(n);
    for (Symbol a = 0; a < n; ++a) {
        d.phi0[a] = rule(a, e);
        d.phi1[a] = rule(e, a);
    }
    for (Symbol a = 0; a < n; ++a)
        for (Symbol b = 0; b < n; ++b)
            if (rule(a, b) != g(d.phi0[a], d.phi1[b]))
                throw error(errc::not_affine, {a, b}, "phi(" + g.alphabet().name(a) + "," + g.alphabet().name(b) +
                                                          ") != phi0(a) + phi1(b)");
    for (std::size_t which = 0; which < 2; ++which) {
        const auto& f = which == 0 ? d.phi0 : d.phi1;
        for (Symbol x = 0; x < n; ++x)
            for (Symbol y = 0; y < n; ++y)
                if (f[g(x, y)] != g(f[x], f[y]))
                    throw error(errc::not_endomorphism, {which, x, y},
                                std::string(which == 0 ? "phi0" : "phi1") + " is not additive");
    }
    d.phi0_automorphism = detail::is_bijection(d.phi0);
    d.phi1_automorphism = detail::is_bijection(d.phi1);
    d.bipermutative = is_bipermutative(rule);
    return d;
}

/// First quadruple (a, b, a', b') with phi(aa', bb') != phi(a,b) phi(a',b'),
/// searched with (a, b) over generators of A x A. The pairs x for which
/// phi(xy) = phi(x)phi(y) holds for every y form a subgroup, so this finds a
/// witness exactly when the rule is not a homomorphism.
inline std::optional<std::array<Symbol, 4>> endomorphism_witness(const LocalRule& rule, const GroupTable& g) {
    detail::check_same_alphabet(rule, g);
    const auto n = static_cast<Symbol>(g.order());
    const Symbol e = g.identity();
    std::vector<std::pair<Symbol, Symbol>> gens;
    for (Symbol s : generating_set(g.quasigroup())) {
        gens.emplace_back(s, e);
        gens.emplace_back(e, s);
    }
    for (auto [a, b] : gens) {
        const Symbol fab = rule(a, b);
        for (Symbol a2 = 0; a2 < n; ++a2)
            for (Symbol b2 = 0; b2 < n; ++b2)
                if (rule(g(a, a2), g(b, b2)) != g(fab, rule(a2, b2))) return std::array{a, b, a2, b2};
    }
    return std::nullopt;
}

inline void check_endomorphic_ca(const LocalRule& rule, const GroupTable& g) {
    if (auto w = endomorphism_witness(rule, g))
        throw error(errc::not_endomorphic_ca, {(*w)[0], (*w)[1], (*w)[2], (*w)[3]},
                    "local rule is not a homomorphism A x A -> A");
}

struct KernelReport {
    /// zeta[a]: one period of the kernel word starting with a.
    std::vector<Word> zeta;
    /// rho[a] = zeta[a]_1, so that shifting zeta[a] gives zeta[rho[a]].
    std::vector<Symbol> rho;
    std::vector<std::size_t> periods;
};

/// Kernel of an endomorphic bipermutative CA: k_0 = a and k_{i+1} is the
/// unique symbol with phi(k_i, k_{i+1}) = e, followed until the first repeat.
inline KernelReport kernel(const LocalRule& rule, const GroupTable& g) {
    check_endomorphic_ca(rule, g);
    const Qgca ca(rule);
    const std::size_t n = g.order();
    const Symbol e = g.identity();
    KernelReport r;
    r.zeta.resize(n);
    r.rho.resize(n);
    r.periods.resize(n);
    std::vector<std::size_t> pos(n);
    std::vector<char> seen(n);
    for (Symbol a = 0; a < n; ++a) {
        std::fill(seen.begin(), seen.end(), 0);
        Word k;
        Symbol x = a;
        while (!seen[x]) {
            seen[x] = 1;
            pos[x] = k.size();
            k.push_back(x);
            x = ca.right_solve(x, e);
        }
        if (x != a) throw error(errc::aperiodic_kernel_word, {a, pos[x]}, "kernel word is not purely periodic");
        r.rho[a] = k.size() > 1 ? k[1] : k[0];
        r.periods[a] = k.size();
        r.zeta[a] = std::move(k);
    }
    return r;
}

struct RhoOrbits {
    /// Cycles of rho on A \ {e}, each starting at its smallest symbol.
    std::vector<std::vector<Symbol>> orbits;
    bool single_orbit = false;
};

inline RhoOrbits rho_orbits(const std::vector<Symbol>& rho, const GroupTable& g) {
    check_rho(g, rho);
    RhoOrbits out;
    std::vector<char> done(rho.size(), 0);
    done[g.identity()] = 1;
    for (Symbol a = 0; a < rho.size(); ++a) {
        if (done[a]) continue;
        std::vector<Symbol> cyc;
        for (Symbol x = a; !done[x]; x = rho[x]) {
            done[x] = 1;
            cyc.push_back(x);
        }
        out.orbits.push_back(std::move(cyc));
    }
    out.single_orbit = out.orbits.size() == 1;
    return out;
}

/// Coordinates on an elementary abelian p-group (Z/p)^k. The basis is picked
/// greedily in index order and then reversed, so for direct powers of
/// cyclic(p) the coordinates follow the tuple order.
struct ElementaryAbelian {
    Residue p = 0;
    std::vector<Symbol> basis;
    std::vector<VectorFp> coords;  // per symbol
    std::vector<Symbol> from_coords; // coordinate index (most significant first) -> symbol

    std::size_t dim() const noexcept { return basis.size(); }
    Symbol symbol_of(const VectorFp& v) const {
        return from_coords[index_of_word(Word(v.begin(), v.end()), p)];
    }
};

inline std::optional<ElementaryAbelian> elementary_abelian(const GroupTable& g) {
    const std::size_t n = g.order();
    if (!g.abelian() || n < 2) return std::nullopt;
    std::size_t p = 2;
    while (n % p) ++p;
    std::size_t k = 0;
    for (std::size_t m = n; m > 1; m /= p) {
        if (m % p) return std::nullopt;
        ++k;
    }
    const Symbol e = g.identity();
    for (Symbol x = 0; x < n; ++x) {
        Symbol y = e;
        for (std::size_t i = 0; i < p; ++i) y = g(y, x);
        if (y != e) return std::nullopt;
    }
    ElementaryAbelian ea;
    ea.p = static_cast<Residue>(p);
    for (Symbol s : generating_set(g.quasigroup()))
        if (s != e) ea.basis.push_back(s);
    std::reverse(ea.basis.begin(), ea.basis.end());
    if (ea.basis.size() != k) return std::nullopt;
    ea.coords.assign(n, {});
    ea.from_coords.assign(n, 0);
    Word c;
    for (std::uint64_t idx = 0; idx < n; ++idx) {
        word_from_index(idx, p, k, c);
        Symbol x = e;
        for (std::size_t i = 0; i < k; ++i)
            for (Symbol t = 0; t < c[i]; ++t) x = g(x, ea.basis[i]);
        if (!ea.coords[x].empty()) return std::nullopt;
        ea.coords[x].assign(c.begin(), c.end());
        ea.from_coords[idx] = x;
    }
    return ea;
}

/// Matrix of a permutation of the group in the given coordinates, when that
/// permutation is linear (verified on every element).
inline std::optional<MatrixFp> matrix_of(const ElementaryAbelian& ea, const std::vector<Symbol>& perm) {
    const std::size_t k = ea.dim();
    std::vector<Residue> entries(k * k);
    for (std::size_t j = 0; j < k; ++j) {
        const VectorFp& col = ea.coords[perm[ea.basis[j]]];
        for (std::size_t i = 0; i < k; ++i) entries[i * k + j] = col[i];
    }
    MatrixFp m(ea.p, k, std::move(entries));
    for (Symbol x = 0; x < perm.size(); ++x)
        if (m.apply(ea.coords[x]) != ea.coords[perm[x]]) return std::nullopt;
    return m;
}

/// Both sides of "A \ {e} is a single rho-orbit <=> no proper nontrivial
/// rho-invariant subgroup", computed independently.
struct OrbitLemmaAudit {
    RhoOrbits orbits;
    bool no_invariant_subgroup = false;
    /// Smallest proper nontrivial rho-invariant subgroup, if any.
    std::optional<std::vector<Symbol>> witness;
    bool agree = false;
};

/// Both sides of "the canonical form of M is simple <=> M has no nontrivial
/// invariant subspace", plus the eigenvalue scan of the characteristic
/// polynomial.
struct SimpleLemmaAudit {
    PolyFp characteristic;
    RationalCanonicalForm form;
    std::vector<Residue> roots;
    std::vector<Subspace> invariant;
    bool agree = false;
};

inline SimpleLemmaAudit simple_lemma_audit(const MatrixFp& m) {
    SimpleLemmaAudit a{char_poly(m), rcf(m), {}, invariant_subspaces(m), false};
    a.roots = roots(a.characteristic);
    a.agree = a.form.simple == a.invariant.empty();
    return a;
}

inline OrbitLemmaAudit orbit_lemma_audit(const GroupTable& g, const std::vector<Symbol>& rho) {
    OrbitLemmaAudit a;
    a.orbits = rho_orbits(rho, g);
    const std::size_t n = g.order();
    if (n <= subset_order_limit) {
        for (const auto& s : invariant_subgroups(g, rho))
            if (s.size() > 1 && s.size() < n && (!a.witness || s.size() < a.witness->size())) a.witness = s;
    } else {
        auto ea = elementary_abelian(g);
        std::optional<MatrixFp> m;
        if (ea) m = matrix_of(*ea, rho);
        if (!m) throw error(errc::order_too_large, {n}, "invariant subgroups need N <= 64 or a linear rho");
        // subgroups of (Z/p)^k are exactly its subspaces
        auto subs = invariant_subspaces(*m);
        if (!subs.empty()) {
            std::vector<Symbol> members;
            const auto& basis = subs.front().basis;
            Word c;
            for (std::uint64_t idx = 0; idx < checked_pow(ea->p, basis.size()); ++idx) {
                word_from_index(idx, ea->p, basis.size(), c);
                VectorFp v(ea->dim(), 0);
                for (std::size_t i = 0; i < basis.size(); ++i)
                    for (std::size_t j = 0; j < v.size(); ++j)
                        v[j] = (v[j] + detail::mul_mod(c[i], basis[i][j], ea->p)) % ea->p;
                members.push_back(ea->symbol_of(v));
            }
            std::sort(members.begin(), members.end());
            a.witness = std::move(members);
        }
    }
    a.no_invariant_subgroup = !a.witness.has_value();
    a.agree = a.orbits.single_orbit == a.no_invariant_subgroup;
    return a;
}

struct LemmaAudit {
    KernelReport kernel;
    OrbitLemmaAudit orbit;
    /// Present when the group is elementary abelian and rho is linear.
    std::optional<MatrixFp> rho_matrix;
    std::optional<SimpleLemmaAudit> simple;
};

inline LemmaAudit lemma_audit(const GroupTable& g, const LocalRule& rule) {
    LemmaAudit a{kernel(rule, g), {}, std::nullopt, std::nullopt};
    a.orbit = orbit_lemma_audit(g, a.kernel.rho);
    if (auto ea = elementary_abelian(g)) {
        a.rho_matrix = matrix_of(*ea, a.kernel.rho);
        if (a.rho_matrix && checked_pow(ea->p, ea->dim()) <= enumeration_bound)
            a.simple = simple_lemma_audit(*a.rho_matrix);
    }
    return a;
}

} // namespace qca
