#pragma once

// Brute-force reference computations. Each one takes a route independent of
// the main implementation and is only practical at small sizes; tests and
// the paper suite compare the two.

#include <array>
#include <optional>
#include <vector>

#include "automaton.hpp"
#include "finite_field.hpp"
#include "group.hpp"
#include "measure.hpp"

namespace qca::oracle {

/// Every subset of the alphabet checked for closure (N <= 20).
inline std::vector<SubquasigroupSet> subquasigroups(const Quasigroup& q, bool include_trivial = false) {
    const std::size_t n = q.order();
    if (n > 20) throw error(errc::order_too_large, {n}, "exhaustive subset scan needs N <= 20");
    std::vector<SubquasigroupSet> out;
    for (std::uint64_t mask = 1; mask < (std::uint64_t{1} << n); ++mask) {
        auto members = members_of(mask);
        const bool trivial = members.size() == 1 || members.size() == n;
        if (trivial && !include_trivial) continue;
        if (is_closed(q, members)) out.push_back({members});
    }
    std::sort(out.begin(), out.end());
    return out;
}

/// Every subset checked for being a rho-invariant subgroup (N <= 20).
inline std::vector<std::vector<Symbol>> invariant_subgroups(const GroupTable& g, const std::vector<Symbol>& rho) {
    const std::size_t n = g.order();
    if (n > 20) throw error(errc::order_too_large, {n}, "exhaustive subset scan needs N <= 20");
    std::vector<std::vector<Symbol>> out;
    for (std::uint64_t mask = 1; mask < (std::uint64_t{1} << n); ++mask) {
        auto members = members_of(mask);
        if (!is_subgroup(g, members)) continue;
        bool stable = true;
        for (Symbol s : members) stable = stable && (mask >> rho[s] & 1);
        if (stable) out.push_back(members);
    }
    std::sort(out.begin(), out.end());
    return out;
}

/// Every reduced row echelon matrix of every rank, checked for M U <= U
/// (p^N <= 2^14). Returns nonzero proper invariant subspaces, sorted.
inline std::vector<Subspace> invariant_subspaces(const MatrixFp& m) {
    const Residue p = m.modulus();
    const std::size_t n = m.dim();
    if (checked_pow(p, n) > (std::uint64_t{1} << 14)) throw error(errc::too_large, "exhaustive subspaces need p^N <= 2^14");
    std::vector<Subspace> out;
    for (std::uint64_t pivots = 1; pivots + 1 < (std::uint64_t{1} << n); ++pivots) {
        auto piv = members_of(pivots);
        const std::size_t d = piv.size();
        // free positions: row i, columns after piv[i] that are not pivots
        std::vector<std::pair<std::size_t, std::size_t>> free;
        for (std::size_t i = 0; i < d; ++i)
            for (std::size_t c = piv[i] + 1; c < n; ++c)
                if (!(pivots >> c & 1)) free.emplace_back(i, c);
        const std::uint64_t count = checked_pow(p, free.size());
        Word vals;
        for (std::uint64_t idx = 0; idx < count; ++idx) {
            word_from_index(idx, p, free.size(), vals);
            Subspace u;
            u.basis.assign(d, VectorFp(n, 0));
            for (std::size_t i = 0; i < d; ++i) u.basis[i][piv[i]] = 1;
            for (std::size_t f = 0; f < free.size(); ++f) u.basis[free[f].first][free[f].second] = vals[f];
            if (is_invariant(m, u)) out.push_back(std::move(u));
        }
    }
    std::sort(out.begin(), out.end());
    return out;
}

/// Sum of m over every word of length |w|+1 whose image is w.
inline rational pushforward(const CylinderMeasure& m, const LocalRule& rule, const Word& w) {
    const std::size_t n = m.alphabet_size();
    const std::uint64_t total = checked_pow(n, w.size() + 1);
    if (total > enumeration_bound) throw error(errc::depth_too_large, "brute-force pushforward too large");
    rational sum = 0;
    Word x;
    for (std::uint64_t i = 0; i < total; ++i) {
        word_from_index(i, n, w.size() + 1, x);
        if (step(rule, x) == w) sum += m.eval(x);
    }
    return sum;
}

/// All N^n words searched for the one xi maps to b.
inline std::optional<Word> xi_inverse(const LocalRule& rule, const Word& b) {
    const std::size_t n = rule.alphabet_size();
    const std::uint64_t total = checked_pow(n, b.size());
    if (total > enumeration_bound) throw error(errc::too_large, "brute-force xi inverse too large");
    Word a;
    for (std::uint64_t i = 0; i < total; ++i) {
        word_from_index(i, n, b.size(), a);
        if (xi(rule, a) == b) return a;
    }
    return std::nullopt;
}

/// Full N^4 scan for phi(aa', bb') != phi(a,b) phi(a',b').
inline std::optional<std::array<Symbol, 4>> endomorphism_witness(const LocalRule& rule, const GroupTable& g) {
    const auto n = static_cast<Symbol>(g.order());
    for (Symbol a = 0; a < n; ++a)
        for (Symbol b = 0; b < n; ++b)
            for (Symbol a2 = 0; a2 < n; ++a2)
                for (Symbol b2 = 0; b2 < n; ++b2)
                    if (rule(g(a, a2), g(b, b2)) != g(rule(a, b), rule(a2, b2))) return std::array{a, b, a2, b2};
    return std::nullopt;
}

/// Non-unit invariant factors of M from the Smith normal form of xI - M over
/// F_p[x], ascending by divisibility.
inline std::vector<PolyFp> smith_invariant_factors(const MatrixFp& m) {
    const Residue p = m.modulus();
    const std::size_t n = m.dim();
    std::vector<std::vector<PolyFp>> a(n, std::vector<PolyFp>(n, PolyFp(p)));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            a[i][j] = PolyFp::constant(p, (p - m(i, j)) % p);
            if (i == j) a[i][j] = a[i][j] + PolyFp::x(p);
        }
    std::vector<PolyFp> diag;
    for (std::size_t k = 0; k < n; ++k) {
        for (;;) {
            // smallest-degree nonzero entry of the trailing block to (k, k)
            std::size_t bi = n, bj = n;
            for (std::size_t i = k; i < n; ++i)
                for (std::size_t j = k; j < n; ++j)
                    if (!a[i][j].is_zero() && (bi == n || a[i][j].degree() < a[bi][bj].degree())) {
                        bi = i;
                        bj = j;
                    }
            if (bi == n) return {}; // singular xI - M cannot happen
            std::swap(a[k], a[bi]);
            for (auto& row : a) std::swap(row[k], row[bj]);
            bool clean = true;
            for (std::size_t i = k + 1; i < n; ++i) {
                auto [q, r] = divmod(a[i][k], a[k][k]);
                for (std::size_t j = k; j < n; ++j) a[i][j] = a[i][j] - q * a[k][j];
                if (!r.is_zero()) clean = false;
            }
            for (std::size_t j = k + 1; j < n; ++j) {
                auto [q, r] = divmod(a[k][j], a[k][k]);
                for (std::size_t i = k; i < n; ++i) a[i][j] = a[i][j] - q * a[i][k];
                if (!r.is_zero()) clean = false;
            }
            if (!clean) continue;
            // pivot must divide the whole trailing block
            std::size_t bad = n;
            for (std::size_t i = k + 1; i < n && bad == n; ++i)
                for (std::size_t j = k + 1; j < n; ++j)
                    if (!(a[i][j] % a[k][k]).is_zero()) {
                        bad = i;
                        break;
                    }
            if (bad == n) break;
            for (std::size_t j = k; j < n; ++j) a[k][j] = a[k][j] + a[bad][j];
        }
        diag.push_back(a[k][k].monic());
    }
    std::vector<PolyFp> out;
    for (auto& f : diag)
        if (f.degree() > 0) out.push_back(f);
    std::sort(out.begin(), out.end(), [](const PolyFp& x, const PolyFp& y) { return x.degree() < y.degree(); });
    return out;
}

} // namespace qca::oracle
