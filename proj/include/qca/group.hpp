#pragma once

// Finite groups given by Cayley tables: validation, generating sets,
// subgroup lattices (optionally restricted to automorphism-invariant
// subgroups) and h_max.

#include <cmath>
#include <optional>
#include <vector>

#include "quasigroup.hpp"

namespace qca {

namespace detail {

// Closure under `op` with a byte-per-symbol membership set, for groups too
// big for the 64-bit masks.
template <class Op>
void close_large(std::vector<char>& in, std::vector<Symbol>& elems, Op op) {
    for (std::size_t i = 0; i < elems.size(); ++i) {
        const Symbol x = elems[i];
        for (std::size_t j = 0; j <= i; ++j) {
            for (Symbol z : {op(x, elems[j]), op(elems[j], x)}) {
                if (!in[z]) {
                    in[z] = 1;
                    elems.push_back(z);
                }
            }
        }
    }
}

} // namespace detail

/// Greedy generating set of a finite quasigroup: scan symbols in index order
/// and keep each one not yet generated by the previous picks.
inline std::vector<Symbol> generating_set(const Quasigroup& q) {
    const std::size_t n = q.order();
    std::vector<char> in(n, 0);
    std::vector<Symbol> elems, gens;
    for (Symbol a = 0; a < n; ++a) {
        if (in[a]) continue;
        gens.push_back(a);
        in[a] = 1;
        elems.push_back(a);
        // restart so products of the new generator with old elements appear
        std::vector<Symbol> all = elems;
        std::fill(in.begin(), in.end(), 0);
        for (Symbol s : all) in[s] = 1;
        detail::close_large(in, all, [&](Symbol x, Symbol y) { return q(x, y); });
        elems = std::move(all);
    }
    return gens;
}

/// Light's associativity test over a generating set: the elements g with
/// (xg)y = x(gy) for all x, y form a closed subset, so checking the
/// generators suffices.
inline std::optional<std::array<Symbol, 3>> associativity_witness_fast(const Quasigroup& q) {
    const auto n = static_cast<Symbol>(q.order());
    for (Symbol g : generating_set(q))
        for (Symbol x = 0; x < n; ++x)
            for (Symbol y = 0; y < n; ++y)
                if (q(q(x, g), y) != q(x, q(g, y))) return std::array{x, g, y};
    return std::nullopt;
}

/// Cayley table of a finite group with its identity, inverses and
/// commutativity flag.
class GroupTable {
public:
    /// Throws NotAGroup when `q` lacks a two-sided identity or is not
    /// associative, or when `identity` is given and is not the identity.
    explicit GroupTable(Quasigroup q, std::optional<Symbol> identity = std::nullopt) : q_(std::move(q)) {
        auto e = two_sided_identity(q_);
        if (!e) throw error(errc::not_a_group, "table has no two-sided identity");
        if (identity && *identity != *e)
            throw error(errc::not_a_group, {*identity}, "declared identity '" + q_.alphabet().name(*identity) +
                                                            "' is not the identity");
        if (auto w = associativity_witness_fast(q_))
            throw error(errc::not_a_group, {(*w)[0], (*w)[1], (*w)[2]}, "table is not associative");
        identity_ = *e;
        const std::size_t n = q_.order();
        inverse_.resize(n);
        for (Symbol a = 0; a < n; ++a)
            for (Symbol b = 0; b < n; ++b)
                if (q_(a, b) == identity_) inverse_[a] = b;
        abelian_ = true;
        for (Symbol a = 0; a < n && abelian_; ++a)
            for (Symbol b = a + 1; b < n && abelian_; ++b) abelian_ = q_(a, b) == q_(b, a);
    }

    std::size_t order() const noexcept { return q_.order(); }
    const Alphabet& alphabet() const noexcept { return q_.alphabet(); }
    const Quasigroup& quasigroup() const noexcept { return q_; }
    Symbol operator()(Symbol a, Symbol b) const noexcept { return q_(a, b); }
    Symbol identity() const noexcept { return identity_; }
    Symbol inverse(Symbol a) const noexcept { return inverse_[a]; }
    const std::vector<Symbol>& inverses() const noexcept { return inverse_; }
    bool abelian() const noexcept { return abelian_; }

private:
    Quasigroup q_;
    Symbol identity_ = 0;
    std::vector<Symbol> inverse_;
    bool abelian_ = false;
};

inline bool is_subgroup(const GroupTable& g, const std::vector<Symbol>& members) {
    if (members.empty()) return false;
    std::vector<char> in(g.order(), 0);
    for (Symbol s : members) {
        if (s >= g.order()) return false;
        in[s] = 1;
    }
    if (!in[g.identity()]) return false;
    for (Symbol a : members) {
        if (!in[g.inverse(a)]) return false;
        for (Symbol b : members)
            if (!in[g(a, b)]) return false;
    }
    return true;
}

/// Checks that `rho` is a permutation of the group's symbols fixing e.
inline void check_rho(const GroupTable& g, const std::vector<Symbol>& rho) {
    if (rho.size() != g.order()) throw error(errc::bad_params, "rho has the wrong length");
    std::vector<char> seen(g.order(), 0);
    for (Symbol s : rho) {
        if (s >= g.order() || seen[s]) throw error(errc::bad_params, "rho is not a permutation");
        seen[s] = 1;
    }
    if (rho[g.identity()] != g.identity()) throw error(errc::bad_params, "rho must fix the identity");
}

/// All subgroups B with rho(B) = B, including {e} and the whole group,
/// sorted lexicographically by members.
inline std::vector<std::vector<Symbol>> invariant_subgroups(const GroupTable& g, const std::vector<Symbol>& rho) {
    const std::size_t n = g.order();
    if (n > subset_order_limit) throw error(errc::order_too_large, {n}, "subgroup enumeration needs N <= 64");
    check_rho(g, rho);
    std::vector<std::vector<Symbol>> out;
    for (SymbolMask m : closed_family(n, [&](Symbol a, Symbol b) { return g(a, b); }, &rho))
        out.push_back(members_of(m));
    std::sort(out.begin(), out.end());
    return out;
}

inline std::vector<Symbol> identity_permutation(std::size_t n) {
    std::vector<Symbol> id(n);
    for (Symbol i = 0; i < n; ++i) id[i] = i;
    return id;
}

inline std::vector<std::vector<Symbol>> subgroups(const GroupTable& g) {
    return invariant_subgroups(g, identity_permutation(g.order()));
}

/// log2 of the largest proper subgroup order (0 for groups of prime order).
inline double h_max(const GroupTable& g) {
    std::size_t best = 1;
    for (const auto& s : subgroups(g))
        if (s.size() < g.order()) best = std::max(best, s.size());
    return std::log2(static_cast<double>(best));
}

} // namespace qca
