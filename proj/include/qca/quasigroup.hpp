#pragma once

// Finite quasigroups: Latin-square validation, duals, associativity and
// subquasigroup enumeration.

#include <array>
#include <bit>
#include <compare>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <vector>

#include "core.hpp"

namespace qca {

/// Named symbols mapped to dense indices. Shared by every table-backed type.
class Alphabet {
public:
    Alphabet() = default;
    explicit Alphabet(std::vector<std::string> names) : names_(std::move(names)) {
        for (std::size_t i = 0; i < names_.size(); ++i) {
            const auto& s = names_[i];
            if (s.empty() || s.find_first_of(" \t\r\n") != std::string::npos)
                throw error(errc::parse, "invalid symbol name '" + s + "'");
            for (std::size_t j = 0; j < i; ++j)
                if (names_[j] == s) throw error(errc::parse, "duplicate symbol name '" + s + "'");
        }
    }

    static Alphabet numbered(std::size_t n) {
        std::vector<std::string> names;
        for (std::size_t i = 0; i < n; ++i) names.push_back(std::to_string(i));
        return Alphabet(std::move(names));
    }

    std::size_t size() const noexcept { return names_.size(); }
    const std::string& name(Symbol s) const { return names_.at(s); }
    const std::vector<std::string>& names() const noexcept { return names_; }

    Symbol index_of(std::string_view name) const {
        for (std::size_t i = 0; i < names_.size(); ++i)
            if (names_[i] == name) return static_cast<Symbol>(i);
        throw error(errc::unknown_name, "unknown symbol '" + std::string(name) + "'");
    }

    /// Whitespace-separated symbol names.
    Word parse_word(std::string_view text) const {
        Word w;
        for (const auto& tok : split_ws(text)) w.push_back(index_of(tok));
        return w;
    }

    std::string format_word(const Word& w) const {
        std::string out;
        for (std::size_t i = 0; i < w.size(); ++i) {
            if (i) out += ' ';
            out += name(w[i]);
        }
        return out;
    }

    bool operator==(const Alphabet&) const = default;

private:
    std::vector<std::string> names_;
};

/// Sorted member list of a subquasigroup.
struct SubquasigroupSet {
    std::vector<Symbol> members;
    auto operator<=>(const SubquasigroupSet&) const = default;
};

class Quasigroup;
Quasigroup validate_latin(std::span<const Symbol> table, Alphabet symbols);

/// Finite quasigroup. Entry (a, b) of the table is a*b; every row and column
/// is a permutation. Only `validate_latin` constructs one.
class Quasigroup {
public:
    std::size_t order() const noexcept { return alphabet_.size(); }
    const Alphabet& alphabet() const noexcept { return alphabet_; }
    const std::vector<Symbol>& table() const noexcept { return table_; }

    Symbol operator()(Symbol a, Symbol b) const noexcept { return table_[a * order() + b]; }

    bool operator==(const Quasigroup&) const = default;

private:
    friend Quasigroup validate_latin(std::span<const Symbol>, Alphabet);
    Quasigroup(std::vector<Symbol> table, Alphabet alphabet)
        : table_(std::move(table)), alphabet_(std::move(alphabet)) {}

    std::vector<Symbol> table_;
    Alphabet alphabet_;
};

/// Checks the Latin property of a flat row-major N*N table. Entries are
/// checked first, then rows top to bottom, then columns left to right; the
/// first offence is reported with its positions in `error::detail()`:
/// BadEntry(r, c), DuplicateInRow(r, c1, c2), DuplicateInColumn(c, r1, r2).
inline Quasigroup validate_latin(std::span<const Symbol> table, Alphabet symbols) {
    const std::size_t n = symbols.size();
    if (n == 0) throw error(errc::parse, "empty alphabet");
    if (table.size() != n * n)
        throw error(errc::parse, "table has " + std::to_string(table.size()) + " entries, expected " +
                                     std::to_string(n * n));
    for (std::size_t r = 0; r < n; ++r)
        for (std::size_t c = 0; c < n; ++c)
            if (table[r * n + c] >= n)
                throw error(errc::bad_entry, {r, c},
                            "entry (" + std::to_string(r) + "," + std::to_string(c) + ") out of range");
    std::vector<std::size_t> seen(n);
    constexpr std::size_t none = static_cast<std::size_t>(-1);
    for (std::size_t r = 0; r < n; ++r) {
        std::fill(seen.begin(), seen.end(), none);
        for (std::size_t c = 0; c < n; ++c) {
            auto v = table[r * n + c];
            if (seen[v] != none)
                throw error(errc::duplicate_in_row, {r, seen[v], c},
                            "row " + std::to_string(r) + " repeats a symbol at columns " +
                                std::to_string(seen[v]) + " and " + std::to_string(c));
            seen[v] = c;
        }
    }
    for (std::size_t c = 0; c < n; ++c) {
        std::fill(seen.begin(), seen.end(), none);
        for (std::size_t r = 0; r < n; ++r) {
            auto v = table[r * n + c];
            if (seen[v] != none)
                throw error(errc::duplicate_in_column, {c, seen[v], r},
                            "column " + std::to_string(c) + " repeats a symbol at rows " +
                                std::to_string(seen[v]) + " and " + std::to_string(r));
            seen[v] = r;
        }
    }
    return Quasigroup(std::vector<Symbol>(table.begin(), table.end()), std::move(symbols));
}

inline Quasigroup validate_latin(const std::vector<std::vector<Symbol>>& rows, Alphabet symbols) {
    std::vector<Symbol> flat;
    for (const auto& row : rows) {
        if (row.size() != rows.size()) throw error(errc::parse, "table is not square");
        flat.insert(flat.end(), row.begin(), row.end());
    }
    return validate_latin(flat, std::move(symbols));
}

/// a ^* b = the unique c with a*c = b.
inline Quasigroup dual(const Quasigroup& q) {
    const std::size_t n = q.order();
    std::vector<Symbol> t(n * n);
    for (Symbol a = 0; a < n; ++a)
        for (Symbol c = 0; c < n; ++c) t[a * n + q(a, c)] = c;
    return validate_latin(t, q.alphabet());
}

/// First triple (lexicographic) with (a*b)*c != a*(b*c), if any.
inline std::optional<std::array<Symbol, 3>> associativity_witness(const Quasigroup& q) {
    const auto n = static_cast<Symbol>(q.order());
    for (Symbol a = 0; a < n; ++a)
        for (Symbol b = 0; b < n; ++b)
            for (Symbol c = 0; c < n; ++c)
                if (q(q(a, b), c) != q(a, q(b, c))) return std::array{a, b, c};
    return std::nullopt;
}

inline bool is_associative(const Quasigroup& q) { return !associativity_witness(q).has_value(); }

/// The unique two-sided identity, if one exists.
inline std::optional<Symbol> two_sided_identity(const Quasigroup& q) {
    const auto n = static_cast<Symbol>(q.order());
    for (Symbol e = 0; e < n; ++e) {
        bool ok = true;
        for (Symbol a = 0; a < n && ok; ++a) ok = q(e, a) == a && q(a, e) == a;
        if (ok) return e;
    }
    return std::nullopt;
}

inline constexpr std::size_t subset_order_limit = 64;

using SymbolMask = std::uint64_t;

inline std::vector<Symbol> members_of(SymbolMask m) {
    std::vector<Symbol> out;
    while (m) {
        out.push_back(static_cast<Symbol>(std::countr_zero(m)));
        m &= m - 1;
    }
    return out;
}

/// Smallest subset containing `seed` and closed under `op` (and under
/// `extra`, when given, e.g. an automorphism).
template <class Op>
SymbolMask close_under(SymbolMask seed, Op op, const std::vector<Symbol>* extra = nullptr) {
    SymbolMask have = seed;
    std::vector<Symbol> elems = members_of(seed);
    for (std::size_t i = 0; i < elems.size(); ++i) {
        auto add = [&](Symbol z) {
            if (!(have >> z & 1)) {
                have |= SymbolMask{1} << z;
                elems.push_back(z);
            }
        };
        const Symbol x = elems[i];
        if (extra) add((*extra)[x]);
        for (std::size_t j = 0; j <= i; ++j) {
            add(op(x, elems[j]));
            add(op(elems[j], x));
        }
    }
    return have;
}

/// Enumerates the closed subsets generated by `generators` (closures of
/// every one- and two-element seed, then unions swept to a fixed point).
template <class Op>
std::set<SymbolMask> closed_family(std::size_t n, Op op, const std::vector<Symbol>* extra = nullptr) {
    std::set<SymbolMask> family;
    std::vector<SymbolMask> singles(n);
    for (Symbol a = 0; a < n; ++a) {
        singles[a] = close_under(SymbolMask{1} << a, op, extra);
        family.insert(singles[a]);
    }
    for (Symbol a = 0; a < n; ++a)
        for (Symbol b = a + 1; b < n; ++b)
            family.insert(close_under((SymbolMask{1} << a) | (SymbolMask{1} << b), op, extra));
    std::vector<SymbolMask> work(family.begin(), family.end());
    while (!work.empty()) {
        SymbolMask s = work.back();
        work.pop_back();
        for (Symbol a = 0; a < n; ++a) {
            if (s >> a & 1) continue;
            SymbolMask t = close_under(s | singles[a], op, extra);
            if (family.insert(t).second) work.push_back(t);
        }
    }
    return family;
}

/// Proper nonempty closed subsets with at least two members. With
/// `include_trivial`, idempotent singletons and the whole set are reported
/// as well. Sorted lexicographically by member indices.
inline std::vector<SubquasigroupSet> subquasigroups(const Quasigroup& q, bool include_trivial = false) {
    const std::size_t n = q.order();
    if (n > subset_order_limit)
        throw error(errc::order_too_large, {n}, "subquasigroup enumeration needs N <= 64");
    const SymbolMask full = n == 64 ? ~SymbolMask{0} : (SymbolMask{1} << n) - 1;
    std::vector<SubquasigroupSet> out;
    for (SymbolMask m : closed_family(n, [&](Symbol a, Symbol b) { return q(a, b); })) {
        const bool trivial = m == full || std::popcount(m) == 1;
        if (trivial && !include_trivial) continue;
        out.push_back({members_of(m)});
    }
    std::sort(out.begin(), out.end());
    return out;
}

inline bool is_closed(const Quasigroup& q, const std::vector<Symbol>& members) {
    std::vector<bool> in(q.order());
    for (Symbol s : members) in.at(s) = true;
    for (Symbol a : members)
        for (Symbol b : members)
            if (!in[q(a, b)]) return false;
    return !members.empty();
}

} // namespace qca
