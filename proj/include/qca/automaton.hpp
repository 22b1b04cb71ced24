#pragma once

// Cellular-automaton rules on one-sided finite words.
//
// A word x of length n is a finite prefix of a one-sided configuration. A
// rule with window [-l..r] maps it to the word of length n-(l+r) whose z-th
// symbol is phi(x_z, ..., x_{z+l+r}); the image of a finite prefix is thus
// the prefix determined by it.

#include <map>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "quasigroup.hpp"

namespace qca {

/// Largest dense lookup table a rule may carry.
inline constexpr std::uint64_t rule_table_limit = std::uint64_t{1} << 24;

/// Local map phi: A^[-l..r] -> A as a dense lookup table indexed by the
/// window read most significant symbol first.
class LocalRule {
public:
    LocalRule(std::size_t alphabet, std::size_t left, std::size_t right, std::vector<Symbol> table)
        : n_(alphabet), left_(left), right_(right), table_(std::move(table)) {
        if (n_ == 0) throw error(errc::parse, "empty alphabet");
        const std::uint64_t size = checked_pow(n_, arity());
        if (size > rule_table_limit) throw error(errc::too_large, "rule table exceeds 2^24 entries");
        if (table_.size() != size)
            throw error(errc::parse, "rule table has " + std::to_string(table_.size()) + " entries, expected " +
                                         std::to_string(size));
        for (std::size_t i = 0; i < table_.size(); ++i)
            if (table_[i] >= n_) throw error(errc::bad_entry, {i}, "rule output out of range");
    }

    std::size_t alphabet_size() const noexcept { return n_; }
    std::size_t left_radius() const noexcept { return left_; }
    std::size_t right_radius() const noexcept { return right_; }
    std::size_t arity() const noexcept { return left_ + right_ + 1; }
    bool is_rnnca() const noexcept { return left_ == 0 && right_ == 1; }
    const std::vector<Symbol>& table() const noexcept { return table_; }

    Symbol operator()(std::span<const Symbol> window) const {
        std::size_t idx = 0;
        for (Symbol s : window) idx = idx * n_ + s;
        return table_[idx];
    }
    /// Nearest-neighbour lookup phi(a, b); meaningful for RNNCA rules.
    Symbol operator()(Symbol a, Symbol b) const noexcept { return table_[a * n_ + b]; }

    bool operator==(const LocalRule&) const = default;

private:
    std::size_t n_, left_, right_;
    std::vector<Symbol> table_;
};

inline LocalRule from_quasigroup(const Quasigroup& q) {
    return LocalRule(q.order(), 0, 1, q.table());
}

namespace detail {

// Checks that the coordinate at `pos` acts bijectively with all others fixed.
inline bool permutative_at(const LocalRule& rule, std::size_t pos) {
    const std::size_t n = rule.alphabet_size(), k = rule.arity();
    const std::uint64_t stride = checked_pow(n, k - 1 - pos);
    const std::uint64_t total = rule.table().size();
    std::vector<char> seen(n);
    for (std::uint64_t base = 0; base < total; ++base) {
        if ((base / stride) % n != 0) continue; // enumerate tuples with coordinate pos = 0
        std::fill(seen.begin(), seen.end(), 0);
        for (std::size_t v = 0; v < n; ++v) {
            Symbol out = rule.table()[base + v * stride];
            if (seen[out]) return false;
            seen[out] = 1;
        }
    }
    return true;
}

} // namespace detail

/// phi is bijective in its leftmost coordinate for every fixed remainder.
inline bool is_left_permutative(const LocalRule& rule) { return detail::permutative_at(rule, 0); }

/// phi is bijective in its rightmost coordinate for every fixed remainder.
inline bool is_right_permutative(const LocalRule& rule) {
    return detail::permutative_at(rule, rule.arity() - 1);
}

inline bool is_bipermutative(const LocalRule& rule) {
    return is_left_permutative(rule) && is_right_permutative(rule);
}

/// Applies any rule; the output is l+r symbols shorter than the input.
inline Word apply(const LocalRule& rule, const Word& w) {
    const std::size_t k = rule.arity();
    if (w.size() < k) throw error(errc::word_too_short, {w.size()}, "word shorter than the rule window");
    check_word(w, rule.alphabet_size());
    Word out(w.size() - k + 1);
    for (std::size_t z = 0; z < out.size(); ++z) out[z] = rule(std::span<const Symbol>(w).subspan(z, k));
    return out;
}

/// One step of an RNNCA: out_i = phi(w_i, w_{i+1}).
inline Word step(const LocalRule& rule, const Word& w) {
    if (!rule.is_rnnca()) throw error(errc::not_rnnca, "step needs a nearest-neighbour rule (l=0, r=1)");
    if (w.size() < 2) throw error(errc::word_too_short, {w.size()}, "step needs a word of length >= 2");
    return apply(rule, w);
}

/// Bipermutative RNNCA with cached division tables, i.e. a quasigroup
/// cellular automaton.
class Qgca {
public:
    explicit Qgca(LocalRule rule) : rule_(std::move(rule)) {
        if (!rule_.is_rnnca()) throw error(errc::not_rnnca, "quasigroup CA needs l=0, r=1");
        if (!is_bipermutative(rule_)) throw error(errc::not_bipermutative, "rule is not bipermutative");
        const std::size_t n = size();
        right_div_.resize(n * n);
        left_div_.resize(n * n);
        for (Symbol a = 0; a < n; ++a)
            for (Symbol c = 0; c < n; ++c) {
                right_div_[a * n + rule_(a, c)] = c;
                left_div_[rule_(c, a) * n + a] = c;
            }
    }
    explicit Qgca(const Quasigroup& q) : Qgca(from_quasigroup(q)) {}

    std::size_t size() const noexcept { return rule_.alphabet_size(); }
    const LocalRule& rule() const noexcept { return rule_; }

    Symbol operator()(Symbol a, Symbol b) const noexcept { return rule_(a, b); }
    /// The unique c with phi(a, c) = w.
    Symbol right_solve(Symbol a, Symbol w) const noexcept { return right_div_[a * size() + w]; }
    /// The unique c with phi(c, b) = w.
    Symbol left_solve(Symbol w, Symbol b) const noexcept { return left_div_[w * size() + b]; }

    /// Preimage of `w` whose first symbol is `first`, written into `out`.
    void preimage(const Word& w, Symbol first, Word& out) const {
        out.resize(w.size() + 1);
        out[0] = first;
        for (std::size_t i = 0; i < w.size(); ++i) out[i + 1] = right_solve(out[i], w[i]);
    }

private:
    LocalRule rule_;
    std::vector<Symbol> right_div_, left_div_;
};

/// The N preimages of `w`, entry b being the one starting with symbol b.
inline std::vector<Word> fiber_preimages(const Qgca& ca, const Word& w) {
    check_word(w, ca.size());
    std::vector<Word> out(ca.size());
    for (Symbol b = 0; b < ca.size(); ++b) ca.preimage(w, b, out[b]);
    return out;
}

inline std::vector<Word> fiber_preimages(const LocalRule& rule, const Word& w) {
    return fiber_preimages(Qgca(rule), w);
}

/// The member of x's fiber whose first symbol is x_0 + 1 (mod N), with the
/// alphabet identified with Z/N through its index order.
inline Word tau(const Qgca& ca, const Word& x) {
    if (x.size() < 2) throw error(errc::word_too_short, {x.size()}, "tau needs a word of length >= 2");
    check_word(x, ca.size());
    Word image = apply(ca.rule(), x);
    Word out;
    ca.preimage(image, static_cast<Symbol>((x[0] + 1) % ca.size()), out);
    return out;
}

/// out_t = (Phi^t a)_0 for t = 0..n-1.
inline Word xi(const LocalRule& rule, const Word& a) {
    if (!rule.is_rnnca()) throw error(errc::not_rnnca, "xi needs a nearest-neighbour rule");
    check_word(a, rule.alphabet_size());
    Word out;
    out.reserve(a.size());
    Word row = a;
    while (!row.empty()) {
        out.push_back(row[0]);
        for (std::size_t i = 0; i + 1 < row.size(); ++i) row[i] = rule(row[i], row[i + 1]);
        row.pop_back();
    }
    return out;
}

inline Word xi(const Qgca& ca, const Word& a) { return xi(ca.rule(), a); }

/// The unique a with xi(a) = b. Rows of the space-time triangle are rebuilt
/// bottom-up, each by right-cancellation against the row below.
inline Word xi_inverse(const Qgca& ca, const Word& b) {
    check_word(b, ca.size());
    if (b.empty()) return {};
    Word row{b.back()};
    for (std::size_t t = b.size() - 1; t-- > 0;) {
        Word above(row.size() + 1);
        above[0] = b[t];
        for (std::size_t j = 0; j < row.size(); ++j) above[j + 1] = ca.right_solve(above[j], row[j]);
        row = std::move(above);
    }
    return row;
}

/// Local rule a ^* b, the c with a*c = b.
inline LocalRule dual_rule(const Qgca& ca) {
    const std::size_t n = ca.size();
    std::vector<Symbol> t(n * n);
    for (Symbol a = 0; a < n; ++a)
        for (Symbol b = 0; b < n; ++b) t[a * n + b] = ca.right_solve(a, b);
    return LocalRule(n, 0, 1, std::move(t));
}

struct OrbitPeriod {
    std::size_t preperiod;
    std::size_t period;
    bool operator==(const OrbitPeriod&) const = default;
};

/// Cycle detection for the periodic point w^inf under an RNNCA; dynamics
/// stay inside the N^P words of period P.
inline OrbitPeriod orbit_period(const LocalRule& rule, const Word& period_word) {
    if (!rule.is_rnnca()) throw error(errc::not_rnnca, "orbit needs a nearest-neighbour rule");
    if (period_word.empty()) throw error(errc::word_too_short, {0}, "period word must be nonempty");
    check_word(period_word, rule.alphabet_size());
    const std::size_t p = period_word.size();
    if (checked_pow(rule.alphabet_size(), p) > rule_table_limit)
        throw error(errc::period_too_large, {p}, "N^P exceeds 2^24 states");
    std::map<Word, std::size_t> seen;
    Word w = period_word;
    for (std::size_t t = 0;; ++t) {
        auto [it, fresh] = seen.emplace(w, t);
        if (!fresh) return {it->second, t - it->second};
        Word next(p);
        for (std::size_t i = 0; i < p; ++i) next[i] = rule(w[i], w[(i + 1) % p]);
        w = std::move(next);
    }
}

/// Nearest-neighbour recoding of a rule with l+r >= 1 over the block
/// alphabet B = A^(l+r): non-overlapping blocks of m = l+r symbols become
/// single B-symbols, and gamma(y, y') is the block of m outputs that the
/// 2m symbols of y y' determine.
class BlockRecoding {
public:
    explicit BlockRecoding(const LocalRule& rule)
        : base_(rule.alphabet_size()), block_(rule.left_radius() + rule.right_radius()),
          gamma_(make_gamma(rule, block_)) {}

    const LocalRule& gamma() const noexcept { return gamma_; }
    std::size_t block_length() const noexcept { return block_; }
    std::size_t base_alphabet() const noexcept { return base_; }

    /// Complete blocks only; a trailing partial block is dropped.
    Word encode(const Word& x) const {
        check_word(x, base_);
        Word out(x.size() / block_);
        for (std::size_t i = 0; i < out.size(); ++i) {
            std::uint64_t v = 0;
            for (std::size_t j = 0; j < block_; ++j) v = v * base_ + x[i * block_ + j];
            out[i] = static_cast<Symbol>(v);
        }
        return out;
    }

    Word decode(const Word& y) const {
        check_word(y, gamma_.alphabet_size());
        Word out, digits;
        out.reserve(y.size() * block_);
        for (Symbol s : y) {
            word_from_index(s, base_, block_, digits);
            out.insert(out.end(), digits.begin(), digits.end());
        }
        return out;
    }

private:
    static LocalRule make_gamma(const LocalRule& rule, std::size_t m) {
        if (m == 0) throw error(errc::bad_params, "recoding needs l + r >= 1");
        const std::size_t n = rule.alphabet_size();
        const std::uint64_t nb = checked_pow(n, m);
        if (checked_pow(nb, 2) > rule_table_limit) throw error(errc::too_large, "recoded rule exceeds 2^24 entries");
        std::vector<Symbol> t(nb * nb);
        Word window, out(m);
        for (std::uint64_t pair = 0; pair < nb * nb; ++pair) {
            word_from_index(pair, n, 2 * m, window);
            for (std::size_t j = 0; j < m; ++j) out[j] = rule(std::span<const Symbol>(window).subspan(j, m + 1));
            t[pair] = static_cast<Symbol>(index_of_word(out, n));
        }
        return LocalRule(nb, 0, 1, std::move(t));
    }

    std::size_t base_, block_;
    LocalRule gamma_;
};

inline BlockRecoding recode_block(const LocalRule& rule) { return BlockRecoding(rule); }

} // namespace qca
