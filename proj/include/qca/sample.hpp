#pragma once

// Seeded random inputs for property sweeps: Latin squares, bipermutative
// rules and words.

#include <numeric>
#include <random>
#include <vector>

#include "automaton.hpp"
#include "quasigroup.hpp"

namespace qca {

using Rng = std::mt19937_64;

/// Uniform draw from [0, n); modulo of a 64-bit draw, so it is the same on
/// every standard library.
inline std::size_t draw(Rng& rng, std::size_t n) { return static_cast<std::size_t>(rng() % n); }

/// Random Latin square by randomized backtracking over cells in row-major
/// order. Every N x N Latin square can come out.
inline Quasigroup random_quasigroup(std::size_t n, Rng& rng) {
    if (n == 0 || n > 16) throw error(errc::bad_params, "random Latin squares need 1 <= N <= 16");
    std::vector<Symbol> t(n * n);
    std::vector<std::uint32_t> row_used(n, 0), col_used(n, 0);
    std::vector<std::vector<Symbol>> order(n * n);
    std::vector<std::size_t> next(n * n, 0);
    std::size_t cell = 0;
    bool entering = true;
    while (cell < n * n) {
        const std::size_t r = cell / n, c = cell % n;
        if (entering) {
            order[cell].resize(n);
            std::iota(order[cell].begin(), order[cell].end(), Symbol{0});
            for (std::size_t i = n; i > 1; --i) std::swap(order[cell][i - 1], order[cell][draw(rng, i)]);
            next[cell] = 0;
        } else {
            const Symbol old = t[cell];
            row_used[r] &= ~(1u << old);
            col_used[c] &= ~(1u << old);
        }
        bool placed = false;
        while (next[cell] < n) {
            const Symbol s = order[cell][next[cell]++];
            if ((row_used[r] >> s & 1) || (col_used[c] >> s & 1)) continue;
            t[cell] = s;
            row_used[r] |= 1u << s;
            col_used[c] |= 1u << s;
            placed = true;
            break;
        }
        if (placed) {
            ++cell;
            entering = true;
        } else {
            if (cell == 0) throw error(errc::bad_params, "internal: Latin square search exhausted");
            --cell;
            entering = false;
        }
    }
    return validate_latin(t, Alphabet::numbered(n));
}

/// Bipermutative RNNCA from a random Latin square.
inline LocalRule random_bipermutative_rule(std::size_t n, Rng& rng) {
    return from_quasigroup(random_quasigroup(n, rng));
}

inline Word random_word(std::size_t alphabet, std::size_t len, Rng& rng) {
    Word w(len);
    for (auto& s : w) s = static_cast<Symbol>(draw(rng, alphabet));
    return w;
}

} // namespace qca
