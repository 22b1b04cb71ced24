#pragma once

// Shared vocabulary: symbols, words, errors and the enumeration helpers
// every module leans on.

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <exception>
#include <functional>
#include <initializer_list>
#include <limits>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <thread>
#include <utility>
#include <vector>

namespace qca {

/// Dense index of an alphabet symbol, 0..N-1.
using Symbol = std::uint32_t;

/// Finite one-sided word over an alphabet of dense indices.
using Word = std::vector<Symbol>;

enum class errc {
    parse,
    bad_entry,
    duplicate_in_row,
    duplicate_in_column,
    unknown_name,
    bad_params,
    alphabet_mismatch,
    not_a_group,
    not_a_subgroup,
    word_too_short,
    not_rnnca,
    not_bipermutative,
    not_affine,
    not_endomorphism,
    not_endomorphic_ca,
    aperiodic_kernel_word,
    zero_mass_condition,
    order_too_large,
    period_too_large,
    depth_too_large,
    too_large,
};

inline const char* to_string(errc e) {
    switch (e) {
    case errc::parse: return "ParseError";
    case errc::bad_entry: return "BadEntry";
    case errc::duplicate_in_row: return "DuplicateInRow";
    case errc::duplicate_in_column: return "DuplicateInColumn";
    case errc::unknown_name: return "UnknownName";
    case errc::bad_params: return "BadParams";
    case errc::alphabet_mismatch: return "AlphabetMismatch";
    case errc::not_a_group: return "NotAGroup";
    case errc::not_a_subgroup: return "NotASubgroup";
    case errc::word_too_short: return "WordTooShort";
    case errc::not_rnnca: return "NotRNNCA";
    case errc::not_bipermutative: return "NotBipermutative";
    case errc::not_affine: return "NotAffine";
    case errc::not_endomorphism: return "NotEndomorphism";
    case errc::not_endomorphic_ca: return "NotEndomorphicCA";
    case errc::aperiodic_kernel_word: return "AperiodicKernelWord";
    case errc::zero_mass_condition: return "ZeroMassCondition";
    case errc::order_too_large: return "OrderTooLarge";
    case errc::period_too_large: return "PeriodTooLarge";
    case errc::depth_too_large: return "DepthTooLarge";
    case errc::too_large: return "TooLarge";
    }
    return "Error";
}

/// Every failure the library reports. `detail()` carries the structured
/// payload of the error (row/column positions, witness symbols, ...).
class error : public std::runtime_error {
public:
    error(errc code, std::vector<std::size_t> detail, const std::string& what)
        : std::runtime_error(std::string(to_string(code)) + ": " + what),
          code_(code), detail_(std::move(detail)) {}
    error(errc code, const std::string& what) : error(code, {}, what) {}

    errc code() const noexcept { return code_; }
    const std::vector<std::size_t>& detail() const noexcept { return detail_; }

    bool is_input_error() const noexcept {
        switch (code_) {
        case errc::parse:
        case errc::bad_entry:
        case errc::duplicate_in_row:
        case errc::duplicate_in_column:
        case errc::unknown_name:
        case errc::bad_params:
        case errc::alphabet_mismatch:
            return true;
        default:
            return false;
        }
    }
    bool is_bound_error() const noexcept {
        return code_ == errc::order_too_large || code_ == errc::period_too_large ||
               code_ == errc::depth_too_large || code_ == errc::too_large;
    }

private:
    errc code_;
    std::vector<std::size_t> detail_;
};

/// Largest number of words any exhaustive sweep visits.
inline constexpr std::uint64_t enumeration_bound = std::uint64_t{1} << 20;

/// N^k, saturating at UINT64_MAX.
inline std::uint64_t checked_pow(std::uint64_t base, std::size_t exp) {
    std::uint64_t r = 1;
    for (std::size_t i = 0; i < exp; ++i) {
        if (base != 0 && r > std::numeric_limits<std::uint64_t>::max() / base)
            return std::numeric_limits<std::uint64_t>::max();
        r *= base;
    }
    return r;
}

/// Writes the `index`-th word of length `len` in lexicographic order
/// (most significant symbol first) into `out`.
inline void word_from_index(std::uint64_t index, std::size_t alphabet, std::size_t len, Word& out) {
    out.resize(len);
    for (std::size_t i = len; i-- > 0;) {
        out[i] = static_cast<Symbol>(index % alphabet);
        index /= alphabet;
    }
}

inline Word word_from_index(std::uint64_t index, std::size_t alphabet, std::size_t len) {
    Word w;
    word_from_index(index, alphabet, len, w);
    return w;
}

inline std::uint64_t index_of_word(const Word& w, std::size_t alphabet) {
    std::uint64_t r = 0;
    for (Symbol s : w) r = r * alphabet + s;
    return r;
}

inline void check_word(const Word& w, std::size_t alphabet) {
    for (std::size_t i = 0; i < w.size(); ++i)
        if (w[i] >= alphabet)
            throw error(errc::alphabet_mismatch, {i, w[i]},
                        "symbol index " + std::to_string(w[i]) + " at position " +
                            std::to_string(i) + " outside alphabet of size " +
                            std::to_string(alphabet));
}

/// Number of worker threads for sweeps; 0 means "hardware concurrency".
inline unsigned resolve_jobs(unsigned jobs) {
    if (jobs != 0) return jobs;
    unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1 : hw;
}

/// Splits [0, count) into contiguous chunks, runs `body(begin, end)` for
/// each on its own thread and returns the per-chunk results in chunk order,
/// so reductions over them are deterministic. Counts below `min_count` run
/// inline.
template <class Result, class Body>
std::vector<Result> parallel_chunks(std::uint64_t count, unsigned jobs, Body body, std::uint64_t min_count = 4096) {
    jobs = resolve_jobs(jobs);
    if (count < min_count) jobs = 1;
    const std::uint64_t chunks = std::min<std::uint64_t>(jobs, std::max<std::uint64_t>(count, 1));
    std::vector<Result> results(chunks);
    auto range = [&](std::uint64_t c) {
        return std::pair{count * c / chunks, count * (c + 1) / chunks};
    };
    if (chunks == 1) {
        results[0] = body(std::uint64_t{0}, count);
        return results;
    }
    std::vector<std::thread> pool;
    std::vector<std::exception_ptr> errors(chunks);
    for (std::uint64_t c = 0; c < chunks; ++c) {
        pool.emplace_back([&, c] {
            try {
                auto [b, e] = range(c);
                results[c] = body(b, e);
            } catch (...) {
                errors[c] = std::current_exception();
            }
        });
    }
    for (auto& t : pool) t.join();
    for (auto& e : errors)
        if (e) std::rethrow_exception(e);
    return results;
}

inline std::vector<std::string> split_ws(std::string_view line) {
    std::vector<std::string> out;
    std::istringstream in{std::string(line)};
    std::string tok;
    while (in >> tok) out.push_back(tok);
    return out;
}

} // namespace qca
