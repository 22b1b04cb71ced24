#pragma once

// Exact cylinder measures on one-sided sequence spaces A^N and the finite-depth
// analyses built on them: invariance, block entropy, conditionals on the
// future coordinates, coset checks and fiber spectra.

#include <cmath>
#include <map>
#include <memory>
#include <optional>
#include <vector>

#include "automaton.hpp"
#include "builtin.hpp"
#include "group.hpp"
#include "rational.hpp"

namespace qca {

/// Evaluator for the probabilities of cylinders [w] = {x : x_0..x_{n-1} = w}.
/// Immutable; copies share the underlying description.
class CylinderMeasure {
public:
    enum class kind { uniform, bernoulli, markov, orbit, product, pushforward_ca, pushforward_shift };

    static CylinderMeasure uniform(std::size_t n) {
        if (n == 0) throw error(errc::bad_params, "empty alphabet");
        return make(n, kind::uniform);
    }

    static CylinderMeasure bernoulli(std::vector<rational> weights) {
        check_distribution(weights, "weights");
        auto m = make(weights.size(), kind::bernoulli);
        m.node_->weights = std::move(weights);
        return m;
    }

    static CylinderMeasure markov(std::vector<rational> initial, std::vector<rational> transition) {
        const std::size_t n = initial.size();
        check_distribution(initial, "initial distribution");
        if (transition.size() != n * n) throw error(errc::bad_params, "transition matrix must be N x N");
        for (std::size_t r = 0; r < n; ++r)
            check_distribution(std::vector<rational>(transition.begin() + r * n, transition.begin() + (r + 1) * n),
                               "transition row " + std::to_string(r));
        auto m = make(n, kind::markov);
        m.node_->weights = std::move(initial);
        m.node_->transition = std::move(transition);
        return m;
    }

    /// Uniform measure on the shift orbit of the periodic point w^inf.
    static CylinderMeasure orbit(std::size_t n, Word period_word) {
        if (period_word.empty()) throw error(errc::bad_params, "period word must be nonempty");
        check_word(period_word, n);
        auto m = make(n, kind::orbit);
        m.node_->word = std::move(period_word);
        return m;
    }

    /// Product of two measures; symbol s pairs (s / N_right, s % N_right).
    static CylinderMeasure product(CylinderMeasure left, CylinderMeasure right) {
        auto m = make(left.alphabet_size() * right.alphabet_size(), kind::product);
        m.node_->left = left.node_;
        m.node_->right = right.node_;
        return m;
    }

    /// Image of `base` under a bipermutative RNNCA.
    static CylinderMeasure pushforward_ca(CylinderMeasure base, const LocalRule& rule) {
        if (rule.alphabet_size() != base.alphabet_size())
            throw error(errc::alphabet_mismatch, {rule.alphabet_size(), base.alphabet_size()},
                        "rule and measure alphabets differ");
        auto m = make(base.alphabet_size(), kind::pushforward_ca);
        m.node_->left = base.node_;
        m.node_->rule = std::make_shared<const Qgca>(rule);
        return m;
    }

    /// Image of `base` under the one-sided shift (coordinate 0 dropped).
    static CylinderMeasure pushforward_shift(CylinderMeasure base) {
        auto m = make(base.alphabet_size(), kind::pushforward_shift);
        m.node_->left = base.node_;
        return m;
    }

    std::size_t alphabet_size() const noexcept { return node_->n; }
    kind type() const noexcept { return node_->k; }

    rational eval(const Word& w) const {
        check_word(w, alphabet_size());
        return eval_node(*node_, w);
    }

private:
    struct Node {
        std::size_t n = 0;
        kind k = kind::uniform;
        std::vector<rational> weights, transition;
        Word word;
        std::shared_ptr<const Node> left, right;
        std::shared_ptr<const Qgca> rule;
    };

    explicit CylinderMeasure(std::shared_ptr<Node> node) : node_(std::move(node)) {}

    static CylinderMeasure make(std::size_t n, kind k) {
        auto node = std::make_shared<Node>();
        node->n = n;
        node->k = k;
        return CylinderMeasure(std::move(node));
    }

    static void check_distribution(const std::vector<rational>& d, const std::string& what) {
        if (d.empty()) throw error(errc::bad_params, what + " is empty");
        rational sum = 0;
        for (const auto& x : d) {
            if (x < 0) throw error(errc::bad_params, what + " has a negative entry");
            sum += x;
        }
        if (sum != 1) throw error(errc::bad_params, what + " sums to " + to_string(sum) + ", not 1");
    }

    static rational eval_node(const Node& nd, const Word& w) {
        switch (nd.k) {
        case kind::uniform: {
            mpz_class den;
            mpz_ui_pow_ui(den.get_mpz_t(), nd.n, w.size());
            return rational(mpz_class(1), den);
        }
        case kind::bernoulli: {
            rational r = 1;
            for (Symbol s : w) {
                r *= nd.weights[s];
                if (r == 0) break;
            }
            return r;
        }
        case kind::markov: {
            if (w.empty()) return 1;
            rational r = nd.weights[w[0]];
            for (std::size_t i = 1; i < w.size() && r != 0; ++i) r *= nd.transition[w[i - 1] * nd.n + w[i]];
            return r;
        }
        case kind::orbit: {
            const std::size_t p = nd.word.size();
            std::size_t hits = 0;
            for (std::size_t s = 0; s < p; ++s) {
                bool ok = true;
                for (std::size_t i = 0; i < w.size() && ok; ++i) ok = w[i] == nd.word[(s + i) % p];
                hits += ok;
            }
            rational r(static_cast<unsigned long>(hits), static_cast<unsigned long>(p));
            r.canonicalize();
            return r;
        }
        case kind::product: {
            const std::size_t nr = nd.right->n;
            Word l(w.size()), r(w.size());
            for (std::size_t i = 0; i < w.size(); ++i) {
                l[i] = static_cast<Symbol>(w[i] / nr);
                r[i] = static_cast<Symbol>(w[i] % nr);
            }
            rational a = eval_node(*nd.left, l);
            if (a == 0) return a;
            return a * eval_node(*nd.right, r);
        }
        case kind::pushforward_ca: {
            rational sum = 0;
            Word pre;
            for (Symbol b = 0; b < nd.n; ++b) {
                nd.rule->preimage(w, b, pre);
                sum += eval_node(*nd.left, pre);
            }
            return sum;
        }
        case kind::pushforward_shift: {
            rational sum = 0;
            Word ext(w.size() + 1);
            std::copy(w.begin(), w.end(), ext.begin() + 1);
            for (Symbol b = 0; b < nd.n; ++b) {
                ext[0] = b;
                sum += eval_node(*nd.left, ext);
            }
            return sum;
        }
        }
        return 0;
    }

    std::shared_ptr<Node> node_; // never modified once a factory returns
};

inline rational eval_cylinder(const CylinderMeasure& m, const Word& w) { return m.eval(w); }

inline CylinderMeasure pushforward_ca(const CylinderMeasure& m, const LocalRule& rule) {
    return CylinderMeasure::pushforward_ca(m, rule);
}

inline CylinderMeasure pushforward_shift(const CylinderMeasure& m) { return CylinderMeasure::pushforward_shift(m); }

namespace detail {

inline void check_depth(std::size_t alphabet, std::size_t depth) {
    if (checked_pow(alphabet, depth) > enumeration_bound)
        throw error(errc::depth_too_large, {alphabet, depth}, "N^depth exceeds 2^20");
}

// Depth-first walk over the words of length `depth` in lexicographic order.
// `visit(acc, w)` is called on every prefix of length 1..depth; returning
// false skips the extensions of w. Top-level symbols are split into chunks
// that may run in parallel; accumulators come back in symbol order.
template <class Acc, class Visit>
std::vector<Acc> walk_words(std::size_t alphabet, std::size_t depth, unsigned jobs, Visit visit) {
    if (depth == 0) {
        std::vector<Acc> out(1);
        visit(out[0], Word{});
        return out;
    }
    return parallel_chunks<Acc>(
        alphabet, jobs,
        [&](std::uint64_t begin, std::uint64_t end) {
            Acc acc{};
            Word w;
            w.reserve(depth);
            auto rec = [&](auto&& self) -> void {
                for (Symbol b = 0; b < alphabet; ++b) {
                    w.push_back(b);
                    if (visit(acc, w) && w.size() < depth) self(self);
                    w.pop_back();
                }
            };
            for (std::uint64_t b = begin; b < end; ++b) {
                w.assign(1, static_cast<Symbol>(b));
                if (visit(acc, w) && depth > 1) rec(rec);
            }
            return acc;
        },
        2);
}

} // namespace detail

struct InvarianceReport {
    std::size_t depth = 0;
    rational max_abs_deviation = 0;
    /// Lexicographically first word attaining the maximum (empty if none).
    Word worst_word;
};

namespace detail {

inline InvarianceReport compare_measures(const CylinderMeasure& image, const CylinderMeasure& m, std::size_t depth,
                                         unsigned jobs) {
    if (image.alphabet_size() != m.alphabet_size())
        throw error(errc::alphabet_mismatch, "measures on different alphabets");
    check_depth(m.alphabet_size(), depth);
    // a word where both measures vanish has only such extensions
    auto parts = walk_words<InvarianceReport>(m.alphabet_size(), depth, jobs, [&](InvarianceReport& acc, const Word& w) {
        const rational a = image.eval(w), b = m.eval(w);
        if (w.size() == depth) {
            rational d = abs(a - b);
            if (d > acc.max_abs_deviation) {
                acc.max_abs_deviation = d;
                acc.worst_word = w;
            }
        }
        return a != 0 || b != 0;
    });
    InvarianceReport out;
    out.depth = depth;
    for (auto& p : parts)
        if (p.max_abs_deviation > out.max_abs_deviation) out = std::move(p);
    out.depth = depth;
    return out;
}

} // namespace detail

/// Exact max over words of length `depth` of |m(T^-1 [w]) - m([w])|, for T
/// the shift (rule == nullptr) or the given CA.
inline InvarianceReport invariance_report(const CylinderMeasure& m, const LocalRule* rule, std::size_t depth,
                                          unsigned jobs = 1) {
    const CylinderMeasure image = rule ? pushforward_ca(m, *rule) : pushforward_shift(m);
    return detail::compare_measures(image, m, depth, jobs);
}

/// H_n = -sum_{|w|=n} m(w) log2 m(w). Equal probabilities are grouped before
/// summing so that exact structure survives the float conversion.
inline double block_entropy(const CylinderMeasure& m, std::size_t depth, unsigned jobs = 1) {
    detail::check_depth(m.alphabet_size(), depth);
    using Counts = std::map<rational, std::uint64_t>;
    auto parts = detail::walk_words<Counts>(m.alphabet_size(), depth, jobs, [&](Counts& acc, const Word& w) {
        const rational p = m.eval(w);
        if (p == 0) return false;
        if (w.size() == depth) ++acc[p];
        return true;
    });
    Counts all;
    for (auto& p : parts)
        for (auto& [k, v] : p) all[k] += v;
    if (depth == 0) return 0.0;
    long double h = 0;
    for (const auto& [p, count] : all)
        h -= static_cast<long double>(count) * p.get_d() * static_cast<long double>(log2_of(p));
    return static_cast<double>(h);
}

/// H_{k+1} - H_k for k = 1..n_max-1.
inline std::vector<double> entropy_rate_profile(const CylinderMeasure& m, std::size_t n_max, unsigned jobs = 1) {
    detail::check_depth(m.alphabet_size(), n_max);
    std::vector<double> h;
    for (std::size_t k = 1; k <= n_max; ++k) h.push_back(block_entropy(m, k, jobs));
    std::vector<double> out;
    for (std::size_t k = 1; k < h.size(); ++k) out.push_back(h[k] - h[k - 1]);
    return out;
}

/// Distribution of x_0 given x_1..x_n = a: entry b is m(b a) / sum_c m(c a).
inline std::vector<rational> conditional_dist(const CylinderMeasure& m, const Word& a) {
    if (a.empty()) throw error(errc::word_too_short, {0}, "conditioning word must be nonempty");
    check_word(a, m.alphabet_size());
    const std::size_t n = m.alphabet_size();
    std::vector<rational> out(n);
    rational total = 0;
    Word ext(a.size() + 1);
    std::copy(a.begin(), a.end(), ext.begin() + 1);
    for (Symbol b = 0; b < n; ++b) {
        ext[0] = b;
        out[b] = m.eval(ext);
        total += out[b];
    }
    if (total == 0) throw error(errc::zero_mass_condition, "conditioning word has zero mass");
    for (auto& x : out) x /= total;
    return out;
}

struct CosetCheckReport {
    std::size_t depth = 0;
    bool pass = true;
    std::uint64_t words_checked = 0;
    /// Shift-invariance deviation at the same depth.
    rational shift_deviation = 0;
    /// First failing conditioning word and its conditional distribution.
    std::optional<Word> witness;
    std::vector<rational> witness_dist;
};

/// For every a of length `depth` whose conditioning mass is at least
/// `mass_floor` (and positive), checks that the conditional distribution of
/// x_0 is uniform on a right coset C x.
inline CosetCheckReport coset_measure_check(const CylinderMeasure& m, const GroupTable& g,
                                            const std::vector<Symbol>& c, std::size_t depth,
                                            const rational& mass_floor = 0, unsigned jobs = 1) {
    if (m.alphabet_size() != g.order())
        throw error(errc::alphabet_mismatch, {m.alphabet_size(), g.order()}, "measure and group alphabets differ");
    if (!is_subgroup(g, c)) throw error(errc::not_a_subgroup, "C is not a subgroup");
    if (depth == 0) throw error(errc::word_too_short, {0}, "coset check needs depth >= 1");
    detail::check_depth(m.alphabet_size(), depth);
    const std::size_t n = g.order();
    const rational share(1, static_cast<unsigned long>(c.size()));
    const CylinderMeasure tail = pushforward_shift(m);

    CosetCheckReport out;
    out.depth = depth;
    out.shift_deviation = detail::compare_measures(tail, m, depth, jobs).max_abs_deviation;
    auto parts = detail::walk_words<CosetCheckReport>(n, depth, jobs, [&](CosetCheckReport& acc, const Word& a) {
        const rational mass = tail.eval(a);
        if (mass == 0) return false;
        if (a.size() < depth || mass < mass_floor || acc.witness) return true;
        ++acc.words_checked;
        auto dist = conditional_dist(m, a);
        std::vector<char> want(n, 0);
        Symbol x = 0;
        while (dist[x] == 0) ++x;
        for (Symbol s : c) want[g(s, x)] = 1;
        bool ok = true;
        for (Symbol b = 0; b < n && ok; ++b) ok = want[b] ? dist[b] == share : dist[b] == 0;
        if (!ok) {
            acc.pass = false;
            acc.witness = a;
            acc.witness_dist = std::move(dist);
        }
        return true;
    });
    for (auto& p : parts) {
        out.words_checked += p.words_checked;
        if (!p.pass && out.pass) {
            out.pass = false;
            out.witness = std::move(p.witness);
            out.witness_dist = std::move(p.witness_dist);
        }
    }
    return out;
}

struct FiberRow {
    Word word;
    rational total_mass;
    std::size_t support_count = 0;
    std::vector<rational> weights;
};

struct FiberReport {
    std::size_t depth = 0;
    std::vector<FiberRow> rows;
    std::size_t k_estimate = 0;
    /// Common value of every positive weight, if there is one.
    std::optional<rational> eta_constant;
    /// |log2 K - (H_{n+1}(m) - H_n(Phi m))|; the bracket is the conditional
    /// entropy of the fiber weights, which is H_{n+1} - H_n when m is
    /// Phi-invariant.
    double entropy_check = 0;
    /// Phi-invariance deviation of m at the same depth.
    rational invariance_deviation = 0;
};

/// Fiber weights of every image word of length `depth` with positive mass at
/// least `mass_floor`.
inline FiberReport fiber_spectrum(const CylinderMeasure& m, const LocalRule& rule, std::size_t depth,
                                  const rational& mass_floor = 0, unsigned jobs = 1) {
    const Qgca ca(rule);
    if (ca.size() != m.alphabet_size())
        throw error(errc::alphabet_mismatch, {ca.size(), m.alphabet_size()}, "rule and measure alphabets differ");
    detail::check_depth(m.alphabet_size(), depth);
    const std::size_t n = ca.size();
    const CylinderMeasure image = pushforward_ca(m, rule);

    FiberReport out;
    out.depth = depth;
    out.invariance_deviation = detail::compare_measures(image, m, depth, jobs).max_abs_deviation;

    // rows with the same positive weights share one entropy term, which keeps
    // the weighted sum exact when the weights repeat
    using WeightClasses = std::map<std::vector<rational>, rational>;
    struct Acc {
        std::vector<FiberRow> rows;
        WeightClasses classes;
    };
    auto parts = detail::walk_words<Acc>(n, depth, jobs, [&](Acc& acc, const Word& w) {
        const rational mass = image.eval(w);
        if (mass == 0) return false;
        if (w.size() < depth) return true;
        FiberRow row{w, 0, 0, std::vector<rational>(n)};
        Word pre;
        for (Symbol b = 0; b < n; ++b) {
            ca.preimage(w, b, pre);
            row.weights[b] = m.eval(pre);
            row.total_mass += row.weights[b];
        }
        std::vector<rational> positive;
        for (auto& x : row.weights) {
            x /= row.total_mass;
            if (x > 0) positive.push_back(x);
        }
        row.support_count = positive.size();
        std::sort(positive.begin(), positive.end());
        acc.classes[positive] += row.total_mass;
        if (row.total_mass >= mass_floor) acc.rows.push_back(std::move(row));
        return true;
    });
    WeightClasses classes;
    for (auto& p : parts) {
        for (auto& [ws, mass] : p.classes) classes[ws] += mass;
        for (auto& r : p.rows) out.rows.push_back(std::move(r));
    }
    long double cond = 0;
    for (const auto& [ws, mass] : classes) {
        long double h = 0;
        for (const auto& x : ws) h -= x.get_d() * static_cast<long double>(log2_of(x));
        cond += mass.get_d() * h;
    }
    std::vector<std::size_t> freq(n + 1, 0);
    for (const auto& r : out.rows) ++freq[r.support_count];
    for (std::size_t k = 1; k <= n; ++k)
        if (freq[k] > freq[out.k_estimate]) out.k_estimate = k;
    bool constant = !out.rows.empty();
    for (const auto& r : out.rows)
        for (const auto& x : r.weights) {
            if (x == 0) continue;
            if (!out.eta_constant) out.eta_constant = x;
            else if (*out.eta_constant != x) constant = false;
        }
    if (!constant) out.eta_constant.reset();
    if (out.k_estimate > 0)
        out.entropy_check = static_cast<double>(
            std::fabs(std::log2(static_cast<long double>(out.k_estimate)) - cond));
    return out;
}

struct SupportReport {
    std::vector<Symbol> symbols;
    std::size_t depth = 0;
    /// Words of length `depth` over `symbols` with positive mass.
    std::uint64_t positive_words = 0;
    bool full_shift_over_support = false;
};

inline SupportReport support_alphabet(const CylinderMeasure& m, std::size_t depth, unsigned jobs = 1) {
    if (depth < 2) throw error(errc::bad_params, "support scan needs depth >= 2");
    SupportReport out;
    out.depth = depth;
    for (Symbol b = 0; b < m.alphabet_size(); ++b)
        if (m.eval(Word{b}) > 0) out.symbols.push_back(b);
    const std::size_t k = out.symbols.size();
    detail::check_depth(k, depth);
    auto parts = detail::walk_words<std::uint64_t>(k, depth, jobs, [&](std::uint64_t& acc, const Word& idx) {
        Word w(idx.size());
        for (std::size_t i = 0; i < idx.size(); ++i) w[i] = out.symbols[idx[i]];
        if (m.eval(w) == 0) return false;
        if (w.size() == depth) ++acc;
        return true;
    });
    for (auto c : parts) out.positive_words += c;
    out.full_shift_over_support = out.positive_words == checked_pow(k, depth);
    return out;
}

/// Subquasigroups B (trivial ones included) with B^N equal to the support
/// at the given depth; empty when the support is not a full shift.
inline std::vector<SubquasigroupSet> support_subquasigroups(const SupportReport& s, const Quasigroup& q) {
    std::vector<SubquasigroupSet> out;
    if (!s.full_shift_over_support) return out;
    for (auto& b : subquasigroups(q, true))
        if (b.members == s.symbols) out.push_back(b);
    return out;
}

/// Index of the period word [i, j, k] in the quaternion alphabet.
inline Word quaternion_ijk() { return {2, 4, 6}; }

/// Uniform Bernoulli on C times the orbit measure of [i,j,k] on the
/// quaternion group, on the product alphabet C x Q (symbol c * 8 + q).
inline CylinderMeasure example11(const GroupTable& c) {
    return CylinderMeasure::product(CylinderMeasure::uniform(c.order()), CylinderMeasure::orbit(8, quaternion_ijk()));
}

/// The group C x Q carrying the measure of `example11`.
inline GroupTable example11_group(const GroupTable& c) {
    return GroupTable(direct_product(c.quasigroup(), builtin("quaternion")));
}

/// The subgroup C x {1} of C x Q.
inline std::vector<Symbol> example11_coset_subgroup(const GroupTable& c) {
    std::vector<Symbol> out;
    for (Symbol x = 0; x < c.order(); ++x) out.push_back(x * 8);
    return out;
}

} // namespace qca
