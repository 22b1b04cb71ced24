#include <gtest/gtest.h>

#include <cmath>

#include "qca/oracle.hpp"
#include "qca/qca.hpp"
#include "qca/sample.hpp"

using namespace qca;

namespace {

rational q(long p, long d) {
    rational r(p, d);
    r.canonicalize();
    return r;
}

LocalRule xor_rule() { return from_quasigroup(builtin("ledrappier", {2, 1, 1})); }

CylinderMeasure third_bernoulli() { return CylinderMeasure::bernoulli({q(1, 3), q(2, 3)}); }

CylinderMeasure stationary_markov() {
    return CylinderMeasure::markov({q(2, 5), q(3, 5)}, {q(1, 2), q(1, 2), q(1, 3), q(2, 3)});
}

GroupTable c2() { return GroupTable(builtin("cyclic", {2})); }

} // namespace

TEST(Eval, Kinds) {
    EXPECT_EQ(CylinderMeasure::uniform(3).eval({0, 2}), q(1, 9));
    EXPECT_EQ(third_bernoulli().eval({1, 1, 0}), q(4, 27));
    EXPECT_EQ(stationary_markov().eval({1, 0}), q(1, 5));
    const auto orbit = CylinderMeasure::orbit(8, quaternion_ijk());
    EXPECT_EQ(orbit.eval({2}), q(1, 3));
    EXPECT_EQ(orbit.eval({2, 4}), q(1, 3));
    EXPECT_EQ(orbit.eval({2, 6}), q(0, 1));
    EXPECT_EQ(orbit.eval({}), q(1, 1));
    const auto prod = CylinderMeasure::product(CylinderMeasure::uniform(2), orbit);
    EXPECT_EQ(prod.alphabet_size(), 16u);
    EXPECT_EQ(prod.eval({8 + 2, 4}), q(1, 12));
}

TEST(Eval, RejectsBadDistributions) {
    EXPECT_THROW(CylinderMeasure::bernoulli({q(1, 2), q(1, 3)}), error);
    EXPECT_THROW(CylinderMeasure::bernoulli({q(3, 2), q(-1, 2)}), error);
    EXPECT_THROW(CylinderMeasure::markov({q(1, 1), q(0, 1)}, {q(1, 1), q(0, 1), q(1, 2)}), error);
    EXPECT_THROW(CylinderMeasure::orbit(2, {}), error);
    EXPECT_THROW(CylinderMeasure::uniform(2).eval({2}), error);
}

TEST(Eval, ConsistentMarginals) {
    // m(w) = sum_b m(w b) for every kind
    const std::vector<CylinderMeasure> ms = {
        third_bernoulli(), stationary_markov(), CylinderMeasure::orbit(2, {0, 1, 1}),
        pushforward_ca(third_bernoulli(), xor_rule()), pushforward_shift(stationary_markov())};
    for (const auto& m : ms)
        for (std::uint64_t i = 0; i < 8; ++i) {
            const Word w = word_from_index(i, 2, 3);
            Word w0 = w, w1 = w;
            w0.push_back(0);
            w1.push_back(1);
            EXPECT_EQ(m.eval(w), m.eval(w0) + m.eval(w1));
        }
}

TEST(Pushforward, MatchesBruteForce) {
    Rng rng(6);
    for (int i = 0; i < 12; ++i) {
        const std::size_t n = 2 + draw(rng, 3);
        const LocalRule rule = random_bipermutative_rule(n, rng);
        std::vector<rational> weights(n);
        long total = 0;
        std::vector<long> raw(n);
        for (auto& x : raw) total += (x = 1 + static_cast<long>(draw(rng, 5)));
        for (std::size_t s = 0; s < n; ++s) weights[s] = q(raw[s], total);
        const auto base = CylinderMeasure::bernoulli(weights);
        const auto image = pushforward_ca(base, rule);
        for (std::size_t len = 1; len <= 4; ++len)
            for (int k = 0; k < 6; ++k) {
                const Word w = random_word(n, len, rng);
                EXPECT_EQ(image.eval(w), oracle::pushforward(base, rule, w));
            }
    }
}

TEST(Invariance, BernoulliUnderXorDeviates) {
    const LocalRule rule = xor_rule();
    const auto rep = invariance_report(third_bernoulli(), &rule, 3);
    EXPECT_EQ(rep.max_abs_deviation, q(16, 81));
    EXPECT_EQ(rep.worst_word, (Word{1, 1, 1}));
    // independent recomputation of the worst word
    EXPECT_EQ(third_bernoulli().eval({1, 1, 1}) - oracle::pushforward(third_bernoulli(), rule, {1, 1, 1}), q(16, 81));
}

TEST(Invariance, UniformIsPreservedBySurjectiveRules) {
    Rng rng(13);
    for (int i = 0; i < 10; ++i) {
        const LocalRule rule = random_bipermutative_rule(2 + draw(rng, 4), rng);
        const auto rep = invariance_report(CylinderMeasure::uniform(rule.alphabet_size()), &rule, 4);
        EXPECT_EQ(rep.max_abs_deviation, 0);
        EXPECT_TRUE(rep.worst_word.empty());
    }
}

TEST(Invariance, ShiftDeviationOfMarkovStartingAtZero) {
    const auto m = CylinderMeasure::markov({q(1, 1), q(0, 1)}, {q(1, 2), q(1, 2), q(1, 3), q(2, 3)});
    const auto rep = invariance_report(m, nullptr, 1);
    EXPECT_EQ(rep.max_abs_deviation, q(1, 2));
    EXPECT_EQ(rep.worst_word, (Word{0}));
    EXPECT_EQ(invariance_report(stationary_markov(), nullptr, 5).max_abs_deviation, 0);
}

TEST(Invariance, ParallelMatchesSerial) {
    const LocalRule rule = xor_rule();
    const auto a = invariance_report(third_bernoulli(), &rule, 8, 1);
    const auto b = invariance_report(third_bernoulli(), &rule, 8, 4);
    EXPECT_EQ(a.max_abs_deviation, b.max_abs_deviation);
    EXPECT_EQ(a.worst_word, b.worst_word);
}

TEST(Invariance, DepthBound) {
    try {
        invariance_report(CylinderMeasure::uniform(16), nullptr, 6);
        FAIL();
    } catch (const error& e) {
        EXPECT_EQ(e.code(), errc::depth_too_large);
        EXPECT_TRUE(e.is_bound_error());
    }
}

TEST(Entropy, UniformAndBernoulli) {
    for (std::size_t n = 1; n <= 6; ++n) EXPECT_NEAR(block_entropy(CylinderMeasure::uniform(2), n), double(n), 1e-12);
    const double h1 = -(1.0 / 3) * std::log2(1.0 / 3) - (2.0 / 3) * std::log2(2.0 / 3);
    EXPECT_NEAR(block_entropy(third_bernoulli(), 5), 5 * h1, 1e-12);
}

TEST(Entropy, Example11BlocksAreNPlusLogThree) {
    const auto mu = example11(c2());
    for (std::size_t n = 1; n <= 4; ++n) EXPECT_NEAR(block_entropy(mu, n), n + std::log2(3.0), 1e-12);
    const auto inc = entropy_rate_profile(mu, 4);
    ASSERT_EQ(inc.size(), 3u);
    for (double x : inc) EXPECT_NEAR(x, 1.0, 1e-12);
}

TEST(Entropy, MarkovRate) {
    // increments converge at once for a stationary chain: H(X1 | X0)
    const double rate = 0.4 * 1.0 + 0.6 * (-(1.0 / 3) * std::log2(1.0 / 3) - (2.0 / 3) * std::log2(2.0 / 3));
    for (double x : entropy_rate_profile(stationary_markov(), 5)) EXPECT_NEAR(x, rate, 1e-12);
}

TEST(Conditional, StationaryMarkov) {
    EXPECT_EQ(conditional_dist(stationary_markov(), {1, 0}), (std::vector<rational>{q(1, 3), q(2, 3)}));
    EXPECT_EQ(conditional_dist(stationary_markov(), {0}), (std::vector<rational>{q(1, 2), q(1, 2)}));
}

TEST(Conditional, ZeroMass) {
    const auto m = CylinderMeasure::orbit(2, {0});
    EXPECT_THROW(conditional_dist(m, {1}), error);
    EXPECT_THROW(conditional_dist(m, {}), error);
}

TEST(Coset, Example11Passes) {
    const GroupTable c = c2();
    const auto rep = coset_measure_check(example11(c), example11_group(c), example11_coset_subgroup(c), 3);
    EXPECT_TRUE(rep.pass);
    EXPECT_GT(rep.words_checked, 0u);
    EXPECT_EQ(rep.shift_deviation, 0);
}

TEST(Coset, TrivialSubgroupFailsOnUniform) {
    const GroupTable g = c2();
    const auto rep = coset_measure_check(CylinderMeasure::uniform(2), g, {0}, 2);
    EXPECT_FALSE(rep.pass);
    ASSERT_TRUE(rep.witness.has_value());
    EXPECT_EQ(*rep.witness, (Word{0, 0}));
    EXPECT_EQ(rep.witness_dist, (std::vector<rational>{q(1, 2), q(1, 2)}));
    EXPECT_THROW(coset_measure_check(CylinderMeasure::uniform(2), g, {1}, 2), error);
}

TEST(Fibers, UniformHasWeightsOneOverN) {
    const LocalRule rule = from_quasigroup(builtin("D7"));
    const auto rep = fiber_spectrum(CylinderMeasure::uniform(7), rule, 3);
    EXPECT_EQ(rep.rows.size(), 343u);
    EXPECT_EQ(rep.k_estimate, 7u);
    ASSERT_TRUE(rep.eta_constant.has_value());
    EXPECT_EQ(*rep.eta_constant, q(1, 7));
    EXPECT_NEAR(rep.entropy_check, 0.0, 1e-12);
    for (const auto& row : rep.rows) EXPECT_EQ(row.support_count, 7u);
}

TEST(Fibers, Example11IsTwoToOne) {
    const GroupTable c = c2();
    const GroupTable a = example11_group(c);
    const auto rep = fiber_spectrum(example11(c), from_quasigroup(a.quasigroup()), 4);
    EXPECT_EQ(rep.rows.size(), 48u);
    EXPECT_EQ(rep.k_estimate, 2u);
    EXPECT_EQ(rep.eta_constant, std::optional<rational>(q(1, 2)));
    EXPECT_EQ(rep.entropy_check, 0.0);
    EXPECT_EQ(rep.invariance_deviation, 0);
}

TEST(Fibers, MassFloorDropsLightRows) {
    const LocalRule rule = xor_rule();
    const auto all = fiber_spectrum(third_bernoulli(), rule, 3);
    const auto heavy = fiber_spectrum(third_bernoulli(), rule, 3, q(1, 8));
    EXPECT_EQ(all.rows.size(), 8u);
    EXPECT_LT(heavy.rows.size(), all.rows.size());
    for (const auto& row : heavy.rows) EXPECT_GE(row.total_mass, q(1, 8));
}

TEST(Support, Example11IsNotAFullShift) {
    const GroupTable c = c2();
    const auto rep = support_alphabet(example11(c), 3);
    EXPECT_EQ(rep.symbols.size(), 6u);
    EXPECT_FALSE(rep.full_shift_over_support);
    EXPECT_TRUE(support_subquasigroups(rep, example11_group(c).quasigroup()).empty());
}

TEST(Support, FullShiftOnUniform) {
    const auto rep = support_alphabet(CylinderMeasure::uniform(3), 3);
    EXPECT_EQ(rep.symbols, (std::vector<Symbol>{0, 1, 2}));
    EXPECT_TRUE(rep.full_shift_over_support);
    EXPECT_EQ(rep.positive_words, 27u);
}
