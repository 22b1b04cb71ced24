#include <gtest/gtest.h>

#include "qca/oracle.hpp"
#include "qca/qca.hpp"
#include "qca/sample.hpp"

using namespace qca;

namespace {

std::vector<std::string> names_of(const Alphabet& a, const std::vector<SubquasigroupSet>& subs) {
    std::vector<std::string> out;
    for (const auto& s : subs) out.push_back(a.format_word(s.members));
    return out;
}

errc code_of(const std::vector<Symbol>& t, std::size_t n) {
    try {
        validate_latin(t, Alphabet::numbered(n));
    } catch (const error& e) {
        return e.code();
    }
    ADD_FAILURE() << "table accepted";
    return errc::parse;
}

} // namespace

TEST(Latin, D7IsLatinOfOrderSeven) {
    const Quasigroup q = builtin("D7");
    EXPECT_EQ(q.order(), 7u);
    EXPECT_EQ(q.alphabet().name(0), "a1");
}

TEST(Latin, RejectsEachKindOfDefect) {
    EXPECT_EQ(code_of({0, 1, 1, 0, 0, 0, 0, 0, 0}, 3), errc::duplicate_in_row);
    EXPECT_EQ(code_of({0, 1, 0, 1}, 2), errc::duplicate_in_column);
    EXPECT_EQ(code_of({0, 2, 1, 0}, 2), errc::bad_entry);
}

TEST(Latin, DuplicateReportsPositions) {
    try {
        validate_latin(std::vector<Symbol>{0, 1, 2, 1, 2, 0, 2, 2, 1}, Alphabet::numbered(3));
        FAIL();
    } catch (const error& e) {
        EXPECT_EQ(e.code(), errc::duplicate_in_row);
        EXPECT_EQ(e.detail(), (std::vector<std::size_t>{2, 0, 1}));
    }
}

TEST(Dual, SolvesTheRightEquation) {
    const Quasigroup q = builtin("D7");
    const Quasigroup d = dual(q);
    for (Symbol a = 0; a < 7; ++a)
        for (Symbol b = 0; b < 7; ++b) EXPECT_EQ(q(a, d(a, b)), b);
}

TEST(Dual, IsAnInvolution) {
    Rng rng(3);
    for (int i = 0; i < 20; ++i) {
        const Quasigroup q = random_quasigroup(1 + draw(rng, 8), rng);
        EXPECT_EQ(dual(dual(q)), q);
    }
}

TEST(Subquasigroups, D7HasTheTwoPairs) {
    const Quasigroup q = builtin("D7");
    const auto subs = subquasigroups(q);
    EXPECT_EQ(names_of(q.alphabet(), subs), (std::vector<std::string>{"a1 a2", "b1 b2"}));
    EXPECT_EQ(subs, oracle::subquasigroups(q));
}

TEST(Subquasigroups, IncludingTrivialAddsSingletonsAndWhole) {
    const Quasigroup q = builtin("D7");
    const auto all = subquasigroups(q, true);
    EXPECT_EQ(all, oracle::subquasigroups(q, true));
    EXPECT_TRUE(std::find(all.begin(), all.end(), SubquasigroupSet{{0, 1, 2, 3, 4, 5, 6}}) != all.end());
}

TEST(Subquasigroups, QuaternionSubgroupsAreClosed) {
    const Quasigroup q = builtin("quaternion");
    const auto subs = subquasigroups(q);
    EXPECT_EQ(subs, oracle::subquasigroups(q));
    // {1,-1}, <i>, <j>, <k>
    EXPECT_EQ(subs.size(), 4u);
}

TEST(Subquasigroups, AgreeWithSubsetScanOnRandomSquares) {
    Rng rng(11);
    for (int i = 0; i < 60; ++i) {
        const Quasigroup q = random_quasigroup(1 + draw(rng, 9), rng);
        EXPECT_EQ(subquasigroups(q, true), oracle::subquasigroups(q, true));
    }
}

TEST(Associativity, D7WitnessIsSmallest) {
    const Quasigroup q = builtin("D7");
    const auto w = associativity_witness(q);
    ASSERT_TRUE(w.has_value());
    EXPECT_EQ(q.alphabet().format_word({(*w)[0], (*w)[1], (*w)[2]}), "a1 a1 b1");
    EXPECT_NE(q(q((*w)[0], (*w)[1]), (*w)[2]), q((*w)[0], q((*w)[1], (*w)[2])));
}

TEST(Associativity, GroupsPassAndFastAgrees) {
    for (const char* e : {"quaternion", "nonabelian21"}) EXPECT_TRUE(is_associative(builtin(e)));
    Rng rng(5);
    for (int i = 0; i < 40; ++i) {
        const Quasigroup q = random_quasigroup(2 + draw(rng, 6), rng);
        EXPECT_EQ(associativity_witness(q).has_value(), associativity_witness_fast(q).has_value());
    }
}

TEST(Builtins, ExpressionsBuildProducts) {
    const Quasigroup q = builtin_expr("product(cyclic(2),quaternion)");
    EXPECT_EQ(q.order(), 16u);
    EXPECT_EQ(q.alphabet().name(8), "(1,1)");
    EXPECT_THROW(builtin("ledrappier", {4, 1, 1}), error);
    EXPECT_THROW(builtin("nosuch"), error);
}

TEST(Groups, SubgroupOrders) {
    auto orders = [](const char* name) {
        std::vector<std::size_t> out;
        for (const auto& s : subgroups(GroupTable(builtin(name)))) out.push_back(s.size());
        std::sort(out.begin(), out.end());
        return out;
    };
    EXPECT_EQ(orders("quaternion"), (std::vector<std::size_t>{1, 2, 4, 4, 4, 8}));
    std::vector<std::size_t> g21{1, 3, 3, 3, 3, 3, 3, 3, 7, 21};
    EXPECT_EQ(orders("nonabelian21"), g21);
}

TEST(Groups, HMax) {
    EXPECT_NEAR(h_max(GroupTable(builtin("nonabelian21"))), std::log2(7.0), 1e-12);
    EXPECT_NEAR(h_max(GroupTable(builtin("quaternion"))), 2.0, 1e-12);
    for (long p : {2, 3, 5, 7, 11}) EXPECT_EQ(h_max(GroupTable(builtin("cyclic", {p}))), 0.0);
}

TEST(Groups, RejectsNonGroups) {
    EXPECT_THROW(GroupTable(builtin("D7")), error);
    EXPECT_THROW(GroupTable(builtin("cyclic", {4}), Symbol{1}), error);
}

TEST(Groups, SwapInvariantSubgroupsOfKleinFour) {
    const GroupTable g(builtin_expr("product(cyclic(2),cyclic(2))"));
    // swap of coordinates: (0,1) <-> (1,0)
    const std::vector<Symbol> swap{0, 2, 1, 3};
    const auto subs = invariant_subgroups(g, swap);
    EXPECT_EQ(subs, (std::vector<std::vector<Symbol>>{{0}, {0, 1, 2, 3}, {0, 3}}));
    EXPECT_EQ(subs, oracle::invariant_subgroups(g, swap));
}

TEST(Groups, InvariantSubgroupsAgreeWithSubsetScan) {
    const GroupTable g(builtin("quaternion"));
    // conjugation by i: j -> -j, k -> -k
    std::vector<Symbol> conj(8);
    for (Symbol x = 0; x < 8; ++x) conj[x] = g(g(2, x), g.inverse(2));
    EXPECT_EQ(invariant_subgroups(g, conj), oracle::invariant_subgroups(g, conj));
}
