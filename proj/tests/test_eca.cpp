#include <gtest/gtest.h>

#include "qca/oracle.hpp"
#include "qca/qca.hpp"
#include "qca/sample.hpp"

using namespace qca;

namespace {

MatrixFp f7() { return MatrixFp(7, 4, {0, 0, 0, 1, 1, 0, 0, 1, 0, 1, 0, 1, 0, 0, 1, 1}); }

GroupTable cyclic(long n) { return GroupTable(builtin("cyclic", {n})); }

LocalRule table_rule(std::size_t n, auto f) {
    std::vector<Symbol> t(n * n);
    for (Symbol a = 0; a < n; ++a)
        for (Symbol b = 0; b < n; ++b) t[a * n + b] = static_cast<Symbol>(f(a, b) % n);
    return LocalRule(n, 0, 1, t);
}

} // namespace

TEST(Decompose, LedrappierSplitsIntoScalings) {
    const auto d = decompose_affine(from_quasigroup(builtin("ledrappier", {5, 2, 3})), cyclic(5));
    EXPECT_EQ(d.phi0, (std::vector<Symbol>{0, 2, 4, 1, 3}));
    EXPECT_EQ(d.phi1, (std::vector<Symbol>{0, 3, 1, 4, 2}));
    EXPECT_TRUE(d.phi0_automorphism);
    EXPECT_TRUE(d.phi1_automorphism);
    EXPECT_TRUE(d.bipermutative);
}

TEST(Decompose, NotAffineWitness) {
    const LocalRule rule = table_rule(4, [](Symbol a, Symbol b) { return a + b + a * b; });
    try {
        decompose_affine(rule, cyclic(4));
        FAIL();
    } catch (const error& e) {
        EXPECT_EQ(e.code(), errc::not_affine);
        EXPECT_EQ(e.detail(), (std::vector<std::size_t>{1, 1}));
    }
}

TEST(Decompose, NotEndomorphismWitness) {
    // phi(a, b) = a^2 + b on Z/4: affine shape, but squaring is not additive
    const LocalRule rule = table_rule(4, [](Symbol a, Symbol b) { return a * a + b; });
    try {
        decompose_affine(rule, cyclic(4));
        FAIL();
    } catch (const error& e) {
        EXPECT_EQ(e.code(), errc::not_endomorphism);
        EXPECT_EQ(e.detail(), (std::vector<std::size_t>{0, 1, 1}));
    }
}

TEST(Decompose, NonAbelianGroupRejected) {
    const GroupTable q(builtin("quaternion"));
    EXPECT_THROW(decompose_affine(from_quasigroup(q.quasigroup()), q), error);
}

TEST(Decompose, LinearRuleOnF7Example) {
    const RuleFile rf = linear_rule(f7());
    const GroupTable g(builtin_expr("power(cyclic(7),4)"));
    const auto d = decompose_affine(rf.rule, g);
    const auto ea = elementary_abelian(g);
    ASSERT_TRUE(ea.has_value());
    EXPECT_EQ(matrix_of(*ea, d.phi0), std::optional<MatrixFp>(f7()));
    EXPECT_EQ(matrix_of(*ea, d.phi1), std::optional<MatrixFp>(MatrixFp::identity(7, 4)));
}

TEST(Endomorphism, GeneratorSearchMatchesFullScan) {
    Rng rng(12);
    const std::vector<GroupTable> groups = {cyclic(4), GroupTable(builtin("quaternion")), cyclic(5),
                                            GroupTable(builtin_expr("product(cyclic(2),cyclic(2))"))};
    for (const auto& g : groups) {
        const LocalRule mult = from_quasigroup(g.quasigroup());
        EXPECT_EQ(endomorphism_witness(mult, g).has_value(), oracle::endomorphism_witness(mult, g).has_value());
        for (int i = 0; i < 20; ++i) {
            const LocalRule r = random_bipermutative_rule(g.order(), rng);
            EXPECT_EQ(endomorphism_witness(r, g).has_value(), oracle::endomorphism_witness(r, g).has_value());
        }
    }
    // multiplication is a homomorphism exactly for abelian groups
    EXPECT_FALSE(endomorphism_witness(from_quasigroup(cyclic(6).quasigroup()), cyclic(6)).has_value());
    const GroupTable q(builtin("quaternion"));
    EXPECT_TRUE(endomorphism_witness(from_quasigroup(q.quasigroup()), q).has_value());
}

TEST(Kernel, Z3DifferenceHasIdentityRho) {
    const auto k = kernel(from_quasigroup(builtin("ledrappier", {3, 2, 1})), cyclic(3));
    EXPECT_EQ(k.rho, identity_permutation(3));
    EXPECT_EQ(k.periods, (std::vector<std::size_t>{1, 1, 1}));
}

TEST(Kernel, LedrappierRhoIsMinusRatio) {
    // phi(a, b) = a + 2b on Z/5: phi(k, k') = 0 gives k' = 2k
    const auto k = kernel(from_quasigroup(builtin("ledrappier", {5, 1, 2})), cyclic(5));
    EXPECT_EQ(k.rho, (std::vector<Symbol>{0, 2, 4, 1, 3}));
    EXPECT_EQ(k.zeta[1], (Word{1, 2, 4, 3}));
    const auto o = rho_orbits(k.rho, cyclic(5));
    EXPECT_TRUE(o.single_orbit);
    EXPECT_EQ(o.orbits, (std::vector<std::vector<Symbol>>{{1, 2, 4, 3}}));
}

TEST(Kernel, RejectsNonEndomorphicRules) {
    EXPECT_THROW(kernel(from_quasigroup(builtin("D7")), GroupTable(builtin("cyclic", {7}))), error);
}

TEST(ElementaryAbelian, CoordinatesFollowTupleOrder) {
    const GroupTable g(builtin_expr("power(cyclic(3),2)"));
    const auto ea = elementary_abelian(g);
    ASSERT_TRUE(ea.has_value());
    EXPECT_EQ(ea->p, 3u);
    EXPECT_EQ(ea->dim(), 2u);
    for (Symbol x = 0; x < 9; ++x) EXPECT_EQ(ea->coords[x], (VectorFp{x / 3, x % 3}));
    EXPECT_FALSE(elementary_abelian(cyclic(4)).has_value());
    EXPECT_FALSE(elementary_abelian(GroupTable(builtin("quaternion"))).has_value());
}

TEST(ElementaryAbelian, NonlinearPermutationHasNoMatrix) {
    const GroupTable g(builtin_expr("power(cyclic(2),2)"));
    const auto ea = elementary_abelian(g);
    ASSERT_TRUE(ea.has_value());
    EXPECT_FALSE(matrix_of(*ea, {1, 0, 2, 3}).has_value());
    EXPECT_TRUE(matrix_of(*ea, {0, 2, 1, 3}).has_value());
}

TEST(Audit, OrbitLemmaDisagreesForZ3) {
    const GroupTable g = cyclic(3);
    const auto a = lemma_audit(g, from_quasigroup(builtin("ledrappier", {3, 2, 1})));
    EXPECT_EQ(a.orbit.orbits.orbits, (std::vector<std::vector<Symbol>>{{1}, {2}}));
    EXPECT_FALSE(a.orbit.orbits.single_orbit);
    EXPECT_TRUE(a.orbit.no_invariant_subgroup);
    EXPECT_FALSE(a.orbit.agree);
}

TEST(Audit, OrbitLemmaAgreesForXor) {
    const auto a = lemma_audit(cyclic(2), from_quasigroup(builtin("ledrappier", {2, 1, 1})));
    EXPECT_TRUE(a.orbit.orbits.single_orbit);
    EXPECT_TRUE(a.orbit.agree);
}

TEST(Audit, SimpleLemmaOnIdentity) {
    const auto a = simple_lemma_audit(MatrixFp::identity(2, 2));
    EXPECT_FALSE(a.form.simple);
    EXPECT_EQ(a.invariant.size(), 3u);
    EXPECT_EQ(a.roots, (std::vector<Residue>{1}));
    EXPECT_TRUE(a.agree);
}

TEST(Audit, F7Example) {
    const GroupTable g(builtin_expr("power(cyclic(7),4)"));
    const auto a = lemma_audit(g, linear_rule(f7()).rule);
    ASSERT_TRUE(a.rho_matrix.has_value());
    EXPECT_EQ(*a.rho_matrix, f7().negated());
    EXPECT_EQ(a.orbit.orbits.orbits.size(), 9u);
    EXPECT_FALSE(a.orbit.orbits.single_orbit);
    ASSERT_TRUE(a.orbit.witness.has_value());
    EXPECT_EQ(a.orbit.witness->size(), 7u);
    EXPECT_TRUE(a.orbit.agree);
    ASSERT_TRUE(a.simple.has_value());
    EXPECT_TRUE(a.simple->form.simple);
    EXPECT_EQ(a.simple->roots, (std::vector<Residue>{2}));
    EXPECT_EQ(a.simple->invariant.size(), 2u);
    EXPECT_FALSE(a.simple->agree);
}
