#include <gtest/gtest.h>

#include "qca/oracle.hpp"
#include "qca/qca.hpp"
#include "qca/sample.hpp"

using namespace qca;

namespace {

MatrixFp f7() { return MatrixFp(7, 4, {0, 0, 0, 1, 1, 0, 0, 1, 0, 1, 0, 1, 0, 0, 1, 1}); }

PolyFp poly(Residue p, std::vector<Residue> c) { return PolyFp(p, std::move(c)); }

MatrixFp random_matrix(Residue p, std::size_t n, Rng& rng) {
    std::vector<Residue> e(n * n);
    for (auto& v : e) v = static_cast<Residue>(draw(rng, p));
    return MatrixFp(p, n, e);
}

// Block diagonal sum, used to build matrices with a known canonical form.
MatrixFp block_sum(const std::vector<MatrixFp>& parts) {
    std::size_t n = 0;
    for (const auto& m : parts) n += m.dim();
    MatrixFp out = MatrixFp::zero(parts.front().modulus(), n);
    std::size_t off = 0;
    for (const auto& m : parts) {
        for (std::size_t i = 0; i < m.dim(); ++i)
            for (std::size_t j = 0; j < m.dim(); ++j) out(off + i, off + j) = m(i, j);
        off += m.dim();
    }
    return out;
}

PolyFp product_of(const std::vector<Factor>& fs, Residue p) {
    PolyFp acc = PolyFp::constant(p, 1);
    for (const auto& f : fs) acc = acc * power(f.poly, f.multiplicity);
    return acc;
}

} // namespace

TEST(Poly, Arithmetic) {
    const PolyFp a = poly(5, {1, 2, 3});
    const PolyFp b = poly(5, {4, 1});
    auto [qt, r] = divmod(a, b);
    EXPECT_EQ(qt * b + r, a);
    EXPECT_LT(r.degree(), b.degree());
    EXPECT_EQ((a - a).degree(), -1);
    EXPECT_EQ(poly(5, {0, 0, 0}).to_string(), "0");
    EXPECT_EQ(a.to_string(), "3x^2 + 2x + 1");
    EXPECT_EQ(a.monic().lead(), 1u);
    EXPECT_EQ(a.derivative(), poly(5, {2, 1}));
    EXPECT_EQ(a.eval(2), (1 + 4 + 12) % 5);
}

TEST(Poly, GcdAndLcm) {
    const PolyFp f = PolyFp::linear(7, 1) * PolyFp::linear(7, 2);
    const PolyFp g = PolyFp::linear(7, 2) * PolyFp::linear(7, 3);
    EXPECT_EQ(gcd(f, g), PolyFp::linear(7, 2));
    EXPECT_EQ(lcm(f, g), PolyFp::linear(7, 1) * PolyFp::linear(7, 2) * PolyFp::linear(7, 3));
}

TEST(Poly, FactorKnown) {
    const PolyFp c = poly(7, {6, 1, 6, 1, 1}); // x^4 + x^3 + 6x^2 + x + 6
    const auto fs = factor(c);
    ASSERT_EQ(fs.size(), 2u);
    EXPECT_EQ(fs[0].poly.to_string(), "x + 5");
    EXPECT_EQ(fs[1].poly.to_string(), "x^3 + 3x^2 + 5x + 4");
    EXPECT_EQ(roots(c), (std::vector<Residue>{2}));
    const PolyFp rep = power(PolyFp::linear(3, 1), 3) * poly(3, {1, 0, 1});
    const auto fr = factor(rep);
    ASSERT_EQ(fr.size(), 2u);
    EXPECT_EQ(fr[0].multiplicity, 3u);
    EXPECT_EQ(fr[1].poly, poly(3, {1, 0, 1}));
}

TEST(Poly, FactorRoundTripsAndFactorsAreIrreducible) {
    Rng rng(17);
    for (Residue p : {2u, 3u, 5u, 7u}) {
        for (int i = 0; i < 30; ++i) {
            std::vector<Residue> c(2 + draw(rng, 8));
            for (auto& v : c) v = static_cast<Residue>(draw(rng, p));
            c.back() = 1;
            const PolyFp f(p, c);
            const auto fs = factor(f);
            EXPECT_EQ(product_of(fs, p), f);
            for (const auto& fac : fs) {
                // no factor of degree <= deg/2 divides an irreducible polynomial
                const int d = fac.poly.degree();
                for (int k = 1; 2 * k <= d; ++k) {
                    mpz_class e;
                    mpz_ui_pow_ui(e.get_mpz_t(), p, k);
                    const PolyFp g = gcd(powmod(PolyFp::x(p), e, fac.poly) - PolyFp::x(p), fac.poly);
                    EXPECT_TRUE(g.is_one()) << fac.poly.to_string();
                }
            }
        }
    }
}

TEST(Matrix, CharAndMinOfTheF7Example) {
    const auto cm = char_min_poly(f7());
    EXPECT_EQ(cm.characteristic.to_string(), "x^4 + 6x^3 + 6x^2 + 6x + 6");
    EXPECT_EQ(cm.minimal, cm.characteristic);
    EXPECT_EQ(char_poly(f7().negated()).to_string(), "x^4 + x^3 + 6x^2 + x + 6");
}

TEST(Matrix, CayleyHamiltonOnRandomMatrices) {
    Rng rng(9);
    for (Residue p : {2u, 3u, 5u, 11u})
        for (int i = 0; i < 20; ++i) {
            const MatrixFp m = random_matrix(p, 1 + draw(rng, 6), rng);
            const auto cm = char_min_poly(m);
            EXPECT_EQ(evaluate(cm.characteristic, m), MatrixFp::zero(p, m.dim()));
            EXPECT_EQ(evaluate(cm.minimal, m), MatrixFp::zero(p, m.dim()));
            EXPECT_TRUE((cm.characteristic % cm.minimal).is_zero());
            // every proper divisor of the minimal polynomial fails
            for (const auto& f : factor(cm.minimal))
                EXPECT_NE(evaluate(cm.minimal / f.poly, m), MatrixFp::zero(p, m.dim()));
        }
}

TEST(Matrix, RankAndRref) {
    const MatrixFp m(5, 3, {1, 2, 3, 2, 4, 1, 3, 1, 4});
    EXPECT_EQ(rank(m), 1u); // rows are multiples of the first
    EXPECT_EQ(rank(MatrixFp::identity(3, 4)), 4u);
    const auto r = rref({{2, 4}, {1, 3}}, 5);
    EXPECT_EQ(r, (std::vector<VectorFp>{{1, 0}, {0, 1}}));
}

TEST(Rcf, F7ExampleNegatedIsASingleBlock) {
    const auto f = rcf(f7().negated());
    ASSERT_EQ(f.blocks.size(), 1u);
    EXPECT_EQ(f.blocks[0].to_string(), "x^4 + x^3 + 6x^2 + x + 6");
    EXPECT_TRUE(f.simple);
}

TEST(Rcf, IdentityHasRepeatedBlocks) {
    const auto f = rcf(MatrixFp::identity(2, 2));
    ASSERT_EQ(f.blocks.size(), 2u);
    EXPECT_EQ(f.blocks[0].to_string(), "x + 1");
    EXPECT_EQ(f.blocks[1].to_string(), "x + 1");
    EXPECT_FALSE(f.simple);
}

TEST(Rcf, KnownInvariantFactors) {
    // companion(x - 1) + companion((x - 1)(x - 2)) + companion((x - 1)^2 (x - 2))
    const Residue p = 5;
    const PolyFp a = PolyFp::linear(p, 1);
    const PolyFp b = a * PolyFp::linear(p, 2);
    const PolyFp c = b * a;
    const auto f = rcf(block_sum({companion(c), companion(a), companion(b)}));
    EXPECT_EQ(f.blocks, (std::vector<PolyFp>{a, b, c}));
}

TEST(Rcf, MatchesSmithFormOracle) {
    Rng rng(31);
    for (Residue p : {2u, 3u, 7u})
        for (int i = 0; i < 25; ++i) {
            const std::size_t n = 1 + draw(rng, 6);
            MatrixFp m = random_matrix(p, n, rng);
            if (i % 3 == 0) {
                // force repeated invariant factors
                const MatrixFp h = random_matrix(p, (n + 1) / 2, rng);
                m = block_sum({h, h});
            }
            const auto f = rcf(m);
            EXPECT_EQ(f.blocks, oracle::smith_invariant_factors(m));
            EXPECT_EQ(char_poly(rcf_matrix(f.blocks, p)), char_poly(m));
            EXPECT_EQ(rcf(rcf_matrix(f.blocks, p)).blocks, f.blocks);
        }
}

TEST(Subspaces, F7ExampleNegated) {
    const auto subs = invariant_subspaces(f7().negated());
    ASSERT_EQ(subs.size(), 2u);
    EXPECT_EQ(subs[0].basis, (std::vector<VectorFp>{{1, 4, 6, 5}}));
    EXPECT_EQ(subs[1].basis, (std::vector<VectorFp>{{1, 0, 0, 1}, {0, 1, 0, 5}, {0, 0, 1, 4}}));
    EXPECT_EQ(subs, oracle::invariant_subspaces(f7().negated()));
}

TEST(Subspaces, IdentityOnF2SquaredHasThreeLines) {
    const auto subs = invariant_subspaces(MatrixFp::identity(2, 2));
    EXPECT_EQ(subs.size(), 3u);
    for (const auto& u : subs) EXPECT_EQ(u.dim(), 1u);
    EXPECT_EQ(subs, oracle::invariant_subspaces(MatrixFp::identity(2, 2)));
}

TEST(Subspaces, AgreeWithExhaustiveEnumeration) {
    Rng rng(41);
    for (Residue p : {2u, 3u, 5u})
        for (int i = 0; i < 25; ++i) {
            std::size_t n = 1 + draw(rng, p == 2 ? 6 : 4);
            MatrixFp m = random_matrix(p, n, rng);
            if (i % 4 == 0) m = MatrixFp::identity(p, n).scaled(static_cast<Residue>(draw(rng, p)));
            EXPECT_EQ(invariant_subspaces(m), oracle::invariant_subspaces(m));
        }
}

TEST(Subspaces, TooLarge) {
    try {
        invariant_subspaces(MatrixFp::identity(2, 21));
        FAIL();
    } catch (const error& e) {
        EXPECT_EQ(e.code(), errc::too_large);
    }
}

TEST(Field, ModulusMustBePrime) {
    EXPECT_THROW(MatrixFp(4, 1, {1}), error);
    EXPECT_THROW(MatrixFp(1, 1, {0}), error);
}
