#include <gtest/gtest.h>

#include <random>

#include "motpairs/lambda.hpp"
#include "motpairs/motive_expr.hpp"

using namespace motpairs;

namespace {

ClassPoly q() { return ClassPoly::lefschetz(); }

ClassPoly random_poly(std::mt19937& rng) {
    std::uniform_int_distribution<int> exp_dist(0, 2);
    std::uniform_int_distribution<int> coeff_dist(-3, 3);
    std::uniform_int_distribution<int> nterms(1, 4);
    ClassPoly a;
    int k = nterms(rng);
    for (int i = 0; i < k; ++i)
        a += ClassPoly::monomial(exp_dist(rng), exp_dist(rng), coeff_dist(rng));
    return a;
}

TEST(Lambda, Degenerate) {
    ClassPoly c = curve_class(2);
    EXPECT_EQ(lambda_k(c, 0), ClassPoly::one());
    EXPECT_EQ(lambda_k(c, 1), c);
}

TEST(Lambda, PointCounts) {
    // Sym^k of m points has C(m+k-1, k) points.
    EXPECT_EQ(lambda_k(ClassPoly::constant(3), 2), ClassPoly::constant(6));
    EXPECT_EQ(lambda_k(ClassPoly::constant(1), 5), ClassPoly::one());
    // Negative constants terminate: Sym-series of -1 is (1 - t).
    EXPECT_EQ(lambda_k(ClassPoly::constant(-1), 1), ClassPoly::constant(-1));
    EXPECT_EQ(lambda_k(ClassPoly::constant(-1), 2), ClassPoly::zero());
}

TEST(Lambda, LefschetzPowers) {
    // Sym^k of an affine space is an affine space.
    for (int k = 1; k <= 4; ++k)
        EXPECT_EQ(lambda_k(q(), k), ClassPoly::lefschetz(k));
}

TEST(Lambda, SumRule) {
    std::mt19937 rng(20240817);
    for (int trial = 0; trial < 40; ++trial) {
        ClassPoly a = random_poly(rng), b = random_poly(rng);
        for (int k = 0; k <= 3; ++k) {
            ClassPoly lhs = lambda_k(a + b, k);
            ClassPoly rhs;
            for (int i = 0; i <= k; ++i)
                rhs += lambda_k(a, i) * lambda_k(b, k - i);
            ASSERT_EQ(lhs, rhs) << "sum rule failed at trial " << trial << " k=" << k;
        }
    }
}

TEST(Lambda, TwistRule) {
    std::mt19937 rng(77001);
    for (int trial = 0; trial < 40; ++trial) {
        ClassPoly a = random_poly(rng);
        for (int l = 1; l <= 2; ++l) {
            // a * L^l has every exponent shifted by (l, l).
            ClassPoly al = a.shift(l, l);
            for (int k = 0; k <= 3; ++k) {
                ClassPoly lhs = lambda_k(al, k);
                ClassPoly rhs = lambda_k(a, k).shift(k * l, k * l);
                ASSERT_EQ(lhs, rhs) << "twist rule failed at trial " << trial;
            }
        }
    }
}

TEST(Lambda, SymSquareOfCurve) {
    // E(Sym^2 C) for genus 2, expanded by hand from the zeta series.
    ClassPoly expect;
    expect += ClassPoly::monomial(0, 0, 1);
    expect += ClassPoly::monomial(1, 0, -2);
    expect += ClassPoly::monomial(0, 1, -2);
    expect += ClassPoly::monomial(2, 0, 1);
    expect += ClassPoly::monomial(1, 1, 5);
    expect += ClassPoly::monomial(0, 2, 1);
    expect += ClassPoly::monomial(2, 1, -2);
    expect += ClassPoly::monomial(1, 2, -2);
    expect += ClassPoly::monomial(2, 2, 1);
    EXPECT_EQ(lambda_k(curve_class(2), 2), expect);
}

TEST(Lambda, JacobianIdentity) {
    for (int g = 2; g <= 3; ++g) {
        ClassPoly jac = (ClassPoly::one() - ClassPoly::monomial(1, 0)).pow(g) *
                        (ClassPoly::one() - ClassPoly::monomial(0, 1)).pow(g);
        ClassPoly proj;
        for (int i = 0; i < g; ++i) proj += ClassPoly::lefschetz(i);
        EXPECT_EQ(lambda_k(curve_class(g), 2 * g - 1), jac * proj);
    }
}

TEST(Lambda, SeriesMultiplicativity) {
    // sym_series(a + b) = sym_series(a) * sym_series(b) up to the cap.
    ClassPoly a = curve_class(2);
    ClassPoly b = ClassPoly::lefschetz() * Int(2);
    auto sa = sym_series(a, 4), sb = sym_series(b, 4);
    auto sab = sym_series(a + b, 4);
    auto prod = series_mul(sa, sb, 4);
    for (int k = 0; k <= 4; ++k) EXPECT_EQ(sab[k], prod[k]);
}

TEST(Lambda, BinomialHelper) {
    EXPECT_EQ(binomial(Int(5), 2), Int(10));
    EXPECT_EQ(binomial(Int(-1), 3), Int(-1));
    EXPECT_EQ(binomial(Int(-2), 2), Int(3));
    EXPECT_EQ(binomial(Int(3), 0), Int(1));
    EXPECT_EQ(binomial(Int(2), 5), Int(0));
}

}  // namespace
