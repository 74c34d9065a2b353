#include <gtest/gtest.h>

#include <random>

#include "qexact/arith.hpp"
#include "qexact/ratfun.hpp"
#include "qexact/linalg.hpp"
#include "qexact/qseries.hpp"

using namespace qexact;

namespace {

using RF = RationalFunction;
const MultiPoly X = MultiPoly::variable("x"), Y = MultiPoly::variable("y");
RF x() { return RF::variable("x"); }
RF y() { return RF::variable("y"); }

TEST(MultiPoly, DifferenceOfSquares) {
    EXPECT_EQ(poly_multiply(X + Y, X - Y), X * X - Y * Y);
}

TEST(MultiPoly, ZeroAnnihilates) {
    EXPECT_TRUE(poly_multiply(MultiPoly(0), X * Y + 3).is_zero());
}

TEST(MultiPoly, SquareExpandsTermwise) {
    EXPECT_EQ(poly_multiply(X + 1, X + 1), X * X + Rational(2) * X + 1);
}

TEST(MultiPoly, MultiplicationMatchesEvaluation) {
    std::mt19937_64 rng(7);
    std::uniform_int_distribution<long> coeff(-5, 5);
    for (int trial = 0; trial < 20; ++trial) {
        MultiPoly a(coeff(rng)), b(coeff(rng));
        for (int e = 1; e <= 3; ++e) {
            a += Rational(coeff(rng)) * MultiPoly::variable("x", e) * MultiPoly::variable("y", 3 - e);
            b += Rational(coeff(rng)) * MultiPoly::variable("y", e);
        }
        const std::map<std::string, Rational> point{{"x", Rational(2, 3)}, {"y", Rational(-5, 7)}};
        EXPECT_EQ(evaluate(RF(a * b), point), evaluate(RF(a), point) * evaluate(RF(b), point));
    }
}

TEST(RationalFunction, CancelsCommonFactor) {
    EXPECT_EQ((x() * x() - 1) / (x() - 1), x() + 1);
    EXPECT_TRUE(((x() * x() - 1) / (x() - 1)).den().is_constant());
}

TEST(RationalFunction, NormalizesContent) {
    const RF f = (RF(2) * x()) / RF(4);
    EXPECT_EQ(f, x() / RF(2));
    EXPECT_TRUE(f.den().is_constant());
    EXPECT_EQ(f * RF(2), x());
}

TEST(RationalFunction, CancelsMultivariateGcd) {
    EXPECT_EQ(((x() - y()) * (x() + y())) / ((x() - y()) * x()), (x() + y()) / x());
}

TEST(RationalFunction, ZeroDenominatorRejected) {
    EXPECT_THROW(x() / RF(0), ZeroDenominator);
    EXPECT_THROW(make_rational(1, 0), ZeroDenominator);
}

TEST(Substitute, ProductConstraint) {
    const RF alpha = RF::variable("alpha"), beta = RF::variable("beta"), p = RF::variable("p"), q = RF::variable("q");
    const RF image = substitute(beta / alpha, {{"beta", q * q / (p * alpha)}});
    EXPECT_EQ(image, q * q / (p * alpha * alpha));
}

TEST(Substitute, EmptyBindingsIsIdentity) {
    EXPECT_EQ(substitute(x(), {}), x());
}

TEST(Substitute, DenominatorVanishing) {
    EXPECT_THROW(substitute(RF(1) / (x() - y()), {{"x", y()}}), ZeroDenominatorAfterSubstitution);
}

TEST(RationalFunctionEquality, CanonicalAndSampled) {
    const RF lhs = (x() * x() - 1) / (x() - 1);
    EXPECT_TRUE(ratfun_equal(lhs, x() + 1));
    EXPECT_TRUE(ratfun_equal(lhs, x() + 1, EqualityMode::random_eval));
    EXPECT_FALSE(ratfun_equal(x(), x() + 1));
    EXPECT_FALSE(ratfun_equal(x(), x() + 1, EqualityMode::random_eval));
}

TEST(Linalg, BareissSolvesRationalSystem) {
    Matrix<Rational> m = {{2, 1, 0}, {1, 3, 1}, {0, 1, 4}};
    std::vector<Rational> rhs = {1, 2, 3};
    auto sol = bareiss_solve(m, rhs);
    for (std::size_t i = 0; i < 3; ++i) {
        Rational row(0);
        for (std::size_t j = 0; j < 3; ++j) row += m[i][j] * sol[j];
        EXPECT_EQ(row, rhs[i]);
    }
}

TEST(Linalg, SingularSystemReported) {
    Matrix<Rational> m = {{1, 2}, {2, 4}};
    EXPECT_THROW(bareiss_solve(m, std::vector<Rational>{1, 1}), SingularSystem);
}

TEST(Arith, KroneckerVanishesOnSharedSquareFactors) {
    EXPECT_EQ(kronecker(12, 9), 0);
    EXPECT_EQ(kronecker(12, 25), 1);
    EXPECT_EQ(kronecker(-4, 3), -1);
    EXPECT_EQ(kronecker(5, 2), -1);
}

TEST(Arith, QuadraticSign) {
    EXPECT_EQ(quadratic_sign(3), -1);
    EXPECT_EQ(quadratic_sign(5), 1);
    EXPECT_EQ(legendre(-1, 3), -1);
}

TEST(ClassicalSeries, AbsentIndexIsZeroWithinBound) {
    ClassicalSeries<Rational> s(10);
    s.set(1, 1);
    s.set(2, -24);
    EXPECT_EQ(series_coefficient(s, 3L), 0);
    EXPECT_EQ(series_coefficient(s, 2L), -24);
    EXPECT_THROW(series_coefficient(s, 11L), OutOfBound);
}

TEST(SeriesCombine, CancellationAndScaling) {
    ClassicalSeries<Rational> s(5), unit(5);
    s.set(1, 3);
    s.set(4, -2);
    unit.set(1, 1);
    auto zero = series_combine<Rational>(std::vector<std::pair<Rational, ClassicalSeries<Rational>>>{{1, s}, {-1, s}});
    EXPECT_TRUE(zero.coeffs().empty());
    auto five = series_combine<Rational>(std::vector<std::pair<Rational, ClassicalSeries<Rational>>>{{2, unit}, {3, unit}});
    EXPECT_EQ(five.coefficient(1), 5);
}

TEST(SeriesCombine, ShapeMismatchAcrossKinds) {
    using Any = AnySeries<Rational>;
    std::vector<std::pair<Rational, Any>> terms = {{1, Any(ClassicalSeries<Rational>(3))},
                                                   {1, Any(HalfIntegralSeries<Rational>(3, 3))}};
    EXPECT_THROW(series_combine<Rational>(terms), ShapeMismatch);
}

TEST(SiegelIndex, AcceptsAndRejects) {
    auto a = siegel_index_check(1, 0, 1);
    EXPECT_EQ(a.key.det(), 4);
    EXPECT_EQ(a.key.content(), 1);
    EXPECT_THROW(siegel_index_check(1, 2, 1), NotPositiveDefinite);
    auto b = siegel_index_check(3, 3, 3);
    EXPECT_EQ(b.key.det(), 27);
    EXPECT_EQ(b.key.content(), 3);
}

TEST(PlusSpace, OddWeightResidues) {
    EXPECT_TRUE(plus_space_check(3, 3));
    EXPECT_FALSE(plus_space_check(3, 1));
    EXPECT_TRUE(plus_space_check(3, 4));
    HalfIntegralSeries<Rational> h(3, 10);
    EXPECT_THROW(h.set(1, 1), PlusSpaceViolation);
}

TEST(GaussianRational, Arithmetic) {
    const auto i = GaussianRational::i();
    EXPECT_EQ(i * i, GaussianRational(-1));
    EXPECT_EQ((GaussianRational(1) + i) / (GaussianRational(1) - i), i);
}

}  // namespace
