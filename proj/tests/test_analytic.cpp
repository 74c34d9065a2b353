#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <sstream>

#include "qexact/suites.hpp"

using namespace qexact;

namespace {

using RF = RationalFunction;

TEST(LocalFactors, DegreesAndArtinSplitting) {
    RootPair<Rational> f{2, make_rational(5, 3)}, g{3, make_rational(4, 3)};
    EXPECT_EQ(standard_euler_factor(f).degree(), 2);
    EXPECT_EQ(adjoint_euler_factor(f, g).degree(), 6);
    EXPECT_EQ(triple_euler_factor(f, g, g).degree(), 8);
    EXPECT_TRUE(artin_local_factorization_check(f, g, 2, 2));
    EXPECT_THROW(artin_local_factorization_check(f, g, 3, 1), HypothesisViolated);
}

TEST(LocalFactors, ArtinSplittingIsSymbolic) {
    const RF a = RF::variable("a"), b = RF::variable("b"), c = RF::variable("c"), q = RF::variable("q");
    RootPair<RF> f{a, b}, g{c, q / c};
    EXPECT_TRUE(artin_local_factorization_check(f, g, q));
}

TEST(LocalFactors, StandardFactorCoefficients) {
    auto e = standard_euler_factor(RootPair<Rational>{2, 3});
    EXPECT_EQ(e[0], 1);
    EXPECT_EQ(e[1], -5);
    EXPECT_EQ(e[2], 6);
}

TEST(Modifications, FactorizationUnderConstraints) {
    for (long beta_f : {1L, 3L, 7L})
        for (long alpha_g : {1L, 2L, 9L}) {
            RootPair<Rational> f{make_rational(243, beta_f), beta_f}, g{alpha_g, make_rational(27, alpha_g)};
            EXPECT_TRUE(factorization_identity_check(f, g, 3L, 3)) << beta_f << " " << alpha_g;
        }
    RootPair<Rational> wf{5, 7}, wg{2, 3};
    EXPECT_NE(factorization_identity_residual(wf, wg, Rational(3), Rational(27)), 0);
    EXPECT_THROW(factorization_identity_check(wf, wg, 3L, 3), HypothesisViolated);
}

TEST(Modifications, ZeroDenominatorsReported) {
    RootPair<Rational> g{0, 1};
    EXPECT_THROW(adjoint_pair_modification(Rational(1), g, Rational(3), Rational(27)), ZeroDenominator);
    EXPECT_THROW(adjoint_euler_factor(RootPair<Rational>{1, 1}, g), NotInvertible);
}

TEST(Modifications, TrivializedCharacterAtCenter) {
    const Rational alpha = 81, p = 3;
    EXPECT_EQ(gs_modification(alpha, p, 3, 3, Rational(1), Rational(1)), gs_modification_trivialized(alpha, Rational(9)));
    EXPECT_EQ(gs_modification_trivialized(alpha, Rational(9)), make_rational(64, 81));
}

TEST(Archimedean, GammaFactors) {
    EXPECT_NEAR(gamma_c(1), 1 / std::numbers::pi, 1e-14);
    EXPECT_NEAR(gamma_c(3.5) / gamma_c(2.5), 2.5 / (2 * std::numbers::pi), 1e-12);
    EXPECT_THROW(gamma_c(0), PoleAtS);
    EXPECT_THROW(gamma_c(-2), PoleAtS);
    EXPECT_EQ(archimedean_data(5, 3).sign, -1);
    EXPECT_EQ(archimedean_data(3, 5).sign, 1);
    EXPECT_EQ(archimedean_data(3, 3).shape, ArchimedeanShape::at_least_k);
    EXPECT_THROW(archimedean_data(2, 3), BadParams);
}

TEST(Constants, CeilingHalfAndPhases) {
    EXPECT_EQ(bracket_half(3), 2);
    EXPECT_EQ(bracket_half(1), 1);
    EXPECT_EQ(bracket_half(-3), -1);
    EXPECT_EQ(i_power(3), -GaussianRational::i());
    EXPECT_EQ(i_power(-1), -GaussianRational::i());
}

TEST(Constants, NormalizationValues) {
    auto one = normalization_constants(make_level(1), 1);
    EXPECT_EQ(one.central_value, GaussianRational(4));
    EXPECT_EQ(one.interpolation, GaussianRational(-4));
    EXPECT_EQ(one.factorization, GaussianRational(0, -8));
    auto three = normalization_constants(make_level(3), 1);
    EXPECT_EQ(three.central_value, GaussianRational(make_rational(64, 3)));
    EXPECT_EQ(make_level(15).nu(), 2);
    EXPECT_THROW(make_level(9), BadParams);
    EXPECT_THROW(normalization_constants(make_level(1), 2), BadParams);
}

TEST(Constants, ChainClosesForAllWeights) {
    for (long k = 1; k <= 19; k += 2)
        for (int sign : {1, -1}) {
            auto chain = interpolation_constant_chain(k, sign);
            EXPECT_EQ(chain.assembled, chain.expected) << k;
        }
}

TEST(GaussSums, ClosedFormsMatchDirectSums) {
    EXPECT_EQ(quadratic_gauss_sum(-4).str(), "2*i");
    EXPECT_EQ(quadratic_gauss_sum(5).str(), "sqrt(5)");
    EXPECT_EQ(quadratic_gauss_sum(12).str(), "2*sqrt(3)");
    EXPECT_EQ(quadratic_gauss_sum(-3).str(), "sqrt(3)*i");
    for (long d : {-3L, -4L, 5L, -7L, 8L, -8L, 12L, 13L, -15L, 21L, -24L}) {
        auto exact = quadratic_gauss_sum(d).value();
        auto direct = gauss_sum_direct(d);
        EXPECT_NEAR(std::abs(exact - direct), 0, 1e-9) << d;
    }
    EXPECT_THROW(quadratic_gauss_sum(9), NotFundamental);
    EXPECT_THROW(quadratic_gauss_sum(-12 * 4), NotFundamental);
}

TEST(ThetaRescaling, AssembledValueInvariant) {
    InterpolationInputs in{RF::variable("P"), RF::variable("J")};
    for (const RF& lambda : {RF(3), RF::variable("t"), RF::variable("t") + RF(make_rational(1, 2))})
        EXPECT_EQ(interpolation_assemble(rescale_theta(in, lambda)), interpolation_assemble(in));
    EXPECT_THROW(rescale_theta(in, RF(0)), NotInvertible);
}

TEST(Teichmuller, RootsOfUnityLiftingResidues) {
    EXPECT_EQ(teichmuller(2, 5, 2).residue(), 7);
    for (long p : {3L, 5L, 7L, 11L})
        for (long a = 1; a < 3 * p; ++a) {
            if (a % p == 0) continue;
            const PadicInt w = teichmuller(a, p, 6);
            EXPECT_EQ(w.pow(p - 1), PadicInt(1, p, 6));
            EXPECT_EQ(mod_reduce(w.residue() - a, p), 0);
            EXPECT_EQ(w * diamond(a, p, 6), PadicInt(a, p, 6));
        }
    EXPECT_THROW(teichmuller(6, 3, 4), NotAUnit);
}

TEST(GroupLike, DiscreteLogAndHomomorphism) {
    for (long d : {2L, 4L, 7L, 11L}) {
        const long e = gamma_log_exponent(d, 5, 5);
        EXPECT_EQ(gamma_generator(5, 5).pow(e), diamond(d, 5, 5));
    }
    const auto a = group_like(PadicExponent::exact(17), 3, 4, 8), b = group_like(PadicExponent::exact(40), 3, 4, 8);
    EXPECT_EQ(a * b, group_like(PadicExponent::exact(57), 3, 4, 8));
    for (long j = 0; j < 5; ++j)
        EXPECT_EQ(classical_point_eval(a, {j, 3}), gamma_generator(3, 4).pow(17 * j));
    EXPECT_THROW(group_like(PadicExponent{17, 5}, 3, 4, 8), InsufficientExponentPrecision);
    EXPECT_THROW(classical_point_eval(a, {1, 5}), PrecisionMismatch);
}

TEST(SigmaSubstitution, DoublesWeightIndex) {
    IwasawaElement x(3, 4, 8, {1, 5, 0, 22, 7, 0, 0, 3});
    const auto image = sigma_substitution(x);
    for (long j = 0; j < 6; ++j) EXPECT_EQ(classical_point_eval(image, {j, 3}), classical_point_eval(x, {2 * j, 3}));
}

TEST(OrdinaryProjector, SplitMatrixLimit) {
    const long p = 3, mod = padic_modulus(p, 4), alpha = 2, beta = 3;
    const PadicMatrix u = {{alpha + beta, 1}, {-alpha * beta, 0}};
    const auto limit = ordinary_projector_limit(u, p, 4);
    EXPECT_EQ(limit.matrix, ordinary_projector_closed_form(u, alpha, beta, p, 4));
    EXPECT_EQ(padic_matmul(limit.matrix, limit.matrix, mod), limit.matrix);
    EXPECT_EQ(factorial_stage_for_units(p, 4), 9);
    EXPECT_EQ(ordinary_projector_stage_cap(p, 4), 10);
    EXPECT_GT(limit.stages, 4 + 3);
    EXPECT_LE(limit.stages, 10);
}

TEST(OrdinaryProjector, DiagonalUnitAndNonUnit) {
    const PadicMatrix u = {{1, 0}, {0, 3}};
    EXPECT_EQ(ordinary_projector_limit(u, 3, 4).matrix, (PadicMatrix{{1, 0}, {0, 0}}));
    EXPECT_THROW(ordinary_projector_limit(PadicMatrix{{1, 0}}, 3, 4), ShapeMismatch);
}

TEST(LambdaAdicLift, CompositeContent) {
    const long p = 3;
    LambdaContext ctx{p, 4, 8, 3, 1};
    std::map<long, IwasawaElement> theta;
    theta.emplace(75, IwasawaElement(p, 4, 8, {4, 1, 0, 2}));
    theta.emplace(3, IwasawaElement(p, 4, 8, {2, 0, 7}));
    const auto value = lambda_adic_sk_coefficient(theta, {5, 5, 5}, ctx);
    const PadicInt scalar = teichmuller(5, p, 4).pow(ctx.r0 - 1) * PadicInt(5, p, 4);
    const auto expected =
        theta.at(75) + scalar * (group_like(gamma_log_exponent_for_series(5, p, 4, 8), p, 4, 8) * theta.at(3));
    EXPECT_EQ(value, expected);
    theta.erase(3);
    EXPECT_THROW(lambda_adic_sk_coefficient(theta, {5, 5, 5}, ctx), MissingThetaCoefficient);
    EXPECT_THROW(lambda_adic_sk_coefficient(theta, {1, 3, 1}, ctx), NotPositiveDefinite);
}

TEST(JsonInput, ParseErrorsCarryOffsets) {
    try {
        parse_json_text("{\"p\": 3,, }");
        FAIL();
    } catch (const ParseError& e) {
        EXPECT_NE(std::string(e.what()).find("byte"), std::string::npos);
    }
    EXPECT_THROW(rational_from_json(Json("1/0"), "ap"), ZeroDenominator);
    EXPECT_THROW(load_family_text("[1, 2]"), SchemaError);
}

TEST(JsonInput, NonEigenFamilyNamesIndex) {
    const std::string text =
        R"({"kind": "halfint-family", "p": 3, "k": 3, "bound": 100, "ap": "2", "primitive": {"36": "5"}})";
    try {
        load_family_text(text);
        FAIL();
    } catch (const NotEigenFamily& e) {
        EXPECT_NE(std::string(e.what()).find("36"), std::string::npos);
    }
}

TEST(JsonInput, FamilyRoundTrip) {
    auto family = halfint_family(local_from_beta(5, 6, 5), 3, 400);
    const Json first = family_to_json(family);
    const auto loaded = std::get<HalfIntegralFamily<Rational>>(load_family_text(first.dump()));
    EXPECT_EQ(family_to_json(loaded).dump(), first.dump());
    EXPECT_EQ(loaded.to_series(400), family.to_series(400));
}

TEST(JsonInput, ClassicalEigenvalueFile) {
    const std::string text = R"({"kind": "classical", "weight": 12, "eigenvalues": {"2": -24, "3": 252, "5": 4830, "7": -16744}})";
    auto s = std::get<ClassicalSeries<Rational>>(load_family_text(text));
    EXPECT_EQ(s.bound(), 10);
    EXPECT_EQ(s.coefficient(4), -1472);
    EXPECT_THROW(load_family_text(R"({"bound": 4, "coeffs": {"1": 1, "2": 2, "3": 3, "4": 5}, "weight": 2})"),
                 NotEigenFamily);
}

SuiteParams params(long p, int k) {
    SuiteParams sp;
    sp.p = p;
    sp.k = k;
    return sp;
}

TEST(Reports, DeterministicWithoutMeta) {
    auto a = run_suite("cor-uf", params(5, 3)), b = run_suite("cor-uf", params(5, 3));
    EXPECT_TRUE(a.pass());
    EXPECT_EQ(a.trials, 25);
    EXPECT_EQ(report_to_json(a, false).dump(), report_to_json(b, false).dump());
    std::ostringstream table;
    write_table(a, table, false);
    EXPECT_TRUE(table.str().ends_with("PASS\n"));
}

TEST(Reports, AllSuitesPassAtFive) {
    auto all = run_suite("all", params(5, 3));
    EXPECT_EQ(all.parts.size(), suite_names().size());
    for (const auto& part : all.parts) EXPECT_TRUE(part.pass()) << part.suite;
}

TEST(Reports, InvalidParameters) {
    EXPECT_THROW(run_suite("cor-uf", params(5, 2)), BadParams);
    EXPECT_THROW(run_suite("cor-uf", params(9, 3)), BadParams);
    EXPECT_THROW(run_suite("no-such-suite", params(5, 3)), UnknownSuite);
    auto sp = params(5, 3);
    sp.jobs = 0;
    EXPECT_THROW(run_suite("cor-uf", sp), BadParams);
}

TEST(Reports, ClosedFormGapAtThreeIsReported) {
    auto routes = run_suite("sk-stabilize-routes", params(3, 3));
    auto relation = run_suite("cor-ufrelation", params(3, 3));
    EXPECT_EQ(routes.failures.size(), 250u);
    EXPECT_EQ(relation.failures.size(), 250u);
    EXPECT_TRUE(run_suite("cor-uf", params(3, 3)).pass());
    EXPECT_TRUE(run_suite("halpha-routes", params(3, 3)).pass());
}

TEST(Reports, PerturbationIsDetected) {
    auto d = discrimination_check(params(5, 3));
    EXPECT_TRUE(d.pass());
    EXPECT_FALSE(d.uf_relation.pass());
    EXPECT_FALSE(d.cor_uf.pass());
    EXPECT_TRUE(d.v_commute.pass());
}

TEST(Reports, ThreadCountDoesNotChangeResults) {
    auto sp = params(5, 3);
    auto one = run_suite("v-commute", sp);
    sp.jobs = 3;
    auto three = run_suite("v-commute", sp);
    EXPECT_EQ(report_to_json(one, false)["failures"], report_to_json(three, false)["failures"]);
}

}  // namespace
