#include <gtest/gtest.h>

#include "qexact/json_io.hpp"
#include "qexact/pullback.hpp"
#include "qexact/saitokurokawa.hpp"

using namespace qexact;

namespace {

// Ramanujan tau at primes up to 47.
const std::map<long, Rational> kTau = {
    {2, -24},        {3, 252},         {5, 4830},        {7, -16744},     {11, 534612},
    {13, -577738},   {17, -6905934},   {19, 10661420},   {23, 18643272},  {29, 128406630},
    {31, -52843168}, {37, -182213314}, {41, 308120442},  {43, -17125708}, {47, 2687348496L}};

HeckeLocalData<Rational> raw_local(long p, int w, const Rational& ap) {
    HeckeLocalData<Rational> d;
    d.p = p;
    d.w = w;
    d.ap = ap;
    return d;
}

SKLiftContext<Rational> random_context(long p, int k, std::uint64_t seed, long box, const Rational& beta) {
    auto local = local_from_beta(p, 2 * k, beta);
    return make_sk_context(halfint_family(local, seed, 4 * p * p * p * p * box * box));
}

TEST(ClassicalHecke, UDropsIndices) {
    ClassicalSeries<Rational> s(4);
    s.set(1, 1);
    s.set(2, 3);
    s.set(4, 5);
    auto u = classical_hecke(s, raw_local(2, 12, -24), ClassicalKind::U);
    EXPECT_EQ(u.bound(), 2);
    EXPECT_EQ(u.coefficient(1), 3);
    EXPECT_EQ(u.coefficient(2), 5);
}

TEST(ClassicalHecke, UInvertsV) {
    ClassicalSeries<Rational> s(20);
    for (long n = 1; n <= 20; ++n) s.set(n, make_rational(n * n - 7, n));
    auto local = local_from_ap(5, 4, 3);
    EXPECT_EQ(classical_hecke(classical_hecke(s, local, ClassicalKind::V), local, ClassicalKind::U), s);
}

TEST(ClassicalEigen, RamanujanTauValues) {
    auto tau = classical_eigen_coeffs(kTau, 12, 50);
    EXPECT_EQ(tau.coefficient(1), 1);
    EXPECT_EQ(tau.coefficient(4), -1472);
    EXPECT_EQ(tau.coefficient(6), -6048);
    EXPECT_EQ(tau.coefficient(9), -113643);
    EXPECT_EQ(tau.coefficient(4), tau.coefficient(2) * tau.coefficient(2) - rpow(2, 11));
    EXPECT_EQ(tau.coefficient(6), tau.coefficient(2) * tau.coefficient(3));
}

TEST(ClassicalEigen, TpActsByEigenvalue) {
    auto tau = classical_eigen_coeffs(kTau, 12, 50);
    auto t3 = classical_hecke(tau, local_from_ap(3, 12, 252), ClassicalKind::Tp);
    for (long n = 1; n <= t3.bound(); ++n) EXPECT_EQ(t3.coefficient(n), 252 * tau.coefficient(n)) << n;
}

TEST(ClassicalEigen, MissingPrimeReported) {
    EXPECT_THROW(classical_eigen_coeffs(std::map<long, Rational>{{2, 1}}, 12, 10), MissingEigenvalue);
}

TEST(StabilizeClassical, UActsByChosenRoot) {
    // weight 2 with a_3 = 4: roots 1 and 3
    std::map<long, Rational> eig;
    for (long q : primes_up_to(90)) eig[q] = q == 3 ? 4 : (q % 4) - 2;
    auto phi = classical_eigen_coeffs(eig, 2, 90);
    auto local = local_from_beta(3, 2, 3);
    auto phi_alpha = stabilize_classical(phi, local, Root::alpha);
    EXPECT_EQ(phi_alpha.coefficient(1), 1);
    auto u = classical_hecke(phi_alpha, local, ClassicalKind::U);
    for (long n = 1; n <= 30; ++n) EXPECT_EQ(u.coefficient(n), *local.alpha * phi_alpha.coefficient(n)) << n;
    auto phi_beta = stabilize_classical(phi, local, Root::beta);
    auto vphi = classical_hecke(phi, local, ClassicalKind::V);
    for (long n = 1; n <= 90; ++n)
        EXPECT_EQ(phi_beta.coefficient(n) - phi_alpha.coefficient(n), (*local.beta - *local.alpha) * vphi.coefficient(n));
}

TEST(HalfIntegralHecke, T9CoefficientAtFour) {
    HalfIntegralSeries<Rational> h(3, 40);
    h.set(4, 5);
    h.set(36, 11);
    auto t = halfint_hecke(h, local_from_ap(3, 6, 0), HalfIntKind::T2);
    EXPECT_EQ(twisted_symbol(3, 1, 3), -1);
    EXPECT_EQ(t.coefficient(4), Rational(11 - 9 * 5));
}

TEST(HalfIntegralHecke, TwistKillsMultiplesAndSquaresToIdentity) {
    HalfIntegralSeries<Rational> h(3, 40);
    for (long n = 1; n <= 40; ++n)
        if (plus_space_check(3, n)) h.set(n, n);
    auto local = local_from_ap(3, 6, 0);
    auto once = halfint_hecke(h, local, HalfIntKind::twist);
    auto twice = halfint_hecke(once, local, HalfIntKind::twist);
    for (long n = 1; n <= 40; ++n) {
        if (n % 3 == 0) EXPECT_EQ(once.coefficient(n), 0);
        else EXPECT_EQ(twice.coefficient(n), h.coefficient(n));
    }
}

TEST(HalfIntegralFamily, PassesEigenCheckAndIsDeterministic) {
    for (long p : {3L, 5L}) {
        auto local = local_from_beta(p, 6, Rational(p));
        auto a = halfint_family(local, 11, p * p * 50);
        EXPECT_NO_THROW(require_halfint_eigen(a.to_series(p * p * 50), local));
        EXPECT_EQ(a.coefficient(1), 0);
        auto b = halfint_family(local, 11, p * p * 50);
        EXPECT_EQ(family_to_json(a).dump(), family_to_json(b).dump());
    }
    EXPECT_THROW(halfint_family(local_from_ap(3, 4, 0), 1, 10), BadParams);
}

TEST(StabilizeHalfIntegral, RoutesAgreeAndSquarefreeFormula) {
    for (long p : {3L, 5L})
        for (int k : {1, 3}) {
            auto local = local_from_beta(p, 2 * k, rpow(p, k - 1));
            auto h = halfint_family(local, 5 + p + k, 200 * p * p).to_series(200 * p * p);
            auto op = stabilize_halfint(h, local, StabilizeRoute::operator_route);
            auto closed = stabilize_halfint(h, local, StabilizeRoute::closedform);
            ASSERT_EQ(op.bound(), 200);
            for (long n = 1; n <= 200; ++n) {
                EXPECT_EQ(op.coefficient(n), closed.coefficient(n)) << p << " " << k << " " << n;
                if (n % p && is_squarefree(n)) {
                    Rational factor = 1 - quadratic_sign(p) * legendre(n, p) * *local.beta * rpow(p, -k);
                    EXPECT_EQ(closed.coefficient(n), factor * h.coefficient(n));
                }
            }
        }
}

TEST(StabilizeHalfIntegral, ZeroBetaClosedFormIsIdentity) {
    auto local = local_from_ap(3, 6, 5);
    auto h = halfint_family(local, 3, 900).to_series(900);
    local.alpha = Rational(5);
    local.beta = Rational(0);
    auto closed = stabilize_halfint(h, local, StabilizeRoute::closedform);
    EXPECT_EQ(closed, h);
}

TEST(SiegelHecke, UOnLiftPicksScaledIndex) {
    auto ctx = random_context(3, 3, 4, 6, 3);
    auto f = sk_lift(ctx, LiftLevel::N, {9, 9});
    auto uf = siegel_hecke(f, 3, SiegelKind::U);
    EXPECT_EQ(uf.coefficient(1, 0, 1), ctx.source(36) + 27 * ctx.source(4));
}

TEST(SiegelHecke, VThenUAndTwistVanishing) {
    auto ctx = random_context(3, 3, 4, 6, 3);
    auto f = sk_lift(ctx, LiftLevel::N, {4, 4});
    EXPECT_EQ(siegel_hecke(siegel_hecke(f, 3, SiegelKind::V), 3, SiegelKind::U), f);
    auto tw = siegel_hecke(f, 3, SiegelKind::twist);
    for (const auto& [key, value] : tw.coeffs()) EXPECT_NE(key.det() % 3, 0);
    EXPECT_EQ(tw.coefficient(1, 0, 1), f.coefficient(1, 0, 1));
    EXPECT_EQ(tw.coefficient(1, 0, 2), -f.coefficient(1, 0, 2));
    EXPECT_EQ(tw.coefficient(1, 1, 1), 0);
}

TEST(BivariateHecke, InverseSeparableAndBounds) {
    BivariateSeries<Rational> s({9, 9});
    ClassicalSeries<Rational> a(9), b(9);
    for (long n = 1; n <= 9; ++n) {
        a.set(n, n + 1);
        b.set(n, 2 * n - 11);
    }
    for (long n = 1; n <= 9; ++n)
        for (long m = 1; m <= 9; ++m) s.set({n, m}, a.coefficient(n) * b.coefficient(m));
    auto uu = bivariate_hecke(s, 3, BivariateKind::UxU);
    EXPECT_EQ(uu.box().n_max, 3);
    EXPECT_EQ(uu.box().m_max, 3);
    auto local = local_from_ap(3, 2, 0);
    auto ua = classical_hecke(a, local, ClassicalKind::U), ub = classical_hecke(b, local, ClassicalKind::U);
    for (long n = 1; n <= 3; ++n)
        for (long m = 1; m <= 3; ++m) EXPECT_EQ(uu.coefficient(n, m), ua.coefficient(n) * ub.coefficient(m));
    EXPECT_EQ(bivariate_hecke(bivariate_hecke(s, 3, BivariateKind::VxV), 3, BivariateKind::UxU), s);
}

TEST(SaitoKurokawa, DivisorSumExamples) {
    auto ctx = random_context(5, 3, 8, 6, 5);
    auto f = sk_lift(ctx, LiftLevel::N, {6, 6});
    EXPECT_EQ(f.coefficient(1, 1, 2), ctx.source(7));
    EXPECT_EQ(f.coefficient(3, 3, 3), ctx.source(27) + 27 * ctx.source(3));
}

TEST(SaitoKurokawa, LevelRaisedLift) {
    for (long p : {3L, 5L}) {
        auto ctx = random_context(p, 3, 9, 6, p);
        auto f = sk_lift(ctx, LiftLevel::N, {6, 6});
        auto fp = sk_lift(ctx, LiftLevel::Np, {6, 6});
        auto vf = siegel_hecke(f, p, SiegelKind::V);
        for (const auto& [key, value] : fp.coeffs())
            EXPECT_EQ(value, f.coefficient(key) - rpow(p, 3) * vf.coefficient(key)) << key.str();
    }
}

// Closed form minus operator route is beta_f c(det/p^2) exactly where p does not divide gcd(B)
// while p^2 divides det(2B); zero elsewhere. The operator route always equals the semi-ordinary one.
void expect_route_gap(long p, int k, long box) {
    const Rational beta = rpow(p, k);
    auto ctx = random_context(p, k, 21, box, beta);
    auto op = sk_stabilize(ctx, {box, box}, SKRoute::operator_route);
    auto closed = sk_stabilize(ctx, {box, box}, SKRoute::closedform);
    auto semi = sk_stabilize(ctx, {box, box}, SKRoute::semiordinary);
    auto uf = uf_relation_residual(ctx, {box, box});
    EXPECT_EQ(op, semi);
    int gap_keys = 0;
    for (long n = 1; n <= box; ++n)
        for (long m = 1; m <= box; ++m)
            for (long r = -2 * std::max(n, m); r <= 2 * std::max(n, m); ++r) {
                const SiegelKey key{n, r, m};
                if (key.det() <= 0) continue;
                const bool gap = key.content() % p != 0 && key.det() % (p * p) == 0;
                const Rational lower = gap ? ctx.source(key.det() / (p * p)) : Rational(0);
                EXPECT_EQ(closed.coefficient(key) - op.coefficient(key), beta * lower) << key.str();
                EXPECT_EQ(uf.coefficient(key), -rpow(p, 2 * k - 1) * lower) << key.str();
                gap_keys += gap;
            }
    EXPECT_GT(gap_keys, 0);
}

TEST(StabilizeSiegel, ClosedFormGapAtThree) { expect_route_gap(3, 3, 6); }
TEST(StabilizeSiegel, ClosedFormGapAtThreeWeightOne) { expect_route_gap(3, 1, 6); }
TEST(StabilizeSiegel, ClosedFormGapAtFiveInLargerBox) { expect_route_gap(5, 3, 8); }

TEST(StabilizeSiegel, RoutesAgreeWhereNoGapKeysExist) {
    for (int k : {1, 3}) {
        auto ctx = random_context(5, k, 13, 6, 5);
        EXPECT_EQ(sk_stabilize(ctx, {6, 6}, SKRoute::operator_route), sk_stabilize(ctx, {6, 6}, SKRoute::closedform));
        EXPECT_TRUE(uf_relation_residual(ctx, {6, 6}).coeffs().empty());
    }
}

TEST(StabilizeSiegel, ZeroBetaGivesLevelRaisedLift) {
    auto ctx = random_context(5, 3, 2, 6, 5);
    ctx.local.beta = Rational(0);
    ctx.local.alpha = ctx.local.ap;
    EXPECT_EQ(sk_stabilize(ctx, {6, 6}, SKRoute::closedform), sk_lift(ctx, LiftLevel::Np, {6, 6}));
}

TEST(UfRelation, PerturbationAndZeroSource) {
    auto ctx = random_context(5, 3, 3, 6, 5);
    EXPECT_TRUE(uf_relation_residual(ctx, {6, 6}).coeffs().empty());
    auto bent = ctx;
    bent.source = perturb_source(ctx.source, 3, Rational(1));
    EXPECT_FALSE(uf_relation_residual(bent, {6, 6}).coeffs().empty());
    auto zero = ctx;
    zero.source = HalfIntSource<Rational>{[](long) { return Rational(0); }, ctx.source.bound, 3};
    EXPECT_TRUE(uf_relation_residual(zero, {6, 6}).coeffs().empty());
}

TEST(DiagonalPullback, SmallIndices) {
    auto ctx = random_context(5, 3, 6, 6, 5);
    auto pb = diagonal_pullback(sk_lift(ctx, LiftLevel::N, {6, 6}));
    auto c = ctx.source;
    EXPECT_EQ(pb.coefficient(1, 1), 2 * c(3) + c(4));
    EXPECT_EQ(pb.coefficient(1, 2), 2 * c(4) + 2 * c(7) + c(8));
    EXPECT_TRUE(diagonal_pullback(SiegelSeries<Rational>({3, 3})).coeffs().empty());
}

TEST(PullbackIdentities, VanishAcrossPrimes) {
    for (long p : {3L, 5L, 7L})
        for (int k : {1, 3}) {
            auto ctx = random_context(p, k, 17, 6, rpow(p, k - 1));
            for (auto kind : {PullbackIdentity::v_commute, PullbackIdentity::solve_it, PullbackIdentity::cor_uf})
                EXPECT_TRUE(pullback_identity_residual(ctx, kind, {6, 6}).coeffs().empty()) << p << " " << k;
        }
}

TEST(XiMatrix, EntriesAndTensorSquare) {
    auto c = numeric_isotypic(3, 3, 2, 6);
    Matrix<Rational> expected = {{27, -162, -162, 729}, {6, -9, -27, 0}, {6, -27, -9, 0}, {1, 0, 0, -9}};
    EXPECT_EQ(xi_matrix(c), expected);
    auto sym = symbolic_isotypic();
    auto xi = xi_matrix(sym);
    EXPECT_EQ(xi[0][0], sym.aphi * sym.aphi - sym.pk_minus_1());
    EXPECT_EQ(xi[3][3], -sym.pk_minus_1());
    auto uu = u_times_u_matrix(sym);
    for (std::size_t i = 0; i < 4; ++i)
        for (std::size_t j = 0; j < 4; ++j)
            EXPECT_EQ(xi[i][j], uu[i][j] - (i == j ? sym.pk_minus_1() : RationalFunction(0)));
}

TEST(PullbackCoordinates, ClosedFormMatchesSolve) {
    auto sym = symbolic_isotypic();
    auto closed = pullback_U_coordinates(sym, CoordinateMode::closedform);
    EXPECT_EQ(closed, pullback_U_coordinates(sym, CoordinateMode::solve));
    EXPECT_EQ(closed.B, closed.C);
    auto c = numeric_isotypic(3, 3, 2, 6);
    PullbackCoordinates<Rational> want{make_rational(94, 3), -51, -51, 189};
    EXPECT_EQ(pullback_U_coordinates(c, CoordinateMode::closedform), want);
    EXPECT_EQ(pullback_U_coordinates(c, CoordinateMode::solve), want);
    EXPECT_EQ(evaluate(closed.A, {{"p", Rational(3)}, {"q", Rational(27)}, {"a_p", Rational(2)}, {"a_phi", Rational(6)}}), make_rational(94, 3));
    EXPECT_THROW(pullback_U_coordinates(numeric_isotypic(3, 3, 2, 12), CoordinateMode::closedform), SingularSystem);
}

TEST(StabilizedCoordinates, TransferAndSpotValue) {
    for (const auto& r : stabilized_transfer_residuals(symbolic_isotypic_stabilized())) EXPECT_TRUE(r.is_zero());
    auto c = numeric_isotypic(3, 3, 84, 6);
    c.beta_f = Rational(3);
    c.alpha_f = Rational(81);
    EXPECT_EQ(pullback_U_coordinates(c, CoordinateMode::closedform).A, 86);
    EXPECT_EQ(stabilized_pullback_coordinates(c).A, make_rational(7, 9));
    auto one = numeric_isotypic(3, 3, 0, 6);
    one.beta_f = Rational(9);
    EXPECT_EQ(stabilized_pullback_coordinates(one).A, 1);
}

TEST(OrdinaryCoefficient, TwoPathsAndSpotValue) {
    EXPECT_EQ(ordinary_coefficient_formula(symbolic_isotypic_ordinary()), ordinary_coefficient_change_of_basis_symbolic());
    auto c = numeric_ordinary_context(3, 3, 9, 3, 3);
    EXPECT_EQ(ordinary_projection_coefficient(c, OrdinaryPath::formula), make_rational(13, 9));
    EXPECT_EQ(ordinary_projection_coefficient(c, OrdinaryPath::change_of_basis), make_rational(13, 9));
    EXPECT_EQ(ordinary_projection_coefficient(numeric_ordinary_context(3, 3, 9, 3, 27)), 0);
    EXPECT_THROW(ordinary_projection_coefficient(numeric_ordinary_context(3, 2, 3, 3, 1)), DegenerateRoots);
}

TEST(OldspaceChangeOfBasis, EntriesAndStabilizationConsistency) {
    const Rational alpha = 3, beta = 1;
    auto m = oldspace_change_of_basis(alpha, beta);
    EXPECT_EQ(m[0][0], alpha * alpha / ((alpha - beta) * (alpha - beta)));
    EXPECT_EQ(m[3][3], 1 / ((alpha - beta) * (alpha - beta)));
    // (phi, V phi) = base * (phi_alpha, phi_beta) inverted by the 2x2 block
    std::map<long, Rational> eig;
    for (long q : primes_up_to(30)) eig[q] = q == 3 ? 4 : 1;
    auto phi = classical_eigen_coeffs(eig, 2, 30);
    auto local = local_from_beta(3, 2, beta);
    auto pa = stabilize_classical(phi, local, Root::alpha), pb = stabilize_classical(phi, local, Root::beta);
    auto vphi = classical_hecke(phi, local, ClassicalKind::V);
    const Rational s = 1 / (alpha - beta);
    for (long n = 1; n <= 30; ++n) {
        EXPECT_EQ(phi.coefficient(n), s * alpha * pa.coefficient(n) - s * beta * pb.coefficient(n));
        EXPECT_EQ(vphi.coefficient(n), s * pa.coefficient(n) - s * pb.coefficient(n));
    }
}

}  // namespace
