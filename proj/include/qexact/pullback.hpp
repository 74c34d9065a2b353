#pragma once

#include <optional>
#include <type_traits>

#include "qexact/linalg.hpp"
#include "qexact/saitokurokawa.hpp"

namespace qexact {

template <class R>
BivariateView<R> diagonal_pullback(const SiegelView<R>& f) {
    return {[f](long n, long m) {
                R total(0);
                for (long r = 0; r * r < 4 * n * m; ++r) {
                    total = total + f(SiegelKey{n, r, m});
                    if (r) total = total + f(SiegelKey{n, -r, m});
                }
                return total;
            },
            f.box};
}

template <class R>
BivariateSeries<R> diagonal_pullback(const SiegelSeries<R>& f) {
    return materialize(diagonal_pullback(as_view(f)), f.box());
}

enum class PullbackIdentity { v_commute, solve_it, cor_uf };

template <class R>
BivariateView<R> pullback_identity_view(const SKLiftContext<R>& ctx, PullbackIdentity kind) {
    const long p = ctx.p();
    const int k = ctx.k;
    SiegelView<R> f = sk_lift_view(ctx, LiftLevel::N);
    BivariateView<R> pf = diagonal_pullback(f);
    switch (kind) {
        case PullbackIdentity::v_commute:
            return linear_combination<R>(
                {{R(1), diagonal_pullback(siegel_V(f, p))}, {R(-1), bivariate_VV(pf, p)}});
        case PullbackIdentity::solve_it:
            return linear_combination<R>({{R(quadratic_sign(p)), bivariate_UU(diagonal_pullback(siegel_twist(f, p)), p)},
                                          {R(-1), bivariate_UU(pf, p)},
                                          {R(1), diagonal_pullback(siegel_U(f, p))}});
        case PullbackIdentity::cor_uf: {
            const R& ap = ctx.local.ap;
            const R pk = R(rpow(p, k)), pk1 = R(rpow(p, k - 1));
            BivariateView<R> puf = diagonal_pullback(siegel_U(f, p));
            return linear_combination<R>({{R(1), bivariate_UU(puf, p)},
                                          {-pk1, puf},
                                          {-(pk - pk1 + ap), bivariate_UU(pf, p)},
                                          {pk * (pk1 + ap), pf},
                                          {-R(rpow(p, 3 * k - 1)), bivariate_VV(pf, p)}});
        }
    }
    throw BadParams("unknown pullback identity");
}

template <class R>
BivariateSeries<R> pullback_identity_residual(const SKLiftContext<R>& ctx, PullbackIdentity kind, const Box& box) {
    return materialize(pullback_identity_view(ctx, kind), box);
}

// Local data of f (weight 2k) and phi (weight k+1) over the field generated by p and q = p^k.
template <class R>
struct IsotypicContext {
    R p, q;
    R ap;
    R aphi;
    std::optional<R> alpha_f, beta_f, alpha_phi, beta_phi;

    R pk_minus_1() const { return q / p; }
    R p2k() const { return q * q; }
    R p2k_minus_1() const { return q * q / p; }
    R p3k_minus_1() const { return q * q * q / p; }
    R pk_plus_1() const { return p * q; }

    const R& need(const std::optional<R>& x, const char* name) const {
        if (!x) throw ConstraintViolated(std::string(name) + " not supplied");
        return *x;
    }
};

inline IsotypicContext<RationalFunction> symbolic_isotypic() {
    using RF = RationalFunction;
    IsotypicContext<RF> ctx;
    ctx.p = RF::variable("p");
    ctx.q = RF::variable("q");
    ctx.ap = RF::variable("a_p");
    ctx.aphi = RF::variable("a_phi");
    return ctx;
}

// beta_f free, alpha_f = p^(2k-1)/beta_f and a_p = alpha_f + beta_f.
inline IsotypicContext<RationalFunction> symbolic_isotypic_stabilized() {
    using RF = RationalFunction;
    IsotypicContext<RF> ctx = symbolic_isotypic();
    ctx.beta_f = RF::variable("beta_f");
    ctx.alpha_f = ctx.p2k_minus_1() / *ctx.beta_f;
    ctx.ap = *ctx.alpha_f + *ctx.beta_f;
    return ctx;
}

// Additionally alpha_phi free with beta_phi = p^k/alpha_phi and a_phi = alpha_phi + beta_phi.
inline IsotypicContext<RationalFunction> symbolic_isotypic_ordinary() {
    using RF = RationalFunction;
    IsotypicContext<RF> ctx = symbolic_isotypic_stabilized();
    ctx.alpha_phi = RF::variable("alpha_phi");
    ctx.beta_phi = ctx.q / *ctx.alpha_phi;
    ctx.aphi = *ctx.alpha_phi + *ctx.beta_phi;
    return ctx;
}

inline IsotypicContext<Rational> numeric_isotypic(long p, int k, const Rational& ap, const Rational& aphi) {
    IsotypicContext<Rational> ctx;
    ctx.p = p;
    ctx.q = rpow(p, k);
    ctx.ap = ap;
    ctx.aphi = aphi;
    return ctx;
}

template <class R>
Matrix<R> xi_matrix(const IsotypicContext<R>& c) {
    const R a = c.aphi, s = c.pk_minus_1(), q = c.q, z(0);
    return {{a * a - s, -a * q, -a * q, c.p2k()}, {a, -s, -q, z}, {a, -q, -s, z}, {R(1), z, z, -s}};
}

// U x U in the basis (phi x phi, phi x V phi, V phi x phi, V phi x V phi), rows are images.
template <class R>
Matrix<R> u_times_u_matrix(const IsotypicContext<R>& c) {
    Matrix<R> row_form = {{c.aphi, -c.q}, {R(1), R(0)}};
    return kronecker(row_form, row_form);
}

template <class R>
struct PullbackCoordinates {
    R A, B, C, D;
    friend bool operator==(const PullbackCoordinates& x, const PullbackCoordinates& y) {
        return x.A == y.A && x.B == y.B && x.C == y.C && x.D == y.D;
    }
    std::vector<R> as_vector() const { return {A, B, C, D}; }
};

// Right side of the (U x U - p^{k-1}) relation projected to the phi-isotypic span, with the phi x phi coordinate 1.
template <class R>
std::vector<R> pullback_relation_rhs(const IsotypicContext<R>& c) {
    const R a = c.aphi, q = c.q;
    const R lead = q - c.pk_minus_1() + c.ap;
    return {lead * a * a - q * (c.pk_minus_1() + c.ap), -lead * a * q, -lead * a * q,
            lead * c.p2k() + c.p3k_minus_1()};
}

enum class CoordinateMode { closedform, solve };

template <class R>
PullbackCoordinates<R> pullback_U_coordinates(const IsotypicContext<R>& c, CoordinateMode mode) {
    if (mode == CoordinateMode::solve) {
        auto x = bareiss_solve_left(xi_matrix(c), pullback_relation_rhs(c));
        return {x[0], x[1], x[2], x[3]};
    }
    const R one(1), p = c.p, q = c.q, s = c.pk_minus_1(), a2 = c.aphi * c.aphi;
    const R den = a2 - s * (p + one) * (p + one);
    if (is_zero(den)) throw SingularSystem("a_phi^2 = p^(k-1)(p+1)^2");
    const R A = ((s * (p - one) + c.ap) * a2 - q * (p + one) * (s * (p + one) + c.ap)) / den;
    const R B = (p * c.aphi / (p + one)) * (q - s + c.ap - A);
    const R D = -c.pk_plus_1() * (q + c.ap - A);
    return {A, B, B, D};
}

template <class R>
PullbackCoordinates<R> stabilized_pullback_coordinates(const IsotypicContext<R>& c) {
    const R& beta = c.need(c.beta_f, "beta_f");
    const R one(1), p = c.p, q = c.q, a2 = c.aphi * c.aphi;
    const R den = a2 - c.pk_minus_1() * (p + one) * (p + one);
    if (is_zero(den)) throw SingularSystem("a_phi^2 = p^(k-1)(p+1)^2");
    const R A = (a2 - (q + beta) * (p + one)) / den;
    const R B = (p * c.aphi / (p + one)) * (one - A);
    const R D = c.pk_plus_1() * (A - one) - p * beta;
    return {A, B, B, D};
}

// Differences (alpha_f - p^{k-1}) X_alpha - (X - shift) for the four coordinates; all vanish.
template <class R>
std::vector<R> stabilized_transfer_residuals(const IsotypicContext<R>& c) {
    const R& alpha = c.need(c.alpha_f, "alpha_f");
    const R& beta = c.need(c.beta_f, "beta_f");
    const auto plain = pullback_U_coordinates(c, CoordinateMode::closedform);
    const auto stab = stabilized_pullback_coordinates(c);
    const R d = alpha - c.pk_minus_1();
    return {d * stab.A - (plain.A - (c.q + beta)), d * stab.B - plain.B, d * stab.C - plain.C,
            d * stab.D - (plain.D + beta * c.q)};
}

template <class R>
Matrix<R> oldspace_change_of_basis(const R& alpha, const R& beta) {
    if (alpha == beta) throw DegenerateRoots("alpha = beta");
    const R s = inverse(alpha - beta);
    Matrix<R> base = {{s * alpha, s}, {-s * beta, -s}};
    return kronecker(base, base);
}

template <class R>
R ordinary_coefficient_formula(const IsotypicContext<R>& c) {
    const R& af = c.need(c.alpha_phi, "alpha_phi");
    const R& bf = c.need(c.beta_phi, "beta_phi");
    const R& beta = c.need(c.beta_f, "beta_f");
    if (af == bf) throw DegenerateRoots("alpha_phi = beta_phi");
    const R one(1);
    const R adjoint = (one - bf / af) * (one - bf / (c.p * af));
    if (is_zero(adjoint)) throw ZeroEulerFactor("adjoint Euler factor vanishes");
    return (one - beta / c.q) * (one - beta * bf / af / c.q) / adjoint;
}

template <class R>
R ordinary_coefficient_change_of_basis_direct(const IsotypicContext<R>& c) {
    const R& af = c.need(c.alpha_phi, "alpha_phi");
    const R& bf = c.need(c.beta_phi, "beta_phi");
    const R& beta = c.need(c.beta_f, "beta_f");
    const auto stab = stabilized_pullback_coordinates(c);
    const R scale = R(1) - beta / c.q;
    const std::vector<R> w = {scale * stab.A, scale * stab.B, scale * stab.C, scale * stab.D};
    const Matrix<R> m = oldspace_change_of_basis(af, bf);
    R out(0);
    for (std::size_t j = 0; j < 4; ++j) out = out + m[0][j] * w[j];
    return out;
}

inline const RationalFunction& ordinary_coefficient_change_of_basis_symbolic() {
    static const RationalFunction value = ordinary_coefficient_change_of_basis_direct(symbolic_isotypic_ordinary());
    return value;
}

enum class OrdinaryPath { formula, change_of_basis };

template <class R>
R ordinary_projection_coefficient(const IsotypicContext<R>& c, OrdinaryPath path = OrdinaryPath::formula) {
    if (path == OrdinaryPath::formula) return ordinary_coefficient_formula(c);
    if constexpr (std::is_same_v<R, Rational>) {
        const Rational& af = c.need(c.alpha_phi, "alpha_phi");
        const Rational& bf = c.need(c.beta_phi, "beta_phi");
        if (af == bf) throw DegenerateRoots("alpha_phi = beta_phi");
        if (af * bf != c.q) throw ConstraintViolated("alpha_phi * beta_phi != p^k");
        const Rational adjoint = (1 - bf / af) * (1 - bf / (c.p * af));
        if (is_zero(adjoint)) throw ZeroEulerFactor("adjoint Euler factor vanishes");
        return evaluate(ordinary_coefficient_change_of_basis_symbolic(),
                        {{"alpha_phi", af}, {"beta_f", c.need(c.beta_f, "beta_f")}, {"p", c.p}, {"q", c.q}});
    } else {
        return ordinary_coefficient_change_of_basis_direct(c);
    }
}

inline IsotypicContext<Rational> numeric_ordinary_context(long p, int k, const Rational& alpha_phi,
                                                          const Rational& beta_phi, const Rational& beta_f) {
    IsotypicContext<Rational> c;
    c.p = p;
    c.q = rpow(p, k);
    c.alpha_phi = alpha_phi;
    c.beta_phi = beta_phi;
    c.aphi = alpha_phi + beta_phi;
    c.beta_f = beta_f;
    c.alpha_f = rpow(p, 2 * k - 1) / beta_f;
    c.ap = *c.alpha_f + beta_f;
    return c;
}

}  // namespace qexact
