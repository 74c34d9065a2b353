#pragma once

#include <numeric>

#include "qexact/heckeops.hpp"

namespace qexact {

template <class R>
struct SKLiftContext {
    long N = 1;
    int k = 1;
    HeckeLocalData<R> local;
    HalfIntSource<R> source;

    long p() const { return local.p; }

    void validate() const {
        local.validate();
        if (N < 1 || N % 2 == 0 || !is_squarefree(N)) throw BadParams("N must be odd and squarefree");
        if (k % 2 == 0 || k < 1) throw BadParams("k must be odd");
        if (local.w != 2 * k) throw BadParams("local data must have w = 2k");
        if (N % local.p == 0) throw BadParams("p must not divide N");
        if (source.k != k) throw ShapeMismatch("source weight differs from k");
    }
};

template <class R>
SKLiftContext<R> make_sk_context(const HalfIntegralFamily<R>& family, long N = 1) {
    SKLiftContext<R> ctx{N, family.k(), family.local(), family.as_source()};
    ctx.validate();
    return ctx;
}

enum class LiftLevel { N, Np };

// A(B) = sum over d | gcd(B), d coprime to the level, of d^k c(det(2B)/d^2).
template <class R>
SiegelView<R> sk_lift_view(const SKLiftContext<R>& ctx, LiftLevel level) {
    const long excluded = level == LiftLevel::N ? ctx.N : ctx.N * ctx.p();
    const int k = ctx.k;
    auto source = ctx.source;
    return {[source, excluded, k](const SiegelKey& b) {
                const long det = b.det();
                const long g = b.content();
                R total(0);
                for (long d = 1; d <= g; ++d) {
                    if (g % d || std::gcd(d, excluded) != 1) continue;
                    R term = source(det / (d * d));
                    if (is_zero(term)) continue;
                    total = total + (d == 1 ? term : R(rpow(d, k)) * term);
                }
                return total;
            },
            Box::unbounded()};
}

template <class R>
SiegelSeries<R> sk_lift(const SKLiftContext<R>& ctx, LiftLevel level, const Box& box) {
    return materialize(sk_lift_view(ctx, level), box);
}

template <class R>
SiegelView<R> scaled(const SiegelView<R>& v, const R& s) {
    return linear_combination<R>({{s, v}});
}

enum class SKRoute { operator_route, closedform, semiordinary };

template <class R>
SiegelView<R> sk_stabilize_view(const SKLiftContext<R>& ctx, SKRoute route) {
    const long p = ctx.p();
    const R& alpha = ctx.local.alpha_or_throw();
    const R& beta = ctx.local.beta_or_throw();
    const R inv_alpha = inverse(alpha);
    const R pk = R(rpow(p, ctx.k));
    switch (route) {
        case SKRoute::operator_route: {
            SiegelView<R> fp = sk_lift_view(ctx, LiftLevel::Np);
            return linear_combination<R>({{inv_alpha, siegel_U(fp, p)}, {-inv_alpha * beta, fp}});
        }
        case SKRoute::closedform: {
            SiegelView<R> f = sk_lift_view(ctx, LiftLevel::N);
            SiegelView<R> vf = siegel_V(f, p);
            SiegelView<R> vvf = siegel_V(vf, p);
            const R twist_scale = R(quadratic_sign(p)) * R(rpow(p, -ctx.k)) * beta;
            return linear_combination<R>({{R(1), f},
                                          {-(beta + pk), vf},
                                          {beta * pk, vvf},
                                          {-twist_scale, siegel_twist(f, p)}});
        }
        case SKRoute::semiordinary: {
            SiegelView<R> f = sk_lift_view(ctx, LiftLevel::N);
            SiegelView<R> uf = siegel_U(f, p);
            SiegelView<R> uuf = siegel_U(uf, p);
            const R s = inv_alpha * inv_alpha;
            return linear_combination<R>({{s, uuf}, {-s * (beta + pk), uf}, {s * beta * pk, f}});
        }
    }
    throw BadParams("unknown route");
}

template <class R>
SiegelSeries<R> sk_stabilize(const SKLiftContext<R>& ctx, const Box& box, SKRoute route) {
    return materialize(sk_stabilize_view(ctx, route), box);
}

// Coefficient source of the stabilised half-integral form, computed lazily from the family.
template <class R>
HalfIntSource<R> stabilized_source(const HalfIntSource<R>& src, const HeckeLocalData<R>& local) {
    const long p = local.p, p2 = p * p;
    const R beta = local.beta_or_throw();
    const R twist_scale = R(quadratic_sign(p)) * R(rpow(p, -src.k)) * beta;
    return {[src, beta, twist_scale, p, p2](long n) {
                R value = src(n);
                int e = legendre(n, p);
                if (e) value = value - twist_scale * R(e) * src(n);
                if (n % p2 == 0) value = value - beta * src(n / p2);
                return value;
            },
            src.bound, src.k};
}

template <class R>
SiegelView<R> uf_relation_view(const SKLiftContext<R>& ctx) {
    const long p = ctx.p();
    const int k = ctx.k;
    const R& ap = ctx.local.ap;
    SiegelView<R> f = sk_lift_view(ctx, LiftLevel::N);
    SiegelView<R> vf = siegel_V(f, p);
    const R pk = R(rpow(p, k));
    return linear_combination<R>({{R(1), siegel_U(f, p)},
                                  {-(pk + ap), f},
                                  {R(rpow(p, 2 * k - 1)) + pk * ap, vf},
                                  {-R(rpow(p, 3 * k - 1)), siegel_V(vf, p)},
                                  {R(quadratic_sign(p)) * R(rpow(p, k - 1)), siegel_twist(f, p)}});
}

template <class R>
SiegelSeries<R> uf_relation_residual(const SKLiftContext<R>& ctx, const Box& box) {
    return materialize(uf_relation_view(ctx), box);
}

}  // namespace qexact
