#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <unordered_map>

#include "qexact/arith.hpp"
#include "qexact/linalg.hpp"
#include "qexact/qseries.hpp"
#include "qexact/ratfun.hpp"

namespace qexact {

// Element a + b*theta of Q[theta]/(theta^2 - t*theta + n), the splitting ring of a Hecke polynomial.
class RootPairElement {
public:
    struct Modulus {
        Rational trace, norm;
    };

    RootPairElement() = default;
    RootPairElement(long c) : a_(c) {}
    RootPairElement(const Rational& c) : a_(c) {}
    RootPairElement(Rational a, Rational b, std::shared_ptr<const Modulus> mod)
        : a_(std::move(a)), b_(std::move(b)), mod_(std::move(mod)) {}

    static RootPairElement theta(const Rational& trace, const Rational& norm) {
        return {0, 1, std::make_shared<const Modulus>(Modulus{trace, norm})};
    }

    const Rational& rational_part() const { return a_; }
    const Rational& theta_part() const { return b_; }

    friend RootPairElement operator+(const RootPairElement& x, const RootPairElement& y) {
        return {x.a_ + y.a_, x.b_ + y.b_, common(x, y)};
    }
    friend RootPairElement operator-(const RootPairElement& x, const RootPairElement& y) {
        return {x.a_ - y.a_, x.b_ - y.b_, common(x, y)};
    }
    friend RootPairElement operator-(const RootPairElement& x) { return {-x.a_, -x.b_, x.mod_}; }
    friend RootPairElement operator*(const RootPairElement& x, const RootPairElement& y) {
        auto mod = common(x, y);
        Rational bb = x.b_ * y.b_;
        if (sgn(bb) == 0) return {x.a_ * y.a_, x.a_ * y.b_ + x.b_ * y.a_, mod};
        return {x.a_ * y.a_ - bb * mod->norm, x.a_ * y.b_ + x.b_ * y.a_ + bb * mod->trace, mod};
    }
    friend RootPairElement operator/(const RootPairElement& x, const RootPairElement& y) {
        return x * y.inverse();
    }
    friend bool operator==(const RootPairElement& x, const RootPairElement& y) {
        return x.a_ == y.a_ && x.b_ == y.b_;
    }

    RootPairElement conjugate() const {
        if (!mod_) return *this;
        return {a_ + b_ * mod_->trace, -b_, mod_};
    }
    Rational norm() const {
        if (!mod_ || sgn(b_) == 0) return a_ * a_;
        return a_ * a_ + a_ * b_ * mod_->trace + b_ * b_ * mod_->norm;
    }
    RootPairElement inverse() const {
        Rational n = norm();
        if (sgn(n) == 0) throw NotInvertible("zero divisor in the root-pair ring");
        RootPairElement c = conjugate();
        return {c.a_ / n, c.b_ / n, mod_};
    }

    std::string str() const {
        if (sgn(b_) == 0) return a_.get_str();
        return a_.get_str() + (sgn(b_) > 0 ? " + " : " - ") + Rational(abs(b_)).get_str() + "*theta";
    }

private:
    static std::shared_ptr<const Modulus> common(const RootPairElement& x, const RootPairElement& y) {
        if (x.mod_ && y.mod_ && x.mod_ != y.mod_ &&
            (x.mod_->trace != y.mod_->trace || x.mod_->norm != y.mod_->norm))
            throw ShapeMismatch("root-pair elements from different rings");
        return x.mod_ ? x.mod_ : y.mod_;
    }

    Rational a_, b_;
    std::shared_ptr<const Modulus> mod_;
};

inline bool is_zero(const RootPairElement& x) { return sgn(x.rational_part()) == 0 && sgn(x.theta_part()) == 0; }
inline RootPairElement inverse(const RootPairElement& x) { return x.inverse(); }
inline std::string to_string(const RootPairElement& x) { return x.str(); }

template <class R>
struct HeckeLocalData {
    long p = 3;
    int w = 2;
    R ap{};
    std::optional<R> alpha, beta;

    R norm() const { return R(rpow(p, w - 1)); }
    R scalar(long base, long e) const { return R(rpow(base, e)); }

    const R& alpha_or_throw() const {
        if (!alpha) throw ConstraintViolated("root alpha not supplied");
        return *alpha;
    }
    const R& beta_or_throw() const {
        if (!beta) throw ConstraintViolated("root beta not supplied");
        return *beta;
    }

    void validate() const {
        if (p < 3 || !is_prime(p)) throw BadParams("p must be an odd prime");
        if (alpha.has_value() != beta.has_value()) throw ConstraintViolated("roots must be supplied in pairs");
        if (alpha) {
            if (!(*alpha + *beta == ap)) throw ConstraintViolated("alpha + beta != a_p");
            if (!(*alpha * *beta == norm())) throw ConstraintViolated("alpha * beta != p^(w-1)");
        }
    }
};

inline HeckeLocalData<Rational> local_from_beta(long p, int w, const Rational& beta) {
    if (is_zero(beta)) throw NotInvertible("beta must be nonzero to determine alpha");
    HeckeLocalData<Rational> d;
    d.p = p;
    d.w = w;
    d.beta = beta;
    d.alpha = rpow(p, w - 1) / beta;
    d.ap = *d.alpha + *d.beta;
    d.validate();
    return d;
}

inline HeckeLocalData<Rational> local_from_ap(long p, int w, const Rational& ap) {
    HeckeLocalData<Rational> d;
    d.p = p;
    d.w = w;
    d.ap = ap;
    d.validate();
    return d;
}

inline HeckeLocalData<RootPairElement> local_root_pair(long p, int w, const Rational& ap) {
    HeckeLocalData<RootPairElement> d;
    d.p = p;
    d.w = w;
    d.ap = RootPairElement(ap);
    d.alpha = RootPairElement::theta(ap, rpow(p, w - 1));
    d.beta = d.ap - *d.alpha;
    d.validate();
    return d;
}

// Roots as indeterminates: alpha is free and beta = p^(w-1)/alpha.
inline HeckeLocalData<RationalFunction> local_symbolic(long p, int w, const std::string& alpha_name = "alpha") {
    HeckeLocalData<RationalFunction> d;
    d.p = p;
    d.w = w;
    d.alpha = RationalFunction::variable(alpha_name);
    d.beta = RationalFunction(rpow(p, w - 1)) / *d.alpha;
    d.ap = *d.alpha + *d.beta;
    d.validate();
    return d;
}

enum class ClassicalKind { U, V, Tp };
enum class HalfIntKind { U2, V2, T2, twist };
enum class SiegelKind { U, V, twist };
enum class BivariateKind { UxU, VxV };
enum class Root { alpha, beta };
enum class StabilizeRoute { operator_route, closedform };

template <class R>
ClassicalSeries<R> classical_hecke(const ClassicalSeries<R>& s, const HeckeLocalData<R>& local, ClassicalKind kind) {
    const long p = local.p;
    if (kind == ClassicalKind::V) {
        ClassicalSeries<R> out(s.bound() * p);
        for (const auto& [n, c] : s.coeffs()) out.set(n * p, c);
        return out;
    }
    if (s.bound() < p) throw OutOfBound("series bound below p");
    ClassicalSeries<R> out(s.bound() / p);
    const R norm = local.norm();
    for (long n = 1; n <= out.bound(); ++n) {
        R value = s.coefficient(p * n);
        if (kind == ClassicalKind::Tp && n % p == 0) value = value + norm * s.coefficient(n / p);
        out.set(n, value);
    }
    return out;
}

template <class R>
ClassicalSeries<R> stabilize_classical(const ClassicalSeries<R>& s, const HeckeLocalData<R>& local, Root root) {
    if (s.bound() < 1) throw ShapeMismatch("empty series");
    const R& other = root == Root::alpha ? local.beta_or_throw() : local.alpha_or_throw();
    ClassicalSeries<R> out(s.bound());
    for (long n = 1; n <= s.bound(); ++n) {
        R value = s.coefficient(n);
        if (n % local.p == 0) value = value - other * s.coefficient(n / local.p);
        out.set(n, value);
    }
    return out;
}

// ((-1)^k n / p)
inline int twisted_symbol(int k, long n, long p) { return legendre((k % 2 ? -1 : 1) * n, p); }

template <class R>
HalfIntegralSeries<R> halfint_hecke(const HalfIntegralSeries<R>& s, const HeckeLocalData<R>& local, HalfIntKind kind) {
    const long p = local.p, p2 = p * p;
    const int k = s.k();
    switch (kind) {
        case HalfIntKind::V2: {
            HalfIntegralSeries<R> out(k, s.bound() * p2);
            for (const auto& [n, c] : s.coeffs()) out.set(n * p2, c);
            return out;
        }
        case HalfIntKind::twist: {
            HalfIntegralSeries<R> out(k, s.bound());
            for (const auto& [n, c] : s.coeffs()) {
                int e = legendre(n, p);
                if (e) out.set(n, R(e) * c);
            }
            return out;
        }
        default:
            break;
    }
    if (s.bound() < p2) throw OutOfBound("series bound below p^2");
    HalfIntegralSeries<R> out(k, s.bound() / p2);
    const R big = R(rpow(p, 2 * k - 1)), small = R(rpow(p, k - 1));
    for (long n = 1; n <= out.bound(); ++n) {
        R value = s.coefficient(p2 * n);
        if (kind == HalfIntKind::T2) {
            if (n % p2 == 0) value = value + big * s.coefficient(n / p2);
            int chi = twisted_symbol(k, n, p);
            if (chi) value = value + R(chi) * small * s.coefficient(n);
        }
        out.set(n, value);
    }
    return out;
}

template <class R>
void require_halfint_eigen(const HalfIntegralSeries<R>& s, const HeckeLocalData<R>& local) {
    const long p2 = local.p * local.p;
    if (s.bound() < p2) return;
    HalfIntegralSeries<R> t = halfint_hecke(s, local, HalfIntKind::T2);
    for (long n = 1; n <= t.bound(); ++n)
        if (!(t.coefficient(n) == local.ap * s.coefficient(n)))
            throw NotEigenFamily("T_{p^2} relation fails at index " + std::to_string(n * p2));
}

template <class R>
HalfIntegralSeries<R> stabilize_halfint(const HalfIntegralSeries<R>& s, const HeckeLocalData<R>& local,
                                        StabilizeRoute route) {
    require_halfint_eigen(s, local);
    const R& alpha = local.alpha_or_throw();
    const R& beta = local.beta_or_throw();
    const long p = local.p, p2 = p * p;
    if (route == StabilizeRoute::operator_route) {
        HalfIntegralSeries<R> u = halfint_hecke(s, local, HalfIntKind::U2);
        const R inv_alpha = inverse(alpha);
        HalfIntegralSeries<R> out(s.k(), u.bound());
        for (long n = 1; n <= u.bound(); ++n) out.set(n, inv_alpha * (u.coefficient(n) - beta * s.coefficient(n)));
        return out;
    }
    const R twist_scale = R(quadratic_sign(p)) * R(rpow(p, -s.k())) * beta;
    HalfIntegralSeries<R> out(s.k(), s.bound());
    for (long n = 1; n <= s.bound(); ++n) {
        R value = s.coefficient(n);
        int e = legendre(n, p);
        if (e) value = value - twist_scale * R(e) * s.coefficient(n);
        if (n % p2 == 0) value = value - beta * s.coefficient(n / p2);
        out.set(n, value);
    }
    return out;
}

template <class R>
SiegelView<R> siegel_U(const SiegelView<R>& v, long p) {
    return {[v, p](const SiegelKey& b) { return v(SiegelKey{p * b.n, p * b.r, p * b.m}); }, v.box.divided(p)};
}

template <class R>
SiegelView<R> siegel_V(const SiegelView<R>& v, long p) {
    return {[v, p](const SiegelKey& b) {
                if (b.n % p || b.r % p || b.m % p) return R(0);
                return v(SiegelKey{b.n / p, b.r / p, b.m / p});
            },
            v.box.times(p)};
}

template <class R>
SiegelView<R> siegel_twist(const SiegelView<R>& v, long p) {
    return {[v, p](const SiegelKey& b) {
                int e = legendre(b.det(), p);
                return e ? R(e) * v(b) : R(0);
            },
            v.box};
}

template <class R>
SiegelSeries<R> siegel_hecke(const SiegelSeries<R>& s, long p, SiegelKind kind) {
    SiegelView<R> view = as_view(s);
    switch (kind) {
        case SiegelKind::U:
            if (s.box().n_max < p || s.box().m_max < p) throw OutOfBound("box below p");
            view = siegel_U(view, p);
            break;
        case SiegelKind::V:
            view = siegel_V(view, p);
            break;
        case SiegelKind::twist:
            view = siegel_twist(view, p);
            break;
    }
    return materialize(view, view.box);
}

template <class R>
BivariateView<R> bivariate_UU(const BivariateView<R>& v, long p) {
    return {[v, p](long n, long m) { return v(p * n, p * m); }, v.box.divided(p)};
}

template <class R>
BivariateView<R> bivariate_VV(const BivariateView<R>& v, long p) {
    return {[v, p](long n, long m) { return (n % p || m % p) ? R(0) : v(n / p, m / p); }, v.box.times(p)};
}

template <class R>
BivariateSeries<R> bivariate_hecke(const BivariateSeries<R>& s, long p, BivariateKind kind) {
    BivariateView<R> view = as_view(s);
    if (kind == BivariateKind::UxU) {
        if (s.box().n_max < p || s.box().m_max < p) throw OutOfBound("box below p");
        view = bivariate_UU(view, p);
    } else {
        view = bivariate_VV(view, p);
    }
    return materialize(view, view.box);
}

template <class R>
ClassicalSeries<R> classical_eigen_coeffs(const std::map<long, R>& eigenvalues, int w, long bound) {
    for (long q : primes_up_to(bound))
        if (!eigenvalues.count(q)) throw MissingEigenvalue("no eigenvalue for prime " + std::to_string(q));
    std::map<std::pair<long, int>, R> prime_powers;
    auto power_coeff = [&](long q, int r) {
        R prev(1), cur = eigenvalues.at(q);
        if (r == 0) return prev;
        const R norm = R(rpow(q, w - 1));
        for (int i = 1; i < r; ++i) {
            R next = eigenvalues.at(q) * cur - norm * prev;
            prev = cur;
            cur = next;
        }
        return cur;
    };
    ClassicalSeries<R> out(bound);
    for (long n = 1; n <= bound; ++n) {
        R value(1);
        for (const auto& [q, r] : factorize(n)) {
            auto key = std::make_pair(q, r);
            auto it = prime_powers.find(key);
            if (it == prime_powers.end()) it = prime_powers.emplace(key, power_coeff(q, r)).first;
            value = value * it->second;
        }
        out.set(n, value);
    }
    return out;
}

// U acting on the ordered pair (phi, V phi) for weight k+1; columns are images.
template <class R>
Matrix<R> u_action_matrix(const HeckeLocalData<R>& local_phi) {
    return {{local_phi.ap, R(1)}, {-local_phi.norm(), R(0)}};
}

inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

inline constexpr const char* kGeneratorName = "splitmix64";

inline int primitive_draw(std::uint64_t seed, long n) {
    std::uint64_t h = splitmix64(splitmix64(seed) ^ static_cast<std::uint64_t>(n));
    int v = static_cast<int>(h % 18);
    return v < 9 ? v - 9 : v - 8;
}

template <class R>
class HalfIntegralFamily {
public:
    HalfIntegralFamily(HeckeLocalData<R> local, long bound, std::optional<std::uint64_t> seed,
                       std::map<long, R> explicit_values = {})
        : state_(std::make_shared<State>()) {
        local.validate();
        if (local.w % 2) throw BadParams("half-integral families need even w = 2k");
        state_->local = std::move(local);
        state_->k = state_->local.w / 2;
        state_->bound = bound;
        state_->seed = seed;
        state_->explicit_values = std::move(explicit_values);
        const long p = state_->local.p;
        state_->small = R(rpow(p, state_->k - 1));
        state_->big = R(rpow(p, 2 * state_->k - 1));
        for (const auto& [n, c] : state_->explicit_values) {
            if (n < 1 || n > bound) throw SchemaError("family index " + std::to_string(n) + " outside 1..bound");
            if (!is_zero(c) && !plus_space_check(state_->k, n))
                throw PlusSpaceViolation("nonzero coefficient at " + std::to_string(n) + " off the plus space");
        }
    }

    const HeckeLocalData<R>& local() const { return state_->local; }
    int k() const { return state_->k; }
    long bound() const { return state_->bound; }
    std::optional<std::uint64_t> seed() const { return state_->seed; }
    const std::map<long, R>& explicit_values() const { return state_->explicit_values; }

    bool is_primitive_index(long n) const {
        const long p2 = state_->local.p * state_->local.p;
        return n % p2 != 0;
    }

    R primitive(long n) const {
        auto it = state_->explicit_values.find(n);
        if (it != state_->explicit_values.end()) return it->second;
        if (!state_->seed || !plus_space_check(state_->k, n)) return R(0);
        return R(primitive_draw(*state_->seed, n));
    }

    R coefficient(long n) const {
        if (n < 1 || n > state_->bound)
            throw OutOfBound("family index " + std::to_string(n) + " exceeds bound " + std::to_string(state_->bound));
        return value(n);
    }

    HalfIntSource<R> as_source() const {
        auto self = *this;
        return {[self](long n) { return self.coefficient(n); }, state_->bound, state_->k};
    }

    HalfIntegralSeries<R> to_series(long bound) const { return materialize(as_source(), bound); }

    // Primitive entries of the generating data, for serialization.
    std::map<long, R> primitive_table() const {
        std::map<long, R> out;
        for (long n = 1; n <= state_->bound; ++n) {
            if (!is_primitive_index(n) && !state_->explicit_values.count(n)) continue;
            R c = primitive(n);
            if (!is_zero(c)) out.emplace(n, c);
        }
        return out;
    }

private:
    struct State {
        HeckeLocalData<R> local;
        int k = 1;
        long bound = 0;
        std::optional<std::uint64_t> seed;
        std::map<long, R> explicit_values;
        R small, big;
        std::mutex mutex;
        std::unordered_map<long, R> cache;
    };

    R value(long n) const {
        if (is_primitive_index(n) || state_->explicit_values.count(n)) return primitive(n);
        {
            std::lock_guard<std::mutex> lock(state_->mutex);
            auto it = state_->cache.find(n);
            if (it != state_->cache.end()) return it->second;
        }
        const long p = state_->local.p, p2 = p * p;
        const long lower = n / p2;
        int chi = twisted_symbol(state_->k, lower, p);
        R result = (state_->local.ap - R(chi) * state_->small) * value(lower);
        if (lower % p2 == 0) result = result - state_->big * value(lower / p2);
        std::lock_guard<std::mutex> lock(state_->mutex);
        state_->cache.emplace(n, result);
        return result;
    }

    std::shared_ptr<State> state_;
};

template <class R>
HalfIntegralFamily<R> halfint_family(const HeckeLocalData<R>& local, std::uint64_t seed, long bound) {
    if (local.w % 2 || (local.w / 2) % 2 == 0) throw BadParams("k must be odd");
    if (bound < 1) throw BadParams("bound must be positive");
    return HalfIntegralFamily<R>(local, bound, seed);
}

// Alters one coefficient of a source without re-deriving the others.
template <class R>
HalfIntSource<R> perturb_source(const HalfIntSource<R>& src, long index, const R& delta) {
    return {[src, index, delta](long n) { return n == index ? src(n) + delta : src(n); }, src.bound, src.k};
}

}  // namespace qexact
