#pragma once

#include <cmath>
#include <complex>
#include <numbers>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "qexact/arith.hpp"
#include "qexact/errors.hpp"
#include "qexact/rational.hpp"

namespace qexact {

template <class R>
struct RootPair {
    R alpha;
    R beta;

    R sum() const { return alpha + beta; }
    R product() const { return alpha * beta; }
    RootPair swapped() const { return {beta, alpha}; }
};

// Polynomial in T with coefficients[i] the coefficient of T^i.
template <class R>
struct LocalFactor {
    std::vector<R> coefficients{R(1)};

    int degree() const { return static_cast<int>(coefficients.size()) - 1; }
    const R& operator[](std::size_t i) const { return coefficients.at(i); }

    // Multiplies by (1 - root * T).
    void absorb_root(const R& root) {
        coefficients.push_back(R(0));
        for (std::size_t i = coefficients.size() - 1; i > 0; --i)
            coefficients[i] = coefficients[i] - root * coefficients[i - 1];
    }

    LocalFactor rescaled(const R& c) const {
        LocalFactor out = *this;
        R power(1);
        for (auto& coeff : out.coefficients) {
            coeff = coeff * power;
            power = power * c;
        }
        return out;
    }

    friend LocalFactor operator*(const LocalFactor& a, const LocalFactor& b) {
        LocalFactor out;
        out.coefficients.assign(a.coefficients.size() + b.coefficients.size() - 1, R(0));
        for (std::size_t i = 0; i < a.coefficients.size(); ++i)
            for (std::size_t j = 0; j < b.coefficients.size(); ++j)
                out.coefficients[i + j] = out.coefficients[i + j] + a.coefficients[i] * b.coefficients[j];
        return out;
    }

    friend bool operator==(const LocalFactor& a, const LocalFactor& b) {
        std::size_t n = std::max(a.coefficients.size(), b.coefficients.size());
        for (std::size_t i = 0; i < n; ++i) {
            R x = i < a.coefficients.size() ? a.coefficients[i] : R(0);
            R y = i < b.coefficients.size() ? b.coefficients[i] : R(0);
            if (!(x == y)) return false;
        }
        return true;
    }
};

template <class R>
LocalFactor<R> factor_from_roots(const std::vector<R>& roots) {
    LocalFactor<R> out;
    for (const auto& r : roots) out.absorb_root(r);
    return out;
}

template <class R>
LocalFactor<R> standard_euler_factor(const RootPair<R>& f) {
    return factor_from_roots<R>({f.alpha, f.beta});
}

template <class R>
LocalFactor<R> adjoint_euler_factor(const RootPair<R>& f, const RootPair<R>& g) {
    if (is_zero(g.alpha) || is_zero(g.beta)) throw NotInvertible("roots of g must be invertible");
    const R up = g.alpha / g.beta, down = g.beta / g.alpha;
    return factor_from_roots<R>({f.alpha * up, f.alpha, f.alpha * down, f.beta * up, f.beta, f.beta * down});
}

template <class R>
LocalFactor<R> triple_euler_factor(const RootPair<R>& f, const RootPair<R>& g, const RootPair<R>& h) {
    std::vector<R> roots;
    for (const R& x : {f.alpha, f.beta})
        for (const R& y : {g.alpha, g.beta})
            for (const R& z : {h.alpha, h.beta}) roots.push_back(x * y * z);
    return factor_from_roots(roots);
}

// Degree 8 triple factor of (f, g, g) against the degree 2 factor of f times the adjoint factor, with T -> q^l T.
template <class R>
bool artin_local_factorization_check(const RootPair<R>& f, const RootPair<R>& g, const R& q_power) {
    if (!(g.product() == q_power)) throw HypothesisViolated("alpha_g * beta_g differs from q^l");
    LocalFactor<R> lhs = triple_euler_factor(f, g, g);
    LocalFactor<R> rhs = standard_euler_factor(f).rescaled(q_power) * adjoint_euler_factor(f, g).rescaled(q_power);
    return lhs == rhs;
}

template <class R>
bool artin_local_factorization_check(const RootPair<R>& f, const RootPair<R>& g, long q, int l) {
    return artin_local_factorization_check(f, g, R(rpow(q, l)));
}

enum class ModificationKind { adjoint_pair, gs, triple };

inline Rational power_of(const Rational& x, long e) { return rational_pow(x, e); }

template <class R>
R power_of(const R& x, long e) {
    return x.pow(e);
}

template <class R>
R one_minus(const R& num, const R& den) {
    if (is_zero(den)) throw ZeroDenominator("modification factor denominator vanishes");
    return R(1) - num / den;
}

// Returns (E°(f, Ad g), E(Ad g)).
template <class R>
std::pair<R, R> adjoint_pair_modification(const R& beta_f, const RootPair<R>& g, const R& p, const R& pk) {
    R circ = one_minus<R>(beta_f, pk) * one_minus<R>(beta_f * g.beta, g.alpha * pk);
    R adjoint = one_minus<R>(g.beta, g.alpha) * one_minus<R>(g.beta, p * g.alpha);
    return {circ, adjoint};
}

// psi_at_p = (psi omega^{1-s})(p), dual_at_p = (psi-bar omega^{s-1} chi_0)(p).
template <class R>
R gs_modification(const R& alpha_f, const R& p, long k, long s, const R& psi_at_p, const R& dual_at_p) {
    return one_minus<R>(psi_at_p * power_of(p, s - 1), alpha_f) * one_minus<R>(dual_at_p * power_of(p, 2 * k - 1 - s), alpha_f);
}

// Character trivialised at s = k: (1 - p^{k-1}/alpha_f)^2.
template <class R>
R gs_modification_trivialized(const R& alpha_f, const R& pk_minus_1) {
    R factor = one_minus<R>(pk_minus_1, alpha_f);
    return factor * factor;
}

template <class R>
R triple_modification(const RootPair<R>& f, const RootPair<R>& g, const RootPair<R>& h, const R& pc) {
    return one_minus<R>(f.alpha * g.beta * h.beta, pc) * one_minus<R>(f.beta * g.alpha * h.beta, pc) *
           one_minus<R>(f.beta * g.beta * h.alpha, pc) * one_minus<R>(f.beta * g.beta * h.beta, pc);
}

template <class R>
struct ModificationData {
    RootPair<R> f;
    RootPair<R> g;
    std::optional<RootPair<R>> h;
    R p;
    long k = 1;
};

template <class R>
std::vector<R> modification_factor(ModificationKind kind, const ModificationData<R>& data) {
    const R pk = power_of(data.p, data.k);
    switch (kind) {
        case ModificationKind::adjoint_pair: {
            auto [circ, adjoint] = adjoint_pair_modification<R>(data.f.beta, data.g, data.p, pk);
            return {circ, adjoint};
        }
        case ModificationKind::gs:
            return {gs_modification_trivialized<R>(data.f.alpha, power_of(data.p, data.k - 1))};
        case ModificationKind::triple:
            return {triple_modification<R>(data.f, data.g, data.h.value_or(data.g), pk * pk)};
    }
    throw BadParams("unknown modification kind");
}

// E(f,g,g)^2 - (1 - alpha_f/alpha_g^2)^2 E°(f, Ad g)^2 E(f, omega^{r0-1}, k), with c = 2k.
template <class R>
R factorization_identity_residual(const RootPair<R>& f, const RootPair<R>& g, const R& p, const R& pk) {
    R triple = triple_modification<R>(f, g, g, pk * pk);
    R circ = adjoint_pair_modification<R>(f.beta, g, p, pk).first;
    R lead = one_minus<R>(f.alpha, g.alpha * g.alpha);
    R gs = gs_modification_trivialized<R>(f.alpha, pk / p);
    return triple * triple - lead * lead * circ * circ * gs;
}

template <class R>
bool factorization_identity_check(const RootPair<R>& f, const RootPair<R>& g, const R& p, const R& pk) {
    if (!(g.product() == pk)) throw HypothesisViolated("alpha_g * beta_g differs from p^k");
    if (!(f.product() == pk * pk / p)) throw HypothesisViolated("alpha_f * beta_f differs from p^(2k-1)");
    return is_zero(factorization_identity_residual(f, g, p, pk));
}

template <class R>
bool factorization_identity_check(const RootPair<R>& f, const RootPair<R>& g, long p, int k) {
    return factorization_identity_check(f, g, R(Rational(p)), R(rpow(p, k)));
}

enum class ArchimedeanShape { below_k, at_least_k };

struct ArchimedeanData {
    ArchimedeanShape shape;
    std::string description;
    int sign;
    std::optional<double> value;
};

// Gamma_C(s) = 2 (2 pi)^{-s} Gamma(s).
inline double gamma_c(double s) {
    if (s <= 0 && std::floor(s) == s) throw PoleAtS("Gamma has a pole at " + std::to_string(s));
    return 2.0 * std::pow(2.0 * std::numbers::pi, -s) * std::tgamma(s);
}

inline ArchimedeanData archimedean_data(int k, int l, std::optional<double> s = std::nullopt) {
    if (k < 1 || l < 1 || k % 2 == 0 || l % 2 == 0) throw BadParams("k and l must be odd and positive");
    ArchimedeanData out;
    if (l < k) {
        out = {ArchimedeanShape::below_k, "Gamma_C(s) Gamma_C(s-2l) Gamma_C(s-l)^2", -1, std::nullopt};
        if (s) out.value = gamma_c(*s) * gamma_c(*s - 2 * l) * std::pow(gamma_c(*s - l), 2);
    } else {
        out = {ArchimedeanShape::at_least_k, "Gamma_C(s) Gamma_C(s+1-2k) Gamma_C(s-l)^2", +1, std::nullopt};
        if (s) out.value = gamma_c(*s) * gamma_c(*s + 1 - 2 * k) * std::pow(gamma_c(*s - l), 2);
    }
    return out;
}

struct LevelData {
    long N = 1;
    std::vector<long> primes;

    int nu() const { return static_cast<int>(primes.size()); }
    Integer one_plus_product() const {
        Integer out = 1;
        for (long q : primes) out *= (q + 1);
        return out;
    }
};

inline LevelData make_level(long N) {
    if (N < 1 || N % 2 == 0 || !is_squarefree(N)) throw BadParams("N must be odd, positive and squarefree");
    LevelData out{N, {}};
    for (const auto& [q, e] : factorize(N)) out.primes.push_back(q);
    return out;
}

// [x] is the least integer not below x.
inline long bracket_half(long k) { return k >= 0 ? (k + 1) / 2 : -((-k) / 2); }

inline int bracket_half_sign(long k) { return bracket_half(k) % 2 == 0 ? 1 : -1; }

inline GaussianRational i_power(long k) {
    switch (((k % 4) + 4) % 4) {
        case 0: return GaussianRational(1);
        case 1: return GaussianRational::i();
        case 2: return GaussianRational(-1);
        default: return -GaussianRational::i();
    }
}

struct NormalizationConstants {
    GaussianRational central_value;
    GaussianRational interpolation;
    GaussianRational factorization;
};

inline NormalizationConstants normalization_constants(const LevelData& level, long k) {
    if (k % 2 == 0) throw BadParams("k must be odd");
    Integer prod = level.one_plus_product();
    Rational level_part = Rational(prod * prod) / Rational(level.N);
    NormalizationConstants out;
    out.central_value = GaussianRational(rpow(2, k + 1) * level_part);
    out.interpolation = GaussianRational(Rational(bracket_half_sign(k)) * rpow(2, 2 * k) * level_part);
    out.factorization = -GaussianRational::i() * GaussianRational(rpow(2, 5 - 2 * k) * level_part);
    return out;
}

inline bool is_fundamental_discriminant(long d) {
    if (d == 1) return true;
    if (d == 0) return false;
    long r = ((d % 4) + 4) % 4;
    if (r == 1) return is_squarefree(std::labs(d));
    if (r != 0) return false;
    long m = d / 4;
    long mr = ((m % 4) + 4) % 4;
    return (mr == 2 || mr == 3) && is_squarefree(std::labs(m));
}

struct GaussSum {
    bool imaginary = false;
    long radicand = 1;

    std::complex<double> value() const {
        double root = std::sqrt(static_cast<double>(radicand));
        return imaginary ? std::complex<double>(0, root) : std::complex<double>(root, 0);
    }
    std::string str() const {
        long outside = 1, inside = radicand;
        for (long d = 2; d * d <= inside; ++d)
            while (inside % (d * d) == 0) {
                inside /= d * d;
                outside *= d;
            }
        std::string out = inside == 1 ? std::to_string(outside)
                                      : (outside == 1 ? "" : std::to_string(outside) + "*") + "sqrt(" +
                                            std::to_string(inside) + ")";
        if (!imaginary) return out;
        return out == "1" ? "i" : out + "*i";
    }
};

inline std::complex<double> gauss_sum_direct(long d) {
    const long n = std::labs(d);
    std::complex<double> total = 0;
    for (long a = 1; a <= n; ++a) {
        int chi = kronecker(d, a);
        if (chi) total += double(chi) * std::polar(1.0, 2.0 * std::numbers::pi * double(a) / double(n));
    }
    return total;
}

inline GaussSum quadratic_gauss_sum(long d) {
    if (!is_fundamental_discriminant(d)) throw NotFundamental(std::to_string(d) + " is not a fundamental discriminant");
    return {d < 0, std::labs(d)};
}

}  // namespace qexact
