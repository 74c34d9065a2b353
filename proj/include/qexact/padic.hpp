#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "qexact/arith.hpp"
#include "qexact/errors.hpp"
#include "qexact/qseries.hpp"
#include "qexact/ratfun.hpp"
#include "qexact/rational.hpp"

namespace qexact {

inline long padic_modulus(long p, int M) {
    if (p < 2 || M < 1) throw BadParams("p-adic precision needs p >= 2 and M >= 1");
    Integer mod = integer_pow(p, M);
    if (!mod.fits_slong_p() || mod > Integer(1L << 61)) throw BadParams("p^M exceeds the 61-bit residue range");
    return mod.get_si();
}

inline long mod_reduce(long x, long mod) { return ((x % mod) + mod) % mod; }

inline long mod_mul(long a, long b, long mod) {
    return static_cast<long>((static_cast<__int128>(a) * b) % mod);
}

class PadicInt {
public:
    PadicInt() = default;
    PadicInt(long value, long p, int M) : p_(p), M_(M), mod_(padic_modulus(p, M)), residue_(mod_reduce(value, mod_)) {}
    PadicInt(const Integer& value, long p, int M) : p_(p), M_(M), mod_(padic_modulus(p, M)) {
        Integer r = value % mod_;
        if (r < 0) r += mod_;
        residue_ = r.get_si();
    }

    long residue() const { return residue_; }
    long p() const { return p_; }
    int M() const { return M_; }
    long modulus() const { return mod_; }
    bool is_unit() const { return residue_ % p_ != 0; }

    friend PadicInt operator+(const PadicInt& a, const PadicInt& b) {
        a.require_same(b);
        return a.with(a.residue_ + b.residue_);
    }
    friend PadicInt operator-(const PadicInt& a, const PadicInt& b) {
        a.require_same(b);
        return a.with(a.residue_ - b.residue_);
    }
    friend PadicInt operator-(const PadicInt& a) { return a.with(-a.residue_); }
    friend PadicInt operator*(const PadicInt& a, const PadicInt& b) {
        a.require_same(b);
        return a.with(mod_mul(a.residue_, b.residue_, a.mod_));
    }
    friend bool operator==(const PadicInt& a, const PadicInt& b) {
        return a.p_ == b.p_ && a.M_ == b.M_ && a.residue_ == b.residue_;
    }

    PadicInt pow(const Integer& e) const {
        if (e < 0) return inverse().pow(-e);
        Integer r;
        Integer base = residue_;
        mpz_powm(r.get_mpz_t(), base.get_mpz_t(), e.get_mpz_t(), Integer(mod_).get_mpz_t());
        return with(r.get_si());
    }
    PadicInt pow(long e) const { return pow(Integer(e)); }

    PadicInt inverse() const {
        if (!is_unit()) throw NotAUnit(std::to_string(residue_) + " is not a unit mod " + std::to_string(p_));
        Integer r;
        mpz_invert(r.get_mpz_t(), Integer(residue_).get_mpz_t(), Integer(mod_).get_mpz_t());
        return with(r.get_si());
    }

    PadicInt with(long value) const {
        PadicInt out = *this;
        out.residue_ = mod_reduce(value, mod_);
        return out;
    }

    std::string str() const { return std::to_string(residue_) + " mod " + std::to_string(p_) + "^" + std::to_string(M_); }

private:
    void require_same(const PadicInt& o) const {
        if (p_ != o.p_ || M_ != o.M_) throw PrecisionMismatch("p-adic operands differ in p or precision");
    }

    long p_ = 2;
    int M_ = 1;
    long mod_ = 2;
    long residue_ = 0;
};

inline PadicInt teichmuller(long a, long p, int M) {
    if (mod_reduce(a, p) == 0) throw NotAUnit(std::to_string(a) + " is divisible by " + std::to_string(p));
    return PadicInt(a, p, M).pow(integer_pow(p, M - 1));
}

// Topological generator of 1 + pZ_p.
inline PadicInt gamma_generator(long p, int M) { return PadicInt(1 + p, p, M); }

inline PadicInt diamond(long d, long p, int M) { return PadicInt(d, p, M) * teichmuller(d, p, M).inverse(); }

// Exponent e mod p^{M-1} with (1+p)^e = <d> mod p^M.
inline long gamma_log_exponent(long d, long p, int M) {
    const PadicInt target = diamond(d, p, M);
    const PadicInt gamma = gamma_generator(p, M);
    long e = 0, place = 1;
    for (int level = 2; level <= M; ++level) {
        const long mod = padic_modulus(p, level);
        bool found = false;
        for (long digit = 0; digit < p; ++digit) {
            long candidate = e + digit * place;
            if (mod_reduce(gamma.pow(candidate).residue() - target.residue(), mod) == 0) {
                e = candidate;
                found = true;
                break;
            }
        }
        if (!found) throw NoConvergence("discrete logarithm lifting failed");
        place *= p;
    }
    return e;
}

struct PadicExponent {
    Integer value;
    std::optional<int> precision;

    static PadicExponent exact(const Integer& e) { return {e, std::nullopt}; }
};

inline PadicExponent gamma_log_exponent_for_series(long d, long p, int M, int D) {
    return {Integer(gamma_log_exponent(d, p, M + D + 1)), M + D};
}

class IwasawaElement {
public:
    IwasawaElement(long p, int M, int D) : p_(p), M_(M), D_(D), coeffs_(D, PadicInt(0, p, M)) {
        if (D < 1) throw BadParams("truncation degree must be positive");
    }
    IwasawaElement(long p, int M, int D, const std::vector<long>& residues) : IwasawaElement(p, M, D) {
        for (std::size_t j = 0; j < residues.size() && j < coeffs_.size(); ++j) coeffs_[j] = PadicInt(residues[j], p, M);
    }

    static IwasawaElement constant(const PadicInt& c, int D) {
        IwasawaElement out(c.p(), c.M(), D);
        out.coeffs_[0] = c;
        return out;
    }

    long p() const { return p_; }
    int M() const { return M_; }
    int D() const { return D_; }
    const PadicInt& operator[](int j) const { return coeffs_.at(j); }
    void set(int j, const PadicInt& c) { coeffs_.at(j) = c; }
    const std::vector<PadicInt>& coefficients() const { return coeffs_; }
    std::vector<long> residues() const {
        std::vector<long> out;
        for (const auto& c : coeffs_) out.push_back(c.residue());
        return out;
    }
    bool is_zero() const {
        for (const auto& c : coeffs_)
            if (c.residue()) return false;
        return true;
    }

    friend IwasawaElement operator+(const IwasawaElement& a, const IwasawaElement& b) {
        a.require_same(b);
        IwasawaElement out = a;
        for (int j = 0; j < a.D_; ++j) out.coeffs_[j] = a.coeffs_[j] + b.coeffs_[j];
        return out;
    }
    friend IwasawaElement operator-(const IwasawaElement& a, const IwasawaElement& b) {
        a.require_same(b);
        IwasawaElement out = a;
        for (int j = 0; j < a.D_; ++j) out.coeffs_[j] = a.coeffs_[j] - b.coeffs_[j];
        return out;
    }
    friend IwasawaElement operator*(const IwasawaElement& a, const IwasawaElement& b) {
        a.require_same(b);
        IwasawaElement out(a.p_, a.M_, a.D_);
        for (int i = 0; i < a.D_; ++i) {
            if (!a.coeffs_[i].residue()) continue;
            for (int j = 0; i + j < a.D_; ++j) out.coeffs_[i + j] = out.coeffs_[i + j] + a.coeffs_[i] * b.coeffs_[j];
        }
        return out;
    }
    friend IwasawaElement operator*(const PadicInt& s, const IwasawaElement& a) {
        IwasawaElement out = a;
        for (auto& c : out.coeffs_) c = s * c;
        return out;
    }
    friend bool operator==(const IwasawaElement& a, const IwasawaElement& b) {
        return a.p_ == b.p_ && a.M_ == b.M_ && a.D_ == b.D_ && a.coeffs_ == b.coeffs_;
    }

    std::string str() const {
        std::string out;
        for (int j = 0; j < D_; ++j) {
            if (!coeffs_[j].residue()) continue;
            if (!out.empty()) out += " + ";
            out += std::to_string(coeffs_[j].residue());
            if (j) out += j == 1 ? "*T" : "*T^" + std::to_string(j);
        }
        return out.empty() ? "0" : out;
    }

private:
    void require_same(const IwasawaElement& o) const {
        if (p_ != o.p_ || M_ != o.M_ || D_ != o.D_) throw PrecisionMismatch("Iwasawa operands differ in p, M or D");
    }

    long p_;
    int M_;
    int D_;
    std::vector<PadicInt> coeffs_;
};

// (1+T)^e truncated at T^D.
inline IwasawaElement group_like(const PadicExponent& e, long p, int M, int D) {
    if (e.precision && *e.precision < M + D)
        throw InsufficientExponentPrecision("exponent known mod p^" + std::to_string(*e.precision) + ", need p^" +
                                            std::to_string(M + D));
    IwasawaElement out(p, M, D);
    Integer binom;
    for (int j = 0; j < D; ++j) {
        mpz_bin_ui(binom.get_mpz_t(), e.value.get_mpz_t(), static_cast<unsigned long>(j));
        out.set(j, PadicInt(binom, p, M));
    }
    return out;
}

struct ClassicalPoint {
    long weight_index = 0;
    long p = 3;
};

inline PadicInt classical_point_eval(const IwasawaElement& x, const ClassicalPoint& pt) {
    if (pt.p != x.p()) throw PrecisionMismatch("classical point and element differ in p");
    if (pt.weight_index < 0) throw BadParams("weight index must be nonnegative");
    const PadicInt t = gamma_generator(x.p(), x.M()).pow(pt.weight_index) - PadicInt(1, x.p(), x.M());
    PadicInt acc(0, x.p(), x.M());
    for (int j = x.D() - 1; j >= 0; --j) acc = acc * t + x[j];
    return acc;
}

// T -> (1+T)^2 - 1.
inline IwasawaElement sigma_substitution(const IwasawaElement& x) {
    IwasawaElement image(x.p(), x.M(), x.D());
    image.set(0, PadicInt(0, x.p(), x.M()));
    if (x.D() > 1) image.set(1, PadicInt(2, x.p(), x.M()));
    if (x.D() > 2) image.set(2, PadicInt(1, x.p(), x.M()));
    IwasawaElement out(x.p(), x.M(), x.D());
    for (int j = x.D() - 1; j >= 0; --j) out = out * image + IwasawaElement::constant(x[j], x.D());
    return out;
}

using PadicMatrix = std::vector<std::vector<long>>;

inline PadicMatrix padic_matmul(const PadicMatrix& a, const PadicMatrix& b, long mod) {
    const std::size_t n = a.size();
    PadicMatrix out(n, std::vector<long>(n, 0));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t l = 0; l < n; ++l) {
            if (!a[i][l]) continue;
            for (std::size_t j = 0; j < n; ++j) out[i][j] = (out[i][j] + mod_mul(a[i][l], b[l][j], mod)) % mod;
        }
    return out;
}

inline PadicMatrix padic_matpow(PadicMatrix base, long e, long mod) {
    const std::size_t n = base.size();
    PadicMatrix result(n, std::vector<long>(n, 0));
    for (std::size_t i = 0; i < n; ++i) result[i][i] = 1 % mod;
    while (e > 0) {
        if (e & 1) result = padic_matmul(result, base, mod);
        base = padic_matmul(base, base, mod);
        e >>= 1;
    }
    return result;
}

inline PadicMatrix padic_reduce(PadicMatrix m, long mod) {
    for (auto& row : m)
        for (auto& x : row) x = mod_reduce(x, mod);
    return m;
}

// Least n with (p-1) p^{M-1} dividing n!.
inline int factorial_stage_for_units(long p, int M) {
    int n = 1;
    long valuation = 0;
    while (valuation < M - 1 || n < p - 1) {
        ++n;
        for (long m = n; m % p == 0; m /= p) ++valuation;
    }
    return n;
}

inline int ordinary_projector_stage_cap(long p, int M) { return std::max(M + 3, factorial_stage_for_units(p, M) + 1); }

struct ProjectorLimit {
    PadicMatrix matrix;
    int stages = 0;
};

// Iterates U^{n!} until two consecutive iterates agree and the iterate is idempotent.
inline ProjectorLimit ordinary_projector_limit(const PadicMatrix& u, long p, int M) {
    const long mod = padic_modulus(p, M);
    for (const auto& row : u)
        if (row.size() != u.size()) throw ShapeMismatch("U must be square");
    PadicMatrix current = padic_reduce(u, mod);
    const int cap = ordinary_projector_stage_cap(p, M);
    for (int n = 2; n <= cap; ++n) {
        PadicMatrix next = padic_matpow(current, n, mod);
        if (next == current && padic_matmul(next, next, mod) == next) return {next, n};
        current = std::move(next);
    }
    throw NoConvergence("U^{n!} did not stabilise within " + std::to_string(cap) + " stages");
}

// (U - beta)/(alpha - beta) for a 2x2 matrix with split eigenvalues.
inline PadicMatrix ordinary_projector_closed_form(const PadicMatrix& u, long alpha, long beta, long p, int M) {
    const long mod = padic_modulus(p, M);
    const PadicInt scale = PadicInt(alpha - beta, p, M).inverse();
    PadicMatrix out = padic_reduce(u, mod);
    for (std::size_t i = 0; i < out.size(); ++i) {
        out[i][i] = mod_reduce(out[i][i] - beta, mod);
        for (auto& x : out[i]) x = mod_mul(x, scale.residue(), mod);
    }
    return out;
}

struct LambdaContext {
    long p = 5;
    int M = 4;
    int D = 8;
    long r0 = 1;
    long N = 1;
};

// Sum over d | gcd(B), (d, Np) = 1, of omega(d)^{r0-1} d [<d>] c(det(2B)/d^2).
inline IwasawaElement lambda_adic_sk_coefficient(const std::map<long, IwasawaElement>& theta, const SiegelKey& key,
                                                 const LambdaContext& ctx) {
    siegel_index_check(key.n, key.r, key.m);
    const long det = key.det(), g = key.content();
    IwasawaElement total(ctx.p, ctx.M, ctx.D);
    for (long d = 1; d <= g; ++d) {
        if (g % d || std::gcd(d, ctx.N * ctx.p) != 1) continue;
        const long index = det / (d * d);
        auto it = theta.find(index);
        if (it == theta.end()) throw MissingThetaCoefficient("no theta coefficient at index " + std::to_string(index));
        const PadicInt scalar = teichmuller(d, ctx.p, ctx.M).pow(ctx.r0 - 1) * PadicInt(d, ctx.p, ctx.M);
        const IwasawaElement diamond_class =
            group_like(gamma_log_exponent_for_series(d, ctx.p, ctx.M, ctx.D), ctx.p, ctx.M, ctx.D);
        total = total + scalar * (diamond_class * it->second);
    }
    return total;
}

// Formal scalars of the interpolation formula: periods and Petersson values stay indeterminates.
struct InterpolationInputs {
    RationalFunction pairing;
    RationalFunction pullback_period;
};

inline RationalFunction interpolation_assemble(const InterpolationInputs& in) {
    return in.pairing * in.pullback_period * in.pullback_period;
}

inline InterpolationInputs rescale_theta(const InterpolationInputs& in, const RationalFunction& lambda) {
    if (lambda.is_zero()) throw NotInvertible("rescaling factor must be nonzero");
    return {in.pairing / (lambda * lambda), lambda * in.pullback_period};
}

// Omega * C(N,k)^{-1} * (E°/E_Ad)^2 * algebraic value.
inline RationalFunction interpolation_rhs(const RationalFunction& period, const Rational& level_constant,
                                          const RationalFunction& e_circ, const RationalFunction& e_adjoint,
                                          const RationalFunction& algebraic_value) {
    RationalFunction ratio = e_circ / e_adjoint;
    return period * RationalFunction(inverse(level_constant)) * ratio * ratio * algebraic_value;
}

struct ConstantChain {
    Rational theta_scale;
    Rational pairing_scale;
    Rational assembled;
    Rational expected;
};

// (sign 2^{-k})^2 from the Theta normalisation times sign 2^{k+1} from the pairing against 2^{1-k} sign.
inline ConstantChain interpolation_constant_chain(long k, int sign) {
    ConstantChain out;
    out.theta_scale = Rational(sign) * rpow(2, -k);
    out.pairing_scale = Rational(sign) * rpow(2, k + 1);
    out.assembled = out.theta_scale * out.theta_scale * out.pairing_scale;
    out.expected = Rational(sign) * rpow(2, 1 - k);
    return out;
}

}  // namespace qexact
