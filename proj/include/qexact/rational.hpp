#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <regex>
#include <string>

#include "qexact/errors.hpp"

namespace qexact {

using Integer = mpz_class;
using Rational = mpq_class;

inline Rational make_rational(long num, long den = 1) {
    if (den == 0) throw ZeroDenominator("rational with zero denominator");
    Rational r(num, den);
    r.canonicalize();
    return r;
}

inline bool is_zero(const Rational& x) { return sgn(x) == 0; }

inline std::string to_string(const Rational& x) { return x.get_str(); }

inline Rational parse_rational(const std::string& text) {
    static const std::regex shape(R"(\s*([+-]?\d+)(\s*/\s*(\d+))?\s*)");
    std::smatch m;
    if (!std::regex_match(text, m, shape)) throw ParseError("not a rational: '" + text + "'");
    Integer num(m[1].str());
    Integer den(m[3].matched ? m[3].str() : std::string("1"));
    if (den == 0) throw ZeroDenominator("rational '" + text + "'");
    Rational r(num, den);
    r.canonicalize();
    return r;
}

inline Rational rational_pow(const Rational& base, long e) {
    if (e < 0) {
        if (is_zero(base)) throw ZeroDenominator("negative power of zero");
        return rational_pow(Rational(1) / base, -e);
    }
    Integer num, den;
    mpz_pow_ui(num.get_mpz_t(), base.get_num_mpz_t(), static_cast<unsigned long>(e));
    mpz_pow_ui(den.get_mpz_t(), base.get_den_mpz_t(), static_cast<unsigned long>(e));
    Rational r(num, den);
    r.canonicalize();
    return r;
}

inline Integer integer_pow(long base, long e) {
    Integer r;
    mpz_ui_pow_ui(r.get_mpz_t(), static_cast<unsigned long>(base < 0 ? -base : base),
                  static_cast<unsigned long>(e));
    if (base < 0 && (e % 2)) r = -r;
    return r;
}

inline Rational inverse(const Rational& x) {
    if (is_zero(x)) throw NotInvertible("zero rational");
    return Rational(1) / x;
}

class GaussianRational {
public:
    GaussianRational() = default;
    GaussianRational(Rational re, Rational im = 0) : re_(std::move(re)), im_(std::move(im)) {}
    GaussianRational(long re) : re_(re) {}

    static GaussianRational i() { return {0, 1}; }

    const Rational& re() const { return re_; }
    const Rational& im() const { return im_; }

    GaussianRational conj() const { return {re_, -im_}; }
    Rational norm() const { return re_ * re_ + im_ * im_; }

    friend GaussianRational operator+(const GaussianRational& a, const GaussianRational& b) {
        return {a.re_ + b.re_, a.im_ + b.im_};
    }
    friend GaussianRational operator-(const GaussianRational& a, const GaussianRational& b) {
        return {a.re_ - b.re_, a.im_ - b.im_};
    }
    friend GaussianRational operator-(const GaussianRational& a) { return {-a.re_, -a.im_}; }
    friend GaussianRational operator*(const GaussianRational& a, const GaussianRational& b) {
        return {a.re_ * b.re_ - a.im_ * b.im_, a.re_ * b.im_ + a.im_ * b.re_};
    }
    friend GaussianRational operator/(const GaussianRational& a, const GaussianRational& b) {
        Rational n = b.norm();
        if (sgn(n) == 0) throw ZeroDenominator("division by Gaussian zero");
        GaussianRational t = a * b.conj();
        return {t.re_ / n, t.im_ / n};
    }
    GaussianRational& operator+=(const GaussianRational& o) { return *this = *this + o; }
    GaussianRational& operator-=(const GaussianRational& o) { return *this = *this - o; }
    GaussianRational& operator*=(const GaussianRational& o) { return *this = *this * o; }
    friend bool operator==(const GaussianRational& a, const GaussianRational& b) {
        return a.re_ == b.re_ && a.im_ == b.im_;
    }

    GaussianRational pow(long e) const {
        if (e < 0) return (GaussianRational(1) / *this).pow(-e);
        GaussianRational result(1), base = *this;
        while (e) {
            if (e & 1) result *= base;
            base *= base;
            e >>= 1;
        }
        return result;
    }

private:
    Rational re_, im_;
};

inline bool is_zero(const GaussianRational& x) { return is_zero(x.re()) && is_zero(x.im()); }

inline GaussianRational inverse(const GaussianRational& x) {
    if (is_zero(x)) throw NotInvertible("zero Gaussian rational");
    return GaussianRational(1) / x;
}

inline std::string to_string(const GaussianRational& x) {
    if (is_zero(x.im())) return to_string(x.re());
    std::string im = to_string(x.im()) + "*i";
    if (is_zero(x.re())) return im;
    return to_string(x.re()) + (sgn(x.im()) > 0 ? " + " : " - ") +
           to_string(Rational(abs(x.im()))) + "*i";
}

}  // namespace qexact
