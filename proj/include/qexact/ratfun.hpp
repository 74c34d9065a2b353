#pragma once

#include <cstdint>
#include <map>
#include <random>
#include <string>

#include "qexact/multipoly.hpp"

namespace qexact {

class RationalFunction {
public:
    RationalFunction() : den_(1) {}
    RationalFunction(long c) : num_(c), den_(1) {}
    RationalFunction(const Rational& c) : num_(c), den_(1) {}
    RationalFunction(const MultiPoly& p) : num_(p.pruned()), den_(1) {}
    RationalFunction(const MultiPoly& num, const MultiPoly& den) : num_(num), den_(den) { normalize(); }

    static RationalFunction variable(const std::string& name) { return MultiPoly::variable(name); }

    const MultiPoly& num() const { return num_; }
    const MultiPoly& den() const { return den_; }
    bool is_zero() const { return num_.is_zero(); }
    bool is_constant() const { return num_.is_constant() && den_.is_constant(); }
    Rational constant_value() const {
        if (!is_constant()) throw SchemaError("rational function is not constant");
        return num_.constant_term() / den_.constant_term();
    }

    std::vector<std::string> vars() const { return MultiPoly::merged_vars(num_, den_); }

    friend RationalFunction operator+(const RationalFunction& a, const RationalFunction& b) {
        if (a.is_zero()) return b;
        if (b.is_zero()) return a;
        if (a.den_.is_constant() && b.den_.is_constant()) return polynomial(a.num_ + b.num_);
        if (a.den_ == b.den_) return {a.num_ + b.num_, a.den_};
        MultiPoly g = poly_gcd(a.den_, b.den_);
        MultiPoly da = poly_divide_exact(a.den_, g), db = poly_divide_exact(b.den_, g);
        return {a.num_ * db + b.num_ * da, a.den_ * db};
    }
    friend RationalFunction operator-(const RationalFunction& a) {
        RationalFunction r = a;
        r.num_ = -r.num_;
        return r;
    }
    friend RationalFunction operator-(const RationalFunction& a, const RationalFunction& b) { return a + (-b); }
    friend RationalFunction operator*(const RationalFunction& a, const RationalFunction& b) {
        if (a.is_zero() || b.is_zero()) return RationalFunction();
        if (a.den_.is_constant() && b.den_.is_constant()) return polynomial(a.num_ * b.num_);
        MultiPoly g1 = poly_gcd(a.num_, b.den_), g2 = poly_gcd(b.num_, a.den_);
        RationalFunction r;
        r.num_ = poly_divide_exact(a.num_, g1) * poly_divide_exact(b.num_, g2);
        r.den_ = poly_divide_exact(a.den_, g2) * poly_divide_exact(b.den_, g1);
        r.fix_sign_and_prune();
        return r;
    }
    friend RationalFunction operator/(const RationalFunction& a, const RationalFunction& b) {
        if (b.is_zero()) throw ZeroDenominator("division by the zero rational function");
        return a * b.inverse();
    }
    RationalFunction& operator+=(const RationalFunction& o) { return *this = *this + o; }
    RationalFunction& operator-=(const RationalFunction& o) { return *this = *this - o; }
    RationalFunction& operator*=(const RationalFunction& o) { return *this = *this * o; }
    RationalFunction& operator/=(const RationalFunction& o) { return *this = *this / o; }

    friend bool operator==(const RationalFunction& a, const RationalFunction& b) {
        return a.num_ == b.num_ && a.den_ == b.den_;
    }

    RationalFunction inverse() const {
        if (is_zero()) throw NotInvertible("zero rational function");
        RationalFunction r;
        r.num_ = den_;
        r.den_ = num_;
        r.fix_sign_and_prune();
        return r;
    }

    RationalFunction pow(long e) const {
        if (e < 0) return inverse().pow(-e);
        RationalFunction r;
        r.num_ = num_.pow(static_cast<unsigned>(e));
        r.den_ = den_.pow(static_cast<unsigned>(e));
        return r;
    }

    std::string str() const {
        if (den_.is_constant() && den_.constant_term() == 1) return num_.str();
        return "(" + num_.str() + ")/(" + den_.str() + ")";
    }

private:
    static RationalFunction polynomial(const MultiPoly& p) {
        RationalFunction r;
        r.num_ = p.pruned();
        return r;
    }

    void fix_sign_and_prune() {
        Rational lead = den_.leading_coefficient();
        if (lead != 1) {
            Rational s = Rational(1) / lead;
            num_ = s * num_;
            den_ = s * den_;
        }
        num_ = num_.pruned();
        den_ = den_.pruned();
    }

    void normalize() {
        if (den_.is_zero()) throw ZeroDenominator("rational function with zero denominator");
        if (num_.is_zero()) {
            num_ = MultiPoly();
            den_ = MultiPoly(1);
            return;
        }
        if (!den_.is_constant()) {
            MultiPoly g = poly_gcd(num_, den_);
            if (!g.is_constant()) {
                num_ = poly_divide_exact(num_, g);
                den_ = poly_divide_exact(den_, g);
            }
        }
        fix_sign_and_prune();
    }

    MultiPoly num_, den_;
};

inline bool is_zero(const RationalFunction& f) { return f.is_zero(); }
inline RationalFunction inverse(const RationalFunction& f) { return f.inverse(); }
inline std::string to_string(const RationalFunction& f) { return f.str(); }

inline RationalFunction ratfun_normalize(const MultiPoly& num, const MultiPoly& den) { return {num, den}; }

using Bindings = std::map<std::string, RationalFunction>;

inline RationalFunction substitute(const RationalFunction& f, const Bindings& bindings) {
    auto value_of = [&](const std::string& name) {
        auto it = bindings.find(name);
        return it == bindings.end() ? RationalFunction::variable(name) : it->second;
    };
    RationalFunction num = evaluate_poly<RationalFunction>(f.num(), value_of);
    RationalFunction den = evaluate_poly<RationalFunction>(f.den(), value_of);
    if (den.is_zero()) throw ZeroDenominatorAfterSubstitution("denominator vanishes after substitution");
    return num / den;
}

inline Rational evaluate(const RationalFunction& f, const std::map<std::string, Rational>& point) {
    auto value_of = [&](const std::string& name) {
        auto it = point.find(name);
        if (it == point.end()) throw SchemaError("no value for indeterminate " + name);
        return it->second;
    };
    Rational den = evaluate_poly<Rational>(f.den(), value_of);
    if (is_zero(den)) throw ZeroDenominator("denominator vanishes at the evaluation point");
    return evaluate_poly<Rational>(f.num(), value_of) / den;
}

enum class EqualityMode { canonical, random_eval };

inline bool ratfun_equal(const RationalFunction& f, const RationalFunction& g,
                         EqualityMode mode = EqualityMode::canonical, int samples = 8,
                         std::uint64_t seed = 0x5eed) {
    if (mode == EqualityMode::canonical) return f == g;
    std::vector<std::string> vars = MultiPoly::merged_vars(MultiPoly::from_terms(f.vars(), {}),
                                                           MultiPoly::from_terms(g.vars(), {}));
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<long> num_dist(-97, 97), den_dist(1, 31);
    int used = 0;
    for (int attempt = 0; attempt < 20 * samples && used < samples; ++attempt) {
        std::map<std::string, Rational> point;
        for (const auto& v : vars) point[v] = make_rational(num_dist(rng), den_dist(rng));
        try {
            if (evaluate(f, point) != evaluate(g, point)) return false;
            ++used;
        } catch (const ZeroDenominator&) {
        }
    }
    if (used == 0) throw ZeroDenominator("every sampled point is a pole");
    return true;
}

}  // namespace qexact
