#pragma once

#include <algorithm>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "qexact/errors.hpp"
#include "qexact/rational.hpp"

namespace qexact {

namespace poly_detail {

using Exponents = std::vector<int>;
using Terms = std::map<Exponents, Rational>;

inline void accumulate(Terms& acc, const Exponents& e, const Rational& c) {
    if (is_zero(c)) return;
    auto [it, inserted] = acc.try_emplace(e, c);
    if (!inserted) {
        it->second += c;
        if (is_zero(it->second)) acc.erase(it);
    }
}

inline Terms add(const Terms& a, const Terms& b, const Rational& scale_b = 1) {
    Terms out = a;
    for (const auto& [e, c] : b) accumulate(out, e, c * scale_b);
    return out;
}

inline Terms scale(const Terms& a, const Rational& s) {
    if (is_zero(s)) return {};
    Terms out;
    for (const auto& [e, c] : a) out.emplace_hint(out.end(), e, c * s);
    return out;
}

inline Terms multiply(const Terms& a, const Terms& b) {
    Terms out;
    if (a.empty() || b.empty()) return out;
    const std::size_t n = a.begin()->first.size();
    Exponents e(n);
    for (const auto& [ea, ca] : a) {
        for (const auto& [eb, cb] : b) {
            for (std::size_t i = 0; i < n; ++i) e[i] = ea[i] + eb[i];
            accumulate(out, e, ca * cb);
        }
    }
    return out;
}

inline bool divides(const Exponents& small, const Exponents& big) {
    for (std::size_t i = 0; i < small.size(); ++i)
        if (small[i] > big[i]) return false;
    return true;
}

inline std::optional<Terms> try_divide(const Terms& a, const Terms& b) {
    if (b.empty()) throw ZeroDenominator("polynomial division by zero");
    Terms quotient, rest = a;
    const auto& [lead_e, lead_c] = *b.rbegin();
    const std::size_t n = lead_e.size();
    Exponents diff(n);
    while (!rest.empty()) {
        const auto& [re, rc] = *rest.rbegin();
        if (!divides(lead_e, re)) return std::nullopt;
        for (std::size_t i = 0; i < n; ++i) diff[i] = re[i] - lead_e[i];
        Rational t = rc / lead_c;
        quotient.emplace(diff, t);
        Exponents shifted(n);
        for (const auto& [be, bc] : b) {
            for (std::size_t i = 0; i < n; ++i) shifted[i] = be[i] + diff[i];
            accumulate(rest, shifted, -t * bc);
        }
    }
    return quotient;
}

inline Terms divide_exact(const Terms& a, const Terms& b) {
    auto q = try_divide(a, b);
    if (!q) throw NotDivisible("polynomial division is not exact");
    return *q;
}

inline bool is_constant(const Terms& t) {
    if (t.empty()) return true;
    if (t.size() != 1) return false;
    for (int x : t.begin()->first)
        if (x) return false;
    return true;
}

inline Terms one(std::size_t n) { return Terms{{Exponents(n, 0), Rational(1)}}; }

inline Terms monic(const Terms& t) {
    if (t.empty()) return t;
    return scale(t, Rational(1) / t.rbegin()->second);
}

inline int degree_in(const Terms& t, std::size_t v) {
    int d = -1;
    for (const auto& [e, c] : t) d = std::max(d, e[v]);
    return d;
}

inline Exponents min_exponents(const Terms& t) {
    Exponents m = t.begin()->first;
    for (const auto& [e, c] : t)
        for (std::size_t i = 0; i < m.size(); ++i) m[i] = std::min(m[i], e[i]);
    return m;
}

inline Terms shift(const Terms& t, const Exponents& by, int sign) {
    Terms out;
    for (const auto& [e, c] : t) {
        Exponents f = e;
        for (std::size_t i = 0; i < f.size(); ++i) f[i] += sign * by[i];
        out.emplace_hint(out.end(), std::move(f), c);
    }
    return out;
}

inline std::map<int, Terms> split_by(const Terms& t, std::size_t v) {
    std::map<int, Terms> parts;
    for (const auto& [e, c] : t) {
        Exponents f = e;
        f[v] = 0;
        parts[e[v]].emplace(std::move(f), c);
    }
    return parts;
}

inline Terms coefficient_in(const Terms& t, std::size_t v, int degree) {
    Terms out;
    for (const auto& [e, c] : t) {
        if (e[v] != degree) continue;
        Exponents f = e;
        f[v] = 0;
        out.emplace(std::move(f), c);
    }
    return out;
}

inline Terms times_power(const Terms& t, std::size_t v, int power) {
    Terms out;
    for (const auto& [e, c] : t) {
        Exponents f = e;
        f[v] += power;
        out.emplace(std::move(f), c);
    }
    return out;
}

inline Terms gcd(const Terms& a, const Terms& b, std::size_t n);

inline Terms content_in(const Terms& t, std::size_t v, std::size_t n) {
    auto parts = split_by(t, v);
    Terms g;
    for (const auto& [d, coeff] : parts) {
        g = g.empty() ? monic(coeff) : gcd(g, coeff, n);
        if (is_constant(g)) return one(n);
    }
    return g;
}

inline Terms pseudo_remainder(const Terms& a, const Terms& b, std::size_t v) {
    const int db = degree_in(b, v);
    const Terms lead_b = coefficient_in(b, v, db);
    Terms r = a;
    for (int dr = degree_in(r, v); !r.empty() && dr >= db; dr = degree_in(r, v)) {
        Terms lead_r = coefficient_in(r, v, dr);
        r = add(multiply(lead_b, r), multiply(times_power(lead_r, v, dr - db), b), Rational(-1));
        r = monic(r);
    }
    return r;
}

inline Terms primitive_gcd(Terms a, Terms b, std::size_t v, std::size_t n) {
    if (degree_in(a, v) < degree_in(b, v)) std::swap(a, b);
    for (;;) {
        Terms r = pseudo_remainder(a, b, v);
        if (r.empty()) return monic(b);
        if (degree_in(r, v) == 0) return one(n);
        a = std::move(b);
        b = divide_exact(r, content_in(r, v, n));
    }
}

inline Terms gcd_without_monomial_content(Terms a, Terms b, std::size_t n) {
    if (is_constant(a) || is_constant(b)) return one(n);
    for (bool changed = true; changed;) {
        changed = false;
        for (std::size_t v = 0; v < n; ++v) {
            const int da = degree_in(a, v), db = degree_in(b, v);
            if (da > 0 && db == 0) {
                a = content_in(a, v, n);
                changed = true;
            } else if (db > 0 && da == 0) {
                b = content_in(b, v, n);
                changed = true;
            }
            if (is_constant(a) || is_constant(b)) return one(n);
        }
    }
    if (a.size() <= b.size()) {
        if (try_divide(b, a)) return monic(a);
    } else if (try_divide(a, b)) {
        return monic(b);
    }
    std::size_t best = n;
    int best_degree = 0;
    for (std::size_t v = 0; v < n; ++v) {
        const int d = std::max(degree_in(a, v), degree_in(b, v));
        if (d > 0 && (best == n || d < best_degree)) {
            best = v;
            best_degree = d;
        }
    }
    const Terms ca = content_in(a, best, n), cb = content_in(b, best, n);
    const Terms c = gcd(ca, cb, n);
    const Terms g = primitive_gcd(divide_exact(a, ca), divide_exact(b, cb), best, n);
    return monic(multiply(c, g));
}

inline Terms gcd(const Terms& a, const Terms& b, std::size_t n) {
    if (a.empty()) return monic(b);
    if (b.empty()) return monic(a);
    const Exponents ma = min_exponents(a), mb = min_exponents(b);
    Exponents common(n);
    for (std::size_t i = 0; i < n; ++i) common[i] = std::min(ma[i], mb[i]);
    Terms g = gcd_without_monomial_content(shift(a, ma, -1), shift(b, mb, -1), n);
    return shift(g, common, +1);
}

}  // namespace poly_detail

class MultiPoly {
public:
    using Exponents = poly_detail::Exponents;
    using Terms = poly_detail::Terms;

    MultiPoly() = default;
    MultiPoly(long c) : MultiPoly(Rational(c)) {}
    MultiPoly(const Rational& c) {
        if (!qexact::is_zero(c)) terms_.emplace(Exponents{}, c);
    }
    MultiPoly(std::vector<std::string> vars, const Terms& terms) {
        std::vector<std::size_t> order(vars.size());
        for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
        std::sort(order.begin(), order.end(),
                  [&](std::size_t x, std::size_t y) { return vars[x] < vars[y]; });
        for (std::size_t i = 0; i < order.size(); ++i) {
            vars_.push_back(vars[order[i]]);
            if (i && vars_[i] == vars_[i - 1]) throw SchemaError("duplicate indeterminate " + vars_[i]);
        }
        for (const auto& [e, c] : terms) {
            if (e.size() != vars.size()) throw SchemaError("exponent vector length mismatch");
            Exponents f(e.size());
            for (std::size_t i = 0; i < order.size(); ++i) {
                if (e[order[i]] < 0) throw SchemaError("negative exponent");
                f[i] = e[order[i]];
            }
            poly_detail::accumulate(terms_, f, c);
        }
    }

    static MultiPoly variable(const std::string& name, int power = 1) {
        MultiPoly m;
        m.vars_ = {name};
        m.terms_.emplace(Exponents{power}, Rational(1));
        return m;
    }

    const std::vector<std::string>& vars() const { return vars_; }
    const Terms& terms() const { return terms_; }
    std::size_t size() const { return terms_.size(); }
    bool is_zero() const { return terms_.empty(); }
    bool is_constant() const { return poly_detail::is_constant(terms_); }
    Rational constant_term() const {
        auto it = terms_.find(Exponents(vars_.size(), 0));
        return it == terms_.end() ? Rational(0) : it->second;
    }
    Rational leading_coefficient() const {
        return terms_.empty() ? Rational(0) : terms_.rbegin()->second;
    }

    int degree(const std::string& var) const {
        auto it = std::find(vars_.begin(), vars_.end(), var);
        if (it == vars_.end() || terms_.empty()) return terms_.empty() ? -1 : 0;
        return poly_detail::degree_in(terms_, static_cast<std::size_t>(it - vars_.begin()));
    }

    MultiPoly aligned(const std::vector<std::string>& target) const {
        if (target == vars_) return *this;
        std::vector<std::size_t> where(vars_.size());
        for (std::size_t i = 0; i < vars_.size(); ++i) {
            auto it = std::lower_bound(target.begin(), target.end(), vars_[i]);
            if (it == target.end() || *it != vars_[i]) throw SchemaError("cannot align " + vars_[i]);
            where[i] = static_cast<std::size_t>(it - target.begin());
        }
        MultiPoly out;
        out.vars_ = target;
        for (const auto& [e, c] : terms_) {
            Exponents f(target.size(), 0);
            for (std::size_t i = 0; i < e.size(); ++i) f[where[i]] = e[i];
            out.terms_.emplace(std::move(f), c);
        }
        return out;
    }

    MultiPoly pruned() const {
        std::vector<bool> used(vars_.size(), false);
        for (const auto& [e, c] : terms_)
            for (std::size_t i = 0; i < e.size(); ++i) used[i] = used[i] || e[i] > 0;
        if (std::all_of(used.begin(), used.end(), [](bool u) { return u; })) return *this;
        MultiPoly out;
        for (std::size_t i = 0; i < vars_.size(); ++i)
            if (used[i]) out.vars_.push_back(vars_[i]);
        for (const auto& [e, c] : terms_) {
            Exponents f;
            for (std::size_t i = 0; i < e.size(); ++i)
                if (used[i]) f.push_back(e[i]);
            out.terms_.emplace(std::move(f), c);
        }
        return out;
    }

    MultiPoly monic() const {
        MultiPoly out = *this;
        out.terms_ = poly_detail::monic(terms_);
        return out;
    }

    static std::vector<std::string> merged_vars(const MultiPoly& a, const MultiPoly& b) {
        if (a.vars_ == b.vars_) return a.vars_;
        std::vector<std::string> out;
        std::set_union(a.vars_.begin(), a.vars_.end(), b.vars_.begin(), b.vars_.end(),
                       std::back_inserter(out));
        return out;
    }

    static MultiPoly from_terms(std::vector<std::string> vars, Terms terms) {
        MultiPoly out;
        out.vars_ = std::move(vars);
        out.terms_ = std::move(terms);
        return out;
    }

    friend MultiPoly operator+(const MultiPoly& a, const MultiPoly& b) {
        auto vars = merged_vars(a, b);
        return from_terms(vars, poly_detail::add(a.aligned(vars).terms_, b.aligned(vars).terms_));
    }
    friend MultiPoly operator-(const MultiPoly& a, const MultiPoly& b) {
        auto vars = merged_vars(a, b);
        return from_terms(vars,
                          poly_detail::add(a.aligned(vars).terms_, b.aligned(vars).terms_, Rational(-1)));
    }
    friend MultiPoly operator-(const MultiPoly& a) {
        return from_terms(a.vars_, poly_detail::scale(a.terms_, Rational(-1)));
    }
    friend MultiPoly operator*(const MultiPoly& a, const MultiPoly& b) {
        auto vars = merged_vars(a, b);
        return from_terms(vars, poly_detail::multiply(a.aligned(vars).terms_, b.aligned(vars).terms_));
    }
    friend MultiPoly operator*(const Rational& s, const MultiPoly& a) {
        return from_terms(a.vars_, poly_detail::scale(a.terms_, s));
    }
    MultiPoly& operator+=(const MultiPoly& o) { return *this = *this + o; }
    MultiPoly& operator-=(const MultiPoly& o) { return *this = *this - o; }
    MultiPoly& operator*=(const MultiPoly& o) { return *this = *this * o; }

    friend bool operator==(const MultiPoly& a, const MultiPoly& b) {
        auto vars = merged_vars(a, b);
        return a.aligned(vars).terms_ == b.aligned(vars).terms_;
    }

    MultiPoly pow(unsigned e) const {
        MultiPoly result(1), base = *this;
        while (e) {
            if (e & 1) result *= base;
            base *= base;
            e >>= 1;
        }
        return result;
    }

    std::string str() const {
        if (terms_.empty()) return "0";
        std::ostringstream out;
        bool first = true;
        for (auto it = terms_.rbegin(); it != terms_.rend(); ++it) {
            Rational c = it->second;
            const bool negative = sgn(c) < 0;
            if (negative) c = -c;
            out << (first ? (negative ? "-" : "") : (negative ? " - " : " + "));
            first = false;
            std::string mono;
            for (std::size_t i = 0; i < vars_.size(); ++i) {
                if (!it->first[i]) continue;
                if (!mono.empty()) mono += "*";
                mono += vars_[i];
                if (it->first[i] > 1) mono += "^" + std::to_string(it->first[i]);
            }
            if (mono.empty()) out << c.get_str();
            else if (c == 1) out << mono;
            else out << c.get_str() << "*" << mono;
        }
        return out.str();
    }

private:
    std::vector<std::string> vars_;
    Terms terms_;
};

inline MultiPoly poly_multiply(const MultiPoly& a, const MultiPoly& b) { return a * b; }

inline MultiPoly poly_gcd(const MultiPoly& a, const MultiPoly& b) {
    auto vars = MultiPoly::merged_vars(a, b);
    if (a.is_zero() && b.is_zero()) return MultiPoly();
    return MultiPoly::from_terms(vars, poly_detail::gcd(a.aligned(vars).terms(), b.aligned(vars).terms(),
                                                       vars.size()))
        .pruned();
}

inline MultiPoly poly_divide_exact(const MultiPoly& a, const MultiPoly& b) {
    auto vars = MultiPoly::merged_vars(a, b);
    return MultiPoly::from_terms(vars,
                                 poly_detail::divide_exact(a.aligned(vars).terms(), b.aligned(vars).terms()));
}

template <class R, class ValueOf>
R evaluate_poly(const MultiPoly& f, ValueOf&& value_of) {
    const auto& vars = f.vars();
    std::vector<std::vector<R>> powers(vars.size());
    for (std::size_t i = 0; i < vars.size(); ++i) powers[i].push_back(R(1));
    R total(0);
    for (const auto& [e, c] : f.terms()) {
        R term(c);
        for (std::size_t i = 0; i < vars.size(); ++i) {
            if (!e[i]) continue;
            auto& table = powers[i];
            if (table.size() == 1) table.push_back(value_of(vars[i]));
            while (static_cast<int>(table.size()) <= e[i]) table.push_back(table.back() * table[1]);
            term = term * table[e[i]];
        }
        total = total + term;
    }
    return total;
}

}  // namespace qexact
