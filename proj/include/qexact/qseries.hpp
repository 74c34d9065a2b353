#pragma once

#include <algorithm>
#include <compare>
#include <functional>
#include <map>
#include <numeric>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "qexact/errors.hpp"
#include "qexact/rational.hpp"

namespace qexact {

struct SiegelKey {
    long n = 0, r = 0, m = 0;
    auto operator<=>(const SiegelKey&) const = default;
    long det() const { return 4 * n * m - r * r; }
    long content() const { return std::gcd(std::gcd(n, std::abs(r)), m); }
    std::string str() const {
        return std::to_string(n) + "," + std::to_string(r) + "," + std::to_string(m);
    }
};

struct SiegelIndex {
    SiegelKey key;
    long det = 0;
    long gcd = 0;
};

inline SiegelIndex siegel_index_check(long n, long r, long m) {
    SiegelKey key{n, r, m};
    if (n < 1 || m < 1 || key.det() <= 0)
        throw NotPositiveDefinite("(" + key.str() + ") is not positive definite");
    return {key, key.det(), key.content()};
}

inline bool plus_space_check(int k, long n) {
    long signed_n = (k % 2) ? -n : n;
    long residue = ((signed_n % 4) + 4) % 4;
    return residue == 0 || residue == 1;
}

inline constexpr long kUnboundedIndex = 1L << 40;

struct Box {
    long n_max = 0, m_max = 0;
    auto operator<=>(const Box&) const = default;
    bool contains(long n, long m) const { return n <= n_max && m <= m_max; }
    Box meet(const Box& o) const { return {std::min(n_max, o.n_max), std::min(m_max, o.m_max)}; }
    Box divided(long p) const { return {n_max / p, m_max / p}; }
    Box times(long p) const {
        return {std::min(n_max * p, kUnboundedIndex), std::min(m_max * p, kUnboundedIndex)};
    }
    static Box unbounded() { return {kUnboundedIndex, kUnboundedIndex}; }
};

template <class R>
class ClassicalSeries {
public:
    using index_type = long;
    using bound_type = long;

    explicit ClassicalSeries(long bound = 0) : bound_(bound) {}

    long bound() const { return bound_; }
    const std::map<long, R>& coeffs() const { return coeffs_; }
    bool in_range(long n) const { return n >= 1 && n <= bound_; }

    R coefficient(long n) const {
        if (!in_range(n))
            throw OutOfBound("index " + std::to_string(n) + " outside trusted range 1.." + std::to_string(bound_));
        auto it = coeffs_.find(n);
        return it == coeffs_.end() ? R(0) : it->second;
    }
    void set(long n, const R& value) {
        if (!in_range(n)) throw OutOfBound("cannot store index " + std::to_string(n));
        if (is_zero(value)) coeffs_.erase(n);
        else coeffs_[n] = value;
    }
    ClassicalSeries empty_like(long bound) const { return ClassicalSeries(bound); }
    static long meet(long a, long b) { return std::min(a, b); }
    template <class F>
    void for_each_index(long bound, F&& f) const {
        for (long n = 1; n <= bound; ++n) f(n);
    }
    friend bool operator==(const ClassicalSeries& a, const ClassicalSeries& b) {
        return a.bound_ == b.bound_ && a.coeffs_ == b.coeffs_;
    }

private:
    std::map<long, R> coeffs_;
    long bound_;
};

template <class R>
class HalfIntegralSeries {
public:
    using index_type = long;
    using bound_type = long;

    explicit HalfIntegralSeries(int k = 1, long bound = 0) : k_(k), bound_(bound) {}

    int k() const { return k_; }
    long bound() const { return bound_; }
    const std::map<long, R>& coeffs() const { return coeffs_; }
    bool in_range(long n) const { return n >= 1 && n <= bound_; }

    R coefficient(long n) const {
        if (!in_range(n))
            throw OutOfBound("index " + std::to_string(n) + " outside trusted range 1.." + std::to_string(bound_));
        auto it = coeffs_.find(n);
        return it == coeffs_.end() ? R(0) : it->second;
    }
    void set(long n, const R& value) {
        if (!in_range(n)) throw OutOfBound("cannot store index " + std::to_string(n));
        if (is_zero(value)) {
            coeffs_.erase(n);
            return;
        }
        if (!plus_space_check(k_, n))
            throw PlusSpaceViolation("nonzero coefficient at " + std::to_string(n) + " off the plus space");
        coeffs_[n] = value;
    }
    HalfIntegralSeries empty_like(long bound) const { return HalfIntegralSeries(k_, bound); }
    static long meet(long a, long b) { return std::min(a, b); }
    template <class F>
    void for_each_index(long bound, F&& f) const {
        for (long n = 1; n <= bound; ++n) f(n);
    }
    friend bool operator==(const HalfIntegralSeries& a, const HalfIntegralSeries& b) {
        return a.k_ == b.k_ && a.bound_ == b.bound_ && a.coeffs_ == b.coeffs_;
    }

private:
    std::map<long, R> coeffs_;
    int k_;
    long bound_;
};

template <class R>
class SiegelSeries {
public:
    using index_type = SiegelKey;
    using bound_type = Box;

    explicit SiegelSeries(Box box = {}) : box_(box) {}

    const Box& box() const { return box_; }
    Box bound() const { return box_; }
    const std::map<SiegelKey, R>& coeffs() const { return coeffs_; }
    bool in_range(const SiegelKey& key) const { return box_.contains(key.n, key.m); }

    R coefficient(const SiegelKey& key) const {
        siegel_index_check(key.n, key.r, key.m);
        if (!in_range(key)) throw OutOfBound("key (" + key.str() + ") outside the trusted box");
        auto it = coeffs_.find(key);
        return it == coeffs_.end() ? R(0) : it->second;
    }
    R coefficient(long n, long r, long m) const { return coefficient(SiegelKey{n, r, m}); }
    void set(const SiegelKey& key, const R& value) {
        siegel_index_check(key.n, key.r, key.m);
        if (!in_range(key)) throw OutOfBound("cannot store key (" + key.str() + ")");
        if (is_zero(value)) coeffs_.erase(key);
        else coeffs_[key] = value;
    }
    SiegelSeries empty_like(Box box) const { return SiegelSeries(box); }
    static Box meet(const Box& a, const Box& b) { return a.meet(b); }
    template <class F>
    void for_each_index(const Box& box, F&& f) const {
        for (long n = 1; n <= box.n_max; ++n)
            for (long m = 1; m <= box.m_max; ++m)
                for (long r = -2 * n - 2 * m; r <= 2 * n + 2 * m; ++r)
                    if (r * r < 4 * n * m) f(SiegelKey{n, r, m});
    }
    friend bool operator==(const SiegelSeries& a, const SiegelSeries& b) {
        return a.box_ == b.box_ && a.coeffs_ == b.coeffs_;
    }

private:
    std::map<SiegelKey, R> coeffs_;
    Box box_;
};

template <class R>
class BivariateSeries {
public:
    using index_type = std::pair<long, long>;
    using bound_type = Box;

    explicit BivariateSeries(Box box = {}) : box_(box) {}

    const Box& box() const { return box_; }
    Box bound() const { return box_; }
    const std::map<std::pair<long, long>, R>& coeffs() const { return coeffs_; }
    bool in_range(const std::pair<long, long>& i) const {
        return i.first >= 1 && i.second >= 1 && box_.contains(i.first, i.second);
    }

    R coefficient(const std::pair<long, long>& i) const {
        if (!in_range(i))
            throw OutOfBound("index (" + std::to_string(i.first) + "," + std::to_string(i.second) +
                             ") outside the trusted box");
        auto it = coeffs_.find(i);
        return it == coeffs_.end() ? R(0) : it->second;
    }
    R coefficient(long n, long m) const { return coefficient({n, m}); }
    void set(const std::pair<long, long>& i, const R& value) {
        if (!in_range(i)) throw OutOfBound("cannot store bivariate index");
        if (is_zero(value)) coeffs_.erase(i);
        else coeffs_[i] = value;
    }
    BivariateSeries empty_like(Box box) const { return BivariateSeries(box); }
    static Box meet(const Box& a, const Box& b) { return a.meet(b); }
    template <class F>
    void for_each_index(const Box& box, F&& f) const {
        for (long n = 1; n <= box.n_max; ++n)
            for (long m = 1; m <= box.m_max; ++m) f(std::pair<long, long>{n, m});
    }
    friend bool operator==(const BivariateSeries& a, const BivariateSeries& b) {
        return a.box_ == b.box_ && a.coeffs_ == b.coeffs_;
    }

private:
    std::map<std::pair<long, long>, R> coeffs_;
    Box box_;
};

template <class S, class Index>
auto series_coefficient(const S& s, const Index& index) {
    return s.coefficient(index);
}

template <class R, class S>
S series_combine(const std::vector<std::pair<R, S>>& terms) {
    if (terms.empty()) throw ShapeMismatch("empty linear combination");
    auto bound = terms.front().second.bound();
    for (const auto& t : terms) bound = S::meet(bound, t.second.bound());
    if constexpr (std::is_same_v<S, HalfIntegralSeries<R>>) {
        for (const auto& t : terms)
            if (t.second.k() != terms.front().second.k()) throw ShapeMismatch("half-integral weights differ");
    }
    S out = terms.front().second.empty_like(bound);
    std::map<typename S::index_type, R> acc;
    for (const auto& [scalar, s] : terms) {
        if (is_zero(scalar)) continue;
        for (const auto& [index, value] : s.coeffs()) {
            if (!out.in_range(index)) continue;
            auto [it, inserted] = acc.try_emplace(index, scalar * value);
            if (!inserted) it->second = it->second + scalar * value;
        }
    }
    for (const auto& [index, value] : acc) out.set(index, value);
    return out;
}

template <class R>
using AnySeries = std::variant<ClassicalSeries<R>, HalfIntegralSeries<R>, SiegelSeries<R>, BivariateSeries<R>>;

template <class R>
AnySeries<R> series_combine(const std::vector<std::pair<R, AnySeries<R>>>& terms) {
    if (terms.empty()) throw ShapeMismatch("empty linear combination");
    const std::size_t shape = terms.front().second.index();
    for (const auto& t : terms)
        if (t.second.index() != shape) throw ShapeMismatch("series shapes differ");
    return std::visit(
        [&](const auto& first) -> AnySeries<R> {
            using S = std::decay_t<decltype(first)>;
            std::vector<std::pair<R, S>> typed;
            for (const auto& [scalar, s] : terms) typed.emplace_back(scalar, std::get<S>(s));
            return series_combine<R, S>(typed);
        },
        terms.front().second);
}

// Lazy coefficient sources: a coefficient rule plus the range on which it is trusted.

template <class R>
struct HalfIntSource {
    std::function<R(long)> rule;
    long bound = 0;
    int k = 1;

    R operator()(long n) const {
        if (n < 1 || n > bound)
            throw OutOfBound("half-integral index " + std::to_string(n) + " exceeds source bound " +
                             std::to_string(bound));
        return rule(n);
    }
};

template <class R>
struct SiegelView {
    std::function<R(const SiegelKey&)> rule;
    Box box;

    R operator()(const SiegelKey& key) const {
        if (!box.contains(key.n, key.m)) throw OutOfBound("key (" + key.str() + ") outside the trusted box");
        return rule(key);
    }
    R operator()(long n, long r, long m) const { return (*this)(SiegelKey{n, r, m}); }
};

template <class R>
struct BivariateView {
    std::function<R(long, long)> rule;
    Box box;

    R operator()(long n, long m) const {
        if (!box.contains(n, m))
            throw OutOfBound("bivariate index (" + std::to_string(n) + "," + std::to_string(m) +
                             ") outside the trusted box");
        return rule(n, m);
    }
};

template <class R>
HalfIntSource<R> as_source(const HalfIntegralSeries<R>& s) {
    return {[s](long n) { return s.coefficient(n); }, s.bound(), s.k()};
}

template <class R>
HalfIntegralSeries<R> materialize(const HalfIntSource<R>& src, long bound) {
    if (bound > src.bound) throw OutOfBound("requested bound exceeds source bound");
    HalfIntegralSeries<R> out(src.k, bound);
    for (long n = 1; n <= bound; ++n) out.set(n, src(n));
    return out;
}

template <class R>
SiegelView<R> as_view(const SiegelSeries<R>& s) {
    return {[s](const SiegelKey& key) { return s.coefficient(key); }, s.box()};
}

template <class R>
SiegelSeries<R> materialize(const SiegelView<R>& view, const Box& box) {
    if (!(box.n_max <= view.box.n_max && box.m_max <= view.box.m_max))
        throw OutOfBound("requested box exceeds the trusted box");
    SiegelSeries<R> out(box);
    out.for_each_index(box, [&](const SiegelKey& key) { out.set(key, view(key)); });
    return out;
}

template <class R>
BivariateView<R> as_view(const BivariateSeries<R>& s) {
    return {[s](long n, long m) { return s.coefficient(n, m); }, s.box()};
}

template <class R>
BivariateSeries<R> materialize(const BivariateView<R>& view, const Box& box) {
    if (!(box.n_max <= view.box.n_max && box.m_max <= view.box.m_max))
        throw OutOfBound("requested box exceeds the trusted box");
    BivariateSeries<R> out(box);
    for (long n = 1; n <= box.n_max; ++n)
        for (long m = 1; m <= box.m_max; ++m) out.set({n, m}, view(n, m));
    return out;
}

template <class R>
SiegelView<R> linear_combination(const std::vector<std::pair<R, SiegelView<R>>>& terms) {
    Box box = terms.front().second.box;
    for (const auto& t : terms) box = box.meet(t.second.box);
    return {[terms](const SiegelKey& key) {
                R acc(0);
                for (const auto& [scalar, view] : terms)
                    if (!is_zero(scalar)) acc = acc + scalar * view(key);
                return acc;
            },
            box};
}

template <class R>
BivariateView<R> linear_combination(const std::vector<std::pair<R, BivariateView<R>>>& terms) {
    Box box = terms.front().second.box;
    for (const auto& t : terms) box = box.meet(t.second.box);
    return {[terms](long n, long m) {
                R acc(0);
                for (const auto& [scalar, view] : terms)
                    if (!is_zero(scalar)) acc = acc + scalar * view(n, m);
                return acc;
            },
            box};
}

}  // namespace qexact
