#pragma once

#include <cstdint>
#include <cstdlib>
#include <map>
#include <numeric>
#include <vector>

#include "qexact/errors.hpp"
#include "qexact/rational.hpp"

namespace qexact {

inline bool is_prime(long n) {
    if (n < 2) return false;
    for (long d = 2; d * d <= n; ++d)
        if (n % d == 0) return false;
    return true;
}

inline std::map<long, int> factorize(long n) {
    std::map<long, int> out;
    for (long d = 2; d * d <= n; ++d)
        while (n % d == 0) {
            ++out[d];
            n /= d;
        }
    if (n > 1) ++out[n];
    return out;
}

inline bool is_squarefree(long n) {
    for (const auto& [q, e] : factorize(n))
        if (e > 1) return false;
    return true;
}

inline std::vector<long> primes_up_to(long bound) {
    std::vector<long> out;
    std::vector<bool> composite(static_cast<std::size_t>(std::max(bound, 1L) + 1), false);
    for (long n = 2; n <= bound; ++n) {
        if (composite[n]) continue;
        out.push_back(n);
        for (long m = n * n; m <= bound; m += n) composite[m] = true;
    }
    return out;
}

inline std::vector<long> divisors(long n) {
    std::vector<long> out;
    for (long d = 1; d <= n; ++d)
        if (n % d == 0) out.push_back(d);
    return out;
}

inline long mod_pow(long base, long e, long mod) {
    using u128 = unsigned __int128;
    long b = ((base % mod) + mod) % mod;
    long result = 1 % mod;
    while (e > 0) {
        if (e & 1) result = static_cast<long>(u128(result) * u128(b) % u128(mod));
        b = static_cast<long>(u128(b) * u128(b) % u128(mod));
        e >>= 1;
    }
    return result;
}

// Legendre symbol (a/p) for an odd prime p, via Euler's criterion.
inline int legendre(long a, long p) {
    long r = ((a % p) + p) % p;
    if (r == 0) return 0;
    return mod_pow(r, (p - 1) / 2, p) == 1 ? 1 : -1;
}

inline int kronecker(long a, long n) {
    if (n == 0) return (a == 1 || a == -1) ? 1 : 0;
    int result = 1;
    if (n < 0) {
        n = -n;
        if (a < 0) result = -result;
    }
    while (n % 2 == 0) {
        n /= 2;
        if (a % 2 == 0) return 0;
        long r = ((a % 8) + 8) % 8;
        if (r == 3 || r == 5) result = -result;
    }
    for (const auto& [q, e] : factorize(n)) {
        const int symbol = legendre(a, q);
        if (symbol == 0) return 0;
        if (e % 2) result *= symbol;
    }
    return result;
}

// (-1)^((p-1)/2) for an odd prime p.
inline int quadratic_sign(long p) { return (p % 4 == 1) ? 1 : -1; }

inline long ipow(long base, int e) {
    long r = 1;
    for (int i = 0; i < e; ++i) r *= base;
    return r;
}

inline Rational rpow(long base, long e) { return rational_pow(Rational(base), e); }

}  // namespace qexact
