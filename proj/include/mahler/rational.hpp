#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "mahler/errors.hpp"

namespace mahler {

// Exact arbitrary-precision rational. mpq_class keeps gcd(num,den)=1 and
// den>0 as long as values are built through arithmetic or rat() below.
using Rational = mpq_class;
using Integer = mpz_class;

inline Rational rat(long num, long den = 1) {
    if (den == 0) throw DivisionByZero();
    Rational q(num, den);
    q.canonicalize();
    return q;
}

inline Rational rat(const Integer& num, const Integer& den) {
    if (den == 0) throw DivisionByZero();
    Rational q(num, den);
    q.canonicalize();
    return q;
}

inline bool is_integer(const Rational& q) { return q.get_den() == 1; }

inline long to_long(const Integer& z) {
    if (!z.fits_slong_p()) throw Error("integer too large: " + z.get_str());
    return z.get_si();
}

// Exponent map of a positive integer: prime -> multiplicity.
inline std::map<long, long> factor_integer(Integer n) {
    if (n <= 0) throw Error("factor_integer: argument must be positive");
    std::map<long, long> out;
    auto divide_out = [&](long q) {
        while (mpz_divisible_ui_p(n.get_mpz_t(), q)) {
            n /= q;
            out[q] += 1;
        }
    };
    divide_out(2);
    divide_out(3);
    Integer q = 5;
    while (q * q <= n) {
        if (mpz_divisible_p(n.get_mpz_t(), q.get_mpz_t())) {
            long ql = to_long(q);
            divide_out(ql);
        } else {
            q += (mpz_fdiv_ui(q.get_mpz_t(), 6) == 5) ? 2 : 4;
        }
    }
    if (n > 1) out[to_long(n)] += 1;
    return out;
}

// Exponent map of a positive rational (negative entries from the denominator).
inline std::map<long, long> factor_rational(const Rational& c) {
    if (c <= 0) throw Error("factor_rational: argument must be positive");
    std::map<long, long> out = factor_integer(c.get_num());
    for (auto& [q, e] : factor_integer(c.get_den())) out[q] -= e;
    for (auto it = out.begin(); it != out.end();) {
        if (it->second == 0)
            it = out.erase(it);
        else
            ++it;
    }
    return out;
}

// True iff c = d^p for some rational d.
inline bool is_pth_power(const Rational& c, long p) {
    if (c <= 0) return false;
    for (auto& [q, e] : factor_rational(c))
        if (e % p != 0) return false;
    return true;
}

inline Integer int_pow(Integer base, long e) {
    Integer r;
    mpz_pow_ui(r.get_mpz_t(), base.get_mpz_t(), static_cast<unsigned long>(e));
    return r;
}

inline Rational rat_pow(const Rational& base, long e) {
    if (e == 0) return Rational(1);
    if (base == 0) {
        if (e < 0) throw DivisionByZero();
        return Rational(0);
    }
    Rational r(1);
    Rational b = e < 0 ? Rational(1) / base : base;
    long n = e < 0 ? -e : e;
    while (n > 0) {
        if (n & 1) r *= b;
        b *= b;
        n >>= 1;
    }
    return r;
}

inline long mod_pos(long a, long n) {
    long r = a % n;
    return r < 0 ? r + n : r;
}

inline long gcd_long(long a, long b) {
    if (a < 0) a = -a;
    if (b < 0) b = -b;
    while (b) {
        long t = a % b;
        a = b;
        b = t;
    }
    return a;
}

inline long lcm_long(long a, long b) {
    if (a == 0 || b == 0) return 0;
    return a / gcd_long(a, b) * b;
}

// a^e mod n for e >= 0.
inline long pow_mod(long a, long e, long n) {
    long r = 1 % n;
    a = mod_pos(a, n);
    while (e > 0) {
        if (e & 1) r = (r * a) % n;
        a = (a * a) % n;
        e >>= 1;
    }
    return r;
}

// Multiplicative order of p modulo r; requires gcd(p, r) = 1.
inline long multiplicative_order(long p, long r) {
    if (r == 1) return 1;
    if (gcd_long(p, r) != 1) throw Error("multiplicative_order: not coprime");
    long e = 1;
    long v = mod_pos(p, r);
    long cur = v;
    while (cur != 1) {
        cur = (cur * v) % r;
        ++e;
        if (e > r) throw Error("multiplicative_order: no order found");
    }
    return e;
}

inline long euler_phi(long n) {
    long result = n;
    for (auto& [q, e] : factor_integer(Integer(n))) result = result / q * (q - 1);
    return result;
}

inline std::string rational_to_string(const Rational& q) { return q.get_str(); }

}  // namespace mahler
