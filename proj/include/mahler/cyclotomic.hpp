#pragma once

#include <algorithm>
#include <map>
#include <memory>
#include <mutex>
#include <sstream>
#include <vector>

#include "mahler/rational.hpp"

namespace mahler {

// Dense polynomial over Q, coefficient i of x^i, no trailing zeros.
using QPoly = std::vector<Rational>;

namespace detail {

inline void qp_trim(QPoly& a) {
    while (!a.empty() && a.back() == 0) a.pop_back();
}

inline int qp_deg(const QPoly& a) { return static_cast<int>(a.size()) - 1; }

inline QPoly qp_add(const QPoly& a, const QPoly& b) {
    QPoly r(std::max(a.size(), b.size()), Rational(0));
    for (std::size_t i = 0; i < a.size(); ++i) r[i] += a[i];
    for (std::size_t i = 0; i < b.size(); ++i) r[i] += b[i];
    qp_trim(r);
    return r;
}

inline QPoly qp_sub(const QPoly& a, const QPoly& b) {
    QPoly r(std::max(a.size(), b.size()), Rational(0));
    for (std::size_t i = 0; i < a.size(); ++i) r[i] += a[i];
    for (std::size_t i = 0; i < b.size(); ++i) r[i] -= b[i];
    qp_trim(r);
    return r;
}

inline QPoly qp_mul(const QPoly& a, const QPoly& b) {
    if (a.empty() || b.empty()) return {};
    QPoly r(a.size() + b.size() - 1, Rational(0));
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (a[i] == 0) continue;
        for (std::size_t j = 0; j < b.size(); ++j) r[i + j] += a[i] * b[j];
    }
    qp_trim(r);
    return r;
}

// a = q*b + r with deg r < deg b.
inline void qp_divrem(QPoly a, const QPoly& b, QPoly& q, QPoly& r) {
    if (b.empty()) throw DivisionByZero("polynomial division by zero");
    q.assign(a.size() > b.size() ? a.size() - b.size() + 1 : 1, Rational(0));
    const Rational lead = b.back();
    while (qp_deg(a) >= qp_deg(b)) {
        const std::size_t shift = a.size() - b.size();
        Rational f = a.back() / lead;
        q[shift] = f;
        for (std::size_t i = 0; i < b.size(); ++i) a[shift + i] -= f * b[i];
        qp_trim(a);
        if (a.empty()) break;
        if (a.size() > shift + b.size()) throw Error("qp_divrem: no progress");
    }
    qp_trim(q);
    r = std::move(a);
}

// Extended gcd: returns (g, u, v) with u*a + v*b = g, g monic or zero.
inline void qp_xgcd(QPoly a, QPoly b, QPoly& g, QPoly& u, QPoly& v) {
    QPoly u0{Rational(1)}, v0, u1, v1{Rational(1)};
    while (!b.empty()) {
        QPoly q, r;
        qp_divrem(a, b, q, r);
        QPoly u2 = qp_sub(u0, qp_mul(q, u1));
        QPoly v2 = qp_sub(v0, qp_mul(q, v1));
        a = std::move(b);
        b = std::move(r);
        u0 = std::move(u1);
        u1 = std::move(u2);
        v0 = std::move(v1);
        v1 = std::move(v2);
    }
    if (!a.empty()) {
        Rational lead = a.back();
        for (auto& c : a) c /= lead;
        for (auto& c : u0) c /= lead;
        for (auto& c : v0) c /= lead;
    }
    g = std::move(a);
    u = std::move(u0);
    v = std::move(v0);
}

}  // namespace detail

// N-th cyclotomic polynomial, computed by dividing x^N - 1 by the
// cyclotomic polynomials of the proper divisors of N. Memoized globally.
inline const QPoly& cyclotomic_polynomial(long n) {
    static std::map<long, QPoly> cache;
    static std::mutex mu;
    std::lock_guard<std::mutex> lock(mu);
    auto it = cache.find(n);
    if (it != cache.end()) return it->second;

    // Iterative fill so recursion never re-enters the lock.
    std::vector<long> divisors;
    for (long d = 1; d <= n; ++d)
        if (n % d == 0) divisors.push_back(d);
    for (long d : divisors) {
        if (cache.count(d)) continue;
        QPoly f(static_cast<std::size_t>(d) + 1, Rational(0));
        f[0] = -1;
        f[static_cast<std::size_t>(d)] = 1;  // x^d - 1
        for (long e : divisors) {
            if (e >= d || d % e != 0) continue;
            QPoly q, r;
            detail::qp_divrem(f, cache.at(e), q, r);
            if (!r.empty()) throw Error("cyclotomic_polynomial: inexact division");
            f = std::move(q);
        }
        cache.emplace(d, std::move(f));
    }
    return cache.at(n);
}

// The cyclotomic field Q(zeta_N), represented as Q[x]/(Phi_N).
class CycloField {
  public:
    explicit CycloField(long n) : n_(n), modulus_(cyclotomic_polynomial(n)) {
        phi_ = static_cast<long>(modulus_.size()) - 1;
    }

    long n() const { return n_; }
    long degree() const { return phi_; }
    const QPoly& modulus() const { return modulus_; }

  private:
    long n_;
    long phi_;
    QPoly modulus_;
};

inline std::shared_ptr<const CycloField> get_cyclo_field(long n) {
    static std::map<long, std::shared_ptr<const CycloField>> cache;
    static std::mutex mu;
    std::lock_guard<std::mutex> lock(mu);
    auto& slot = cache[n];
    if (!slot) {
        cyclotomic_polynomial(n);  // fill outside the ctor's use
        slot = std::make_shared<CycloField>(n);
    }
    return slot;
}

// An element of Q(zeta_N) in the reduced normal form modulo Phi_N.
class CycloElement {
  public:
    CycloElement() = default;

    static CycloElement zero(std::shared_ptr<const CycloField> f) {
        return CycloElement(std::move(f), {});
    }
    static CycloElement from_rational(std::shared_ptr<const CycloField> f, Rational r) {
        QPoly c;
        if (r != 0) c.push_back(std::move(r));
        return CycloElement(std::move(f), std::move(c));
    }
    static CycloElement one(std::shared_ptr<const CycloField> f) {
        return from_rational(std::move(f), Rational(1));
    }
    // zeta_N^a
    static CycloElement zeta_pow(std::shared_ptr<const CycloField> f, long a) {
        a = mod_pos(a, f->n());
        QPoly c(static_cast<std::size_t>(a) + 1, Rational(0));
        c[static_cast<std::size_t>(a)] = 1;
        return CycloElement(std::move(f), reduce(c, *c_field_of(f)));
    }

    const std::shared_ptr<const CycloField>& field() const { return field_; }
    const QPoly& coeffs() const { return coeffs_; }

    bool is_zero() const { return coeffs_.empty(); }
    bool is_rational() const { return coeffs_.size() <= 1; }
    Rational rational_value() const {
        if (!is_rational()) throw Error("CycloElement: not rational");
        return coeffs_.empty() ? Rational(0) : coeffs_[0];
    }

    friend CycloElement operator+(const CycloElement& a, const CycloElement& b) {
        a.check(b);
        return CycloElement(a.field_, detail::qp_add(a.coeffs_, b.coeffs_));
    }
    friend CycloElement operator-(const CycloElement& a, const CycloElement& b) {
        a.check(b);
        return CycloElement(a.field_, detail::qp_sub(a.coeffs_, b.coeffs_));
    }
    CycloElement operator-() const {
        QPoly c = coeffs_;
        for (auto& x : c) x = -x;
        return CycloElement(field_, std::move(c));
    }
    friend CycloElement operator*(const CycloElement& a, const CycloElement& b) {
        a.check(b);
        return CycloElement(a.field_, reduce(detail::qp_mul(a.coeffs_, b.coeffs_), *a.field_));
    }
    CycloElement& operator+=(const CycloElement& b) { return *this = *this + b; }
    CycloElement& operator-=(const CycloElement& b) { return *this = *this - b; }
    CycloElement& operator*=(const CycloElement& b) { return *this = *this * b; }

    CycloElement inverse() const {
        if (is_zero()) throw DivisionByZero("CycloElement: inverse of zero");
        QPoly g, u, v;
        detail::qp_xgcd(coeffs_, field_->modulus(), g, u, v);
        if (detail::qp_deg(g) != 0)
            throw Error("CycloElement: cyclotomic modulus not coprime");  // unreachable
        return CycloElement(field_, reduce(u, *field_));
    }

    friend bool operator==(const CycloElement& a, const CycloElement& b) {
        a.check(b);
        return a.coeffs_ == b.coeffs_;
    }
    friend bool operator!=(const CycloElement& a, const CycloElement& b) { return !(a == b); }

    // Value-preserving inclusion Q(zeta_N) -> Q(zeta_M) for N | M,
    // sending zeta_N to zeta_M^(M/N).
    CycloElement embed(const std::shared_ptr<const CycloField>& target) const {
        if (target->n() == field_->n()) return CycloElement(target, coeffs_);
        if (target->n() % field_->n() != 0)
            throw IncompatibleField("cyclotomic embed: order is not a multiple");
        const long step = target->n() / field_->n();
        CycloElement gen = zeta_pow(target, step);
        CycloElement acc = zero(target);
        for (std::size_t i = coeffs_.size(); i-- > 0;) {
            acc = acc * gen + from_rational(target, coeffs_[i]);
        }
        return acc;
    }

    // Deterministic total order on normal forms (not a numeric order).
    friend bool lex_less(const CycloElement& a, const CycloElement& b) {
        if (a.coeffs_.size() != b.coeffs_.size()) return a.coeffs_.size() < b.coeffs_.size();
        for (std::size_t i = 0; i < a.coeffs_.size(); ++i)
            if (a.coeffs_[i] != b.coeffs_[i]) return a.coeffs_[i] < b.coeffs_[i];
        return false;
    }

  private:
    CycloElement(std::shared_ptr<const CycloField> f, QPoly c)
        : field_(std::move(f)), coeffs_(std::move(c)) {
        detail::qp_trim(coeffs_);
    }

    static const std::shared_ptr<const CycloField>& c_field_of(
        const std::shared_ptr<const CycloField>& f) {
        return f;
    }

    static QPoly reduce(QPoly c, const CycloField& f) {
        if (detail::qp_deg(c) < f.degree()) return c;
        QPoly q, r;
        detail::qp_divrem(c, f.modulus(), q, r);
        return r;
    }

    void check(const CycloElement& b) const {
        if (field_->n() != b.field_->n())
            throw IncompatibleField("CycloElement: mixed cyclotomic orders");
    }

    std::shared_ptr<const CycloField> field_;
    QPoly coeffs_;
};

}  // namespace mahler
