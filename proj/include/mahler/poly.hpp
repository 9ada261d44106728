#pragma once

#include <vector>

#include "mahler/monomial.hpp"

namespace mahler {

// Dense polynomial over one tower field. Coefficient i belongs to x^i; the
// representation never stores trailing zeros, so deg(0) = -1.
class TPoly {
  public:
    explicit TPoly(FieldPtr k) : field_(std::move(k)) {}
    TPoly(FieldPtr k, std::vector<TowerElement> c) : field_(std::move(k)), c_(std::move(c)) {
        trim();
    }

    static TPoly constant(FieldPtr k, TowerElement v) {
        TPoly p(std::move(k));
        if (!v.is_zero()) p.c_.push_back(std::move(v));
        return p;
    }
    static TPoly constant(FieldPtr k, const Rational& v) {
        return constant(k, TowerElement::from_rational(k, v));
    }
    static TPoly monomial(FieldPtr k, long deg, TowerElement v) {
        TPoly p(std::move(k));
        if (!v.is_zero()) {
            p.c_.assign(static_cast<std::size_t>(deg) + 1, TowerElement::zero(p.field_));
            p.c_.back() = std::move(v);
        }
        return p;
    }
    static TPoly x(FieldPtr k) { return monomial(k, 1, TowerElement::one(k)); }
    // x - alpha
    static TPoly linear(const FieldPtr& k, const TowerElement& alpha) {
        TPoly p(k);
        p.c_ = {-alpha, TowerElement::one(k)};
        p.trim();
        return p;
    }

    const FieldPtr& field() const { return field_; }
    int deg() const { return static_cast<int>(c_.size()) - 1; }
    bool is_zero() const { return c_.empty(); }
    const std::vector<TowerElement>& coeffs() const { return c_; }
    TowerElement coeff(long i) const {
        if (i < 0 || i >= static_cast<long>(c_.size())) return TowerElement::zero(field_);
        return c_[static_cast<std::size_t>(i)];
    }
    const TowerElement& lead() const {
        if (c_.empty()) throw Error("TPoly: leading coefficient of zero");
        return c_.back();
    }

    bool is_constant() const { return c_.size() <= 1; }
    bool all_rational() const {
        for (auto& v : c_)
            if (!v.is_rational()) return false;
        return true;
    }

    friend TPoly operator+(const TPoly& a, const TPoly& b) {
        TPoly r(a.field_);
        r.c_.assign(std::max(a.c_.size(), b.c_.size()), TowerElement::zero(a.field_));
        for (std::size_t i = 0; i < a.c_.size(); ++i) r.c_[i] += a.c_[i];
        for (std::size_t i = 0; i < b.c_.size(); ++i) r.c_[i] += b.c_[i];
        r.trim();
        return r;
    }
    friend TPoly operator-(const TPoly& a, const TPoly& b) {
        TPoly r(a.field_);
        r.c_.assign(std::max(a.c_.size(), b.c_.size()), TowerElement::zero(a.field_));
        for (std::size_t i = 0; i < a.c_.size(); ++i) r.c_[i] += a.c_[i];
        for (std::size_t i = 0; i < b.c_.size(); ++i) r.c_[i] -= b.c_[i];
        r.trim();
        return r;
    }
    TPoly operator-() const {
        TPoly r = *this;
        for (auto& v : r.c_) v = -v;
        return r;
    }
    friend TPoly operator*(const TPoly& a, const TPoly& b) {
        if (a.is_zero() || b.is_zero()) return TPoly(a.field_);
        TPoly r(a.field_);
        r.c_.assign(a.c_.size() + b.c_.size() - 1, TowerElement::zero(a.field_));
        for (std::size_t i = 0; i < a.c_.size(); ++i) {
            if (a.c_[i].is_zero()) continue;
            for (std::size_t j = 0; j < b.c_.size(); ++j) r.c_[i + j] += a.c_[i] * b.c_[j];
        }
        r.trim();
        return r;
    }
    friend TPoly operator*(const TowerElement& s, const TPoly& a) {
        TPoly r = a;
        for (auto& v : r.c_) v = s * v;
        r.trim();
        return r;
    }
    TPoly& operator+=(const TPoly& b) { return *this = *this + b; }
    TPoly& operator-=(const TPoly& b) { return *this = *this - b; }
    TPoly& operator*=(const TPoly& b) { return *this = *this * b; }

    friend bool operator==(const TPoly& a, const TPoly& b) { return a.c_ == b.c_; }
    friend bool operator!=(const TPoly& a, const TPoly& b) { return !(a == b); }

    // a = q*b + r with deg r < deg b
    friend void divrem(TPoly a, const TPoly& b, TPoly& q, TPoly& r) {
        if (b.is_zero()) throw DivisionByZero("TPoly: division by zero polynomial");
        q = TPoly(a.field_);
        q.c_.assign(a.c_.size() > b.c_.size() ? a.c_.size() - b.c_.size() + 1 : 1,
                    TowerElement::zero(a.field_));
        const TowerElement lead_inv = b.lead().inverse();
        while (!a.is_zero() && a.c_.size() >= b.c_.size()) {
            const std::size_t shift = a.c_.size() - b.c_.size();
            TowerElement f = a.c_.back() * lead_inv;
            q.c_[shift] = f;
            for (std::size_t i = 0; i < b.c_.size(); ++i) a.c_[shift + i] -= f * b.c_[i];
            a.trim();
        }
        q.trim();
        r = std::move(a);
    }

    friend TPoly operator/(const TPoly& a, const TPoly& b) {
        TPoly q(a.field_), r(a.field_);
        divrem(a, b, q, r);
        if (!r.is_zero()) throw Error("TPoly: inexact polynomial division");
        return q;
    }
    friend TPoly operator%(const TPoly& a, const TPoly& b) {
        TPoly q(a.field_), r(a.field_);
        divrem(a, b, q, r);
        return r;
    }

    TPoly monic() const {
        if (is_zero()) return *this;
        return lead().inverse() * *this;
    }

    friend TPoly gcd(TPoly a, TPoly b) {
        while (!b.is_zero()) {
            TPoly r = a % b;
            a = std::move(b);
            b = std::move(r);
        }
        return a.monic();
    }

    TPoly derivative() const {
        TPoly r(field_);
        for (std::size_t i = 1; i < c_.size(); ++i)
            r.c_.push_back(TowerElement::from_rational(field_, Rational(static_cast<long>(i))) *
                           c_[i]);
        r.trim();
        return r;
    }

    TowerElement eval(const TowerElement& x0) const {
        TowerElement acc = TowerElement::zero(field_);
        for (std::size_t i = c_.size(); i-- > 0;) acc = acc * x0 + c_[i];
        return acc;
    }

    // P(x + a), by repeated synthetic division at a
    TPoly shift(const TowerElement& a) const {
        if (is_zero()) return *this;
        std::vector<TowerElement> work = c_;
        const std::size_t n = work.size();
        TPoly r(field_);
        r.c_.assign(n, TowerElement::zero(field_));
        for (std::size_t k = 0; k < n; ++k) {
            for (std::size_t i = n - 1; i-- > k;) work[i] += a * work[i + 1];
            r.c_[k] = work[k];
        }
        r.trim();
        return r;
    }

    // P(x^p)
    TPoly subst_power(long p) const {
        TPoly r(field_);
        if (is_zero()) return r;
        r.c_.assign(static_cast<std::size_t>(deg()) * p + 1, TowerElement::zero(field_));
        for (std::size_t i = 0; i < c_.size(); ++i) r.c_[i * static_cast<std::size_t>(p)] = c_[i];
        r.trim();
        return r;
    }

    // Inverse power series modulo x^m; requires nonzero constant term.
    TPoly series_inverse(long m) const {
        if (is_zero() || c_[0].is_zero())
            throw DivisionByZero("series_inverse: zero constant term");
        TowerElement inv0 = c_[0].inverse();
        TPoly r(field_);
        r.c_.assign(static_cast<std::size_t>(m), TowerElement::zero(field_));
        r.c_[0] = inv0;
        for (long k = 1; k < m; ++k) {
            TowerElement s = TowerElement::zero(field_);
            for (long j = 1; j <= k && j <= deg(); ++j)
                s += c_[static_cast<std::size_t>(j)] * r.c_[static_cast<std::size_t>(k - j)];
            r.c_[static_cast<std::size_t>(k)] = -(inv0 * s);
        }
        r.trim();
        return r;
    }

    TPoly truncate(long m) const {
        TPoly r(field_);
        r.c_.assign(c_.begin(),
                    c_.begin() + std::min<std::size_t>(c_.size(), static_cast<std::size_t>(m)));
        r.trim();
        return r;
    }

    TPoly embed(const FieldPtr& target) const {
        TPoly r(target);
        for (auto& v : c_) r.c_.push_back(v.embed(target));
        r.trim();
        return r;
    }

  private:
    void trim() {
        while (!c_.empty() && c_.back().is_zero()) c_.pop_back();
    }

    FieldPtr field_;
    std::vector<TowerElement> c_;
};

}  // namespace mahler
