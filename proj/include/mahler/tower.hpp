#pragma once

#include <map>
#include <memory>
#include <sstream>
#include <vector>

#include "mahler/cyclotomic.hpp"

namespace mahler {

// Ambient field for one computation: Q(zeta_N) when h = 0, and the radical
// tower Q(zeta_N)[rho]/(rho^(p^h) - c) when h >= 1. c is kept factored into
// primes so p-th-power checks stay integer arithmetic.
class FieldContext {
  public:
    FieldContext(long n, long p, long h, std::map<long, long> c_factors)
        : base_(get_cyclo_field(n)), p_(p), h_(h), c_factors_(std::move(c_factors)) {
        if (p_ < 2) throw Error("FieldContext: p must be >= 2");
        if (h_ < 0) throw Error("FieldContext: negative radical depth");
        if (h_ == 0) c_factors_.clear();
        degree_ = 1;
        for (long i = 0; i < h_; ++i) {
            degree_ *= p_;
            if (degree_ > 1'000'000) throw Error("FieldContext: tower degree too large");
        }
        if (h_ > 0) {
            if (c_factors_.empty()) throw Error("FieldContext: radical depth without c");
            bool all_p = true;
            for (auto& [q, e] : c_factors_) {
                if (e == 0) throw Error("FieldContext: zero exponent in c");
                if (e % p_ != 0) all_p = false;
            }
            if (all_p) throw Error("FieldContext: c is a p-th power of a rational");
            c_ = Rational(1);
            for (auto& [q, e] : c_factors_) c_ *= rat_pow(Rational(q), e);
            if (c_ == 1) throw Error("FieldContext: c must differ from 1");
        } else {
            c_ = Rational(1);
        }
    }

    const std::shared_ptr<const CycloField>& base() const { return base_; }
    long n() const { return base_->n(); }
    long p() const { return p_; }
    long h() const { return h_; }
    long degree() const { return degree_; }
    const Rational& c() const { return c_; }
    const std::map<long, long>& c_factors() const { return c_factors_; }

    std::string describe() const {
        std::ostringstream os;
        os << "Q(zeta_" << n() << ")";
        if (h_ > 0) os << "(" << c_.get_str() << "^(1/" << degree_ << "))";
        return os.str();
    }

  private:
    std::shared_ptr<const CycloField> base_;
    long p_;
    long h_;
    long degree_;
    Rational c_;
    std::map<long, long> c_factors_;
};

using FieldPtr = std::shared_ptr<const FieldContext>;

inline FieldPtr make_field(long n, long p, long h = 0, std::map<long, long> c_factors = {}) {
    return std::make_shared<FieldContext>(n, p, h, std::move(c_factors));
}

inline bool same_field(const FieldPtr& a, const FieldPtr& b) {
    return a->n() == b->n() && a->p() == b->p() && a->h() == b->h() &&
           a->c_factors() == b->c_factors();
}

namespace detail {

// Polynomials over the cyclotomic base, used for the tower's gcd inverse.
using CPoly = std::vector<CycloElement>;

inline void cp_trim(CPoly& a) {
    while (!a.empty() && a.back().is_zero()) a.pop_back();
}

inline CPoly cp_sub(const CPoly& a, const CPoly& b, const std::shared_ptr<const CycloField>& f) {
    CPoly r(std::max(a.size(), b.size()), CycloElement::zero(f));
    for (std::size_t i = 0; i < a.size(); ++i) r[i] += a[i];
    for (std::size_t i = 0; i < b.size(); ++i) r[i] -= b[i];
    cp_trim(r);
    return r;
}

inline CPoly cp_mul(const CPoly& a, const CPoly& b, const std::shared_ptr<const CycloField>& f) {
    if (a.empty() || b.empty()) return {};
    CPoly r(a.size() + b.size() - 1, CycloElement::zero(f));
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (a[i].is_zero()) continue;
        for (std::size_t j = 0; j < b.size(); ++j) r[i + j] += a[i] * b[j];
    }
    cp_trim(r);
    return r;
}

inline void cp_divrem(CPoly a, const CPoly& b, CPoly& q, CPoly& r,
                      const std::shared_ptr<const CycloField>& f) {
    if (b.empty()) throw DivisionByZero("polynomial division by zero");
    q.assign(a.size() > b.size() ? a.size() - b.size() + 1 : 1, CycloElement::zero(f));
    const CycloElement lead_inv = b.back().inverse();
    while (a.size() >= b.size() && !a.empty()) {
        const std::size_t shift = a.size() - b.size();
        CycloElement fac = a.back() * lead_inv;
        q[shift] = fac;
        for (std::size_t i = 0; i < b.size(); ++i) a[shift + i] -= fac * b[i];
        cp_trim(a);
    }
    cp_trim(q);
    r = std::move(a);
}

inline void cp_xgcd(CPoly a, CPoly b, CPoly& g, CPoly& u,
                    const std::shared_ptr<const CycloField>& f) {
    CPoly u0{CycloElement::one(f)}, u1;
    while (!b.empty()) {
        CPoly q, r;
        cp_divrem(a, b, q, r, f);
        CPoly u2 = cp_sub(u0, cp_mul(q, u1, f), f);
        a = std::move(b);
        b = std::move(r);
        u0 = std::move(u1);
        u1 = std::move(u2);
    }
    if (!a.empty()) {
        CycloElement lead_inv = a.back().inverse();
        for (auto& c : a) c *= lead_inv;
        for (auto& c : u0) c *= lead_inv;
    }
    g = std::move(a);
    u = std::move(u0);
}

}  // namespace detail

// An element of the tower field, as a residue modulo rho^(p^h) - c with
// cyclotomic coefficients. Immutable normal form; equality is coefficient
// equality.
class TowerElement {
  public:
    TowerElement() = default;

    static TowerElement zero(FieldPtr k) {
        std::vector<CycloElement> c(static_cast<std::size_t>(k->degree()),
                                    CycloElement::zero(k->base()));
        return TowerElement(std::move(k), std::move(c));
    }
    static TowerElement from_rational(FieldPtr k, const Rational& r) {
        TowerElement x = zero(std::move(k));
        x.coeffs_[0] = CycloElement::from_rational(x.field_->base(), r);
        return x;
    }
    static TowerElement one(FieldPtr k) { return from_rational(std::move(k), Rational(1)); }
    static TowerElement from_cyclo(FieldPtr k, const CycloElement& c) {
        TowerElement x = zero(std::move(k));
        x.coeffs_[0] = c.embed(x.field_->base());
        return x;
    }
    static TowerElement zeta_pow(FieldPtr k, long a) {
        TowerElement x = zero(std::move(k));
        x.coeffs_[0] = CycloElement::zeta_pow(x.field_->base(), a);
        return x;
    }
    // rho^t for 0 <= t < p^h
    static TowerElement rho_pow(FieldPtr k, long t) {
        TowerElement x = zero(std::move(k));
        if (t < 0 || t >= x.field_->degree()) throw Error("rho_pow: exponent out of range");
        x.coeffs_[static_cast<std::size_t>(t)] = CycloElement::one(x.field_->base());
        return x;
    }

    const FieldPtr& field() const { return field_; }
    const std::vector<CycloElement>& coeffs() const { return coeffs_; }

    bool is_zero() const {
        for (auto& c : coeffs_)
            if (!c.is_zero()) return false;
        return true;
    }
    bool is_rational() const {
        if (!coeffs_[0].is_rational()) return false;
        for (std::size_t i = 1; i < coeffs_.size(); ++i)
            if (!coeffs_[i].is_zero()) return false;
        return true;
    }
    Rational rational_value() const {
        if (!is_rational()) throw Error("TowerElement: not rational");
        return coeffs_[0].rational_value();
    }
    bool is_cyclo() const {
        for (std::size_t i = 1; i < coeffs_.size(); ++i)
            if (!coeffs_[i].is_zero()) return false;
        return true;
    }
    const CycloElement& cyclo_value() const {
        if (!is_cyclo()) throw Error("TowerElement: not in the cyclotomic base");
        return coeffs_[0];
    }

    friend TowerElement operator+(const TowerElement& a, const TowerElement& b) {
        a.check(b);
        TowerElement r = a;
        for (std::size_t i = 0; i < r.coeffs_.size(); ++i) r.coeffs_[i] += b.coeffs_[i];
        return r;
    }
    friend TowerElement operator-(const TowerElement& a, const TowerElement& b) {
        a.check(b);
        TowerElement r = a;
        for (std::size_t i = 0; i < r.coeffs_.size(); ++i) r.coeffs_[i] -= b.coeffs_[i];
        return r;
    }
    TowerElement operator-() const {
        TowerElement r = *this;
        for (auto& c : r.coeffs_) c = -c;
        return r;
    }
    friend TowerElement operator*(const TowerElement& a, const TowerElement& b) {
        a.check(b);
        const long d = a.field_->degree();
        const auto& base = a.field_->base();
        const CycloElement cval =
            CycloElement::from_rational(base, a.field_->h() > 0 ? a.field_->c() : Rational(0));
        std::vector<CycloElement> prod(static_cast<std::size_t>(2 * d - 1),
                                       CycloElement::zero(base));
        for (long i = 0; i < d; ++i) {
            if (a.coeffs_[i].is_zero()) continue;
            for (long j = 0; j < d; ++j) {
                if (b.coeffs_[j].is_zero()) continue;
                prod[static_cast<std::size_t>(i + j)] += a.coeffs_[i] * b.coeffs_[j];
            }
        }
        TowerElement r = zero(a.field_);
        for (long i = 2 * d - 2; i >= 0; --i) {
            if (i >= d) {
                // rho^(p^h) = c
                prod[static_cast<std::size_t>(i - d)] += prod[static_cast<std::size_t>(i)] * cval;
            } else {
                r.coeffs_[static_cast<std::size_t>(i)] = prod[static_cast<std::size_t>(i)];
            }
        }
        return r;
    }
    TowerElement& operator+=(const TowerElement& b) { return *this = *this + b; }
    TowerElement& operator-=(const TowerElement& b) { return *this = *this - b; }
    TowerElement& operator*=(const TowerElement& b) { return *this = *this * b; }

    friend TowerElement operator*(const Rational& a, const TowerElement& b) {
        return TowerElement::from_rational(b.field_, a) * b;
    }

    // Field inverse by extended gcd against the tower modulus. Throws
    // ZeroDivisor when the gcd exposes a proper factor of the modulus.
    TowerElement inverse() const {
        if (is_zero()) throw DivisionByZero("TowerElement: inverse of zero");
        const long d = field_->degree();
        if (d == 1) {
            TowerElement r = zero(field_);
            r.coeffs_[0] = coeffs_[0].inverse();
            return r;
        }
        const auto& base = field_->base();
        detail::CPoly a(coeffs_.begin(), coeffs_.end());
        detail::cp_trim(a);
        detail::CPoly modulus(static_cast<std::size_t>(d) + 1, CycloElement::zero(base));
        modulus[0] = CycloElement::from_rational(base, -field_->c());
        modulus[static_cast<std::size_t>(d)] = CycloElement::one(base);
        detail::CPoly g, u;
        detail::cp_xgcd(a, modulus, g, u, base);
        if (static_cast<int>(g.size()) - 1 != 0) {
            std::ostringstream os;
            os << "tower modulus rho^" << d << " - " << field_->c().get_str()
               << " is reducible over Q(zeta_" << field_->n() << "): gcd factor of degree "
               << (g.size() - 1);
            throw ZeroDivisor(os.str());
        }
        detail::CPoly q, r;
        // reduce u mod the modulus
        detail::cp_divrem(u, modulus, q, r, base);
        TowerElement out = zero(field_);
        for (std::size_t i = 0; i < r.size(); ++i) out.coeffs_[i] = r[i];
        return out;
    }

    friend TowerElement operator/(const TowerElement& a, const TowerElement& b) {
        return a * b.inverse();
    }

    TowerElement pow(long e) const {
        if (e < 0) return inverse().pow(-e);
        TowerElement r = one(field_);
        TowerElement b = *this;
        while (e > 0) {
            if (e & 1) r *= b;
            b *= b;
            e >>= 1;
        }
        return r;
    }

    friend bool operator==(const TowerElement& a, const TowerElement& b) {
        a.check(b);
        return a.coeffs_ == b.coeffs_;
    }
    friend bool operator!=(const TowerElement& a, const TowerElement& b) { return !(a == b); }

    // Inclusion into a larger tower. The target's N must be a multiple and
    // its radical must extend ours: c^(1/p^h) = c'^(k/p^h') for an integer k.
    TowerElement embed(const FieldPtr& target) const {
        if (same_field(field_, target)) {
            TowerElement r = *this;
            r.field_ = target;
            return r;
        }
        if (target->p() != field_->p())
            throw IncompatibleField("embed: different Mahler base p");
        if (target->n() % field_->n() != 0)
            throw IncompatibleField("embed: cyclotomic order is not a multiple");
        TowerElement gen_image = zero(target);  // image of rho
        if (field_->h() > 0) {
            gen_image = radical_image(field_, target);
        }
        TowerElement acc = zero(target);
        for (std::size_t i = coeffs_.size(); i-- > 0;) {
            acc = acc * gen_image + from_cyclo(target, coeffs_[i]);
        }
        return acc;
    }

  private:
    TowerElement(FieldPtr k, std::vector<CycloElement> c)
        : field_(std::move(k)), coeffs_(std::move(c)) {}

    // Image of src's rho = c^(1/p^h) inside target: rho'^k with
    // k = p^(h'-h) * (exponent ratio of the two c vectors).
    static TowerElement radical_image(const FieldPtr& src, const FieldPtr& target) {
        if (target->h() < src->h())
            throw IncompatibleField("embed: target radical depth too small");
        // Find integer k with src_vec / p^h_src = k * tgt_vec / p^h_tgt.
        const auto& sv = src->c_factors();
        const auto& tv = target->c_factors();
        if (tv.empty()) throw IncompatibleField("embed: target has no radical");
        auto it = tv.begin();
        Rational k0 = Rational(sv.count(it->first) ? sv.at(it->first) : 0, it->second);
        // k = k0 * p^h_tgt / p^h_src
        for (long i = 0; i < target->h(); ++i) k0 *= src->p();
        for (long i = 0; i < src->h(); ++i) k0 /= src->p();
        if (!is_integer(k0)) throw IncompatibleField("embed: radical exponents incompatible");
        // verify all primes agree
        std::map<long, Rational> lhs, rhs;
        for (auto& [q, e] : sv) lhs[q] = Rational(e) / rat_pow(Rational(src->p()), src->h());
        for (auto& [q, e] : tv)
            rhs[q] = k0 * Rational(e) / rat_pow(Rational(target->p()), target->h());
        if (lhs != rhs) throw IncompatibleField("embed: radical values incompatible");
        long k = to_long(k0.get_num());
        const long d = target->degree();
        TowerElement img = one(target);
        TowerElement rho = rho_pow(target, 1);
        long kk = mod_pos(k, d);
        img = rho.pow(kk);
        // rho'^d = c', fold the overflow back as rational powers of c'
        long wraps = (k - kk) / d;
        if (wraps != 0) img = img * from_rational(target, rat_pow(target->c(), wraps));
        return img;
    }

    void check(const TowerElement& b) const {
        if (!same_field(field_, b.field_))
            throw IncompatibleField("TowerElement: mixed tower fields");
    }

    FieldPtr field_;
    std::vector<CycloElement> coeffs_;
};

}  // namespace mahler
