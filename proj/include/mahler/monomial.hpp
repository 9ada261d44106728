#pragma once

#include <compare>
#include <map>
#include <optional>
#include <sstream>
#include <vector>

#include "mahler/tower.hpp"

namespace mahler {

// A pole value zeta_N^a * c^(v/p^h) in multiplicative normal form: the
// torsion part stores the exact order, the radical part maps each prime to
// its rational exponent (denominators are powers of p), and the canonical
// p^h-th root of c is the positive real one. All Mahler tree combinatorics
// run on these symbols, independent of any ambient tower field.
class RadicalMonomial {
  public:
    explicit RadicalMonomial(long p) : p_(p) {
        if (p < 2) throw Error("RadicalMonomial: p must be >= 2");
    }

    static RadicalMonomial one(long p) { return RadicalMonomial(p); }

    // zeta_N^a, order reduced to be exact.
    static RadicalMonomial root_of_unity(long p, long n, long a) {
        if (n < 1) throw Error("root_of_unity: order must be positive");
        RadicalMonomial m(p);
        m.set_torsion(n, a);
        return m;
    }

    // positive rational c, exponent e with p-power denominator
    static RadicalMonomial radical(long p, const Rational& c, const Rational& e) {
        RadicalMonomial m(p);
        if (c <= 0) throw Error("RadicalMonomial: radical base must be positive");
        for (auto& [q, k] : factor_rational(c)) m.mul_prime_power(q, e * k);
        return m;
    }

    static RadicalMonomial from_rational(long p, const Rational& c) {
        if (c == 0) throw Error("RadicalMonomial: zero is not a monomial");
        RadicalMonomial m = c < 0 ? root_of_unity(p, 2, 1) : one(p);
        Rational a = abs(c);
        if (a != 1) {
            for (auto& [q, k] : factor_rational(a)) m.mul_prime_power(q, Rational(k));
        }
        return m;
    }

    long p() const { return p_; }
    long torsion_order() const { return tn_; }
    long torsion_exponent() const { return ta_; }
    const std::map<long, Rational>& radical_exponents() const { return rad_; }

    bool is_torsion() const { return rad_.empty(); }
    bool is_one() const { return tn_ == 1 && rad_.empty(); }

    friend RadicalMonomial operator*(const RadicalMonomial& a, const RadicalMonomial& b) {
        if (a.p_ != b.p_) throw IncompatibleField("RadicalMonomial: mixed base p");
        RadicalMonomial m(a.p_);
        long l = lcm_long(a.tn_, b.tn_);
        m.set_torsion(l, a.ta_ * (l / a.tn_) + b.ta_ * (l / b.tn_));
        m.rad_ = a.rad_;
        for (auto& [q, e] : b.rad_) m.mul_prime_power(q, e);
        return m;
    }

    RadicalMonomial pow(long e) const {
        RadicalMonomial m(p_);
        // exponent may exceed the range where a*e fits; go through Integer
        Integer ae = Integer(ta_) * e;
        long r = static_cast<long>(mpz_fdiv_ui(ae.get_mpz_t(), static_cast<unsigned long>(tn_)));
        m.set_torsion(tn_, r);
        for (auto& [q, w] : rad_) m.mul_prime_power(q, w * e);
        return m;
    }

    RadicalMonomial inverse() const { return pow(-1); }

    // alpha^(p^t)
    RadicalMonomial pow_p(long t) const {
        if (t < 0) throw Error("pow_p: negative exponent");
        RadicalMonomial m = *this;
        for (long i = 0; i < t; ++i) m = m.pow(p_);
        return m;
    }

    // The principal p-th root: all p-th roots are root_p() * zeta_p^i.
    RadicalMonomial root_p() const {
        RadicalMonomial m(p_);
        m.set_torsion(tn_ * p_, ta_);
        m.rad_ = rad_;
        for (auto& [q, w] : m.rad_) w /= p_;
        return m;
    }

    // Principal m-th root, if the radical exponents keep p-power
    // denominators; otherwise the root is not representable here.
    std::optional<RadicalMonomial> root_m(long mth) const {
        RadicalMonomial m(p_);
        m.set_torsion(tn_ * mth, ta_);
        m.rad_ = rad_;
        for (auto& [q, w] : m.rad_) {
            w /= mth;
            if (!den_is_p_power(w, p_)) return std::nullopt;
        }
        return m;
    }

    friend bool operator==(const RadicalMonomial& a, const RadicalMonomial& b) {
        return a.p_ == b.p_ && a.tn_ == b.tn_ && a.ta_ == b.ta_ && a.rad_ == b.rad_;
    }
    friend bool operator!=(const RadicalMonomial& a, const RadicalMonomial& b) {
        return !(a == b);
    }

    // Deterministic order on normal forms, for canonical choices.
    friend bool operator<(const RadicalMonomial& a, const RadicalMonomial& b) {
        if (a.tn_ != b.tn_) return a.tn_ < b.tn_;
        if (a.ta_ != b.ta_) return a.ta_ < b.ta_;
        auto ai = a.rad_.begin(), bi = b.rad_.begin();
        for (; ai != a.rad_.end() && bi != b.rad_.end(); ++ai, ++bi) {
            if (ai->first != bi->first) return ai->first < bi->first;
            if (ai->second != bi->second) return ai->second < bi->second;
        }
        return a.rad_.size() < b.rad_.size();
    }

    // Smallest t >= 0 with all radical exponents * p^t integral.
    long radical_clear_depth() const {
        long t = 0;
        for (auto& [q, w] : rad_) {
            long s = 0;
            Rational x = w;
            while (!is_integer(x)) {
                x *= p_;
                if (++s > 256) throw Error("radical_clear_depth: exponent denominator not a p-power");
            }
            t = std::max(t, s);
        }
        return t;
    }

    // Smallest t >= 0 such that the torsion part of alpha^(p^t) has order
    // coprime to p.
    long torsion_p_depth() const {
        long t = 0;
        long n = tn_;
        while (gcd_long(n, p_) != 1) {
            n /= gcd_long(n, p_);
            ++t;
        }
        return t;
    }

    // Depth after which repeated p-powering has stabilized: integral radical
    // exponents and p-free torsion order.
    long stable_depth() const { return std::max(radical_clear_depth(), torsion_p_depth()); }

    // Evaluate inside a tower field that contains this monomial.
    TowerElement value(const FieldPtr& k) const {
        if (k->p() != p_) throw IncompatibleField("monomial value: different base p");
        if (k->n() % tn_ != 0)
            throw IncompatibleField("monomial value: torsion order not contained in field");
        TowerElement out = TowerElement::zeta_pow(k, ta_ * (k->n() / tn_));
        if (rad_.empty()) return out;
        if (k->h() == 0) {
            Rational v(1);
            for (auto& [q, w] : rad_) {
                if (!is_integer(w))
                    throw IncompatibleField("monomial value: radical not contained in field");
                v *= rat_pow(Rational(q), to_long(w.get_num()));
            }
            return out * TowerElement::from_rational(k, v);
        }
        // rad = (t / p^h) * c_vector + integer vector, for a unique t in
        // [0, p^h); the integer leftover is a plain rational factor
        const auto& cf = k->c_factors();
        const long d = k->degree();
        for (long t = 0; t < d; ++t) {
            std::map<long, Rational> left(rad_.begin(), rad_.end());
            for (auto& [q, e] : cf) {
                auto it = left.find(q);
                if (it == left.end()) it = left.emplace(q, Rational(0)).first;
                it->second -= Rational(t) * e / d;
            }
            bool ok = true;
            Rational v(1);
            for (auto& [q, w] : left) {
                if (!is_integer(w)) {
                    ok = false;
                    break;
                }
                if (w != 0) v *= rat_pow(Rational(q), to_long(w.get_num()));
            }
            if (!ok) continue;
            TowerElement r = TowerElement::rho_pow(k, t);
            if (v != 1) r = r * TowerElement::from_rational(k, v);
            return out * r;
        }
        throw IncompatibleField("monomial value: radical not contained in field");
    }

    std::string to_string() const {
        std::ostringstream os;
        bool first = true;
        if (tn_ > 1) {
            if (tn_ == 2) {
                os << "-1";
            } else {
                os << "zeta(" << tn_ << ")";
                if (ta_ != 1) os << "^" << ta_;
            }
            first = false;
        }
        Rational intpart(1);
        for (auto& [q, w] : rad_) {
            if (is_integer(w)) {
                intpart *= rat_pow(Rational(q), to_long(w.get_num()));
                continue;
            }
            if (!first) os << "*";
            first = false;
            os << "root(" << q << "," << w.get_den().get_str() << ")";
            if (w.get_num() != 1) os << "^" << w.get_num().get_str();
        }
        if (intpart != 1 || first) {
            if (!first) os << "*";
            bool frac = !is_integer(intpart);
            os << (frac ? "(" : "") << intpart.get_str() << (frac ? ")" : "");
        }
        return os.str();
    }

  private:
    static bool den_is_p_power(const Rational& w, long p) {
        Integer d = w.get_den();
        while (d > 1) {
            Integer g = gcd(d, Integer(p));
            if (g == 1) return false;
            while (mpz_divisible_p(d.get_mpz_t(), g.get_mpz_t())) d /= g;
        }
        return true;
    }

    void set_torsion(long n, long a) {
        a = mod_pos(a, n);
        long g = gcd_long(a, n);
        if (a == 0) {
            tn_ = 1;
            ta_ = 0;
        } else {
            tn_ = n / g;
            ta_ = a / g;
        }
    }

    void mul_prime_power(long q, const Rational& e) {
        auto it = rad_.find(q);
        if (it == rad_.end()) {
            if (e != 0) rad_.emplace(q, e);
        } else {
            it->second += e;
            if (it->second == 0) rad_.erase(it);
        }
    }

    long p_;
    long tn_ = 1;
    long ta_ = 0;
    std::map<long, Rational> rad_;
};

inline RadicalMonomial monomial_pow_p(const RadicalMonomial& a, long t) { return a.pow_p(t); }
inline bool monomial_eq(const RadicalMonomial& a, const RadicalMonomial& b) { return a == b; }

// Builds the smallest supported tower descriptor containing a set of
// monomials (and any number of existing fields). Radical parts must be
// commensurable: powers of one common direction.
class FieldHull {
  public:
    explicit FieldHull(long p) : p_(p) {}

    void add_field(const FieldPtr& f) {
        if (f->p() != p_) throw IncompatibleField("hull: mixed base p");
        n_ = lcm_long(n_, f->n());
        if (f->h() > 0) {
            std::map<long, Rational> v;
            Rational scale = rat_pow(Rational(p_), -f->h());
            for (auto& [q, e] : f->c_factors()) v[q] = Rational(e) * scale;
            vecs_.push_back(std::move(v));
        }
    }

    void add_monomial(const RadicalMonomial& m) {
        if (m.p() != p_) throw IncompatibleField("hull: mixed base p");
        n_ = lcm_long(n_, m.torsion_order());
        // integral exponent vectors are plain rationals and need no radical
        // generator, so they impose no commensurability constraint
        bool fractional = false;
        for (auto& [q, e] : m.radical_exponents())
            if (!is_integer(e)) fractional = true;
        if (fractional)
            vecs_.push_back(std::map<long, Rational>(m.radical_exponents().begin(),
                                                     m.radical_exponents().end()));
    }

    void require_root_of_unity(long order) { n_ = lcm_long(n_, order); }

    FieldPtr build() const {
        if (vecs_.empty()) return make_field(n_, p_, 0);
        // primitive integer direction from the first vector
        std::map<long, long> u;
        {
            const auto& v0 = vecs_.front();
            Integer den_lcm = 1;
            for (auto& [q, w] : v0) den_lcm = lcm(den_lcm, w.get_den());
            Integer content = 0;
            std::map<long, Integer> w0;
            for (auto& [q, w] : v0) {
                Integer x = w.get_num() * (den_lcm / w.get_den());
                w0[q] = x;
                content = gcd(content, x);
            }
            for (auto& [q, x] : w0) {
                Integer e = x / content;  // content > 0 since gcd is non-negative, v0 nonzero
                u[q] = to_long(e);
            }
        }
        // every vector must be a (rational, p-power denominator) multiple of u
        long h = 0;
        for (auto& v : vecs_) {
            auto it = u.begin();
            auto jt = v.find(it->first);
            if (jt == v.end())
                throw UnsupportedDenominator("poles involve incommensurable radicals");
            Rational lambda = jt->second / it->second;
            std::map<long, Rational> expect;
            for (auto& [q, e] : u) expect[q] = lambda * e;
            if (expect != v)
                throw UnsupportedDenominator("poles involve incommensurable radicals");
            long b = 0;
            Rational x = lambda;
            while (!is_integer(x)) {
                x *= p_;
                if (++b > 256)
                    throw UnsupportedDenominator("radical exponent denominator is not a p-power");
            }
            h = std::max(h, b);
        }
        if (h == 0) return make_field(n_, p_, 0);
        return make_field(n_, p_, h, u);
    }

  private:
    long p_;
    long n_ = 1;
    std::vector<std::map<long, Rational>> vecs_;
};

}  // namespace mahler
