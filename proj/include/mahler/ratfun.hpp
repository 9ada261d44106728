#pragma once

#include <map>
#include <utility>
#include <vector>

#include "mahler/poly.hpp"

namespace mahler {

// Sparse Laurent polynomial: exponent -> coefficient, no zero entries.
class LaurentPoly {
  public:
    explicit LaurentPoly(FieldPtr k) : field_(std::move(k)) {}

    const FieldPtr& field() const { return field_; }
    const std::map<long, TowerElement>& terms() const { return c_; }
    bool is_zero() const { return c_.empty(); }

    TowerElement coeff(long j) const {
        auto it = c_.find(j);
        return it == c_.end() ? TowerElement::zero(field_) : it->second;
    }

    void add_term(long j, const TowerElement& v) {
        auto it = c_.find(j);
        if (it == c_.end()) {
            if (!v.is_zero()) c_.emplace(j, v);
        } else {
            it->second += v;
            if (it->second.is_zero()) c_.erase(it);
        }
    }

    friend LaurentPoly operator+(const LaurentPoly& a, const LaurentPoly& b) {
        LaurentPoly r = a;
        for (auto& [j, v] : b.c_) r.add_term(j, v);
        return r;
    }
    friend LaurentPoly operator-(const LaurentPoly& a, const LaurentPoly& b) {
        LaurentPoly r = a;
        for (auto& [j, v] : b.c_) r.add_term(j, -v);
        return r;
    }
    LaurentPoly operator-() const {
        LaurentPoly r(field_);
        for (auto& [j, v] : c_) r.c_.emplace(j, -v);
        return r;
    }
    friend LaurentPoly operator*(const TowerElement& s, const LaurentPoly& a) {
        LaurentPoly r(a.field_);
        for (auto& [j, v] : a.c_) r.add_term(j, s * v);
        return r;
    }
    friend bool operator==(const LaurentPoly& a, const LaurentPoly& b) { return a.c_ == b.c_; }
    friend bool operator!=(const LaurentPoly& a, const LaurentPoly& b) { return !(a == b); }

    LaurentPoly embed(const FieldPtr& target) const {
        LaurentPoly r(target);
        for (auto& [j, v] : c_) r.c_.emplace(j, v.embed(target));
        return r;
    }

  private:
    FieldPtr field_;
    std::map<long, TowerElement> c_;
};

// f(x^p) by exponent scaling.
inline LaurentPoly sigma(const LaurentPoly& f, long p) {
    if (p < 2) throw Error("sigma: p must be >= 2");
    LaurentPoly r(f.field());
    for (auto& [j, v] : f.terms()) r.add_term(j * p, v);
    return r;
}

inline LaurentPoly delta(const LaurentPoly& g, long p) { return sigma(g, p) - g; }

// A rational function num/den over one tower field, stored with
// gcd(num, den) = 1 and monic denominator. Carries candidate pole symbols
// (a superset of the true poles is fine); the recognizer verifies them.
class RationalFunction {
  public:
    explicit RationalFunction(FieldPtr k)
        : num_(TPoly(k)), den_(TPoly::constant(k, Rational(1))), field_(std::move(k)) {}

    RationalFunction(TPoly num, TPoly den) : num_(std::move(num)), den_(std::move(den)) {
        field_ = num_.field();
        if (den_.is_zero()) throw DivisionByZero("RationalFunction: zero denominator");
        normalize();
    }

    static RationalFunction from_poly(TPoly p) {
        RationalFunction f(p.field());
        f.num_ = std::move(p);
        return f;
    }
    static RationalFunction constant(FieldPtr k, const Rational& v) {
        return from_poly(TPoly::constant(std::move(k), v));
    }
    static RationalFunction from_laurent(const LaurentPoly& l) {
        long vmin = 0;
        for (auto& [j, v] : l.terms()) vmin = std::min(vmin, j);
        TPoly num(l.field());
        for (auto& [j, v] : l.terms()) num += TPoly::monomial(l.field(), j - vmin, v);
        TPoly den = TPoly::monomial(l.field(), -vmin, TowerElement::one(l.field()));
        return RationalFunction(std::move(num), std::move(den));
    }

    const FieldPtr& field() const { return field_; }
    const TPoly& num() const { return num_; }
    const TPoly& den() const { return den_; }
    bool is_zero() const { return num_.is_zero(); }
    bool is_polynomial() const { return den_.deg() == 0; }

    const std::vector<RadicalMonomial>& den_candidates() const { return den_cand_; }
    const std::vector<RadicalMonomial>& num_candidates() const { return num_cand_; }
    void add_den_candidate(const RadicalMonomial& m) { den_cand_.push_back(m); }
    void add_num_candidate(const RadicalMonomial& m) { num_cand_.push_back(m); }
    void add_den_candidates(const std::vector<RadicalMonomial>& ms) {
        den_cand_.insert(den_cand_.end(), ms.begin(), ms.end());
    }
    void add_num_candidates(const std::vector<RadicalMonomial>& ms) {
        num_cand_.insert(num_cand_.end(), ms.begin(), ms.end());
    }

    friend RationalFunction operator+(const RationalFunction& a, const RationalFunction& b) {
        RationalFunction r(a.num_ * b.den_ + b.num_ * a.den_, a.den_ * b.den_);
        r.den_cand_ = merged(a.den_cand_, b.den_cand_);
        return r;
    }
    friend RationalFunction operator-(const RationalFunction& a, const RationalFunction& b) {
        RationalFunction r(a.num_ * b.den_ - b.num_ * a.den_, a.den_ * b.den_);
        r.den_cand_ = merged(a.den_cand_, b.den_cand_);
        return r;
    }
    RationalFunction operator-() const {
        RationalFunction r = *this;
        r.num_ = -r.num_;
        return r;
    }
    friend RationalFunction operator*(const RationalFunction& a, const RationalFunction& b) {
        RationalFunction r(a.num_ * b.num_, a.den_ * b.den_);
        r.den_cand_ = merged(a.den_cand_, b.den_cand_);
        r.num_cand_ = merged(a.num_cand_, b.num_cand_);
        return r;
    }
    friend RationalFunction operator/(const RationalFunction& a, const RationalFunction& b) {
        if (b.is_zero()) throw DivisionByZero("RationalFunction: division by zero");
        RationalFunction r(a.num_ * b.den_, a.den_ * b.num_);
        r.den_cand_ = merged(a.den_cand_, b.num_cand_);
        r.num_cand_ = merged(a.num_cand_, b.den_cand_);
        return r;
    }
    RationalFunction& operator+=(const RationalFunction& b) { return *this = *this + b; }
    RationalFunction& operator-=(const RationalFunction& b) { return *this = *this - b; }
    RationalFunction& operator*=(const RationalFunction& b) { return *this = *this * b; }

    friend bool operator==(const RationalFunction& a, const RationalFunction& b) {
        return a.num_ == b.num_ && a.den_ == b.den_;
    }
    friend bool operator!=(const RationalFunction& a, const RationalFunction& b) {
        return !(a == b);
    }

    RationalFunction embed(const FieldPtr& target) const {
        RationalFunction r(num_.embed(target), den_.embed(target));
        r.den_cand_ = den_cand_;
        r.num_cand_ = num_cand_;
        return r;
    }

  private:
    void normalize() {
        if (num_.is_zero()) {
            den_ = TPoly::constant(field_, Rational(1));
            return;
        }
        TPoly g = gcd(num_, den_);
        if (g.deg() > 0) {
            num_ = num_ / g;
            den_ = den_ / g;
        }
        TowerElement li = den_.lead().inverse();
        num_ = li * num_;
        den_ = li * den_;
    }

    static std::vector<RadicalMonomial> merged(const std::vector<RadicalMonomial>& a,
                                               const std::vector<RadicalMonomial>& b) {
        std::vector<RadicalMonomial> r = a;
        for (auto& m : b) {
            bool seen = false;
            for (auto& x : r)
                if (x == m) {
                    seen = true;
                    break;
                }
            if (!seen) r.push_back(m);
        }
        return r;
    }

    TPoly num_, den_;
    FieldPtr field_;
    std::vector<RadicalMonomial> den_cand_, num_cand_;

    friend RationalFunction sigma(const RationalFunction& f, long p);
};

// f(x^p); the candidate pole symbols are replaced by their p-th roots.
inline RationalFunction sigma(const RationalFunction& f, long p) {
    if (p < 2) throw Error("sigma: p must be >= 2");
    RationalFunction r(f.num().subst_power(p), f.den().subst_power(p));
    for (auto& m : f.den_cand_) {
        RadicalMonomial base = m.root_p();
        for (long i = 0; i < p; ++i)
            r.add_den_candidate(base * RadicalMonomial::root_of_unity(p, p, i));
    }
    for (auto& m : f.num_cand_) {
        RadicalMonomial base = m.root_p();
        for (long i = 0; i < p; ++i)
            r.add_num_candidate(base * RadicalMonomial::root_of_unity(p, p, i));
    }
    return r;
}

inline RationalFunction delta(const RationalFunction& g, long p) { return sigma(g, p) - g; }

// The unique decomposition f = f_L + f_T with f_L a Laurent polynomial and
// f_T = a/b proper, gcd(a,b) = 1 = gcd(x,b).
inline std::pair<LaurentPoly, RationalFunction> split_LT(const RationalFunction& f) {
    const FieldPtr& k = f.field();
    TPoly q(k), r(k);
    divrem(f.num(), f.den(), q, r);

    LaurentPoly laurent(k);
    for (long i = 0; i <= q.deg(); ++i) laurent.add_term(i, q.coeff(i));

    RationalFunction ftree(k);
    if (!r.is_zero()) {
        // den = x^v * b with b(0) != 0
        long v = 0;
        while (f.den().coeff(v).is_zero()) ++v;
        TPoly b(k);
        for (long i = v; i <= f.den().deg(); ++i)
            b += TPoly::monomial(k, i - v, f.den().coeff(i));
        if (v > 0) {
            // r / (x^v b) = A/x^v + B/b with A = r * b^{-1} mod x^v
            TPoly a = (r * b.series_inverse(v)).truncate(v);
            TPoly bnum = r - a * b;
            for (long i = 0; i <= a.deg(); ++i) laurent.add_term(i - v, a.coeff(i));
            TPoly xv = TPoly::monomial(k, v, TowerElement::one(k));
            divrem(bnum, xv, bnum, r /*scratch*/);
            if (!r.is_zero()) throw Error("split_LT: internal division error");
            ftree = RationalFunction(std::move(bnum), std::move(b));
        } else {
            ftree = RationalFunction(std::move(r), std::move(b));
        }
        ftree.add_den_candidates(f.den_candidates());
    }
    return {std::move(laurent), std::move(ftree)};
}

// Projection of f_L onto the trajectories {i*p^n}: keys are 0 or the p-free
// representative i (sign retained).
inline std::map<long, LaurentPoly> trajectory_components(const LaurentPoly& fl, long p) {
    if (p < 2) throw Error("trajectory_components: p must be >= 2");
    std::map<long, LaurentPoly> out;
    for (auto& [j, v] : fl.terms()) {
        long i = j;
        while (i != 0 && i % p == 0) i /= p;
        auto it = out.find(i);
        if (it == out.end()) it = out.emplace(i, LaurentPoly(fl.field())).first;
        it->second.add_term(j, v);
    }
    return out;
}

// One pole with its coefficient stack: coeff[k-1] belongs to (x-pole)^(-k).
struct PFTerm {
    RadicalMonomial pole;
    std::vector<TowerElement> coeff;

    long order() const { return static_cast<long>(coeff.size()); }
};

// Pole-indexed coefficient table of a proper rational function. The top
// coefficient of every pole is nonzero and poles are pairwise distinct.
class PartialFraction {
  public:
    explicit PartialFraction(FieldPtr k) : field_(std::move(k)) {}

    const FieldPtr& field() const { return field_; }
    const std::vector<PFTerm>& terms() const { return terms_; }
    bool is_zero() const { return terms_.empty(); }

    long max_order() const {
        long m = 0;
        for (auto& t : terms_) m = std::max(m, t.order());
        return m;
    }

    const PFTerm* find(const RadicalMonomial& pole) const {
        for (auto& t : terms_)
            if (t.pole == pole) return &t;
        return nullptr;
    }

    TowerElement coeff(const RadicalMonomial& pole, long k) const {
        const PFTerm* t = find(pole);
        if (!t || k < 1 || k > t->order()) return TowerElement::zero(field_);
        return t->coeff[static_cast<std::size_t>(k - 1)];
    }

    void add_term(const RadicalMonomial& pole, long k, const TowerElement& v) {
        if (k < 1) throw Error("PartialFraction: order must be >= 1");
        if (v.is_zero()) return;
        PFTerm* t = nullptr;
        for (auto& u : terms_)
            if (u.pole == pole) t = &u;
        if (!t) {
            terms_.push_back(PFTerm{pole, {}});
            t = &terms_.back();
        }
        if (t->order() < k) t->coeff.resize(static_cast<std::size_t>(k), TowerElement::zero(field_));
        t->coeff[static_cast<std::size_t>(k - 1)] += v;
    }

    // Drop zero top coefficients and empty poles; sort for determinism.
    void normalize() {
        for (auto& t : terms_)
            while (!t.coeff.empty() && t.coeff.back().is_zero()) t.coeff.pop_back();
        std::erase_if(terms_, [](const PFTerm& t) {
            for (auto& c : t.coeff)
                if (!c.is_zero()) return false;
            return true;
        });
        std::sort(terms_.begin(), terms_.end(),
                  [](const PFTerm& a, const PFTerm& b) { return a.pole < b.pole; });
    }

    friend PartialFraction operator+(const PartialFraction& a, const PartialFraction& b) {
        PartialFraction r = a;
        for (auto& t : b.terms_)
            for (long k = 1; k <= t.order(); ++k)
                r.add_term(t.pole, k, t.coeff[static_cast<std::size_t>(k - 1)]);
        r.normalize();
        return r;
    }

  private:
    FieldPtr field_;
    std::vector<PFTerm> terms_;
};

// The unique proper rational function with the given expansion.
inline RationalFunction recombine(const PartialFraction& pf) {
    const FieldPtr& k = pf.field();
    RationalFunction acc(k);
    for (auto& t : pf.terms()) {
        TowerElement a = t.pole.value(k);
        TPoly lin = TPoly::linear(k, a);
        TPoly den = TPoly::constant(k, Rational(1));
        RationalFunction per(k);
        for (long j = 1; j <= t.order(); ++j) {
            den *= lin;
            const TowerElement& c = t.coeff[static_cast<std::size_t>(j - 1)];
            if (c.is_zero()) continue;
            RationalFunction term(TPoly::constant(k, c), den);
            term.add_den_candidate(t.pole);
            per += term;
        }
        acc += per;
    }
    return acc;
}

// Exact partial fraction decomposition of a proper f_T against a verified
// pole list. Coefficients come from truncated power-series division after
// the translation x -> x + alpha.
inline PartialFraction partial_fractions(
    const RationalFunction& ft, const std::vector<std::pair<RadicalMonomial, long>>& poles) {
    const FieldPtr& k = ft.field();
    PartialFraction out(k);
    if (ft.is_zero()) return out;
    if (ft.num().deg() >= ft.den().deg())
        throw FactorMismatch("partial_fractions: input is not proper");

    long total = 0;
    for (auto& [pole, m] : poles) total += m;
    if (total != ft.den().deg())
        throw FactorMismatch("partial_fractions: pole multiplicities do not match the degree");

    // verify the factorization exactly
    TPoly prod = TPoly::constant(k, Rational(1));
    for (auto& [pole, m] : poles) {
        TPoly lin = TPoly::linear(k, pole.value(k));
        for (long j = 0; j < m; ++j) prod *= lin;
    }
    if (prod != ft.den())
        throw FactorMismatch("partial_fractions: poles do not factor the denominator");

    for (auto& [pole, m] : poles) {
        TowerElement a = pole.value(k);
        TPoly lin = TPoly::linear(k, a);
        TPoly rest = ft.den();
        for (long j = 0; j < m; ++j) rest = rest / lin;
        TPoly series =
            (ft.num().shift(a) * rest.shift(a).series_inverse(m)).truncate(m);
        for (long kk = 1; kk <= m; ++kk) out.add_term(pole, kk, series.coeff(m - kk));
    }
    out.normalize();
    return out;
}

}  // namespace mahler
