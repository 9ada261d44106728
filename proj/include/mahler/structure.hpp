#pragma once

#include <optional>
#include <sstream>
#include <utility>
#include <vector>

#include "mahler/ratfun.hpp"

namespace mahler {

// Canonical key of a Mahler tree: two poles share a tree exactly when some
// p-power powers of them coincide. Torsion trees are keyed by the p-free
// part r of the order together with the orbit-minimal exponent; all other
// trees are keyed by the stabilized monomial with maximal p-power scaling
// stripped from its exponent vector.
struct TreeId {
    bool torsion = true;
    long r = 1;  // torsion: order coprime to p
    long a = 0;  // torsion: minimal representative of {a * p^t mod r}
    std::optional<RadicalMonomial> core;

    friend bool operator==(const TreeId& x, const TreeId& y) {
        if (x.torsion != y.torsion) return false;
        if (x.torsion) return x.r == y.r && x.a == y.a;
        return *x.core == *y.core;
    }
    friend bool operator!=(const TreeId& x, const TreeId& y) { return !(x == y); }
    friend bool operator<(const TreeId& x, const TreeId& y) {
        if (x.torsion != y.torsion) return x.torsion;
        if (x.torsion) {
            if (x.r != y.r) return x.r < y.r;
            return x.a < y.a;
        }
        return *x.core < *y.core;
    }

    std::string to_string() const {
        if (torsion) {
            if (r == 1) return "tau(1)";
            std::ostringstream os;
            os << "tau(zeta(" << r << ")";
            if (a != 1) os << "^" << a;
            os << ")";
            return os.str();
        }
        return "tau(" + core->to_string() + ")";
    }
};

inline TreeId tree_of(const RadicalMonomial& alpha, long p) {
    if (alpha.p() != p) throw IncompatibleField("tree_of: mixed base p");
    if (alpha.is_torsion()) {
        RadicalMonomial s = alpha.pow_p(alpha.torsion_p_depth());
        long r = s.torsion_order();
        long a0 = s.torsion_exponent();
        long amin = a0 == 0 ? 0 : a0;
        long x = a0;
        do {
            x = static_cast<long>((static_cast<unsigned long long>(x) *
                                   static_cast<unsigned long long>(mod_pos(p, r))) %
                                  static_cast<unsigned long long>(r));
            amin = std::min(amin, x);
        } while (x != a0);
        return TreeId{true, r, amin, std::nullopt};
    }
    RadicalMonomial s = alpha.pow_p(alpha.stable_depth());
    // strip the largest common p-power from the (integral) exponent vector
    long k = 0;
    std::map<long, Rational> w(s.radical_exponents().begin(), s.radical_exponents().end());
    for (;;) {
        bool divisible = true;
        for (auto& [q, e] : w)
            if (!is_integer(e / p)) divisible = false;
        if (!divisible) break;
        for (auto& [q, e] : w) e /= p;
        ++k;
        if (k > 512) throw Error("tree_of: runaway p-power stripping");
    }
    const long r = s.torsion_order();
    long b = s.torsion_exponent();
    if (k > 0 && r > 1) {
        // torsion exponent of the p^k-th root within the same p-free order
        long pinv = pow_mod(p, multiplicative_order(p, r) - 1, r);
        for (long t = 0; t < k; ++t)
            b = static_cast<long>((static_cast<unsigned long long>(b) *
                                   static_cast<unsigned long long>(pinv)) %
                                  static_cast<unsigned long long>(r));
    }
    RadicalMonomial core = RadicalMonomial::root_of_unity(p, r, b);
    for (auto& [q, e] : w)
        core = core * RadicalMonomial::radical(p, Rational(q), e);
    return TreeId{false, 0, 0, std::move(core)};
}

// Canonical cycle data of a torsion tree: gamma = zeta_r^a with the
// orbit-minimal exponent, e = |C(tau)| = order of p modulo r.
struct CycleInfo {
    RadicalMonomial gamma;
    long e = 1;
};

inline CycleInfo cycle_of(const TreeId& id, long p) {
    if (!id.torsion) throw Error("cycle_of: tree has no cycle");
    if (id.r == 1) return CycleInfo{RadicalMonomial::one(p), 1};
    return CycleInfo{RadicalMonomial::root_of_unity(p, id.r, id.a),
                     multiplicative_order(p, id.r)};
}

// Minimal d >= 0 with alpha^(p^d) = beta, if any.
inline std::optional<long> power_gap(const RadicalMonomial& alpha, const RadicalMonomial& beta) {
    const long p = alpha.p();
    if (alpha.is_torsion() != beta.is_torsion()) return std::nullopt;
    if (alpha.is_torsion()) {
        long bound = alpha.torsion_p_depth() + std::max<long>(beta.torsion_order(), 1) + 1;
        RadicalMonomial x = alpha;
        for (long d = 0; d <= bound; ++d) {
            if (x == beta) return d;
            x = x.pow(p);
        }
        return std::nullopt;
    }
    // the radical exponents scale exactly by p^d, so d is forced
    auto it = alpha.radical_exponents().begin();
    auto jt = beta.radical_exponents().find(it->first);
    if (jt == beta.radical_exponents().end()) return std::nullopt;
    Rational x = it->second;
    for (long d = 0; d <= 512; ++d) {
        if (x == jt->second) {
            if (alpha.pow_p(d) == beta) return d;
            return std::nullopt;
        }
        x *= p;
        if (abs(x) > abs(jt->second)) return std::nullopt;
    }
    return std::nullopt;
}

// Largest d such that some pole alpha of the tree has alpha^(p^d) also a
// pole; nullopt encodes infinity, which happens exactly when a pole lies on
// the cycle.
inline std::optional<long> dispersion(const PartialFraction& pf, const TreeId& id, long p) {
    std::vector<RadicalMonomial> poles;
    for (auto& t : pf.terms())
        if (tree_of(t.pole, p) == id) poles.push_back(t.pole);
    if (poles.empty()) throw TreeNotInSupport("dispersion: tree not in the support");
    if (id.torsion)
        for (auto& a : poles)
            if (a.is_torsion() && a.torsion_p_depth() == 0) return std::nullopt;  // on the cycle
    long best = 0;
    for (auto& a : poles)
        for (auto& b : poles)
            if (auto d = power_gap(a, b)) best = std::max(best, *d);
    return best;
}

// Largest d with both c_i and c_(i*p^d) nonzero for some exponent i != 0;
// a nonzero constant has dispersion 0.
inline long dispersion_at_infinity(const LaurentPoly& fl, long p) {
    if (fl.is_zero()) throw EmptySupport("dispersion_at_infinity: zero Laurent part");
    long best = 0;
    for (auto& [i, ci] : fl.terms()) {
        if (i == 0) continue;
        long x = i;
        long d = 0;
        while (true) {
            if (d > 0 && fl.terms().count(x)) best = std::max(best, d);
            if (std::abs(x) > (1L << 54) / std::max(p, 2L)) break;
            x *= p;
            ++d;
            if (d > 60) break;
        }
    }
    return best;
}

// The bouquet beta_h(gamma) = {zeta_{p^n}^i gamma^{p^(h-n)}}; duplicates
// collapse when gamma is torsion.
inline std::vector<RadicalMonomial> bouquet(const RadicalMonomial& gamma, long h, long p) {
    std::vector<RadicalMonomial> out;
    auto push = [&out](const RadicalMonomial& m) {
        for (auto& x : out)
            if (x == m) return;
        out.push_back(m);
    };
    long pn = 1;
    for (long n = 0; n <= h; ++n) {
        RadicalMonomial base = gamma.pow_p(h - n);
        for (long i = 0; i < pn; ++i)
            push(RadicalMonomial::root_of_unity(p, pn, i) * base);
        pn *= p;
    }
    return out;
}

// Height of the pole set at a tree, together with the chosen root gamma.
// Torsion: smallest h with alpha^(p^h) on the cycle for every pole, gamma
// the canonical cycle element. Otherwise: gamma is a pole maximizing the
// depth h(alpha) needed to land in every other pole's forward orbit (ties
// broken by the deterministic normal-form order), and h = h(gamma).
inline std::pair<long, RadicalMonomial> height(const PartialFraction& pf, const TreeId& id,
                                               long p) {
    std::vector<RadicalMonomial> poles;
    for (auto& t : pf.terms())
        if (tree_of(t.pole, p) == id) poles.push_back(t.pole);
    if (poles.empty()) throw TreeNotInSupport("height: tree not in the support");

    if (id.torsion) {
        long h = 0;
        for (auto& a : poles) h = std::max(h, a.torsion_p_depth());
        return {h, cycle_of(id, p).gamma};
    }

    // h(alpha) = max over poles xi of the minimal t with alpha^(p^t) in
    // {xi^(p^s) : s >= 0}
    auto min_t = [p](const RadicalMonomial& a, const RadicalMonomial& xi) {
        long bound = a.stable_depth() + xi.stable_depth() + 4;
        // widen by the forced exponent gap between the stabilized forms
        if (auto d = power_gap(a.pow_p(a.stable_depth()), xi.pow_p(xi.stable_depth())))
            bound += *d;
        if (auto d = power_gap(xi.pow_p(xi.stable_depth()), a.pow_p(a.stable_depth())))
            bound += *d;
        RadicalMonomial x = a;
        for (long t = 0; t <= bound; ++t) {
            if (power_gap(xi, x)) return t;
            x = x.pow(p);
        }
        throw Error("height: poles are not in one tree");
    };

    long best_h = -1;
    const RadicalMonomial* best = nullptr;
    for (auto& a : poles) {
        long ha = 0;
        for (auto& xi : poles) ha = std::max(ha, min_t(a, xi));
        if (ha > best_h || (ha == best_h && a < *best)) {
            best_h = ha;
            best = &a;
        }
    }
    return {best_h, *best};
}

// Unique pole address relative to the tree root.
struct PoleAddress {
    long n = 0;
    long i = 0;
    long ell = 0;  // always 0 in non-torsion trees

    friend bool operator==(const PoleAddress& x, const PoleAddress& y) {
        return x.n == y.n && x.i == y.i && x.ell == y.ell;
    }
    friend bool operator<(const PoleAddress& x, const PoleAddress& y) {
        if (x.n != y.n) return x.n < y.n;
        if (x.i != y.i) return x.i < y.i;
        return x.ell < y.ell;
    }
};

// The pole named by an address: zeta_{p^n}^i gamma^{p^(h-n)} in non-torsion
// trees, zeta_{p^n}^i gamma^{p^(ell-n mod e)} in torsion trees.
inline RadicalMonomial address_to_pole(const RadicalMonomial& gamma, long h, long e, bool torsion,
                                       const PoleAddress& ad, long p) {
    long pn = 1;
    for (long t = 0; t < ad.n; ++t) pn *= p;
    RadicalMonomial zeta = RadicalMonomial::root_of_unity(p, pn, ad.i);
    if (!torsion) return zeta * gamma.pow_p(h - ad.n);
    return zeta * gamma.pow_p(mod_pos(ad.ell - ad.n, e));
}

// Pole coefficient tables addressed by (k, n, i[, ell]).
struct TreeData {
    explicit TreeData(RadicalMonomial g) : gamma(std::move(g)) {}

    TreeId id;
    RadicalMonomial gamma;
    long h = 0;
    long m = 0;  // highest pole order
    long e = 0;  // cycle length; 0 marks a non-torsion tree
    FieldPtr field;
    std::map<long, std::map<PoleAddress, TowerElement>> coeffs;  // k -> address -> value

    TowerElement coeff(long k, const PoleAddress& ad) const {
        auto it = coeffs.find(k);
        if (it == coeffs.end()) return TowerElement::zero(field);
        auto jt = it->second.find(ad);
        if (jt == it->second.end()) return TowerElement::zero(field);
        return jt->second;
    }
};

// Resolve every pole of the tree to its unique address and collect the
// partial fraction coefficients under it.
inline TreeData address_poles(const PartialFraction& pf, const TreeId& id,
                              const RadicalMonomial& gamma, long h, long e, long p) {
    TreeData td(gamma);
    td.id = id;
    td.h = h;
    td.e = id.torsion ? e : 0;
    td.field = pf.field();

    for (auto& t : pf.terms()) {
        if (tree_of(t.pole, p) != id) continue;
        PoleAddress ad;
        if (!id.torsion) {
            // n minimal with alpha^(p^n) = gamma^(p^h)
            RadicalMonomial target = gamma.pow_p(h);
            long n = -1;
            RadicalMonomial x = t.pole;
            for (long nn = 0; nn <= h; ++nn) {
                if (x == target) {
                    n = nn;
                    break;
                }
                x = x.pow(p);
            }
            if (n < 0) throw AddressFailure("pole does not power onto the tree root");
            long pn = 1;
            for (long tt = 0; tt < n; ++tt) pn *= p;
            RadicalMonomial w = t.pole * gamma.pow_p(h - n).inverse();
            if (!w.is_torsion() || pn % w.torsion_order() != 0)
                throw AddressFailure("pole discrepancy is not a p-power root of unity");
            ad.n = n;
            ad.i = w.torsion_order() == 1 ? 0
                                          : mod_pos(w.torsion_exponent() * (pn / w.torsion_order()),
                                                    pn);
        } else {
            const long n = t.pole.torsion_p_depth();
            long pn = 1;
            for (long tt = 0; tt < n; ++tt) pn *= p;
            RadicalMonomial stab = t.pole.pow_p(n);
            long ell = -1;
            RadicalMonomial g = gamma;
            for (long ll = 0; ll < e; ++ll) {
                if (g == stab) {
                    ell = ll;
                    break;
                }
                g = g.pow(p);
            }
            if (ell < 0) throw AddressFailure("pole does not reach the cycle at the root");
            RadicalMonomial w = t.pole * gamma.pow_p(mod_pos(ell - n, e)).inverse();
            if (!w.is_torsion() || pn % w.torsion_order() != 0)
                throw AddressFailure("pole discrepancy is not a p-power root of unity");
            long i = w.torsion_order() == 1
                         ? 0
                         : mod_pos(w.torsion_exponent() * (pn / w.torsion_order()), pn);
            if (n > 0 && i % p == 0)
                throw AddressFailure("torsion address is not reduced");
            ad.n = n;
            ad.i = i;
            ad.ell = ell;
        }
        if (address_to_pole(gamma, h, td.id.torsion ? e : 0, id.torsion, ad, p) != t.pole)
            throw AddressFailure("address does not reproduce the pole");
        for (long k = 1; k <= t.order(); ++k) {
            const TowerElement& v = t.coeff[static_cast<std::size_t>(k - 1)];
            if (!v.is_zero()) td.coeffs[k][ad] = v;
        }
        td.m = std::max(td.m, t.order());
    }
    if (td.m == 0) throw TreeNotInSupport("address_poles: tree not in the support");
    return td;
}

// Group the poles of a partial fraction expansion by Mahler tree.
inline std::map<TreeId, PartialFraction> split_by_tree(const PartialFraction& pf, long p) {
    std::map<TreeId, PartialFraction> out;
    for (auto& t : pf.terms()) {
        TreeId id = tree_of(t.pole, p);
        auto it = out.find(id);
        if (it == out.end()) it = out.emplace(id, PartialFraction(pf.field())).first;
        for (long k = 1; k <= t.order(); ++k)
            it->second.add_term(t.pole, k, t.coeff[static_cast<std::size_t>(k - 1)]);
    }
    for (auto& [id, q] : out) q.normalize();
    return out;
}

}  // namespace mahler
