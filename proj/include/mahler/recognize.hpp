#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "mahler/ratfun.hpp"

namespace mahler {

namespace detail {

inline QPoly qp_gcd(QPoly a, QPoly b) {
    while (!b.empty()) {
        QPoly q, r;
        qp_divrem(a, b, q, r);
        a = std::move(b);
        b = std::move(r);
    }
    if (!a.empty()) {
        Rational lead = a.back();
        for (auto& c : a) c /= lead;
    }
    return a;
}

inline std::vector<Integer> positive_divisors(const Integer& n0) {
    Integer n = abs(n0);
    if (n == 0 || !n.fits_slong_p()) return {};
    std::vector<Integer> divs{Integer(1)};
    for (auto& [q, e] : factor_integer(to_long(n))) {
        const std::size_t base = divs.size();
        Integer pw = 1;
        for (long i = 0; i < e; ++i) {
            pw *= q;
            for (std::size_t j = 0; j < base; ++j) divs.push_back(divs[j] * pw);
        }
    }
    return divs;
}

}  // namespace detail

// All rational roots of a nonzero polynomial over Q, by the rational root
// bound on an integer-cleared copy. Returns an empty list when the integer
// coefficients are too large to factor.
inline std::vector<Rational> rational_roots(const QPoly& g0) {
    QPoly g = g0;
    detail::qp_trim(g);
    if (g.empty() || detail::qp_deg(g) == 0) return {};
    Integer den_lcm = 1;
    for (auto& c : g) den_lcm = lcm(den_lcm, c.get_den());
    std::vector<Integer> a(g.size());
    for (std::size_t i = 0; i < g.size(); ++i)
        a[i] = g[i].get_num() * (den_lcm / g[i].get_den());
    std::size_t k = 0;
    while (a[k] == 0) ++k;  // roots at 0 are never wanted here

    std::vector<Rational> roots;
    auto rdivs = detail::positive_divisors(a[k]);
    auto sdivs = detail::positive_divisors(a.back());
    if (rdivs.empty() || sdivs.empty()) return {};
    auto eval = [&](const Rational& x) {
        Rational acc(0);
        for (std::size_t i = g.size(); i-- > 0;) acc = acc * x + g[i];
        return acc;
    };
    for (auto& r : rdivs)
        for (auto& s : sdivs) {
            Rational cand(r, s);
            cand.canonicalize();
            for (int sign = 0; sign < 2; ++sign) {
                Rational x = sign ? -cand : cand;
                if (eval(x) == 0) {
                    bool seen = false;
                    for (auto& y : roots)
                        if (y == x) seen = true;
                    if (!seen) roots.push_back(x);
                }
            }
        }
    return roots;
}

// Peel recognizable factors off a polynomial over Q and return symbols for
// their roots: rational linear factors, cyclotomic factors, and binomials
// x^m - c with rational c. Factors that exist but whose roots cannot be
// written with p-power radical depth are rejected. An unrecognized
// remainder is left to the caller.
inline std::vector<RadicalMonomial> recognize_rational_poly(QPoly u, long p) {
    detail::qp_trim(u);
    std::vector<RadicalMonomial> found;
    bool changed = true;
    while (changed && detail::qp_deg(u) > 0) {
        changed = false;

        for (auto& r : rational_roots(u)) {
            if (r == 0) continue;
            QPoly lin{-r, Rational(1)};
            for (;;) {
                QPoly q, rem;
                detail::qp_divrem(u, lin, q, rem);
                if (!rem.empty()) break;
                u = std::move(q);
                changed = true;
            }
            found.push_back(RadicalMonomial::from_rational(p, r));
        }
        if (detail::qp_deg(u) == 0) break;

        // cyclotomic factors: phi(d) <= deg is the only constraint, and
        // phi(d)^2 >= d/2 bounds the search
        const long degu = detail::qp_deg(u);
        for (long d = 3; d <= 2 * degu * degu + 2; ++d) {
            if (euler_phi(d) > degu) continue;
            const QPoly& phi = cyclotomic_polynomial(d);
            bool divided = false;
            for (;;) {
                QPoly q, rem;
                detail::qp_divrem(u, phi, q, rem);
                if (!rem.empty()) break;
                u = std::move(q);
                divided = changed = true;
            }
            if (divided)
                for (long a = 1; a < d; ++a)
                    if (gcd_long(a, d) == 1)
                        found.push_back(RadicalMonomial::root_of_unity(p, d, a));
            if (detail::qp_deg(u) < 1) break;
        }
        if (detail::qp_deg(u) <= 0) break;

        // binomial factors x^m - c: reduce u modulo x^m - c with c unknown;
        // the residue's coefficients are polynomials in c that must vanish
        // simultaneously, so c is a root of their gcd
        for (long m = detail::qp_deg(u); m >= 2 && detail::qp_deg(u) >= m; --m) {
            QPoly cond;  // gcd of the condition polynomials
            bool first = true;
            for (long j = 0; j < m; ++j) {
                QPoly rj;
                for (long kk = j; kk <= detail::qp_deg(u); kk += m) {
                    std::size_t e = static_cast<std::size_t>((kk - j) / m);
                    if (rj.size() <= e) rj.resize(e + 1, Rational(0));
                    rj[e] += u[static_cast<std::size_t>(kk)];
                }
                detail::qp_trim(rj);
                cond = first ? rj : detail::qp_gcd(cond, rj);
                first = false;
                if (cond.size() == 1) break;  // gcd is a unit, no solution
            }
            if (detail::qp_deg(cond) < 1) continue;
            for (auto& c : rational_roots(cond)) {
                if (c == 0) continue;
                QPoly bin(static_cast<std::size_t>(m) + 1, Rational(0));
                bin[0] = -c;
                bin[static_cast<std::size_t>(m)] = 1;
                bool divided = false;
                for (;;) {
                    QPoly q, rem;
                    detail::qp_divrem(u, bin, q, rem);
                    if (!rem.empty()) break;
                    u = std::move(q);
                    divided = changed = true;
                }
                if (divided) {
                    auto r0 = RadicalMonomial::from_rational(p, c).root_m(m);
                    if (!r0)
                        throw UnsupportedDenominator(
                            "denominator root is a radical whose degree is not a power of the "
                            "Mahler base");
                    for (long i = 0; i < m; ++i)
                        found.push_back(*r0 * RadicalMonomial::root_of_unity(p, m, i));
                }
            }
        }
    }
    return found;
}

// Try to write a tower element as zeta_N^a * rho^t * (rational), i.e. as a
// value of a radical monomial, by scanning the finitely many (a, t).
inline std::optional<RadicalMonomial> recognize_monomial(const TowerElement& beta,
                                                         const FieldPtr& k) {
    if (beta.is_zero()) return std::nullopt;
    const long n = k->n();
    const long d = k->degree();
    const long p = k->p();
    std::vector<TowerElement> rho_inv;
    rho_inv.push_back(TowerElement::one(k));
    if (d > 1) {
        TowerElement cinv = TowerElement::from_rational(k, Rational(1) / k->c());
        for (long t = 1; t < d; ++t)
            rho_inv.push_back(TowerElement::rho_pow(k, d - t) * cinv);
    }
    for (long a = 0; a < n; ++a) {
        TowerElement za_inv = TowerElement::zeta_pow(k, -a);
        for (long t = 0; t < d; ++t) {
            TowerElement w = beta * za_inv * rho_inv[static_cast<std::size_t>(t)];
            if (!w.is_rational()) continue;
            RadicalMonomial m = RadicalMonomial::from_rational(p, w.rational_value()) *
                                RadicalMonomial::root_of_unity(p, n, a);
            if (t > 0) m = m * RadicalMonomial::radical(p, k->c(), Rational(t, d));
            return m;
        }
    }
    return std::nullopt;
}

// A proper rational function with its verified pole symbols, moved into the
// smallest supported tower field that contains all of them.
struct PoleSet {
    FieldPtr field;
    RationalFunction f;
    std::vector<std::pair<RadicalMonomial, long>> poles;
};

// Identify all denominator roots of a proper rational function as radical
// monomials. Candidates propagated through the arithmetic are verified by
// exact division; whatever they miss must be recoverable by the rational
// and tower recognizers, otherwise the input is outside the supported
// field class.
inline PoleSet discover_poles(const RationalFunction& ft) {
    const long p = ft.field()->p();
    if (ft.is_zero()) return {ft.field(), ft, {}};

    std::vector<RadicalMonomial> cands;
    auto push = [&cands](const RadicalMonomial& m) {
        for (auto& x : cands)
            if (x == m) return;
        cands.push_back(m);
    };
    for (auto& m : ft.den_candidates()) push(m);
    if (ft.den().all_rational()) {
        QPoly u;
        for (long i = 0; i <= ft.den().deg(); ++i)
            u.push_back(ft.den().coeff(i).rational_value());
        for (auto& m : recognize_rational_poly(u, p)) push(m);
    }

    for (int iter = 0; iter < 16; ++iter) {
        FieldHull hull(p);
        hull.add_field(ft.field());
        for (auto& m : cands) hull.add_monomial(m);
        FieldPtr k = hull.build();

        TPoly rem = ft.den().embed(k);
        std::vector<std::pair<RadicalMonomial, long>> poles;
        for (auto& m : cands) {
            TPoly lin = TPoly::linear(k, m.value(k));
            long mult = 0;
            while (rem.deg() > 0) {
                TPoly q(k), r(k);
                divrem(rem, lin, q, r);
                if (!r.is_zero()) break;
                rem = std::move(q);
                ++mult;
            }
            if (mult > 0) poles.emplace_back(m, mult);
        }

        if (rem.deg() == 0) {
            // rebuild the minimal field over the verified poles only
            FieldHull shrink(p);
            shrink.add_field(ft.field());
            for (auto& [m, mm] : poles) shrink.add_monomial(m);
            FieldPtr k2 = shrink.build();
            return {k2, ft.embed(k2), std::move(poles)};
        }

        // mine the unfactored part for new root symbols
        std::vector<RadicalMonomial> more;
        if (rem.all_rational()) {
            QPoly u;
            for (long i = 0; i <= rem.deg(); ++i) u.push_back(rem.coeff(i).rational_value());
            more = recognize_rational_poly(u, p);
        } else if (rem.deg() == 1) {
            auto m = recognize_monomial(-rem.coeff(0), k);
            if (m) more.push_back(*m);
        } else {
            bool binomial = true;
            for (long i = 1; i < rem.deg(); ++i)
                if (!rem.coeff(i).is_zero()) binomial = false;
            if (binomial) {
                auto c = recognize_monomial(-rem.coeff(0), k);
                if (c) {
                    auto r0 = c->root_m(rem.deg());
                    if (!r0)
                        throw UnsupportedDenominator(
                            "denominator root is a radical whose degree is not a power of "
                            "the Mahler base");
                    for (long i = 0; i < rem.deg(); ++i)
                        more.push_back(*r0 * RadicalMonomial::root_of_unity(p, rem.deg(), i));
                }
            }
        }

        const std::size_t before = cands.size();
        for (auto& m : more) push(m);
        if (cands.size() == before)
            throw UnsupportedDenominator(
                "cannot identify all roots of the denominator in the supported field class");
    }
    throw UnsupportedDenominator("pole identification did not converge");
}

}  // namespace mahler
