#pragma once

#include <utility>
#include <vector>

#include "mahler/recognize.hpp"
#include "mahler/structure.hpp"
#include "mahler/vcoeffs.hpp"

namespace mahler {

// ---------------------------------------------------------------------------
// Residues at infinity (the Laurent part)
// ---------------------------------------------------------------------------

// One component per trajectory {i*p^n}: the sum of the coefficients along
// it. Key 0 is the {0}-trajectory (the constant term).
struct ResidueAtInfinity {
    std::map<long, TowerElement> comp;

    bool all_zero() const { return comp.empty(); }
};

inline ResidueAtInfinity dres_infinity(const LaurentPoly& fl, long p) {
    ResidueAtInfinity out;
    for (auto& [i, part] : trajectory_components(fl, p)) {
        TowerElement s = TowerElement::zero(fl.field());
        for (auto& [j, v] : part.terms()) s += v;
        if (!s.is_zero()) out.comp.emplace(i, s);
    }
    return out;
}

// Per trajectory theta(i), i != 0, with top level h (the largest l with
// c_{i*p^l} != 0):
//   g_theta    = sum_{k=0}^{h-1} (sum_{l<=k} c_{i*p^l}) x^{i*p^k}
//   fbar_theta = (sum_{l<=h} c_{i*p^l}) x^{i*p^h}
// so that fbar = f + delta(g) trajectory by trajectory. The {0}-component
// passes through unchanged.
inline std::pair<LaurentPoly, LaurentPoly> reduce_infinity(const LaurentPoly& fl, long p) {
    LaurentPoly fbar(fl.field()), g(fl.field());
    for (auto& [i, part] : trajectory_components(fl, p)) {
        if (i == 0) {
            fbar.add_term(0, part.coeff(0));
            continue;
        }
        long h = 0;
        {
            long x = i;
            long l = 0;
            for (auto& [j, v] : part.terms()) {
                x = i;
                l = 0;
                while (x != j) {
                    x *= p;
                    ++l;
                }
                h = std::max(h, l);
            }
        }
        TowerElement run = TowerElement::zero(fl.field());
        long xp = i;
        for (long k = 0; k <= h; ++k) {
            run += part.coeff(xp);
            if (k < h)
                g.add_term(xp, run);
            else
                fbar.add_term(xp, run);
            xp *= p;
        }
    }
    return {std::move(fbar), std::move(g)};
}

// ---------------------------------------------------------------------------
// Tree residues
// ---------------------------------------------------------------------------

// Residues of one tree: for each order k, the nonzero components indexed by
// their pole.
struct TreeResidues {
    TreeId id;
    RadicalMonomial gamma;
    long h = 0;
    long e = 0;  // 0 for non-torsion trees
    long m = 0;
    std::map<long, std::map<RadicalMonomial, TowerElement>> values;

    explicit TreeResidues(RadicalMonomial g) : gamma(std::move(g)) {}

    bool all_zero() const {
        for (auto& [k, row] : values)
            if (!row.empty()) return false;
        return true;
    }
};

// hat-c table of a non-torsion tree: v[n][k-1][i], i in Z/p^n Z.
struct HatTable {
    std::vector<std::vector<std::vector<TowerElement>>> v;

    const TowerElement& at(long n, long k, long i) const {
        return v[static_cast<std::size_t>(n)][static_cast<std::size_t>(k - 1)]
                [static_cast<std::size_t>(i)];
    }
};

// The recursion hat_c(k,0,0) = c(k,0,0) and
// hat_c(k,n,i) = c(k,n,i) + sum_{s=k}^m V^s_k(zeta_{p^n}^i gamma^{p^(h-n)})
//                            * hat_c(s,n-1,i mod p^(n-1)).
inline HatTable hat_c(const TreeData& td, const UniversalVTable& vt) {
    if (td.id.torsion) throw Error("hat_c: torsion tree");
    const long p = vt.p();
    const FieldPtr& K = td.field;
    HatTable out;
    out.v.resize(static_cast<std::size_t>(td.h) + 1);
    long pn = 1;
    for (long n = 0; n <= td.h; ++n) {
        auto& level = out.v[static_cast<std::size_t>(n)];
        level.assign(static_cast<std::size_t>(td.m),
                     std::vector<TowerElement>(static_cast<std::size_t>(pn),
                                               TowerElement::zero(K)));
        for (long i = 0; i < pn; ++i) {
            RadicalMonomial pole =
                address_to_pole(td.gamma, td.h, 0, false, PoleAddress{n, i, 0}, p);
            for (long k = td.m; k >= 1; --k) {
                TowerElement acc = td.coeff(k, PoleAddress{n, i, 0});
                if (n > 0) {
                    const long iprev = i % (pn / p);
                    for (long s = k; s <= td.m; ++s) {
                        const TowerElement& prev = out.at(n - 1, s, iprev);
                        if (prev.is_zero()) continue;
                        acc += v_coeff(vt, pole, s, k, K) * prev;
                    }
                }
                level[static_cast<std::size_t>(k - 1)][static_cast<std::size_t>(i)] =
                    std::move(acc);
            }
        }
        pn *= p;
    }
    return out;
}

// m x e coefficient tables on a torsion cycle, indexed [k-1][l].
using CyclicTable = std::vector<std::vector<TowerElement>>;

inline CyclicTable make_cyclic(long m, long e, const FieldPtr& K) {
    return CyclicTable(static_cast<std::size_t>(m),
                       std::vector<TowerElement>(static_cast<std::size_t>(e),
                                                 TowerElement::zero(K)));
}

// d_{k,l} = c_{k,l} - sum_{s=k}^m V^s_k(gamma^{p^l}) c_{s,l+1}
inline CyclicTable cyclic_D(const RadicalMonomial& gamma, long e, long m,
                            const UniversalVTable& vt, const CyclicTable& c, const FieldPtr& K) {
    CyclicTable d = make_cyclic(m, e, K);
    for (long l = 0; l < e; ++l) {
        RadicalMonomial gl = gamma.pow_p(l);
        for (long k = 1; k <= m; ++k) {
            TowerElement acc = c[static_cast<std::size_t>(k - 1)][static_cast<std::size_t>(l)];
            for (long s = k; s <= m; ++s) {
                const TowerElement& nxt =
                    c[static_cast<std::size_t>(s - 1)][static_cast<std::size_t>((l + 1) % e)];
                if (nxt.is_zero()) continue;
                acc -= v_coeff(vt, gl, s, k, K) * nxt;
            }
            d[static_cast<std::size_t>(k - 1)][static_cast<std::size_t>(l)] = std::move(acc);
        }
    }
    return d;
}

// The inverse map: solve order by order from k = m down to 1. At each k the
// cyclic relation c_{k,l} = rhs_l + V^k_k(gamma^{p^l}) c_{k,l+1} unrolls to
// a single division by 1 - prod_l V^k_k(gamma^{p^l}) = 1 - p^(-ek) != 0.
inline CyclicTable cyclic_L(const RadicalMonomial& gamma, long e, long m,
                            const UniversalVTable& vt, const CyclicTable& d, const FieldPtr& K) {
    CyclicTable c = make_cyclic(m, e, K);
    for (long k = m; k >= 1; --k) {
        std::vector<TowerElement> rhs(static_cast<std::size_t>(e), TowerElement::zero(K));
        std::vector<TowerElement> vkk(static_cast<std::size_t>(e), TowerElement::zero(K));
        for (long l = 0; l < e; ++l) {
            RadicalMonomial gl = gamma.pow_p(l);
            vkk[static_cast<std::size_t>(l)] = v_coeff(vt, gl, k, k, K);
            TowerElement acc = d[static_cast<std::size_t>(k - 1)][static_cast<std::size_t>(l)];
            for (long s = k + 1; s <= m; ++s) {
                const TowerElement& nxt =
                    c[static_cast<std::size_t>(s - 1)][static_cast<std::size_t>((l + 1) % e)];
                if (nxt.is_zero()) continue;
                acc += v_coeff(vt, gl, s, k, K) * nxt;
            }
            rhs[static_cast<std::size_t>(l)] = std::move(acc);
        }
        // c_0 = (sum_j prod_{t<j} V_t * rhs_j) / (1 - prod_t V_t)
        TowerElement num = TowerElement::zero(K);
        TowerElement prefix = TowerElement::one(K);
        for (long j = 0; j < e; ++j) {
            num += prefix * rhs[static_cast<std::size_t>(j)];
            prefix *= vkk[static_cast<std::size_t>(j)];
        }
        TowerElement c0 = num * (TowerElement::one(K) - prefix).inverse();
        c[static_cast<std::size_t>(k - 1)][0] = c0;
        for (long l = e - 1; l >= 1; --l) {
            const TowerElement& nxt = c[static_cast<std::size_t>(k - 1)]
                                       [static_cast<std::size_t>((l + 1) % e)];
            c[static_cast<std::size_t>(k - 1)][static_cast<std::size_t>(l)] =
                rhs[static_cast<std::size_t>(l)] + vkk[static_cast<std::size_t>(l)] * nxt;
        }
    }
    return c;
}

// hat-d table of a torsion tree: v[n][k-1][i][l]; entries with p | i and
// n >= 1 stay zero (those addresses do not occur).
struct HatTableTorsion {
    std::vector<std::vector<std::vector<std::vector<TowerElement>>>> v;

    const TowerElement& at(long n, long k, long i, long l) const {
        return v[static_cast<std::size_t>(n)][static_cast<std::size_t>(k - 1)]
                [static_cast<std::size_t>(i)][static_cast<std::size_t>(l)];
    }
};

// Base case hat_d(k,0,0,l) = (L d)(k,l); recursion
// hat_d(k,n,i,l) = d(k,n,i,l) + sum_s V^s_k(zeta_{p^n}^i gamma^{p^(l-n mod e)})
//                                * hat_d(s,n-1,i mod p^(n-1),l).
inline HatTableTorsion hat_d(const TreeData& td, const UniversalVTable& vt) {
    if (!td.id.torsion) throw Error("hat_d: non-torsion tree");
    const long p = vt.p();
    const long e = td.e;
    const FieldPtr& K = td.field;
    HatTableTorsion out;
    out.v.resize(static_cast<std::size_t>(td.h) + 1);

    CyclicTable base = make_cyclic(td.m, e, K);
    for (long k = 1; k <= td.m; ++k)
        for (long l = 0; l < e; ++l)
            base[static_cast<std::size_t>(k - 1)][static_cast<std::size_t>(l)] =
                td.coeff(k, PoleAddress{0, 0, l});
    CyclicTable cbase = cyclic_L(td.gamma, e, td.m, vt, base, K);

    long pn = 1;
    for (long n = 0; n <= td.h; ++n) {
        auto& level = out.v[static_cast<std::size_t>(n)];
        level.assign(
            static_cast<std::size_t>(td.m),
            std::vector<std::vector<TowerElement>>(
                static_cast<std::size_t>(pn),
                std::vector<TowerElement>(static_cast<std::size_t>(e),
                                          TowerElement::zero(K))));
        if (n == 0) {
            for (long k = 1; k <= td.m; ++k)
                for (long l = 0; l < e; ++l)
                    level[static_cast<std::size_t>(k - 1)][0][static_cast<std::size_t>(l)] =
                        cbase[static_cast<std::size_t>(k - 1)][static_cast<std::size_t>(l)];
        } else {
            for (long i = 0; i < pn; ++i) {
                if (i % p == 0) continue;  // restricted sum: p must not divide i
                for (long l = 0; l < e; ++l) {
                    RadicalMonomial pole =
                        address_to_pole(td.gamma, td.h, e, true, PoleAddress{n, i, l}, p);
                    const long iprev = i % (pn / p);
                    for (long k = td.m; k >= 1; --k) {
                        TowerElement acc = td.coeff(k, PoleAddress{n, i, l});
                        for (long s = k; s <= td.m; ++s) {
                            const TowerElement& prev = out.at(n - 1, s, iprev, l);
                            if (prev.is_zero()) continue;
                            acc += v_coeff(vt, pole, s, k, K) * prev;
                        }
                        level[static_cast<std::size_t>(k - 1)][static_cast<std::size_t>(i)]
                             [static_cast<std::size_t>(l)] = std::move(acc);
                    }
                }
            }
        }
        pn *= p;
    }
    return out;
}

// Result of one tree reduction: fbar = f_tau + delta(g), with fbar carrying
// exactly the tree residues.
struct TreeReduction {
    PartialFraction fbar;
    PartialFraction g;
    TreeResidues res;
};

inline TreeReduction reduce_tree(const TreeData& td, const UniversalVTable& vt, long p) {
    const FieldPtr& K = td.field;
    TreeReduction out{PartialFraction(K), PartialFraction(K), TreeResidues(td.gamma)};
    out.res.id = td.id;
    out.res.h = td.h;
    out.res.e = td.e;
    out.res.m = td.m;

    if (!td.id.torsion) {
        HatTable hc = hat_c(td, vt);
        long pn = 1;
        for (long n = 0; n <= td.h; ++n) {
            for (long i = 0; i < pn; ++i) {
                RadicalMonomial pole =
                    address_to_pole(td.gamma, td.h, 0, false, PoleAddress{n, i, 0}, p);
                for (long k = 1; k <= td.m; ++k) {
                    const TowerElement& v = hc.at(n, k, i);
                    if (v.is_zero()) continue;
                    if (n < td.h)
                        out.g.add_term(pole, k, v);
                    else {
                        out.fbar.add_term(pole, k, v);
                        out.res.values[k][pole] = v;
                    }
                }
            }
            pn *= p;
        }
    } else if (td.h == 0) {
        // the remainder is f_tau itself; the residues are read off directly
        for (auto& [k, row] : td.coeffs)
            for (auto& [ad, v] : row) {
                RadicalMonomial pole = address_to_pole(td.gamma, 0, td.e, true, ad, p);
                out.fbar.add_term(pole, k, v);
                out.res.values[k][pole] = v;
            }
    } else {
        HatTableTorsion hd = hat_d(td, vt);
        long pn = 1;
        for (long n = 0; n <= td.h; ++n) {
            for (long i = 0; i < pn; ++i) {
                if (n >= 1 && i % p == 0) continue;
                for (long l = 0; l < td.e; ++l) {
                    RadicalMonomial pole =
                        address_to_pole(td.gamma, td.h, td.e, true, PoleAddress{n, i, l}, p);
                    for (long k = 1; k <= td.m; ++k) {
                        const TowerElement& v = hd.at(n, k, i, l);
                        if (v.is_zero()) continue;
                        if (n < td.h)
                            out.g.add_term(pole, k, v);
                        else {
                            out.fbar.add_term(pole, k, v);
                            out.res.values[k][pole] = v;
                        }
                    }
                }
            }
            pn *= p;
        }
    }
    out.fbar.normalize();
    out.g.normalize();
    return out;
}

// ---------------------------------------------------------------------------
// The full report
// ---------------------------------------------------------------------------

struct MahlerReport {
    long p = 2;
    FieldPtr field;                 // working field of every element below
    RationalFunction input;         // f, embedded
    bool summable = false;
    ResidueAtInfinity res_infinity;
    std::vector<TreeResidues> res_trees;
    LaurentPoly remainder_laurent;  // fbar = remainder_laurent + remainder_tree
    RationalFunction remainder_tree;
    LaurentPoly certificate_laurent;  // g with fbar = f + delta(g)
    RationalFunction certificate_tree;
    // convenience: f = delta(solution) when summable
    RationalFunction solution() const {
        return -(certificate_tree + RationalFunction::from_laurent(certificate_laurent));
    }
    RationalFunction remainder() const {
        return remainder_tree + RationalFunction::from_laurent(remainder_laurent);
    }
    RationalFunction certificate() const {
        return certificate_tree + RationalFunction::from_laurent(certificate_laurent);
    }

    explicit MahlerReport(const FieldPtr& k)
        : field(k), input(k), remainder_laurent(k), remainder_tree(k), certificate_laurent(k),
          certificate_tree(k) {}
};

// The end-to-end decision: split off the Laurent part, identify all poles,
// run the per-tree reductions, and assemble fbar = f + delta(g). The
// identity is re-verified in exact arithmetic before returning.
inline MahlerReport mahler_report(const RationalFunction& f, long p) {
    if (p < 2) throw Error("mahler_report: p must be >= 2");
    auto [fl, ft] = split_LT(f);

    PoleSet ps = discover_poles(ft);

    // Working field: the pole hull enlarged by the roots of unity the
    // bouquets of every tree will touch.
    FieldPtr W;
    std::map<TreeId, PartialFraction> trees;
    {
        PartialFraction pf0 = ps.poles.empty()
                                  ? PartialFraction(ps.field)
                                  : partial_fractions(ps.f, ps.poles);
        auto trees0 = split_by_tree(pf0, p);
        FieldHull hull(p);
        hull.add_field(ps.field);
        for (auto& [id, tpf] : trees0) {
            auto [h, gamma] = height(tpf, id, p);
            long pn = 1;
            for (long t = 0; t < h; ++t) pn *= p;
            hull.require_root_of_unity(pn);
            if (id.torsion) hull.require_root_of_unity(id.r);
        }
        W = hull.build();
        RationalFunction ftW = ps.f.embed(W);
        trees = ps.poles.empty()
                    ? std::map<TreeId, PartialFraction>{}
                    : split_by_tree(partial_fractions(ftW, ps.poles), p);
    }

    MahlerReport rep(W);
    rep.p = p;
    rep.input = f.embed(W);

    // Laurent part
    LaurentPoly flW = fl.embed(W);
    rep.res_infinity = dres_infinity(flW, p);
    auto [flbar, gl] = reduce_infinity(flW, p);
    rep.remainder_laurent = flbar;
    rep.certificate_laurent = gl;

    // Tree parts
    long m_max = 1;
    for (auto& [id, tpf] : trees) m_max = std::max(m_max, tpf.max_order());
    const UniversalVTable& vt = universal_v(p, m_max);

    RationalFunction fbar_tree(W), g_tree(W);
    for (auto& [id, tpf] : trees) {
        auto [h, gamma] = height(tpf, id, p);
        long e = id.torsion ? cycle_of(id, p).e : 0;
        TreeData td = address_poles(tpf, id, gamma, h, e, p);
        TreeReduction tr = reduce_tree(td, vt, p);
        rep.res_trees.push_back(tr.res);
        fbar_tree += recombine(tr.fbar);
        g_tree += recombine(tr.g);
    }
    rep.remainder_tree = fbar_tree;
    rep.certificate_tree = g_tree;

    // exact verification: fbar == f + delta(g)
    RationalFunction fbar_total =
        rep.remainder_tree + RationalFunction::from_laurent(rep.remainder_laurent);
    RationalFunction g_total =
        rep.certificate_tree + RationalFunction::from_laurent(rep.certificate_laurent);
    if (fbar_total != rep.input + delta(g_total, p))
        throw Error("mahler_report: internal reduction identity failed");

    rep.summable = fbar_total.is_zero();
    return rep;
}

}  // namespace mahler
