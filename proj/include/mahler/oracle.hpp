#pragma once

#include <optional>
#include <vector>

#include "mahler/residues.hpp"

namespace mahler {

// Independent summability decision: fix a finite ansatz for g from the pole
// structure of f, expand f = g(x^p) - g(x) into a polynomial identity with
// the coefficients of g as unknowns, and solve it by exact Gaussian
// elimination. With the default bounds the ansatz contains the certificate
// constructed by the reduction pipeline whenever one exists, so "no
// solution" is a proof of non-summability.
struct AnsatzBounds {
    std::optional<long> max_height;  // per tree; default max(h - 1, 0)
    std::optional<long> max_order;   // per tree; default the tree's max pole order
};

// Solve A x = b over the tower field; A is row-major, rows may outnumber
// columns. Returns one solution (free unknowns pinned to zero) or nothing.
inline std::optional<std::vector<TowerElement>> solve_linear(
    std::vector<std::vector<TowerElement>> A, std::vector<TowerElement> b, const FieldPtr& K) {
    const std::size_t rows = A.size();
    const std::size_t cols = rows ? A[0].size() : 0;
    std::vector<std::size_t> pivot_row(cols, rows);  // rows marks "free"
    std::size_t r = 0;
    for (std::size_t c = 0; c < cols && r < rows; ++c) {
        std::size_t pr = rows;
        for (std::size_t i = r; i < rows; ++i)
            if (!A[i][c].is_zero()) {
                pr = i;
                break;
            }
        if (pr == rows) continue;
        std::swap(A[r], A[pr]);
        std::swap(b[r], b[pr]);
        TowerElement inv = A[r][c].inverse();
        for (std::size_t j = c; j < cols; ++j) A[r][j] = A[r][j] * inv;
        b[r] = b[r] * inv;
        for (std::size_t i = 0; i < rows; ++i) {
            if (i == r || A[i][c].is_zero()) continue;
            TowerElement f = A[i][c];
            for (std::size_t j = c; j < cols; ++j) A[i][j] -= f * A[r][j];
            b[i] -= f * b[r];
        }
        pivot_row[c] = r;
        ++r;
    }
    for (std::size_t i = r; i < rows; ++i)
        if (!b[i].is_zero()) return std::nullopt;
    std::vector<TowerElement> x(cols, TowerElement::zero(K));
    for (std::size_t c = 0; c < cols; ++c)
        if (pivot_row[c] != rows) x[c] = b[pivot_row[c]];
    return x;
}

namespace detail {

// Pole of the ansatz at bouquet level n over the tree root: the root gets
// p-th roots attached when n exceeds the height of the tree.
inline RadicalMonomial ansatz_pole(const RadicalMonomial& gamma, long h, long e, bool torsion,
                                   long n, long i, long ell, long p) {
    long pn = 1;
    for (long t = 0; t < n; ++t) pn *= p;
    RadicalMonomial zeta = RadicalMonomial::root_of_unity(p, pn, i);
    if (torsion) return zeta * gamma.pow_p(mod_pos(ell - n, std::max<long>(e, 1)));
    RadicalMonomial base = gamma;
    long d = h - n;
    while (d < 0) {
        base = base.root_p();
        ++d;
    }
    return zeta * base.pow_p(d);
}

}  // namespace detail

// Try to find g with delta(g) = f inside the bounded ansatz. The ansatz
// denominator collects every candidate pole with a uniform per-tree order
// cap, plus a power of x covering the principal part at the origin; the
// numerator degree additionally covers the polynomial exponents the
// trajectories of the Laurent part can reach.
inline std::optional<RationalFunction> oracle_summable(const RationalFunction& f, long p,
                                                       const AnsatzBounds& bounds = {}) {
    if (p < 2) throw Error("oracle_summable: p must be >= 2");
    if (f.is_zero()) return RationalFunction::constant(f.field(), Rational(0));

    auto [fl, ft] = split_LT(f);

    // collect candidate poles (with order caps) and the working field
    std::vector<std::pair<RadicalMonomial, long>> cand;
    FieldHull hull(p);
    hull.add_field(f.field());
    if (!ft.is_zero()) {
        PoleSet ps = discover_poles(ft);
        hull.add_field(ps.field);
        auto trees = split_by_tree(partial_fractions(ps.f, ps.poles), p);
        for (auto& [id, tpf] : trees) {
            auto [h, gamma] = height(tpf, id, p);
            const long H = bounds.max_height ? *bounds.max_height : std::max<long>(h - 1, 0);
            const long M = bounds.max_order ? *bounds.max_order : tpf.max_order();
            const long e = id.torsion ? cycle_of(id, p).e : 0;
            long pn = 1;
            for (long n = 0; n <= H; ++n) {
                for (long i = 0; i < pn; ++i) {
                    if (id.torsion) {
                        for (long l = 0; l < e; ++l)
                            cand.emplace_back(
                                detail::ansatz_pole(gamma, h, e, true, n, i, l, p), M);
                    } else {
                        cand.emplace_back(detail::ansatz_pole(gamma, h, 0, false, n, i, 0, p),
                                          M);
                    }
                }
                pn *= p;
            }
        }
        // levels can repeat symbols (torsion bouquets wrap around); keep one
        // copy of each pole with the largest order cap
        std::vector<std::pair<RadicalMonomial, long>> dedup;
        for (auto& [m, k] : cand) {
            bool seen = false;
            for (auto& [m2, k2] : dedup)
                if (m2 == m) {
                    k2 = std::max(k2, k);
                    seen = true;
                }
            if (!seen) dedup.emplace_back(m, k);
        }
        cand = std::move(dedup);
        for (auto& [m, k] : cand) hull.add_monomial(m);
    }
    FieldPtr W = hull.build();

    // Laurent ansatz: exponent reach of each trajectory below its top level
    long neg = 0, pos = 0;
    if (!fl.is_zero()) {
        for (auto& [i, part] : trajectory_components(fl, p)) {
            if (i == 0) continue;
            long top = 0;
            for (auto& [j, v] : part.terms()) {
                long x = i, l = 0;
                while (x != j) {
                    x *= p;
                    ++l;
                }
                top = std::max(top, l);
            }
            long x = i;
            for (long n = 0; n < top; ++n) {
                neg = std::max(neg, -x);
                pos = std::max(pos, x);
                x *= p;
            }
        }
    }

    // ansatz: g = P / D with D = x^neg * prod (x - alpha)^M
    RationalFunction fW = f.embed(W);
    TPoly D = TPoly::monomial(W, neg, TowerElement::one(W));
    for (auto& [m, M] : cand) {
        TPoly lin = TPoly::linear(W, m.value(W));
        for (long k = 0; k < M; ++k) D = D * lin;
    }
    const long J = D.deg() + pos;  // deg P <= J
    TPoly Ds = D.subst_power(p);

    // f_num * D * Ds = f_den * (P(x^p) * D - P * Ds), coefficient matching
    TPoly rhs = fW.num() * D * Ds;
    std::vector<TPoly> col;
    col.reserve(static_cast<std::size_t>(J) + 1);
    long maxdeg = rhs.deg();
    for (long j = 0; j <= J; ++j) {
        TPoly cj = fW.den() * (TPoly::monomial(W, p * j, TowerElement::one(W)) * D -
                               TPoly::monomial(W, j, TowerElement::one(W)) * Ds);
        maxdeg = std::max<long>(maxdeg, cj.deg());
        col.push_back(std::move(cj));
    }

    const std::size_t rows = static_cast<std::size_t>(maxdeg) + 1;
    std::vector<std::vector<TowerElement>> A(
        rows, std::vector<TowerElement>(static_cast<std::size_t>(J) + 1, TowerElement::zero(W)));
    std::vector<TowerElement> b(rows, TowerElement::zero(W));
    for (long t = 0; t <= maxdeg; ++t) {
        for (long j = 0; j <= J; ++j)
            A[static_cast<std::size_t>(t)][static_cast<std::size_t>(j)] = col[static_cast<std::size_t>(j)].coeff(t);
        b[static_cast<std::size_t>(t)] = rhs.coeff(t);
    }

    auto sol = solve_linear(std::move(A), std::move(b), W);
    if (!sol) return std::nullopt;
    TPoly P = TPoly::constant(W, Rational(0));
    for (long j = 0; j <= J; ++j) {
        const TowerElement& v = (*sol)[static_cast<std::size_t>(j)];
        if (!v.is_zero()) P = P + TPoly::monomial(W, j, v);
    }
    RationalFunction g(P, D);
    if (delta(g, p) != fW) throw Error("oracle_summable: witness failed verification");
    return g;
}

}  // namespace mahler
