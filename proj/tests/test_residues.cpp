#include <catch2/catch_amalgamated.hpp>
#include <random>

#include "mahler/parser.hpp"
#include "mahler/residues.hpp"

using namespace mahler;

namespace {

RationalFunction rf(const std::string& s, long p) { return parse_input(s, p).f; }

TowerElement random_scalar(std::mt19937& eng, const FieldPtr& k) {
    TowerElement v = TowerElement::zero(k);
    long terms = 1 + static_cast<long>(eng() % 2);
    for (long t = 0; t < terms; ++t) {
        Rational c = rat(static_cast<long>(eng() % 9) - 4, 1 + static_cast<long>(eng() % 3));
        v += c * TowerElement::zeta_pow(k, static_cast<long>(eng() % std::max<long>(k->n(), 1)));
    }
    return v;
}

}  // namespace

TEST_CASE("universal coefficient tables") {
    const UniversalVTable& vt = universal_v(3, 2);
    CHECK(vt.universal(2, 2) == Rational(1, 9));
    CHECK(vt.universal(2, 1) == Rational(-2, 9));
    const UniversalVTable& vt2 = universal_v(2, 3);
    CHECK(vt2.universal(1, 1) == Rational(1, 2));
    CHECK(vt2.universal(3, 3) == Rational(1, 8));
    CHECK(vt2.universal(3, 2) == Rational(-3, 16));
    CHECK(vt2.universal(3, 1) == Rational(3, 16));
    FieldPtr k = make_field(4, 3, 0);
    const UniversalVTable& vt3 = universal_v(3, 1);
    CHECK(v_coeff(vt3, TowerElement::zeta_pow(k, 1), 1, 1) ==
          TowerElement::from_rational(k, Rational(-1, 3)));
}

TEST_CASE("top coefficient law") {
    std::mt19937 eng(7);
    for (int trial = 0; trial < 20; ++trial) {
        long p = 2 + static_cast<long>(eng() % 3);  // 2, 3 or 4
        long m = 1 + static_cast<long>(eng() % 4);
        FieldPtr k = make_field(12, p, 0);
        TowerElement alpha = TowerElement::zero(k);
        while (alpha.is_zero()) alpha = random_scalar(eng, k);
        const UniversalVTable& vt = universal_v(p, m);
        CHECK(v_coeff(vt, alpha, m, m) ==
              rat_pow(Rational(p), -m) * alpha.pow(m - p * m));
    }
}

TEST_CASE("defining expansion of the coefficients") {
    // 1/(x^p - alpha^p)^m expands into V^m_k(zeta_p^i alpha) / (x - zeta_p^i alpha)^k
    std::mt19937 eng(11);
    const long p = 3;
    std::vector<RadicalMonomial> pool = {
        RadicalMonomial::from_rational(p, Rational(2)),
        RadicalMonomial::from_rational(p, Rational(1, 2)),
        RadicalMonomial::root_of_unity(p, 4, 1),
        RadicalMonomial::root_of_unity(p, 4, 1) * RadicalMonomial::from_rational(p, Rational(3))};
    for (int trial = 0; trial < 10; ++trial) {
        const RadicalMonomial& alpha = pool[eng() % pool.size()];
        long m = 1 + static_cast<long>(eng() % 3);
        FieldHull hull(p);
        hull.add_monomial(alpha);
        hull.require_root_of_unity(p);
        FieldPtr k = hull.build();
        TowerElement av = alpha.value(k);
        TPoly den = TPoly::monomial(k, p, TowerElement::one(k)) -
                    TPoly::constant(k, av.pow(p));
        TPoly full = TPoly::constant(k, Rational(1));
        for (long j = 0; j < m; ++j) full = full * den;
        RationalFunction f(TPoly::constant(k, Rational(1)), full);
        std::vector<std::pair<RadicalMonomial, long>> poles;
        for (long i = 0; i < p; ++i)
            poles.emplace_back(RadicalMonomial::root_of_unity(p, p, i) * alpha, m);
        PartialFraction pf = partial_fractions(f, poles);
        const UniversalVTable& vt = universal_v(p, m);
        for (long i = 0; i < p; ++i) {
            RadicalMonomial pole = RadicalMonomial::root_of_unity(p, p, i) * alpha;
            for (long kk = 1; kk <= m; ++kk)
                CHECK(pf.coeff(pole, kk) == v_coeff(vt, pole, m, kk, k));
        }
    }
}

TEST_CASE("reduction of the Laurent part") {
    FieldPtr k = make_field(1, 3, 0);
    LaurentPoly fl(k);
    fl.add_term(1, TowerElement::one(k));
    fl.add_term(3, TowerElement::from_rational(k, Rational(2)));
    auto [fbar, g] = reduce_infinity(fl, 3);
    LaurentPoly eg(k), ef(k);
    eg.add_term(1, TowerElement::one(k));
    ef.add_term(3, TowerElement::from_rational(k, Rational(3)));
    CHECK(g == eg);
    CHECK(fbar == ef);
    CHECK(fbar == fl + delta(g, 3));
    ResidueAtInfinity r = dres_infinity(fl, 3);
    CHECK(r.comp.size() == 1);
    CHECK(r.comp.at(1) == TowerElement::from_rational(k, Rational(3)));
    // residues at infinity are linear
    LaurentPoly fl2(k);
    fl2.add_term(-1, TowerElement::from_rational(k, Rational(5)));
    fl2.add_term(1, TowerElement::one(k));
    ResidueAtInfinity r2 = dres_infinity(fl + fl2, 3);
    CHECK(r2.comp.at(1) == TowerElement::from_rational(k, Rational(4)));
    CHECK(r2.comp.at(-1) == TowerElement::from_rational(k, Rational(5)));
}

TEST_CASE("cyclic maps on the worked torsion data") {
    FieldPtr k = make_field(4, 3, 0);
    const UniversalVTable& vt = universal_v(3, 1);
    auto z4 = RadicalMonomial::root_of_unity(3, 4, 1);
    CyclicTable d = make_cyclic(1, 2, k);
    d[0][0] = Rational(1, 6) * TowerElement::zeta_pow(k, 3);
    d[0][1] = Rational(1, 6) * TowerElement::zeta_pow(k, 1);
    CyclicTable c = cyclic_L(z4, 2, 1, vt, d, k);
    CHECK(c[0][0] == Rational(1, 4) * TowerElement::zeta_pow(k, 3));
    CHECK(c[0][1] == Rational(1, 4) * TowerElement::zeta_pow(k, 1));
    CyclicTable back = cyclic_D(z4, 2, 1, vt, c, k);
    CHECK(back[0][0] == d[0][0]);
    CHECK(back[0][1] == d[0][1]);
}

TEST_CASE("cyclic maps are mutually inverse and fixed-point free") {
    std::mt19937 eng(13);
    struct Setup {
        long p;
        RadicalMonomial gamma;
        long e;
        FieldPtr k;
    };
    std::vector<Setup> setups = {
        {3, RadicalMonomial::root_of_unity(3, 4, 1), 2, make_field(4, 3, 0)},
        {2, RadicalMonomial::root_of_unity(2, 7, 1), 3, make_field(7, 2, 0)},
        {3, RadicalMonomial::one(3), 1, make_field(1, 3, 0)}};
    for (int trial = 0; trial < 30; ++trial) {
        const Setup& s = setups[eng() % setups.size()];
        long m = 1 + static_cast<long>(eng() % 3);
        const UniversalVTable& vt = universal_v(s.p, m);
        CyclicTable v = make_cyclic(m, s.e, s.k);
        bool nonzero = false;
        for (long kk = 1; kk <= m; ++kk)
            for (long l = 0; l < s.e; ++l) {
                v[kk - 1][l] = random_scalar(eng, s.k);
                if (!v[kk - 1][l].is_zero()) nonzero = true;
            }
        CyclicTable ld = cyclic_L(s.gamma, s.e, m, vt, cyclic_D(s.gamma, s.e, m, vt, v, s.k), s.k);
        CyclicTable dl = cyclic_D(s.gamma, s.e, m, vt, cyclic_L(s.gamma, s.e, m, vt, v, s.k), s.k);
        bool fixed = true;
        CyclicTable dv = cyclic_D(s.gamma, s.e, m, vt, v, s.k);
        for (long kk = 1; kk <= m; ++kk)
            for (long l = 0; l < s.e; ++l) {
                CHECK(ld[kk - 1][l] == v[kk - 1][l]);
                CHECK(dl[kk - 1][l] == v[kk - 1][l]);
                if (dv[kk - 1][l] != v[kk - 1][l]) fixed = false;
            }
        if (nonzero) CHECK(!fixed);  // no nontrivial fixed points
    }
}

TEST_CASE("worked summable input") {
    RationalFunction f = rf("(-x^6+4*x^3+x^2-4*x)/((x-2)^2*(x^3-2)^2)", 3);
    MahlerReport rep = mahler_report(f, 3);
    CHECK(rep.summable);
    CHECK(rep.remainder().is_zero());
    CHECK(rep.res_infinity.all_zero());
    for (auto& tr : rep.res_trees) CHECK(tr.all_zero());
    RationalFunction sol = rep.solution();
    CHECK(delta(sol, 3) == rep.input);
    CHECK(sol == rf("1/(x-2)^2", 3).embed(rep.field));
}

TEST_CASE("worked non-summable input") {
    RationalFunction f = rf("1/(x^6+1)", 3);
    MahlerReport rep = mahler_report(f, 3);
    CHECK(!rep.summable);
    REQUIRE(rep.res_trees.size() == 1);
    const TreeResidues& tr = rep.res_trees[0];
    CHECK(tr.h == 1);
    CHECK(tr.e == 2);
    CHECK(tr.m == 1);
    REQUIRE(tr.values.count(1) == 1);
    CHECK(tr.values.at(1).size() == 4);
    const FieldPtr& W = rep.field;
    auto z3m = [&](long i) { return RadicalMonomial::root_of_unity(3, 3, i); };
    auto z4m = RadicalMonomial::root_of_unity(3, 4, 1);
    for (long i = 1; i <= 2; ++i)
        for (long l = 0; l < 2; ++l) {
            RadicalMonomial pole = z3m(i) * z4m.pow_p(mod_pos(l - 1, 2));
            TowerElement expect = Rational(1, 4) * (z3m(i) * z4m.pow_p(mod_pos(l, 2))).value(W);
            CHECK(tr.values.at(1).at(pole) == expect);
        }
    CHECK(!rep.remainder().is_zero());
    CHECK(rep.remainder() == rep.input + delta(rep.certificate(), 3));
}

TEST_CASE("reports on simple inputs") {
    {
        MahlerReport rep = mahler_report(rf("x^2-x", 2), 2);
        CHECK(rep.summable);
        CHECK(rep.solution() == rf("x", 2).embed(rep.field));
    }
    {
        MahlerReport rep = mahler_report(delta(rf("1/(x-2)", 2), 2), 2);
        CHECK(rep.summable);
        CHECK(delta(rep.solution(), 2) == rep.input);
    }
    {
        MahlerReport rep = mahler_report(rf("0", 2), 2);
        CHECK(rep.summable);
        CHECK(rep.certificate().is_zero());
    }
    {
        // a torsion tree of height 0 passes through as its own remainder
        MahlerReport rep = mahler_report(rf("1/(x-1)", 3), 3);
        CHECK(!rep.summable);
        REQUIRE(rep.res_trees.size() == 1);
        CHECK(rep.res_trees[0].h == 0);
        CHECK(rep.remainder() == rep.input);
        CHECK(rep.certificate_tree.is_zero());
    }
    {
        // residues are linear where supports coincide
        RationalFunction f1 = rf("x", 3), f2 = rf("2*x + x^3", 3);
        MahlerReport r1 = mahler_report(f1, 3), r2 = mahler_report(f2, 3),
                     r12 = mahler_report(f1 + f2, 3);
        CHECK(r12.res_infinity.comp.at(1) ==
              r1.res_infinity.comp.at(1).embed(r12.field) +
                  r2.res_infinity.comp.at(1).embed(r12.field));
    }
}
