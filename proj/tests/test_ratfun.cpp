#include <catch2/catch_amalgamated.hpp>
#include <random>

#include "mahler/parser.hpp"
#include "mahler/recognize.hpp"

using namespace mahler;

namespace {

RationalFunction rf(const std::string& s, long p) { return parse_input(s, p).f; }

}  // namespace

TEST_CASE("polynomial basics") {
    FieldPtr k = make_field(1, 3, 0);
    TPoly a = rf("x^3-2*x+1", 3).num();
    TPoly b = rf("x-1", 3).num();
    TPoly q(k), r(k);
    divrem(a, b, q, r);
    CHECK(r.is_zero());
    CHECK(q * b == a);
    CHECK(gcd(a, b).deg() == 1);
    CHECK(a.eval(TowerElement::one(k)) == TowerElement::zero(k));
    CHECK(a.shift(TowerElement::one(k)).coeff(0) == TowerElement::zero(k));
    CHECK(a.subst_power(2).deg() == 6);
}

TEST_CASE("split into Laurent and proper parts") {
    const long p = 3;
    // x + 1/(x-1) is already split
    {
        auto [fl, ft] = split_LT(rf("x + 1/(x-1)", p));
        CHECK(fl.terms() == std::map<long, TowerElement>{{1, TowerElement::one(fl.field())}});
        CHECK(ft == rf("1/(x-1)", p));
    }
    // (x^2+1)/x: the 1/x term is Laurent
    {
        auto [fl, ft] = split_LT(rf("(x^2+1)/x", p));
        CHECK(ft.is_zero());
        CHECK(fl.coeff(1) == TowerElement::one(fl.field()));
        CHECK(fl.coeff(-1) == TowerElement::one(fl.field()));
    }
    // 1/(x(x-1)) = -1/x + 1/(x-1)
    {
        auto [fl, ft] = split_LT(rf("1/(x*(x-1))", p));
        CHECK(fl.coeff(-1) == -TowerElement::one(fl.field()));
        CHECK(ft == rf("1/(x-1)", p));
    }
    // reassembly
    for (const char* s : {"(x^5+3)/(x^2*(x-2))", "x^2 + 1/x + 1/(x^2-2)", "7"}) {
        RationalFunction f = rf(s, p);
        auto [fl, ft] = split_LT(f);
        CHECK(RationalFunction::from_laurent(fl) + ft == f);
        CHECK((ft.is_zero() || ft.num().deg() < ft.den().deg()));
        if (!ft.is_zero()) CHECK(!ft.den().coeff(0).is_zero());
    }
}

TEST_CASE("sigma and delta") {
    const long p = 3;
    CHECK(sigma(rf("x + 1/(x-2)", p), p) == rf("x^3 + 1/(x^3-2)", p));
    CHECK(sigma(rf("5/7", p), p) == rf("5/7", p));
    CHECK(delta(rf("x", 2), 2) == rf("x^2-x", 2));
    CHECK(delta(rf("42", 2), 2).is_zero());
    // the worked summable input is delta(1/(x-2)^2)
    CHECK(delta(rf("1/(x-2)^2", p), p) ==
          rf("(-x^6+4*x^3+x^2-4*x)/((x-2)^2*(x^3-2)^2)", p));
    // sigma is a ring endomorphism
    RationalFunction a = rf("(x+1)/(x^2-2)", p), b = rf("x^2 - 1/2", p);
    CHECK(sigma(a * b, p) == sigma(a, p) * sigma(b, p));
    CHECK(sigma(a + b, p) == sigma(a, p) + sigma(b, p));
    // sigma-compatibility of the split
    RationalFunction f = rf("x^2 + 1/x + (x+1)/(x^2-2)", p);
    auto [fl, ft] = split_LT(f);
    auto [sl, st] = split_LT(sigma(f, p));
    CHECK(sl == sigma(fl, p));
    CHECK(st == sigma(ft, p));
}

TEST_CASE("trajectory components") {
    const long p = 3;
    FieldPtr k = make_field(1, p, 0);
    LaurentPoly l(k);
    l.add_term(1, TowerElement::one(k));
    l.add_term(3, TowerElement::from_rational(k, Rational(2)));
    l.add_term(5, TowerElement::one(k));
    auto comps = trajectory_components(l, p);
    CHECK(comps.size() == 2);
    CHECK(comps.at(1).terms().size() == 2);
    CHECK(comps.at(5).terms().size() == 1);
    LaurentPoly c5(k);
    c5.add_term(0, TowerElement::from_rational(k, Rational(5)));
    auto cc = trajectory_components(c5, p);
    CHECK(cc.size() == 1);
    CHECK(cc.count(0) == 1);
    // components sum back and are sigma-compatible
    LaurentPoly sum(k);
    for (auto& [i, part] : comps) sum = sum + part;
    CHECK(sum == l);
    auto scomps = trajectory_components(sigma(l, p), p);
    for (auto& [i, part] : comps) CHECK(scomps.at(i) == sigma(part, p));
}

TEST_CASE("partial fractions against verified poles") {
    const long p = 3;
    // 1/(x^2-1) = (1/2)/(x-1) - (1/2)/(x+1)
    {
        PoleSet ps = discover_poles(rf("1/(x^2-1)", p));
        PartialFraction pf = partial_fractions(ps.f, ps.poles);
        auto one = RadicalMonomial::one(p);
        auto minus = RadicalMonomial::root_of_unity(p, 2, 1);
        CHECK(pf.coeff(one, 1) == TowerElement::from_rational(ps.field, Rational(1, 2)));
        CHECK(pf.coeff(minus, 1) == TowerElement::from_rational(ps.field, Rational(-1, 2)));
        CHECK(recombine(pf) == ps.f);
    }
    // 1/(x^6+1): six simple poles with the displayed coefficients
    {
        PoleSet ps = discover_poles(rf("1/(x^6+1)", p));
        PartialFraction pf = partial_fractions(ps.f, ps.poles);
        const FieldPtr& k = ps.field;
        auto z12 = [&](long a) { return RadicalMonomial::root_of_unity(p, 12, a); };
        CHECK(pf.coeff(z12(3), 1) == Rational(1, 6) * TowerElement::zeta_pow(k, 9));
        CHECK(pf.coeff(z12(9), 1) == Rational(1, 6) * TowerElement::zeta_pow(k, 3));
        CHECK(pf.coeff(z12(1), 1) == Rational(1, 6) * TowerElement::zeta_pow(k, 7));
        CHECK(pf.coeff(z12(5), 1) == Rational(1, 6) * TowerElement::zeta_pow(k, 11));
        CHECK(pf.coeff(z12(7), 1) == Rational(1, 6) * TowerElement::zeta_pow(k, 1));
        CHECK(pf.coeff(z12(11), 1) == Rational(1, 6) * TowerElement::zeta_pow(k, 5));
        CHECK(recombine(pf) == ps.f);
    }
    // mismatched pole list is rejected
    {
        PoleSet ps = discover_poles(rf("1/(x^2-1)", p));
        std::vector<std::pair<RadicalMonomial, long>> wrong = {
            {RadicalMonomial::one(p), 2}};
        CHECK_THROWS_AS(partial_fractions(ps.f, wrong), FactorMismatch);
    }
}

TEST_CASE("recombine inverts partial fractions on random inputs") {
    std::mt19937 eng(20260823);
    const long p = 3;
    std::vector<RadicalMonomial> pool = {
        RadicalMonomial::from_rational(p, Rational(2)),
        RadicalMonomial::from_rational(p, Rational(1, 2)),
        RadicalMonomial::from_rational(p, Rational(-3)),
        RadicalMonomial::root_of_unity(p, 4, 1),
        RadicalMonomial::root_of_unity(p, 12, 7),
        RadicalMonomial::radical(p, Rational(2), Rational(1, 3)),
        RadicalMonomial::root_of_unity(p, 3, 1) *
            RadicalMonomial::radical(p, Rational(2), Rational(1, 3))};
    FieldHull hull(p);
    for (auto& m : pool) hull.add_monomial(m);
    FieldPtr k = hull.build();

    for (int trial = 0; trial < 30; ++trial) {
        PartialFraction pf(k);
        long nterms = 1 + static_cast<long>(eng() % 3);
        for (long t = 0; t < nterms; ++t) {
            const RadicalMonomial& pole = pool[eng() % pool.size()];
            long order = 1 + static_cast<long>(eng() % 2);
            Rational c = rat(static_cast<long>(eng() % 7) - 3, 1 + static_cast<long>(eng() % 3));
            if (c == 0) c = 1;
            pf.add_term(pole, order, TowerElement::from_rational(k, c));
        }
        pf.normalize();
        RationalFunction f = recombine(pf);
        if (f.is_zero()) continue;
        std::vector<std::pair<RadicalMonomial, long>> poles;
        for (auto& t : pf.terms()) poles.emplace_back(t.pole, t.order());
        PartialFraction back = partial_fractions(f, poles);
        for (auto& t : pf.terms())
            for (long ord = 1; ord <= t.order(); ++ord)
                CHECK(back.coeff(t.pole, ord) == pf.coeff(t.pole, ord));
    }
}

TEST_CASE("pole discovery") {
    const long p = 3;
    // the worked summable denominator
    {
        PoleSet ps = discover_poles(rf("1/((x-2)^2*(x^3-2)^2)", p));
        CHECK(ps.poles.size() == 4);
        long total = 0;
        for (auto& [m, mult] : ps.poles) total += mult;
        CHECK(total == 8);
        CHECK(ps.field->n() == 3);
        CHECK(ps.field->h() == 1);
    }
    // cyclotomic denominator
    {
        PoleSet ps = discover_poles(rf("1/(x^6+1)", p));
        CHECK(ps.poles.size() == 6);
        CHECK(ps.field->n() == 12);
        CHECK(ps.field->h() == 0);
    }
    // unsupported: irreducible non-binomial
    CHECK_THROWS_AS(discover_poles(rf("1/(x^2+x+3)", p)), UnsupportedDenominator);
}
