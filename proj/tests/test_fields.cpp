#include <catch2/catch_amalgamated.hpp>

#include "mahler/monomial.hpp"

using namespace mahler;

TEST_CASE("rational helpers") {
    CHECK(rat(2, 4) == Rational(1, 2));
    CHECK(rat_pow(Rational(2), -3) == Rational(1, 8));
    CHECK(is_integer(rat(6, 3)));
    CHECK(!is_integer(Rational(1, 2)));
    auto f = factor_integer(Integer(360));
    CHECK(f == std::map<long, long>{{2, 3}, {3, 2}, {5, 1}});
    CHECK(euler_phi(12) == 4);
    CHECK(multiplicative_order(3, 4) == 2);
    CHECK(multiplicative_order(2, 7) == 3);
    CHECK(pow_mod(3, 5, 7) == 5);
    CHECK(mod_pos(-3, 5) == 2);
}

TEST_CASE("cyclotomic polynomials and arithmetic") {
    // Phi_12 = x^4 - x^2 + 1
    const QPoly& phi12 = cyclotomic_polynomial(12);
    CHECK(phi12 == QPoly{Rational(1), Rational(0), Rational(-1), Rational(0), Rational(1)});
    CHECK(cyclotomic_polynomial(1) == QPoly{Rational(-1), Rational(1)});
    CHECK(cyclotomic_polynomial(2) == QPoly{Rational(1), Rational(1)});

    auto f = get_cyclo_field(12);
    CycloElement z = CycloElement::zeta_pow(f, 1);
    CycloElement z12 = CycloElement::one(f);
    CycloElement acc = CycloElement::one(f);
    for (int i = 0; i < 12; ++i) acc *= z;
    CHECK(acc == z12);
    // zeta_12^6 = -1
    CHECK(CycloElement::zeta_pow(f, 6) == -CycloElement::one(f));
    CHECK(z * z.inverse() == CycloElement::one(f));
}

TEST_CASE("tower arithmetic and inversion") {
    // rho^3 = 2 over Q: 1/rho = rho^2/2
    FieldPtr k = make_field(1, 3, 1, {{2, 1}});
    TowerElement rho = TowerElement::rho_pow(k, 1);
    CHECK(rho.inverse() == Rational(1, 2) * TowerElement::rho_pow(k, 2));
    CHECK(rho * rho.inverse() == TowerElement::one(k));
    CHECK(TowerElement::from_rational(k, Rational(2)).inverse() ==
          TowerElement::from_rational(k, Rational(1, 2)));

    FieldPtr k4 = make_field(4, 3, 0);
    TowerElement z4 = TowerElement::zeta_pow(k4, 1);
    CHECK(z4.inverse() == TowerElement::zeta_pow(k4, 3));
}

TEST_CASE("degenerate tower moduli are rejected") {
    // rho^3 = 8 would be reducible (rho - 2 divides it), so the field
    // constructor refuses p-th-power radicands outright
    CHECK_THROWS_AS(make_field(1, 3, 1, {{2, 3}}), Error);
}

TEST_CASE("embeddings preserve values") {
    FieldPtr q = make_field(1, 3, 0);
    FieldPtr k12 = make_field(12, 3, 0);
    CHECK(TowerElement::from_rational(q, Rational(1, 2)).embed(k12) ==
          TowerElement::from_rational(k12, Rational(1, 2)));
    FieldPtr k4 = make_field(4, 3, 0);
    CHECK(TowerElement::zeta_pow(k4, 1).embed(k12) == TowerElement::zeta_pow(k12, 3));
    // cbrt(2) from (N=1,c=2,h=1) into (N=9,c=2,h=2) is rho^3 with rho = 2^(1/9)
    FieldPtr k1 = make_field(1, 3, 1, {{2, 1}});
    FieldPtr k9 = make_field(9, 3, 2, {{2, 1}});
    CHECK(TowerElement::rho_pow(k1, 1).embed(k9) == TowerElement::rho_pow(k9, 3));
    // homomorphism spot check
    TowerElement a = TowerElement::rho_pow(k1, 1) + TowerElement::from_rational(k1, Rational(3));
    TowerElement b = TowerElement::rho_pow(k1, 2) - TowerElement::one(k1);
    CHECK((a * b).embed(k9) == a.embed(k9) * b.embed(k9));
}

TEST_CASE("radical monomial normal forms") {
    const long p = 3;
    CHECK(RadicalMonomial::root_of_unity(p, 4, 1).torsion_order() == 4);
    CHECK(RadicalMonomial::root_of_unity(p, 4, 2).torsion_order() == 2);
    CHECK(RadicalMonomial::root_of_unity(p, 12, 7).torsion_order() == 12);
    CHECK(RadicalMonomial::root_of_unity(p, 4, 5) == RadicalMonomial::root_of_unity(p, 4, 1));
    // 4^(1/2) = 2 under exponent normalization
    CHECK(RadicalMonomial::radical(2, Rational(4), Rational(1, 2)) ==
          RadicalMonomial::from_rational(2, Rational(2)));
    CHECK(RadicalMonomial::radical(p, Rational(2), Rational(1, 3)) !=
          RadicalMonomial::root_of_unity(p, 3, 1) *
              RadicalMonomial::radical(p, Rational(2), Rational(1, 3)));
}

TEST_CASE("monomial p-power action") {
    const long p = 3;
    auto cbrt2 = RadicalMonomial::radical(p, Rational(2), Rational(1, 3));
    CHECK(cbrt2.pow_p(1) == RadicalMonomial::from_rational(p, Rational(2)));
    auto z4 = RadicalMonomial::root_of_unity(p, 4, 1);
    CHECK(z4.pow_p(2) == z4);
    CHECK(z4.pow_p(1) != z4);
    CHECK(RadicalMonomial::one(p).pow_p(7) == RadicalMonomial::one(p));
    // composition property on a mixed sample
    auto m = z4 * cbrt2 * RadicalMonomial::from_rational(p, Rational(5));
    for (long s = 0; s <= 3; ++s)
        for (long t = 0; t <= 3; ++t) CHECK(m.pow_p(s).pow_p(t) == m.pow_p(s + t));
}

TEST_CASE("compatible system of p-power roots") {
    const long p = 3;
    for (long n = 0; n <= 3; ++n) {
        long pn = 1;
        for (long i = 0; i < n; ++i) pn *= p;
        for (long l = 0; l <= n; ++l) {
            long pl = 1;
            for (long i = 0; i < l; ++i) pl *= p;
            CHECK(RadicalMonomial::root_of_unity(p, pn, 1).pow(pl) ==
                  RadicalMonomial::root_of_unity(p, pn / pl, 1));
        }
    }
}

TEST_CASE("monomial values in a tower field") {
    FieldPtr k = make_field(9, 3, 2, {{2, 1}});
    // zeta_3 * 2^(1/9) = zeta_9^3 * rho
    auto m = RadicalMonomial::root_of_unity(3, 3, 1) *
             RadicalMonomial::radical(3, Rational(2), Rational(1, 9));
    CHECK(m.value(k) == TowerElement::zeta_pow(k, 3) * TowerElement::rho_pow(k, 1));
    CHECK(RadicalMonomial::one(3).value(k) == TowerElement::one(k));
    FieldPtr k0 = make_field(1, 3, 1, {{2, 1}});
    CHECK(RadicalMonomial::from_rational(3, Rational(8)).value(k0) ==
          TowerElement::from_rational(k0, Rational(8)));
    // multiplicativity
    auto a = RadicalMonomial::radical(3, Rational(2), Rational(1, 3));
    auto b = RadicalMonomial::root_of_unity(3, 9, 2) * RadicalMonomial::from_rational(3, Rational(6));
    CHECK((a * b).value(k) == a.value(k) * b.value(k));
}

TEST_CASE("field hull") {
    FieldHull hull(3);
    hull.add_monomial(RadicalMonomial::radical(3, Rational(2), Rational(1, 3)));
    hull.add_monomial(RadicalMonomial::root_of_unity(3, 12, 1));
    FieldPtr k = hull.build();
    CHECK(k->n() == 12);
    CHECK(k->h() == 1);

    FieldHull bad(3);
    bad.add_monomial(RadicalMonomial::radical(3, Rational(2), Rational(1, 3)));
    bad.add_monomial(RadicalMonomial::radical(3, Rational(5), Rational(1, 3)));
    CHECK_THROWS_AS(bad.build(), UnsupportedDenominator);
}
