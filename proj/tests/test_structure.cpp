#include <catch2/catch_amalgamated.hpp>

#include "mahler/structure.hpp"

using namespace mahler;

namespace {
const long p = 3;
const auto m2 = RadicalMonomial::from_rational(p, Rational(2));
const auto m8 = RadicalMonomial::from_rational(p, Rational(8));
const auto cbrt2 = RadicalMonomial::radical(p, Rational(2), Rational(1, 3));
const auto z3 = RadicalMonomial::root_of_unity(p, 3, 1);
const auto z4 = RadicalMonomial::root_of_unity(p, 4, 1);
const auto z12 = RadicalMonomial::root_of_unity(p, 12, 1);
}  // namespace

TEST_CASE("tree keys are constant on orbits") {
    CHECK(tree_of(m2, p) == tree_of(m8, p));
    CHECK(tree_of(m2, p) == tree_of(z3 * cbrt2, p));
    CHECK(tree_of(z12, p) == tree_of(z4, p));
    CHECK(tree_of(m2, p) != tree_of(RadicalMonomial::from_rational(p, Rational(3)), p));
    CHECK(!tree_of(m2, p).torsion);
    CHECK(tree_of(z4, p).torsion);
    // the whole bouquet of any root lies in one tree
    for (auto& gamma : {cbrt2, z4 * cbrt2, m2}) {
        auto b = bouquet(gamma, 2, p);
        TreeId id = tree_of(gamma, p);
        for (auto& x : b) CHECK(tree_of(x, p) == id);
    }
}

TEST_CASE("cycles of torsion trees") {
    CycleInfo c4 = cycle_of(tree_of(z4, p), p);
    CHECK(c4.e == 2);
    CHECK(c4.gamma == z4);
    CycleInfo c1 = cycle_of(tree_of(RadicalMonomial::one(p), p), p);
    CHECK(c1.e == 1);
    CHECK(c1.gamma.is_one());
    CycleInfo c7 = cycle_of(tree_of(RadicalMonomial::root_of_unity(2, 7, 1), 2), 2);
    CHECK(c7.e == 3);
}

TEST_CASE("bouquets") {
    auto b = bouquet(cbrt2, 1, p);
    REQUIRE(b.size() == 4);
    bool has2 = false;
    for (auto& x : b)
        if (x == m2) has2 = true;
    CHECK(has2);
    CHECK(bouquet(z4, 1, p).size() == 4);
    CHECK(bouquet(m2, 0, p).size() == 1);
}

TEST_CASE("height, dispersion and addressing on the summable example") {
    FieldPtr k = make_field(12, p, 1, {{2, 1}});
    PartialFraction pf(k);
    pf.add_term(m2, 2, TowerElement::one(k));
    pf.add_term(cbrt2, 2, TowerElement::one(k));
    pf.add_term(z3 * cbrt2, 2, TowerElement::one(k));
    pf.add_term(z3.pow(2) * cbrt2, 2, TowerElement::one(k));
    pf.normalize();
    TreeId id = tree_of(m2, p);
    auto [h, gamma] = height(pf, id, p);
    CHECK(h == 1);
    CHECK(gamma == cbrt2);
    auto d = dispersion(pf, id, p);
    REQUIRE(d);
    CHECK(*d == 1);
    TreeData td = address_poles(pf, id, gamma, h, 0, p);
    CHECK(td.m == 2);
    CHECK(td.e == 0);
    CHECK(td.coeffs.at(2).size() == 4);
    CHECK(td.coeff(2, PoleAddress{0, 0, 0}) == TowerElement::one(k));
}

TEST_CASE("addressing a torsion tree") {
    FieldPtr k = make_field(12, p, 0);
    PartialFraction pf(k);
    for (long a : {3, 9, 1, 5, 7, 11})
        pf.add_term(RadicalMonomial::root_of_unity(p, 12, a), 1, TowerElement::one(k));
    pf.normalize();
    TreeId id = tree_of(z4, p);
    auto [h, gamma] = height(pf, id, p);
    CHECK(h == 1);
    CHECK(gamma == z4);
    CHECK(!dispersion(pf, id, p));  // a pole sits on the cycle
    TreeData td = address_poles(pf, id, gamma, h, 2, p);
    CHECK(td.e == 2);
    CHECK(td.m == 1);
    CHECK(td.coeffs.at(1).size() == 6);
    CHECK(td.coeff(1, PoleAddress{0, 0, 0}) == TowerElement::one(k));
    CHECK(td.coeff(1, PoleAddress{0, 0, 1}) == TowerElement::one(k));
    for (auto& [ad, v] : td.coeffs.at(1))
        if (ad.n == 1) CHECK(ad.i % p != 0);
}

TEST_CASE("dispersion") {
    FieldPtr k = make_field(1, p, 0);
    {
        PartialFraction pf(k);
        pf.add_term(m2, 1, TowerElement::one(k));
        pf.add_term(m8, 1, TowerElement::one(k));
        pf.normalize();
        auto d = dispersion(pf, tree_of(m2, p), p);
        REQUIRE(d);
        CHECK(*d == 1);
    }
    {
        PartialFraction pf(k);
        pf.add_term(m2, 1, TowerElement::one(k));
        pf.normalize();
        auto d = dispersion(pf, tree_of(m2, p), p);
        REQUIRE(d);
        CHECK(*d == 0);
        CHECK_THROWS_AS(dispersion(pf, tree_of(z4, p), p), TreeNotInSupport);
    }
}

TEST_CASE("dispersion at infinity") {
    FieldPtr k = make_field(1, p, 0);
    LaurentPoly l(k);
    l.add_term(0, TowerElement::from_rational(k, Rational(5)));
    CHECK(dispersion_at_infinity(l, p) == 0);
    LaurentPoly l2(k);
    l2.add_term(1, TowerElement::one(k));
    l2.add_term(2, TowerElement::one(k));
    CHECK(dispersion_at_infinity(l2, 2) == 1);
    LaurentPoly l3(k);
    l3.add_term(1, TowerElement::one(k));
    l3.add_term(5, TowerElement::one(k));
    CHECK(dispersion_at_infinity(l3, 3) == 0);
    LaurentPoly z(k);
    CHECK_THROWS_AS(dispersion_at_infinity(z, p), EmptySupport);
}

TEST_CASE("splitting by tree partitions the poles") {
    FieldPtr k = make_field(12, p, 1, {{2, 1}});
    PartialFraction pf(k);
    pf.add_term(m2, 1, TowerElement::one(k));
    pf.add_term(cbrt2, 2, TowerElement::one(k));
    pf.add_term(z4, 1, TowerElement::one(k));
    pf.add_term(RadicalMonomial::from_rational(p, Rational(3)), 1, TowerElement::one(k));
    pf.normalize();
    auto trees = split_by_tree(pf, p);
    CHECK(trees.size() == 3);
    long nterms = 0;
    for (auto& [id, tpf] : trees) nterms += static_cast<long>(tpf.terms().size());
    CHECK(nterms == 4);
}
