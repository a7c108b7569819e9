#include <doctest.h>

#include "mkdv/diffpoly.hpp"
#include "test_helpers.hpp"

using namespace mkdv;
using namespace mkdv::testing;

TEST_CASE("ring arithmetic") {
    DiffPoly u1 = u(1, 1);
    CHECK((u1 + (-u1)).is_zero());

    DiffPoly prod = u1 * u(1, 1, 1);
    CHECK(prod == DiffPoly::from_terms(
                      1, {{Monomial::var({1, 0}) * Monomial::var({1, 1}), q(1)}}));

    DiffPoly one = DiffPoly::constant(1, 1);
    CHECK((u1 + one) * (u1 - one) == u1 * u1 - one);

    CHECK_THROWS_AS(u(1, 1) + u(2, 1), RankMismatch);
}

TEST_CASE("total derivative") {
    DiffPoly u1 = u(1, 1);
    CHECK((u1 * u1).total_derivative() == q(2) * u1 * u(1, 1, 1));
    CHECK(DiffPoly::constant(1, 5).total_derivative().is_zero());
    DiffPoly up = u(1, 1, 1);
    CHECK((u1 * up).total_derivative() == up * up + u1 * u(1, 1, 2));
}

TEST_CASE("partial derivatives") {
    DiffPoly p = u(1, 1) * u(1, 1) * u(1, 1, 1); // u^2 u'
    CHECK(p.partial({1, 0}) == q(2) * u(1, 1) * u(1, 1, 1));
    CHECK(p.partial({1, 1}) == u(1, 1) * u(1, 1));
    CHECK(u(2, 2).partial({1, 0}).is_zero()); // d u_2 / d u_1 = 0
}

TEST_CASE("variational derivative") {
    DiffPoly u1 = u(1, 1), up = u(1, 1, 1), upp = u(1, 1, 2);
    CHECK((u1 * u1 * q(1, 2)).variational_derivative(1) == u1);
    CHECK((up * up * q(1, 2)).variational_derivative(1) == -upp);
    CHECK((u1 * upp + up * up).variational_derivative(1).is_zero());
}

TEST_CASE("antiderivative examples") {
    DiffPoly u1 = u(1, 1), up = u(1, 1, 1), upp = u(1, 1, 2);
    CHECK((up * up + u1 * upp).antiderivative() == u1 * up);
    CHECK(DiffPoly::zero(1).antiderivative().is_zero());
    CHECK_THROWS_AS((u1 * u1).antiderivative(), NotExact);
    CHECK_THROWS_AS(DiffPoly::constant(1, 3).antiderivative(), NotExact);
    // Normalisation: no constant term in the output.
    DiffPoly g = (u1 * up).total_derivative().antiderivative();
    CHECK(g.constant_term() == 0);
    CHECK(g == u1 * up);
}

TEST_CASE("variational kills total derivatives") {
    std::mt19937_64 rng(12345);
    for (int t = 0; t < 40; ++t) {
        int rank = 1 + (t % 2);
        DiffPoly p = random_poly(rng, rank);
        DiffPoly dp = p.total_derivative();
        for (int i = 1; i <= rank; ++i)
            CHECK(dp.variational_derivative(i).is_zero());
    }
}

TEST_CASE("antiderivative round trip on random exact inputs") {
    std::mt19937_64 rng(777);
    for (int t = 0; t < 60; ++t) {
        int rank = 1 + (t % 3);
        DiffPoly g = random_poly(rng, rank);
        g -= DiffPoly::constant(rank, g.constant_term());
        DiffPoly p = g.total_derivative();
        DiffPoly back = p.antiderivative();
        CHECK(back.total_derivative() == p);
        CHECK(back.constant_term() == 0);
    }
}

TEST_CASE("derivation property on random polynomials") {
    std::mt19937_64 rng(4242);
    for (int t = 0; t < 40; ++t) {
        int rank = 1 + (t % 2);
        DiffPoly a = random_poly(rng, rank);
        DiffPoly b = random_poly(rng, rank);
        CHECK((a * b).total_derivative() ==
              a.total_derivative() * b + a * b.total_derivative());
    }
}

TEST_CASE("weight bookkeeping") {
    std::mt19937_64 rng(99);
    for (int t = 0; t < 25; ++t) {
        DiffPoly p = random_homogeneous(rng, 2, 4);
        if (p.is_zero()) continue;
        CHECK(p.is_homogeneous(4));
        DiffPoly dp = p.total_derivative();
        CHECK(dp.is_homogeneous(5));
    }
    // JetVar weight convention: u^{(n)} has weight n+1.
    CHECK(JetVar{1, 0}.weight() == 1);
    CHECK(JetVar{1, 3}.weight() == 4);
}

TEST_CASE("substitution and evaluation") {
    // v |-> u^2/2 + u' pushed through v' and v''.
    DiffPoly v1 = u(1, 1, 1); // v'
    DiffPoly img = u(1, 1) * u(1, 1) * q(1, 2) + u(1, 1, 1);
    DiffPoly out = v1.substitute_fields({img});
    CHECK(out == u(1, 1) * u(1, 1, 1) + u(1, 1, 2));

    DiffPoly p = u(1, 1) * u(1, 1) + u(1, 1, 1) * q(3);
    double got = p.eval({{2.0, -1.5}});
    CHECK(got == doctest::Approx(4.0 - 4.5));
}

TEST_CASE("canonical ordering is deterministic") {
    DiffPoly p = u(1, 1, 2) + u(1, 1) * u(1, 1, 1) + DiffPoly::constant(1, 7);
    // Leading term first: weight 3 entries precede the constant.
    auto it = p.terms().begin();
    CHECK(it->first.weight() == 3);
    CHECK(p.str() != "");
}
