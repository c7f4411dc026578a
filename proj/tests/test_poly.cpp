// SPDX-License-Identifier: MIT
#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "ajd/poly.hpp"

using namespace ajd;

TEST_CASE("multi-index graded ordering", "[poly]") {
    const auto idx = indices_up_to(2, 2);
    REQUIRE(idx.size() == 6);
    CHECK(idx[0] == MultiIndex{0, 0});
    CHECK(idx[1] == MultiIndex{1, 0});
    CHECK(idx[2] == MultiIndex{0, 1});
    CHECK(idx[3] == MultiIndex{2, 0});
    CHECK(idx[4] == MultiIndex{1, 1});
    CHECK(idx[5] == MultiIndex{0, 2});

    // binom(n + d, d) entries, strictly increasing in the graded order
    const auto idx3 = indices_up_to(3, 4);
    CHECK(idx3.size() == 35);
    for (std::size_t i = 1; i < idx3.size(); ++i) CHECK(idx3[i - 1] < idx3[i]);
}

TEST_CASE("multi-index arithmetic", "[poly]") {
    const MultiIndex a{2, 0, 1}, b{1, 3, 0};
    CHECK(a.order() == 3);
    CHECK((a + b) == MultiIndex{3, 3, 1});
    CHECK(MultiIndex{1, 0, 1}.divides(a));
    CHECK(!b.divides(a));
    CHECK(MultiIndex::unit(3, 1, 4) == MultiIndex{0, 4, 0});
    CHECK(a.str() == "(2,0,1)");
}

TEST_CASE("polynomial arithmetic matches pointwise evaluation", "[poly]") {
    std::mt19937_64 rng(42);
    std::uniform_real_distribution<double> U(-2.0, 2.0);

    Polynomial p(2), q(2);
    p.set_coeff(MultiIndex{0, 0}, 1.5);
    p.set_coeff(MultiIndex{2, 1}, -0.75);
    p.set_coeff(MultiIndex{0, 3}, 2.0);
    q.set_coeff(MultiIndex{1, 0}, 3.0);
    q.set_coeff(MultiIndex{1, 2}, 0.5);

    CHECK(p.degree() == 3);
    CHECK((p * q).degree() == 6);

    for (int it = 0; it < 50; ++it) {
        const double x = U(rng), y = U(rng);
        const double pv = 1.5 - 0.75 * x * x * y + 2.0 * y * y * y;
        const double qv = 3.0 * x + 0.5 * x * y * y;
        CHECK(p({x, y}) == Catch::Approx(pv).margin(1e-12));
        CHECK((p + q)({x, y}) == Catch::Approx(pv + qv).margin(1e-12));
        CHECK((p - q)({x, y}) == Catch::Approx(pv - qv).margin(1e-12));
        CHECK((p * q)({x, y}) == Catch::Approx(pv * qv).margin(1e-11));
        CHECK((p * -2.0)({x, y}) == Catch::Approx(-2.0 * pv).margin(1e-12));
    }
}

TEST_CASE("exact zero handling", "[poly]") {
    Polynomial p(1);
    p.set_coeff(MultiIndex{3}, 2.0);
    p.set_coeff(MultiIndex{0}, -1.0);
    const Polynomial z = p - p;
    CHECK(z.is_zero());
    CHECK(z.degree() == kDegreeOfZero);
    CHECK(z.terms().empty());

    p.add_term(MultiIndex{3}, -2.0);  // cancels the cubic term exactly
    CHECK(p.degree() == 0);
    CHECK(p.coeff(MultiIndex{3}) == 0.0);
}

TEST_CASE("derivatives", "[poly]") {
    Polynomial p(2);
    p.set_coeff(MultiIndex{3, 1}, 2.0);
    p.set_coeff(MultiIndex{0, 2}, -1.0);

    const Polynomial px = p.derivative(0);
    CHECK(px.coeff(MultiIndex{2, 1}) == 6.0);
    CHECK(px.terms().size() == 1);

    const Polynomial py = p.derivative(1);
    CHECK(py.coeff(MultiIndex{3, 0}) == 2.0);
    CHECK(py.coeff(MultiIndex{0, 1}) == -2.0);

    // mixed partials commute
    const Polynomial pxy = p.derivative(0).derivative(1);
    const Polynomial pyx = p.derivative(1).derivative(0);
    CHECK(pxy.coeff(MultiIndex{2, 0}) == pyx.coeff(MultiIndex{2, 0}));

    CHECK(Polynomial::constant(2, 5.0).derivative(0).is_zero());
}

TEST_CASE("affine composition", "[poly]") {
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> U(-1.5, 1.5);

    Polynomial p(2);
    p.set_coeff(MultiIndex{2, 0}, 1.0);
    p.set_coeff(MultiIndex{1, 1}, -2.0);
    p.set_coeff(MultiIndex{0, 1}, 0.5);
    p.set_coeff(MultiIndex{0, 0}, -0.25);

    Eigen::MatrixXd A(2, 2);
    A << 0.3, -1.2, 2.0, 0.7;
    Eigen::VectorXd b(2);
    b << 0.1, -0.4;
    const Polynomial comp = p.compose_affine(A, b);
    CHECK(comp.degree() == p.degree());

    for (int it = 0; it < 50; ++it) {
        Eigen::VectorXd y(2);
        y << U(rng), U(rng);
        const Eigen::VectorXd x = A * y + b;
        CHECK(comp(y) == Catch::Approx(p(x)).margin(1e-13));
    }

    // pure translation: p(x + c) has the binomially shifted coefficients
    const Polynomial cube = Polynomial::monomial(MultiIndex{3});
    Eigen::MatrixXd I1 = Eigen::MatrixXd::Identity(1, 1);
    Eigen::VectorXd c(1);
    c << 2.0;
    const Polynomial sh = cube.compose_affine(I1, c);
    CHECK(sh.coeff(MultiIndex{0}) == 8.0);
    CHECK(sh.coeff(MultiIndex{1}) == 12.0);
    CHECK(sh.coeff(MultiIndex{2}) == 6.0);
    CHECK(sh.coeff(MultiIndex{3}) == 1.0);
}

TEST_CASE("input validation", "[poly]") {
    Polynomial p(2);
    CHECK_THROWS_AS(p.set_coeff(MultiIndex{1}, 1.0), invalid_input);
    CHECK_THROWS_AS(p.derivative(2), invalid_input);
    CHECK_THROWS_AS(p({1.0}), invalid_input);
    CHECK_THROWS_AS((MultiIndex{1, 0} + MultiIndex{1, 0, 0}), invalid_input);
    CHECK_THROWS_AS(MultiIndex({-1, 0}), invalid_input);
}
