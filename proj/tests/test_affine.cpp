// SPDX-License-Identifier: MIT
#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <random>

#include "ajd/affine.hpp"
#include "golden.hpp"

using namespace ajd;

namespace {

AffineModel bajd(double ktheta, double kappa, double sigma, double l, double nu) {
    Eigen::MatrixXd a(0, 0);
    std::vector<Eigen::MatrixXd> alpha{Eigen::MatrixXd::Constant(1, 1, sigma * sigma / 2.0)};
    Eigen::VectorXd b(1);
    b << ktheta;
    Eigen::MatrixXd beta(1, 1);
    beta << -kappa;
    std::vector<JumpSpec> jm;
    if (l > 0.0) jm.push_back(JumpSpec::exponential(l, nu, 0));
    return AffineModel(1, 0, a, alpha, b, beta, jm);
}

AffineModel heston(double bV, double kV, double sigma, double bX, double rho) {
    Eigen::MatrixXd a = Eigen::MatrixXd::Zero(1, 1);
    Eigen::MatrixXd al(2, 2);
    al << sigma * sigma / 2.0, rho * sigma / 2.0, rho * sigma / 2.0, 0.5;
    Eigen::VectorXd b(2);
    b << bV, bX;
    Eigen::MatrixXd beta(2, 2);
    beta << -kV, 0.0, -0.5, 0.0;
    return AffineModel(1, 1, a, {al}, b, beta);
}

}  // namespace

TEST_CASE("generator matrix of the jump square-root model", "[affine]") {
    const double kt = 0.0007, ka = 0.4648, si = 0.01, l = 1.0, nu = 0.0002;
    const auto q = build_q_matrix(bajd(kt, ka, si, l, nu), 4);
    REQUIRE(q.basis.size() == 5);
    const double s2 = si * si;
    const double want[5][5] = {
        {0, kt + l * nu, 2 * l * nu * nu, 6 * l * nu * nu * nu, 24 * l * nu * nu * nu * nu},
        {0, -ka, s2 + 2 * kt + 2 * l * nu, 6 * l * nu * nu, 24 * l * nu * nu * nu},
        {0, 0, -2 * ka, 3 * s2 + 3 * kt + 3 * l * nu, 12 * l * nu * nu},
        {0, 0, 0, -3 * ka, 6 * s2 + 4 * kt + 4 * l * nu},
        {0, 0, 0, 0, -4 * ka}};
    for (int i = 0; i < 5; ++i)
        for (int j = 0; j < 5; ++j) {
            INFO("entry (" << i << "," << j << ")");
            CHECK(q.entries(i, j) ==
                  Catch::Approx(want[i][j]).epsilon(1e-15).margin(1e-18));
        }
}

TEST_CASE("generator matrix of the stochastic volatility model", "[affine]") {
    const double bV = 0.04, kV = 1.0, si = 0.2, bX = 0.03, rho = -0.8;
    const auto q = build_q_matrix(heston(bV, kV, si, bX, rho), 2);
    REQUIRE(q.basis.size() == 6);
    // basis order 1, v, x, v^2, vx, x^2
    CHECK(q.basis[4] == MultiIndex{1, 1});
    const double s2 = si * si;
    const double want[6][6] = {{0, bV, bX, 0, 0, 0},
                               {0, -kV, -0.5, s2 + 2 * bV, bX + rho * si, 1},
                               {0, 0, 0, 0, bV, 2 * bX},
                               {0, 0, 0, -2 * kV, -0.5, 0},
                               {0, 0, 0, 0, -kV, -1},
                               {0, 0, 0, 0, 0, 0}};
    for (int i = 0; i < 6; ++i)
        for (int j = 0; j < 6; ++j) {
            INFO("entry (" << i << "," << j << ")");
            CHECK(q.entries(i, j) ==
                  Catch::Approx(want[i][j]).epsilon(1e-15).margin(1e-18));
        }
}

TEST_CASE("point-mass jumps enter through exact Taylor terms", "[affine]") {
    const double kt = 0.05, ka = 0.8, si = 0.1, l = 2.0, h = 0.3;
    Eigen::MatrixXd a(0, 0);
    Eigen::VectorXd b(1);
    b << kt;
    Eigen::MatrixXd beta(1, 1);
    beta << -ka;
    const AffineModel m(1, 0, a, {Eigen::MatrixXd::Constant(1, 1, si * si / 2.0)}, b, beta,
                        {JumpSpec::point_mass(l, h, 0)});
    const auto q = build_q_matrix(m, 2);
    CHECK(q.entries(0, 1) == Catch::Approx(kt + l * h).epsilon(1e-15));
    CHECK(q.entries(0, 2) == Catch::Approx(l * h * h).epsilon(1e-15));
    CHECK(q.entries(1, 2) == Catch::Approx(si * si + 2 * kt + 2 * l * h).epsilon(1e-15));
    CHECK(q.entries(2, 2) == Catch::Approx(-2 * ka).epsilon(1e-15));
}

TEST_CASE("generator matrix is upper triangular with exact zeros", "[affine]") {
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> U(0.05, 2.0);
    for (int it = 0; it < 10; ++it) {
        const auto m = heston(U(rng), U(rng), U(rng), U(rng), -0.9 + 1.8 * it / 9.0);
        const auto q = build_q_matrix(m, 5);
        for (std::size_t i = 0; i < q.basis.size(); ++i)
            for (std::size_t j = 0; j < q.basis.size(); ++j)
                if (q.basis[i].order() > q.basis[j].order())
                    CHECK(q.entries((Eigen::Index)i, (Eigen::Index)j) == 0.0);
    }
    const auto qb = build_q_matrix(bajd(0.04, 1.0, 0.2, 3.0, 0.01), 10);
    for (Eigen::Index i = 0; i < 11; ++i)
        for (Eigen::Index j = 0; j < i; ++j) CHECK(qb.entries(i, j) == 0.0);
}

TEST_CASE("conditional moments: closed forms and degenerate times", "[affine]") {
    const double kt = 0.04, ka = 1.3, si = 0.25;
    const auto model = bajd(kt, ka, si, 0.0, 1.0);
    Eigen::VectorXd x0(1);
    x0 << 0.07;
    const double t = 0.37;
    const auto mom = conditional_moments(model, x0, t, 6);
    const double theta = kt / ka;
    CHECK(mom.at(MultiIndex{0}) == Catch::Approx(1.0).margin(1e-14));
    CHECK(mom.at(MultiIndex{1}) ==
          Catch::Approx(x0[0] * std::exp(-ka * t) + theta * (1.0 - std::exp(-ka * t)))
              .epsilon(1e-13));
    CHECK(mom.at(MultiIndex{2}) - mom.at(MultiIndex{1}) * mom.at(MultiIndex{1}) > 0.0);

    const auto mom0 = conditional_moments(model, x0, 0.0, 6);
    for (int k = 0; k <= 6; ++k)
        CHECK(mom0.at(MultiIndex{k}) == Catch::Approx(std::pow(0.07, k)).epsilon(1e-13));

    // short-time continuity: first moment moves O(t)
    const auto eps = conditional_moments(model, x0, 1e-8, 2);
    CHECK(std::abs(eps.at(MultiIndex{1}) - 0.07) < 1e-8);
    CHECK(std::abs(eps.at(MultiIndex{2}) - 0.0049) < 1e-8);
}

TEST_CASE("conditional moments satisfy the tower property", "[affine]") {
    const auto model = bajd(0.04, 1.0, 0.2, 3.0, 0.01);
    Eigen::VectorXd x0(1);
    x0 << 0.07;
    const double s = 0.31, t = 0.13;
    const int deg = 6;
    const auto ms = conditional_moments(model, x0, s, deg);
    const auto mst = conditional_moments(model, x0, s + t, deg);
    const auto q = build_q_matrix(model, deg);
    const Eigen::MatrixXd Ht = (q.entries * t).exp();
    for (int k = 0; k <= deg; ++k) {
        double tower = 0.0;
        for (int i = 0; i <= deg; ++i) tower += Ht(i, k) * ms.at(MultiIndex{i});
        CHECK(mst.at(MultiIndex{k}) ==
              Catch::Approx(tower).epsilon(1e-9).margin(1e-18));
    }
}

TEST_CASE("jump square-root model moments against references", "[affine]") {
    // kt=0.04 k=1 sigma=0.2 l=3 nu=0.01, one month, y0=0.07
    const auto model = bajd(0.04, 1.0, 0.2, 3.0, 0.01);
    Eigen::VectorXd x0(1);
    x0 << 0.07;
    const auto mom = conditional_moments(model, x0, 1.0 / 12.0, 10);
    for (const auto& r : golden::sqjd_moments) {
        INFO("order " << r.n);
        CHECK(mom.at(MultiIndex{(int)r.n}) == Catch::Approx(r.value).epsilon(5e-10));
    }
}

TEST_CASE("stochastic volatility moments against references", "[affine]") {
    const auto model = heston(0.04, 1.0, 0.2, 0.03, -0.8);
    Eigen::VectorXd x0(2);
    x0 << 0.04, 5.0;
    const double t = 1.0 / 52.0;
    const auto raw = conditional_moments(model, x0, t, 4);
    for (const auto& r : golden::heston_moments) {
        MultiIndex a{(int)r.j, (int)r.k};
        INFO("raw moment " << a.str());
        CHECK(raw.at(a) == Catch::Approx(r.raw).epsilon(1e-10));
    }

    // moments about the starting point through the affine-image route; the
    // direct binomial recombination of raw moments would lose ~10 digits here
    const auto centered =
        conditional_affine_moments(model, x0, t, Eigen::MatrixXd::Identity(2, 2), -x0, 4);
    for (const auto& r : golden::heston_moments) {
        MultiIndex a{(int)r.j, (int)r.k};
        INFO("centered moment " << a.str());
        CHECK(centered.at(a) == Catch::Approx(r.centered).epsilon(2e-8).margin(1e-14));
    }

    // centering at the conditional mean instead must kill the first moments
    // to machine precision
    const double mV = raw.at(MultiIndex{1, 0}), mX = raw.at(MultiIndex{0, 1});
    Eigen::VectorXd c(2);
    c << -mV, -mX;
    const auto about_mean =
        conditional_affine_moments(model, x0, t, Eigen::MatrixXd::Identity(2, 2), c, 4);
    CHECK(std::abs(about_mean.at(MultiIndex{1, 0})) < 1e-14);
    CHECK(std::abs(about_mean.at(MultiIndex{0, 1})) < 1e-14);
}

TEST_CASE("affine image moments agree with direct transforms", "[affine]") {
    const auto model = bajd(0.04, 1.0, 0.2, 3.0, 0.01);
    Eigen::VectorXd x0(1);
    x0 << 0.07;
    Eigen::MatrixXd T(1, 1);
    T << 13.0;
    Eigen::VectorXd c(1);
    c << -0.4;
    const double t = 1.0 / 12.0;
    const auto raw = conditional_moments(model, x0, t, 6);
    const auto aff = conditional_affine_moments(model, x0, t, T, c, 6);
    const double m1 = raw.at(MultiIndex{1}), m2 = raw.at(MultiIndex{2}),
                 m3 = raw.at(MultiIndex{3});
    const double want = 13 * 13 * 13 * m3 - 0.4 * 3 * 13 * 13 * m2 + 0.16 * 3 * 13 * m1 - 0.064;
    CHECK(aff.at(MultiIndex{3}) == Catch::Approx(want).epsilon(1e-12));
    CHECK(aff.at(MultiIndex{0}) == Catch::Approx(1.0).margin(1e-14));

    // two-dimensional shear
    const auto hm = heston(0.04, 1.0, 0.2, 0.03, -0.8);
    Eigen::VectorXd y0(2);
    y0 << 0.04, 5.0;
    Eigen::MatrixXd T2(2, 2);
    T2 << 2.0, 0.0, -1.5, 3.0;
    Eigen::VectorXd c2(2);
    c2 << 0.3, -14.0;
    const auto raw2 = conditional_moments(hm, y0, 1.0 / 52.0, 2);
    const auto aff2 = conditional_affine_moments(hm, y0, 1.0 / 52.0, T2, c2, 2);
    const double mv = raw2.at(MultiIndex{1, 0}), mx = raw2.at(MultiIndex{0, 1});
    const double mvv = raw2.at(MultiIndex{2, 0}), mvx = raw2.at(MultiIndex{1, 1});
    const double want2 = -3.0 * mvv + 6.0 * mvx - 28.0 * mv - 0.45 * mv + 0.9 * mx - 4.2;
    CHECK(aff2.at(MultiIndex{1, 1}) == Catch::Approx(want2).epsilon(1e-10));
}

TEST_CASE("density existence and smoothness checks", "[affine]") {
    auto r = check_density_existence(bajd(0.04, 1.0, 0.2, 0.0, 1.0));  // margin exactly 2
    CHECK(r.kcal_full_rank);
    REQUIRE(r.smoothness_p.has_value());
    CHECK(*r.smoothness_p == 0);
    CHECK(r.density_exists);

    r = check_density_existence(bajd(0.0625, 1.0, 0.2, 0.0, 1.0));  // margin 3.125
    REQUIRE(r.smoothness_p.has_value());
    CHECK(*r.smoothness_p == 2);

    r = check_density_existence(bajd(0.01, 1.0, 0.2, 0.0, 1.0));  // margin 0.5
    CHECK(!r.smoothness_p.has_value());
    CHECK(!r.density_exists);

    r = check_density_existence(heston(0.04, 1.0, 0.2, 0.03, -0.8));
    CHECK(r.kcal_full_rank);
    CHECK(r.density_exists);
    r = check_density_existence(heston(0.04, 1.0, 0.2, 0.03, -1.0));
    CHECK(!r.kcal_full_rank);
    CHECK(!r.density_exists);
    r = check_density_existence(heston(0.04, 1.0, 0.2, 0.03, 1.0));
    CHECK(!r.kcal_full_rank);

    // hypoelliptic case: noise in the first coordinate only, drift coupling
    // spans the second
    Eigen::MatrixXd a = Eigen::MatrixXd::Zero(2, 2);
    a(0, 0) = 0.5;
    Eigen::MatrixXd beta(2, 2);
    beta << 0, 0, 1, 0;
    const AffineModel ou(0, 2, a, {}, Eigen::VectorXd::Zero(2), beta);
    r = check_density_existence(ou);
    CHECK(r.kcal_full_rank);
    CHECK(r.density_exists);
    REQUIRE(r.smoothness_p.has_value());
    CHECK(*r.smoothness_p == kSmoothnessUnbounded);

    const AffineModel ou0(0, 2, a, {}, Eigen::VectorXd::Zero(2), Eigen::MatrixXd::Zero(2, 2));
    CHECK(!check_density_existence(ou0).kcal_full_rank);
}

TEST_CASE("integrated density check", "[affine]") {
    auto r = check_integrated_existence(bajd(0.00150602, 0.4648, 0.01, 0.0, 1.0));
    REQUIRE(r.smoothness_p.has_value());
    CHECK(*r.smoothness_p == 14);
    CHECK(r.density_exists);

    r = check_integrated_existence(bajd(0.0, 0.4648, 0.01, 0.0, 1.0));
    CHECK(!r.smoothness_p.has_value());
    CHECK(!r.density_exists);

    // b = 4 alpha sits exactly on the p = 1 boundary, so p = 0 is certified
    r = check_integrated_existence(bajd(4 * 0.00005, 1.0, 0.01, 0.0, 1.0));
    REQUIRE(r.smoothness_p.has_value());
    CHECK(*r.smoothness_p == 0);

    CHECK_THROWS_AS(check_integrated_existence(heston(0.04, 1.0, 0.2, 0.03, -0.8)),
                    invalid_input);
}

TEST_CASE("weight-shape admissibility bound", "[affine]") {
    CHECK(check_assumption2(3.0, 8));
    CHECK(check_assumption2(3.0, 2));
    CHECK(!check_assumption2(3.0, 1));
    CHECK(!check_assumption2(20.0, 1));
    CHECK(check_assumption2(20.0, 10));
    CHECK(!check_assumption2(3.0, std::nullopt));
    CHECK(check_assumption2(57.3, kSmoothnessUnbounded));
    CHECK(check_assumption2(0.0, 0));
}

TEST_CASE("exponential moment probe", "[affine]") {
    // with sigma^2/2 = 1, kappa = 1 and psi(0) = 2 the Riccati flow
    // dpsi = psi^2 - psi explodes at t = log 2
    const auto model = bajd(0.01, 1.0, std::sqrt(2.0), 0.0, 1.0);
    auto rep = exp_moment_check(model, 2.0, 0.0, 1.0);
    CHECK(rep.status == ExpMomentReport::Status::blow_up);
    CHECK(rep.t_star == Catch::Approx(std::log(2.0)).margin(2e-3));
    CHECK(rep.worst_u[0] == 2.0);

    CHECK(exp_moment_check(model, 0.2, 0.0, 1.0).status == ExpMomentReport::Status::finite);
    CHECK(exp_moment_check(model, 0.0, 0.0, 5.0).status == ExpMomentReport::Status::finite);

    // exponential jump transform pole at psi = 1/mean
    const auto jm = bajd(0.04, 1.0, 0.2, 1.0, 1.0);
    CHECK(exp_moment_check(jm, 1.2, 0.0, 1.0).status ==
          ExpMomentReport::Status::jump_singularity);

    const auto hm = heston(0.04, 1.0, 0.2, 0.03, -0.8);
    CHECK(exp_moment_check(hm, 0.5, 0.5, 1.0 / 52.0).status ==
          ExpMomentReport::Status::finite);
}

TEST_CASE("model validation", "[affine]") {
    Eigen::MatrixXd a0(0, 0);
    Eigen::VectorXd b1 = Eigen::VectorXd::Constant(1, 0.04);
    Eigen::MatrixXd mk = Eigen::MatrixXd::Constant(1, 1, -1.0);
    const Eigen::MatrixXd alpha1 = Eigen::MatrixXd::Constant(1, 1, 0.02);

    CHECK_THROWS_AS(AffineModel(1, 0, a0, {alpha1}, -b1, mk), invalid_input);  // b < 0
    CHECK_THROWS_AS(AffineModel(1, 0, a0, {-alpha1}, b1, mk), invalid_input);  // not psd
    CHECK_THROWS_AS(AffineModel(1, 0, a0, {}, b1, mk), invalid_input);         // missing alpha
    CHECK_THROWS_AS(AffineModel(1, 0, a0, {alpha1}, b1, mk,
                                {JumpSpec::exponential(1.0, 0.01, 3)}),
                    invalid_input);  // jump coordinate out of range
    CHECK_THROWS_AS(JumpSpec::exponential(1.0, 0.0, 0), invalid_input);
    CHECK_THROWS_AS(JumpSpec::exponential(-1.0, 0.1, 0), invalid_input);
    CHECK_THROWS_AS(AffineModel(1, 0, a0, {alpha1}, b1, mk,
                                {JumpSpec::point_mass(1.0, -0.2, 0)}),
                    invalid_input);  // downward jump on an R_+ coordinate

    // alpha_i touching the R_+ block off its own diagonal entry
    Eigen::MatrixXd bad(2, 2);
    bad << 0.1, 0.05, 0.05, 0.2;
    Eigen::MatrixXd beta2 = -Eigen::MatrixXd::Identity(2, 2);
    Eigen::VectorXd b2 = Eigen::VectorXd::Constant(2, 0.1);
    CHECK_THROWS_AS(AffineModel(2, 0, a0, {bad, Eigen::MatrixXd::Zero(2, 2)}, b2, beta2),
                    invalid_input);

    // R_+ drift depending on the unconstrained block
    Eigen::MatrixXd a1 = Eigen::MatrixXd::Zero(1, 1);
    Eigen::MatrixXd badBeta(2, 2);
    badBeta << -1.0, 0.3, 0.0, -1.0;
    Eigen::MatrixXd al2(2, 2);
    al2 << 0.02, 0.0, 0.0, 0.5;
    CHECK_THROWS_AS(AffineModel(1, 1, a1, {al2}, b2, badBeta), invalid_input);

    // state constraints on conditional moments
    const auto ok = bajd(0.04, 1.0, 0.2, 0.0, 1.0);
    Eigen::VectorXd xneg(1);
    xneg << -0.01;
    CHECK_THROWS_AS(conditional_moments(ok, xneg, 0.1, 2), invalid_input);
    Eigen::VectorXd xok(1);
    xok << 0.05;
    CHECK_THROWS_AS(conditional_moments(ok, xok, -0.1, 2), invalid_input);
}
