// SPDX-License-Identifier: MIT
#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <memory>

#include "ajd/detail/quadrature.hpp"
#include "ajd/weights.hpp"
#include "golden.hpp"

using namespace ajd;

namespace {

// independent check integral over the support, densities decay fast enough
// that a generous finite window suffices; evaluated in log space so the
// exponential tilt cannot overflow against the density decay
double integral(const UnivariateWeight& w, int n, double a, double lo, double hi) {
    return detail::integrate_finite(
        [&](double x) {
            const double l = w.log_density1(x) + a * x;
            if (!std::isfinite(l)) return 0.0;
            if (n == 0) return std::exp(l);
            const double ax = std::abs(x);
            if (ax == 0.0) return 0.0;
            const double v = std::exp(n * std::log(ax) + l);
            return (n % 2 != 0 && x < 0.0) ? -v : v;
        },
        lo, hi);
}

}  // namespace

TEST_CASE("gamma weight moments and density", "[weights]") {
    for (double D : {-0.5, 0.0, 0.5, 3.0, 10.0}) {
        const GammaWeight w(D);
        CHECK(w.moment1(0) == 1.0);
        double prod = 1.0;
        for (int n = 1; n <= 12; ++n) {
            prod *= D + n;
            CHECK(w.moment1(n) == Catch::Approx(prod).epsilon(1e-15));
        }
        // density integrates to one and reproduces low moments
        for (int n = 0; n <= 3; ++n)
            CHECK(integral(w, n, 0.0, 0.0, 250.0) == Catch::Approx(w.moment1(n)).epsilon(1e-10));
    }
    CHECK(GammaWeight(0.0).log_density1(0.0) == 0.0);
    CHECK(GammaWeight(2.0).density1(-0.3) == 0.0);
    CHECK_THROWS_AS(GammaWeight(-1.0), invalid_input);
}

TEST_CASE("gamma weight partial moments against references", "[weights]") {
    for (const auto& r : golden::gamma_partial) {
        const GammaWeight w(r.D);
        CHECK(w.partial_moment((int)r.n, r.z) == Catch::Approx(r.value).epsilon(1e-12));
    }
    const GammaWeight w(1.3);
    CHECK(w.partial_moment(2, 0.0) == 0.0);
    CHECK(w.partial_moment(2, 1e3) == Catch::Approx(w.moment1(2)).epsilon(1e-14));
}

TEST_CASE("gamma weight exponential moments", "[weights]") {
    const GammaWeight w(2.5);
    CHECK(w.exp_moment_radius() == 1.0);
    for (double a : {-3.0, -0.5, 0.0, 0.4, 0.9}) {
        for (int n : {0, 1, 4}) {
            const double lo_cut = 0.0, hi_cut = a < 0.99 ? 400.0 / (1.0 - a) : 1e4;
            CHECK(w.exp_moment(n, a) ==
                  Catch::Approx(integral(w, n, a, lo_cut, std::min(hi_cut, 4000.0)))
                      .epsilon(1e-9));
        }
        CHECK(w.exp_partial_moment(0, a, 0.0) == Catch::Approx(w.exp_moment(0, a)).epsilon(1e-14));
        // upper partial + lower complement = full
        const double y = 2.2;
        const double lower = detail::integrate_finite(
            [&](double x) { return std::exp(a * x) * w.density1(x); }, 0.0, y);
        CHECK(w.exp_partial_moment(0, a, y) + lower ==
              Catch::Approx(w.exp_moment(0, a)).epsilon(1e-10));
    }
    CHECK(w.exp_moment(0, 0.0) == 1.0);
    CHECK_THROWS_AS(w.exp_moment(1, 1.0), invalid_input);
}

TEST_CASE("bilateral gamma moments: closed low orders and density consistency", "[weights]") {
    for (double C : {1.0 / 3.0, 0.7, 1.0, 3.0}) {
        const BilateralGammaWeight w(C);
        CHECK(w.moment1(0) == 1.0);
        CHECK(w.moment1(1) == 0.0);
        CHECK(w.moment1(2) == Catch::Approx(1.0).epsilon(1e-15));
        CHECK(w.moment1(3) == 0.0);
        CHECK(w.moment1(4) == Catch::Approx(C + 3.0).epsilon(1e-15));
        CHECK(w.moment1(6) ==
              Catch::Approx(10.0 * C * C / 3.0 + 15.0 * C + 15.0).epsilon(1e-15));
        // even moments against direct integration of the Bessel density
        for (int n : {2, 4, 6, 8}) {
            const double direct = 2.0 * detail::integrate_finite(
                                            [&](double x) { return std::pow(x, n) * w.density1(x); },
                                            0.0, 60.0 * std::sqrt(C / 6.0) + 60.0);
            CHECK(w.moment1(n) == Catch::Approx(direct).epsilon(1e-9));
        }
    }
    CHECK(BilateralGammaWeight(0.5).moment1(24) > 0.0);
    CHECK_THROWS_AS(BilateralGammaWeight(0.5).moment1(25), invalid_input);
    CHECK_THROWS_AS(BilateralGammaWeight(0.0), invalid_input);
}

TEST_CASE("bilateral gamma density against references", "[weights]") {
    for (const auto& r : golden::gb_density) {
        const BilateralGammaWeight w(r.C);
        INFO("C=" << r.C << " xi=" << r.xi);
        CHECK(w.density1(r.xi) == Catch::Approx(r.value).epsilon(1e-11));
        CHECK(w.density1(-r.xi) == Catch::Approx(r.value).epsilon(1e-11));  // symmetry
    }
}

TEST_CASE("bilateral gamma partial moments against references", "[weights]") {
    for (const auto& r : golden::gb_partial) {
        INFO("C=" << r.C << " K=" << r.K << " n=" << r.n);
        CHECK(bilateral_partial_moment(r.K, (int)r.n, r.C) ==
              Catch::Approx(r.value).epsilon(2e-9).margin(1e-13));
    }
    // whole-line integral recovers the tabulated moment
    const BilateralGammaWeight w(0.7);
    CHECK(w.partial_moment(4, 1e3) == Catch::Approx(w.moment1(4)).epsilon(1e-9));
}

TEST_CASE("gaussian weight", "[weights]") {
    const GaussianWeight std01(0.0, 1.0);
    CHECK(std01.moment1(0) == 1.0);
    CHECK(std01.moment1(1) == 0.0);
    CHECK(std01.moment1(2) == 1.0);
    CHECK(std01.moment1(4) == 3.0);
    CHECK(std01.moment1(6) == 15.0);
    CHECK(std01.moment1(8) == 105.0);

    const GaussianWeight w(1.3, 0.49);
    for (int n = 0; n <= 6; ++n)
        CHECK(w.moment1(n) == Catch::Approx(integral(w, n, 0.0, -15.0, 15.0)).epsilon(1e-10));

    // partial moments against quadrature
    for (double y : {-1.0, 0.9, 1.3, 3.0})
        for (int n : {0, 1, 3}) {
            const double direct = detail::integrate_finite(
                [&](double x) { return std::pow(x, n) * w.density1(x); }, -15.0, y);
            CHECK(w.partial_moment(n, y) == Catch::Approx(direct).epsilon(1e-9).margin(1e-12));
        }
    CHECK(w.partial_moment(0, 1.3) == Catch::Approx(0.5).epsilon(1e-13));

    // exponential tilt identities
    for (double a : {-1.1, 0.0, 2.0}) {
        CHECK(w.exp_moment(0, a) ==
              Catch::Approx(std::exp(a * 1.3 + 0.5 * a * a * 0.49)).epsilon(1e-14));
        CHECK(w.exp_moment(2, a) ==
              Catch::Approx(integral(w, 2, a, -20.0, 20.0)).epsilon(1e-9));
        const double y = 0.4;
        const double upper = detail::integrate_finite(
            [&](double x) { return x * std::exp(a * x) * w.density1(x); }, y, 25.0);
        CHECK(w.exp_partial_moment(1, a, y) == Catch::Approx(upper).epsilon(1e-9).margin(1e-12));
    }
    CHECK(w.exp_moment_radius() == std::numeric_limits<double>::infinity());
    CHECK_THROWS_AS(GaussianWeight(0.0, 0.0), invalid_input);
}

TEST_CASE("product weight", "[weights]") {
    auto g = std::make_shared<GammaWeight>(2.0);
    auto b = std::make_shared<BilateralGammaWeight>(1.0 / 3.0);
    const ProductWeight w({g, b});
    CHECK(w.dim() == 2);
    CHECK(w.moment(MultiIndex{3, 4}) ==
          Catch::Approx(g->moment1(3) * b->moment1(4)).epsilon(1e-15));
    CHECK(w.moment(MultiIndex{0, 0}) == 1.0);
    const double xs[2] = {0.7, -0.4};
    CHECK(w.log_density(xs) ==
          Catch::Approx(g->log_density1(0.7) + b->log_density1(-0.4)).epsilon(1e-14));
    const auto c = w.clone();
    CHECK(c->moment(MultiIndex{1, 2}) == w.moment(MultiIndex{1, 2}));
    CHECK_THROWS_AS(w.moment(MultiIndex{1}), invalid_input);
}
