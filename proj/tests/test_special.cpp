// SPDX-License-Identifier: MIT
#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "ajd/detail/special.hpp"
#include "golden.hpp"

using namespace ajd;

TEST_CASE("log Bessel K matches high-precision references", "[special]") {
    // covers the boost region, the Debye expansion (nu >= 30) and the large-x
    // asymptotic branch
    for (const auto& r : golden::log_besselk) {
        const double got = detail::log_bessel_k(r.nu, r.x);
        INFO("nu=" << r.nu << " x=" << r.x);
        CHECK(std::abs(got - r.value) <= 1e-12 * std::max(1.0, std::abs(r.value)));
    }
}

TEST_CASE("normal density, cdf and quantile are consistent", "[special]") {
    CHECK(detail::normal_cdf(0.0) == Catch::Approx(0.5).margin(1e-16));
    CHECK(detail::normal_pdf(0.0) == Catch::Approx(1.0 / std::sqrt(2.0 * detail::pi)).epsilon(1e-15));
    for (double x : {-8.0, -3.2, -1.0, -0.1, 0.0, 0.3, 1.7, 4.5, 8.0}) {
        CHECK(detail::normal_cdf(x) + detail::normal_cdf(-x) == Catch::Approx(1.0).margin(1e-15));
        CHECK(detail::normal_pdf(x) == Catch::Approx(detail::normal_pdf(-x)).epsilon(1e-15));
    }
    for (double p : {1e-10, 1e-4, 0.025, 0.3, 0.5, 0.8, 0.975, 1.0 - 1e-6}) {
        const double x = detail::normal_quantile(p);
        CHECK(detail::normal_cdf(x) == Catch::Approx(p).epsilon(1e-12));
    }
}

TEST_CASE("regularized lower incomplete gamma closed forms", "[special]") {
    for (double x : {0.1, 0.5, 1.0, 2.5, 7.0}) {
        CHECK(detail::gamma_p(1.0, x) == Catch::Approx(-std::expm1(-x)).epsilon(1e-14));
        CHECK(detail::gamma_p(0.5, x) == Catch::Approx(std::erf(std::sqrt(x))).epsilon(1e-14));
    }
}

TEST_CASE("Kolmogorov tail probabilities", "[special]") {
    for (const auto& r : golden::kolmogorov) {
        CHECK(detail::kolmogorov_q(r.lambda_) ==
              Catch::Approx(r.value).epsilon(1e-12).margin(1e-15));
    }
    CHECK(detail::kolmogorov_q(0.0) == 1.0);
    CHECK(detail::kolmogorov_q(1e-3) == Catch::Approx(1.0).margin(1e-12));
    CHECK(detail::kolmogorov_q(10.0) == Catch::Approx(0.0).margin(1e-15));
    // continuity across the series switch
    CHECK(detail::kolmogorov_q(0.6 - 1e-9) ==
          Catch::Approx(detail::kolmogorov_q(0.6 + 1e-9)).epsilon(1e-7));
}

TEST_CASE("log factorial", "[special]") {
    double f = 1.0;
    for (int n = 1; n <= 20; ++n) {
        f *= n;
        CHECK(detail::log_factorial(n) == Catch::Approx(std::log(f)).epsilon(1e-14));
    }
    CHECK(detail::log_factorial(0) == 0.0);
    CHECK(detail::log_factorial(170) == Catch::Approx(std::lgamma(171.0)).epsilon(1e-14));
}
