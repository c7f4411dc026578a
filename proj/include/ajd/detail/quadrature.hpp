// SPDX-License-Identifier: MIT
#pragma once

#include <array>
#include <cmath>
#include <utility>
#include <vector>

#include <boost/math/quadrature/exp_sinh.hpp>
#include <boost/math/quadrature/gauss.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/quadrature/sinh_sinh.hpp>
#include <boost/math/quadrature/tanh_sinh.hpp>

#include "ajd/detail/common.hpp"

namespace ajd::detail {

template <class F>
double integrate_finite(F&& f, double a, double b, double tol = 1e-12) {
    if (!(b > a)) return 0.0;
    thread_local boost::math::quadrature::tanh_sinh<double> q(15);
    try {
        return q.integrate(std::forward<F>(f), a, b, tol);
    } catch (const std::exception& e) {
        throw numerical_error(cat("integrate_finite failed on [", a, ",", b, "]: ", e.what()));
    }
}

template <class F>
double integrate_right_tail(F&& f, double a, double tol = 1e-12) {
    thread_local boost::math::quadrature::exp_sinh<double> q(12);
    try {
        return q.integrate(std::forward<F>(f), a, std::numeric_limits<double>::infinity(), tol);
    } catch (const std::exception& e) {
        throw numerical_error(cat("integrate_right_tail failed from ", a, ": ", e.what()));
    }
}

template <class F>
double integrate_left_tail(F&& f, double b, double tol = 1e-12) {
    thread_local boost::math::quadrature::exp_sinh<double> q(12);
    try {
        return q.integrate(std::forward<F>(f), -std::numeric_limits<double>::infinity(), b, tol);
    } catch (const std::exception& e) {
        throw numerical_error(cat("integrate_left_tail failed to ", b, ": ", e.what()));
    }
}

template <class F>
double integrate_real_line(F&& f, double tol = 1e-12) {
    thread_local boost::math::quadrature::sinh_sinh<double> q(12);
    try {
        return q.integrate(std::forward<F>(f), tol);
    } catch (const std::exception& e) {
        throw numerical_error(cat("integrate_real_line failed: ", e.what()));
    }
}

//! Adaptive Gauss-Kronrod on a finite interval; cheaper than tanh_sinh for
//! smooth oscillatory integrands.
template <class F>
double integrate_gk(F&& f, double a, double b, double tol = 1e-10, int max_depth = 12) {
    try {
        return boost::math::quadrature::gauss_kronrod<double, 15>::integrate(
            std::forward<F>(f), a, b, max_depth, tol);
    } catch (const std::exception& e) {
        throw numerical_error(cat("integrate_gk failed on [", a, ",", b, "]: ", e.what()));
    }
}

//! Fixed Gauss-Legendre tensor grid: `panels` panels of 30 nodes on [a, b].
//! Used for frozen characteristic-function grids where the integrand must be
//! a smooth function of model parameters (no adaptivity).
inline std::vector<std::pair<double, double>> gauss_legendre_grid(double a, double b,
                                                                  int panels) {
    require(b > a && panels >= 1, "gauss_legendre_grid: bad interval or panel count");
    using G = boost::math::quadrature::gauss<double, 30>;
    std::vector<std::pair<double, double>> out;
    out.reserve((std::size_t)panels * 30);
    const double h = (b - a) / panels;
    for (int p = 0; p < panels; ++p) {
        const double mid = a + (p + 0.5) * h, half = 0.5 * h;
        // boost stores only the nonnegative half of the symmetric rule
        for (std::size_t k = 0; k < G::abscissa().size(); ++k) {
            const double x = G::abscissa()[k], w = G::weights()[k] * half;
            if (x == 0.0) {
                out.emplace_back(mid, w);
            } else {
                out.emplace_back(mid + half * x, w);
                out.emplace_back(mid - half * x, w);
            }
        }
    }
    return out;
}

}  // namespace ajd::detail
