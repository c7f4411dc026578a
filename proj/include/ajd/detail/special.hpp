// SPDX-License-Identifier: MIT
#pragma once

#include <cmath>
#include <limits>

#include <boost/math/special_functions/bessel.hpp>
#include <boost/math/special_functions/erf.hpp>
#include <boost/math/special_functions/gamma.hpp>

#include "ajd/detail/common.hpp"

namespace ajd::detail {

// u_k(t) coefficients of the uniform large-order Bessel expansion,
// row k holds c[j] with u_k(t) = sum_j c[j] t^j
inline constexpr double kDebyeU[9][25] = {
    {1.0000000000000000, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0},
    {0.0, 0.12500000000000000, 0.0, -0.20833333333333333, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0},
    {0.0, 0.0, 0.070312500000000000, 0.0, -0.40104166666666667, 0.0, 0.33420138888888889, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0},
    {0.0, 0.0, 0.0, 0.073242187500000000, 0.0, -0.89121093750000000, 0.0, 1.8464626736111111, 0.0, -1.0258125964506173, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0},
    {0.0, 0.0, 0.0, 0.0, 0.11215209960937500, 0.0, -2.3640869140625000, 0.0, 8.7891235351562500, 0.0, -11.207002616222994, 0.0, 4.6695844234262474, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0},
    {0.0, 0.0, 0.0, 0.0, 0.0, 0.22710800170898438, 0.0, -7.3687943594796317, 0.0, 42.534998745388455, 0.0, -91.818241543240017, 0.0, 84.636217674600735, 0.0, -28.212072558200245, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0},
    {0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.57250142097473145, 0.0, -26.491430486951556, 0.0, 218.19051174421159, 0.0, -699.57962737613254, 0.0, 1059.9904525279999, 0.0, -765.25246814118164, 0.0, 212.57013003921712, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0},
    {0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 1.7277275025844574, 0.0, -108.09091978839466, 0.0, 1200.9029132163525, 0.0, -5305.6469786134031, 0.0, 11655.393336864533, 0.0, -13586.550006434137, 0.0, 8061.7221817373094, 0.0, -1919.4576623184070, 0.0, 0.0, 0.0},
    {0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 6.0740420012734830, 0.0, -493.91530477308801, 0.0, 7109.5143024893637, 0.0, -41192.654968897551, 0.0, 122200.46498301746, 0.0, -203400.17728041553, 0.0, 192547.00123253153, 0.0, -96980.598388637513, 0.0, 20204.291330966149},
};

inline double debye_log_bessel_k(double nu, double x) {
    const double z = x / nu;
    const double s = std::hypot(1.0, z);   // sqrt(1+z^2), overflow safe
    const double t = 1.0 / s;
    const double eta = s + std::log(z / (1.0 + s));
    double sum = 0.0, npow = 1.0;
    for (int k = 0; k < 9; ++k) {
        double uk = 0.0;
        for (int j = 24; j >= 0; --j) uk = uk * t + kDebyeU[k][j];
        sum += (k % 2 ? -uk : uk) / npow;
        npow *= nu;
    }
    return 0.5 * std::log(pi / (2.0 * nu)) - nu * eta - 0.5 * std::log(s) + std::log(sum);
}

inline double asymptotic_log_bessel_k(double nu, double x) {
    // K_nu(x) ~ sqrt(pi/(2x)) e^{-x} sum_k a_k / x^k with
    // a_k = prod_{j<=k} (4 nu^2 - (2j-1)^2) / (k! 8^k); series is asymptotic,
    // so stop at the smallest term
    const double mu = 4.0 * nu * nu;
    double term = 1.0, sum = 1.0, prev = std::numeric_limits<double>::max();
    for (int k = 1; k <= 30; ++k) {
        term *= (mu - (2.0 * k - 1.0) * (2.0 * k - 1.0)) / (8.0 * k * x);
        if (std::abs(term) >= prev) break;
        sum += term;
        prev = std::abs(term);
        if (prev < 1e-17 * std::abs(sum)) break;
    }
    return 0.5 * std::log(pi / (2.0 * x)) - x + std::log(sum);
}

//! log K_nu(x) for x > 0, stable over the whole (order, argument) range the
//! library uses, including where K itself would over- or underflow.
inline double log_bessel_k(double nu, double x) {
    require(x > 0.0 && std::isfinite(x) && std::isfinite(nu), "log_bessel_k: need finite nu, x > 0");
    nu = std::abs(nu);
    if (nu >= 30.0) return debye_log_bessel_k(nu, x);
    if (x >= 700.0) return asymptotic_log_bessel_k(nu, x);
    if (nu > 0.0) {
        // leading small-argument behaviour; only taken when the direct value
        // would overflow, which forces x small enough for one term to suffice
        const double lead = std::lgamma(nu) - std::log(2.0) + nu * std::log(2.0 / x);
        if (lead > 650.0) return lead;
    }
    return std::log(boost::math::cyl_bessel_k(nu, x));
}

inline double log_factorial(int n) {
    require(n >= 0, "log_factorial: negative argument");
    return std::lgamma(double(n) + 1.0);
}

inline double normal_pdf(double x) {
    return std::exp(-0.5 * x * x) / std::sqrt(2.0 * pi);
}
inline double normal_cdf(double x) {
    return 0.5 * std::erfc(-x / std::sqrt(2.0));
}
inline double normal_quantile(double p) {
    require(p > 0.0 && p < 1.0, "normal_quantile: p outside (0,1)");
    return -std::sqrt(2.0) * boost::math::erfc_inv(2.0 * p);
}

//! Regularized lower incomplete gamma P(a, x).
inline double gamma_p(double a, double x) { return boost::math::gamma_p(a, x); }

//! Kolmogorov distribution tail Q(lambda) = 2 sum_{k>=1} (-1)^{k-1} e^{-2 k^2 lambda^2}.
//! The dual theta-series is used for small lambda where the sum above is slow.
inline double kolmogorov_q(double lambda) {
    if (lambda <= 0.0) return 1.0;
    if (lambda < 0.6) {
        const double f = pi * pi / (8.0 * lambda * lambda);
        double s = 0.0;
        for (int k = 1; k <= 20; k += 2) {
            const double term = std::exp(-f * k * k);
            s += term;
            if (term < 1e-18 * s) break;
        }
        return 1.0 - std::sqrt(2.0 * pi) / lambda * s;
    }
    double s = 0.0;
    double sign = 1.0;
    for (int k = 1; k <= 100; ++k) {
        const double term = sign * std::exp(-2.0 * k * k * lambda * lambda);
        s += term;
        if (std::abs(term) < 1e-18 * std::max(1e-300, std::abs(s))) break;
        sign = -sign;
    }
    return std::max(0.0, std::min(1.0, 2.0 * s));
}

}  // namespace ajd::detail
