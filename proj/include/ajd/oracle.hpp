// SPDX-License-Identifier: MIT
#pragma once

#include <cmath>
#include <complex>
#include <functional>
#include <limits>
#include <utility>
#include <vector>

#include <Eigen/Dense>
#include <boost/math/quadrature/gauss.hpp>

#include "ajd/affine.hpp"
#include "ajd/detail/common.hpp"
#include "ajd/detail/ode.hpp"
#include "ajd/detail/quadrature.hpp"

namespace ajd {

using Complex = std::complex<double>;

namespace detail {

//! Scalar Riccati equation psi' = A psi^2 + B psi + G, psi(0) = w, in root
//! form.  With d = sqrt(B^2 - 4AG) taken with Re d >= 0, the factor e^{-ds}
//! stays bounded on s >= 0 and
//!
//!   psi(s) = (rm - rp g e^{-ds}) / (1 - g e^{-ds}),   g = (w - rm)/(w - rp).
//!
//! While |g| < 1 the log argument of the closed-form path integral stays in
//! the disk of radius |g| around 1, so the principal branch is continuous in
//! s and no branch tracking is needed; past the 0.95 safety margin the path
//! integral falls back to composite Gauss-Legendre quadrature of psi(s),
//! which has no logs at all.
class ScalarRiccati {
  public:
    ScalarRiccati(Complex A, Complex B, Complex G, Complex w) : A_(A), w_(w) {
        require(A != 0.0, "ScalarRiccati: quadratic coefficient must be nonzero");
        d_ = std::sqrt(B * B - 4.0 * A * G);
        if (d_.real() < 0.0) d_ = -d_;
        degenerate_ = std::abs(d_) <= 1e-10 * (1.0 + std::abs(B));
        if (degenerate_) {
            root_ = -B / (2.0 * A);
            const Complex z = A_ * (w_ - root_);
            if (z.imag() == 0.0 && z.real() > 0.0) t_star_ = 1.0 / z.real();
            return;
        }
        rp_ = (-B + d_) / (2.0 * A);
        rm_ = (-B - d_) / (2.0 * A);
        g_ = (w - rm_) / (w - rp_);
        // w at the unstable root is a fixed point of the flow
        fixed_ = !std::isfinite(g_.real()) || !std::isfinite(g_.imag());
        // the root form is meromorphic, so a real moment explosion (the
        // denominator crossing zero at s* with g e^{-d s*} = 1) must be
        // detected explicitly rather than integrated through
        if (!fixed_ && d_.imag() == 0.0 && g_.imag() == 0.0 && g_.real() > 1.0 &&
            d_.real() > 0.0)
            t_star_ = std::log(g_.real()) / d_.real();
    }

    //! Time of a detected real moment explosion, +infinity if none.
    double explosion_time() const { return t_star_; }

    Complex psi(double s) const {
        if (fixed_) return w_;
        if (s >= t_star_)
            throw numerical_error(cat("ScalarRiccati: transform explodes at s = ", t_star_));
        if (degenerate_) {
            const Complex den = 1.0 - A_ * (w_ - root_) * s;
            check_alive(den);
            return root_ + (w_ - root_) / den;
        }
        const Complex e = std::exp(-d_ * s);
        const Complex den = 1.0 - g_ * e;
        check_alive(den);
        return (rm_ - rp_ * g_ * e) / den;
    }

    //! int_0^t psi ds; closed form on the principal branch when safe.
    Complex int_psi(double t) const {
        if (fixed_) return w_ * t;
        if (!degenerate_ && std::abs(g_) < 0.95) {
            const Complex e = std::exp(-d_ * t);
            return rm_ * t + (rm_ - rp_) / d_ * std::log((1.0 - g_ * e) / (1.0 - g_));
        }
        return path_integral([](Complex p) { return p; }, t);
    }

    //! int_0^t f(psi(s)) ds by composite Gauss-Legendre along the path.
    template <class F>
    Complex path_integral(F&& f, double t, int panels = 8) const {
        using G24 = boost::math::quadrature::gauss<double, 24>;
        KahanSum re, im;
        const double h = t / panels;
        for (int p = 0; p < panels; ++p) {
            const double mid = (p + 0.5) * h, half = 0.5 * h;
            for (std::size_t k = 0; k < G24::abscissa().size(); ++k) {
                const double x = G24::abscissa()[k], wq = G24::weights()[k] * half;
                const Complex fa = f(psi(mid + half * x));
                re.add(wq * fa.real());
                im.add(wq * fa.imag());
                if (x != 0.0) {
                    const Complex fb = f(psi(mid - half * x));
                    re.add(wq * fb.real());
                    im.add(wq * fb.imag());
                }
            }
        }
        return {re.value(), im.value()};
    }

  private:
    static void check_alive(const Complex& den) {
        if (den == 0.0 || !std::isfinite(den.real()) || !std::isfinite(den.imag()))
            throw numerical_error("ScalarRiccati: transform explodes before the horizon");
    }

    Complex A_, w_, d_, rp_, rm_, g_, root_;
    double t_star_ = std::numeric_limits<double>::infinity();
    bool fixed_ = false;
    bool degenerate_ = false;
};

}  // namespace detail

//! Exponents of a conditional log-affine transform: the transform value is
//! exp(phi + psi y) with y the relevant starting coordinate.
struct LogTransform {
    Complex phi{0.0, 0.0};
    Complex psi{0.0, 0.0};
};

//! Joint terminal/integrated transform of the square-root jump diffusion
//!
//!   dY = (b - kappa Y) dt + sigma sqrt(Y) dW + dJ,
//!
//! with compound-Poisson jumps of intensity l and Exponential(mean nu) sizes:
//!
//!   E[exp(w1 Y_t + w2 int_0^t Y_s ds) | Y_0 = y] = exp(phi + psi y).
//!
//! Throws numerical_error past a moment explosion and ode_domain_error when
//! the jump transform is evaluated at or past its pole.
inline LogTransform sqjd_transform(double b, double kappa, double sigma, double l, double nu,
                                   Complex w1, Complex w2, double t) {
    detail::require(sigma > 0.0, "sqjd_transform: sigma must be positive");
    detail::require(t >= 0.0, "sqjd_transform: t must be >= 0");
    const detail::ScalarRiccati ric(0.5 * sigma * sigma, -kappa, w2, w1);
    LogTransform out;
    out.psi = ric.psi(t);
    out.phi = b * ric.int_psi(t);
    if (l != 0.0)
        out.phi += l * ric.path_integral(
                           [nu](Complex p) {
                               return detail::jump_mgf_m1(JumpSpec::Kind::exponential, nu, p);
                           },
                           t);
    return out;
}

//! Joint transform of the stochastic-volatility model
//!
//!   dV = (bV - kV V) dt + sigma sqrt(V) dW1
//!   dX = (bX - V/2) dt + sqrt(V) (rho dW1 + sqrt(1 - rho^2) dW2):
//!
//!   E[exp(w1 V_t + w2 X_t) | V_0 = v, X_0 = x] = exp(phi + psi v + w2 x).
inline LogTransform heston_transform(double bV, double kV, double sigma, double bX, double rho,
                                     Complex w1, Complex w2, double t) {
    detail::require(sigma > 0.0, "heston_transform: sigma must be positive");
    detail::require(t >= 0.0, "heston_transform: t must be >= 0");
    const detail::ScalarRiccati ric(0.5 * sigma * sigma, rho * sigma * w2 - kV,
                                    0.5 * (w2 * w2 - w2), w1);
    LogTransform out;
    out.psi = ric.psi(t);
    out.phi = bV * ric.int_psi(t) + bX * w2 * t;
    return out;
}

//! Transform exponents of a general affine model by direct numerical
//! integration of the generalized Riccati system:
//!
//!   E[exp(u . X_t) | X_0 = x] = exp(phi + psi . x)   while `completed`.
//!
//! When the solution explodes before t, `completed` is false and t_reached
//! reports how far the integration got.  A jump transform evaluated past its
//! pole throws ode_domain_error.
struct TransformResult {
    Complex phi{0.0, 0.0};
    Eigen::VectorXcd psi;
    bool completed = false;
    double t_reached = 0.0;
};

inline TransformResult solve_transform(const AffineModel& model, const Eigen::VectorXcd& u,
                                       double t, double rel_tol = 1e-12,
                                       double abs_tol = 1e-14) {
    const auto d = model.dim();
    detail::require((std::size_t)u.size() == d, "solve_transform: u must have length dim");
    detail::require(t >= 0.0, "solve_transform: t must be >= 0");

    const auto gen = model.data();
    const detail::OdeRhs rhs = [gen, d](const detail::OdeState& y, detail::OdeState& dy,
                                        double) {
        std::vector<Complex> psi(d), dpsi(d);
        for (std::size_t k = 0; k < d; ++k) psi[k] = {y[2 * k + 2], y[2 * k + 3]};
        Complex dphi;
        detail::riccati_derivative<Complex>(gen, psi.data(), dphi, dpsi.data());
        dy.resize(2 * d + 2);
        dy[0] = dphi.real();
        dy[1] = dphi.imag();
        for (std::size_t k = 0; k < d; ++k) {
            dy[2 * k + 2] = dpsi[k].real();
            dy[2 * k + 3] = dpsi[k].imag();
        }
    };

    detail::OdeState y0(2 * d + 2, 0.0);
    for (std::size_t k = 0; k < d; ++k) {
        y0[2 * k + 2] = u[(Eigen::Index)k].real();
        y0[2 * k + 3] = u[(Eigen::Index)k].imag();
    }

    const auto res = detail::integrate_checked(rhs, std::move(y0), 0.0, t, rel_tol, abs_tol);
    TransformResult out;
    out.completed = res.completed;
    out.t_reached = res.t_reached;
    out.phi = {res.y[0], res.y[1]};
    out.psi.resize((Eigen::Index)d);
    for (std::size_t k = 0; k < d; ++k)
        out.psi[(Eigen::Index)k] = Complex{res.y[2 * k + 2], res.y[2 * k + 3]};
    return out;
}

//! Conditional transform value E[exp(u . X_t) | X_0 = x0] for a general
//! affine model; throws numerical_error if the transform explodes before t.
inline Complex char_fn(const AffineModel& model, const Eigen::VectorXd& x0,
                       const Eigen::VectorXcd& u, double t) {
    detail::require((std::size_t)x0.size() == model.dim(), "char_fn: x0 must have length dim");
    const auto tr = solve_transform(model, u, t);
    if (!tr.completed)
        throw numerical_error(
            detail::cat("char_fn: transform explodes at t = ", tr.t_reached));
    Complex e = tr.phi;
    for (Eigen::Index k = 0; k < x0.size(); ++k) e += tr.psi[k] * x0[k];
    return std::exp(e);
}

//! One-dimensional characteristic function u -> E exp(i u Y).
using CharFn = std::function<Complex(double)>;

namespace detail {

//! Integral over [0, inf) of a decaying oscillatory integrand, summed in
//! adaptive Gauss-Kronrod blocks of a few dozen oscillation periods.  Stops
//! once two consecutive blocks fall below tolerance; throws if the cap is
//! reached first.
inline double oscillatory_integral(const std::function<double(double)>& f, double period,
                                   double tol, double u_cap) {
    const double width = std::min(std::max(20.0 * period, 1.0), 2e4);
    KahanSum acc;
    // The integrand's decay scale is unknown, and a single pass over a block
    // much wider than that scale can sample only zeros and accept 0, so the
    // first block is refined geometrically down to width / 2^14.
    double lo = 0.0;
    for (double hi = width * 0x1p-14; hi <= width; hi *= 2.0) {
        acc.add(integrate_gk(f, lo, hi, 0.05 * tol, 12));
        lo = hi;
    }
    double prev = std::numeric_limits<double>::infinity();
    for (double a = width; a < u_cap; a += width) {
        const double blk = integrate_gk(f, a, a + width, 0.05 * tol, 12);
        acc.add(blk);
        if (std::abs(blk) < 0.25 * tol && std::abs(prev) < 0.25 * tol) return acc.value();
        prev = blk;
    }
    throw numerical_error(cat("oscillatory_integral: no convergence below u = ", u_cap));
}

}  // namespace detail

//! Density of Y at y recovered from its characteristic function:
//!   f(y) = (1/pi) int_0^inf Re[e^{-iuy} cf(u)] du.
inline double fourier_density(const CharFn& cf, double y, double tol = 1e-10,
                              double u_cap = 1e6) {
    const double period = 2.0 * detail::pi / std::max(std::abs(y), 1e-2);
    const auto f = [&](double u) { return (std::exp(Complex(0.0, -u * y)) * cf(u)).real(); };
    return detail::oscillatory_integral(f, period, tol, u_cap) / detail::pi;
}

//! Distribution function of Y at y:
//!   F(y) = 1/2 - (1/pi) int_0^inf Im[e^{-iuy} cf(u)] / u du.
inline double fourier_cdf(const CharFn& cf, double y, double tol = 1e-10, double u_cap = 1e6) {
    const double period = 2.0 * detail::pi / std::max(std::abs(y), 1e-2);
    const auto f = [&](double u) {
        if (u == 0.0) return 0.0;
        return (std::exp(Complex(0.0, -u * y)) * cf(u)).imag() / u;
    };
    return 0.5 - detail::oscillatory_integral(f, period, tol, u_cap) / detail::pi;
}

//! Undiscounted call value E[(e^X - K)^+] by the damped-transform method.
//! `tf` must return the analytic transform E[exp((alpha + 1 + iu) X)]; the
//! strike is K = e^{log_strike} and alpha > 0 is the damping parameter, which
//! requires E[e^{(alpha+1) X}] < infinity.
inline double fourier_call(const std::function<Complex(double)>& tf, double log_strike,
                           double alpha = 1.5, double tol = 1e-10, double u_cap = 1e5) {
    detail::require(alpha > 0.0, "fourier_call: damping must be positive");
    const double k = log_strike;
    const double period = 2.0 * detail::pi / std::max(std::abs(k), 1e-2);
    const auto f = [&](double u) {
        const Complex den(alpha * alpha + alpha - u * u, (2.0 * alpha + 1.0) * u);
        return (std::exp(Complex(0.0, -u * k)) * tf(u) / den).real();
    };
    const double v = detail::oscillatory_integral(f, period, tol, u_cap);
    return std::exp(-alpha * k) * v / detail::pi;
}

//! Joint density at (y1, y2) from the bivariate characteristic function
//! cf(u1, u2) = E exp(i u1 Y1 + i u2 Y2), integrating the Hermitian-symmetric
//! right half plane:
//!   f = (1/(2 pi^2)) int_0^inf int_R Re[e^{-i(u1 y1 + u2 y2)} cf] du2 du1.
//! `tol` is an absolute tolerance on the returned density value.
inline double fourier_density_2d(const std::function<Complex(double, double)>& cf, double y1,
                                 double y2, double tol = 1e-6, double u1_cap = 1e5,
                                 double u2_cap = 1e5) {
    const double p2 = 2.0 * detail::pi / std::max(std::abs(y2), 1e-2);
    const double inner_tol = tol * detail::pi;

    const auto inner = [&](double u1) {
        const auto fpos = [&](double u2) {
            return (std::exp(Complex(0.0, -u1 * y1 - u2 * y2)) * cf(u1, u2)).real();
        };
        const auto fneg = [&](double u2) {
            return (std::exp(Complex(0.0, -u1 * y1 + u2 * y2)) * cf(u1, -u2)).real();
        };
        return detail::oscillatory_integral(fpos, p2, inner_tol, u2_cap) +
               detail::oscillatory_integral(fneg, p2, inner_tol, u2_cap);
    };

    const double p1 = 2.0 * detail::pi / std::max(std::abs(y1), 1e-2);
    const double v = detail::oscillatory_integral(inner, p1, tol * detail::pi * detail::pi,
                                                  u1_cap);
    return v / (2.0 * detail::pi * detail::pi);
}

}  // namespace ajd
