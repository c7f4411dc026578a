// SPDX-License-Identifier: MIT
#pragma once

#include <cmath>
#include <functional>
#include <vector>

#include <boost/numeric/odeint.hpp>

#include "ajd/detail/common.hpp"

namespace ajd::detail {

using OdeState = std::vector<double>;
using OdeRhs = std::function<void(const OdeState&, OdeState&, double)>;

struct OdeResult {
    bool completed = false;
    double t_reached = 0.0;
    OdeState y;
};

//! Signals an integrand singularity (e.g. a jump transform evaluated past its
//! abscissa of convergence) as opposed to plain solution blow-up.
struct ode_domain_error : numerical_error {
    using numerical_error::numerical_error;
};

//! Adaptive RK5(4) integration from t0 to t1 with blow-up detection: if the
//! controlled stepper's step size collapses or the state norm escapes, the
//! result reports the time reached instead of throwing.
inline OdeResult integrate_checked(const OdeRhs& rhs, OdeState y0, double t0, double t1,
                                   double rel_tol = 1e-10, double abs_tol = 1e-12) {
    namespace odeint = boost::numeric::odeint;
    using Stepper = odeint::runge_kutta_dopri5<OdeState>;

    OdeResult out;
    out.y = std::move(y0);
    out.t_reached = t0;
    if (t1 <= t0) {
        out.completed = true;
        return out;
    }

    auto ctrl = odeint::make_controlled<Stepper>(abs_tol, rel_tol);
    double t = t0;
    double dt = (t1 - t0) / 100.0;
    const double dt_floor = (t1 - t0) * 1e-14;
    const double norm_ceiling = 1e150;

    std::size_t rejections = 0;
    while (t < t1) {
        if (dt > t1 - t) dt = t1 - t;
        const auto res = ctrl.try_step(rhs, out.y, t, dt);
        if (res == odeint::success) {
            rejections = 0;
            out.t_reached = t;
            double nrm = 0.0;
            for (double v : out.y) nrm = std::max(nrm, std::abs(v));
            if (!std::isfinite(nrm) || nrm > norm_ceiling) return out;
        } else {
            if (++rejections > 500 || dt < dt_floor) return out;
        }
    }
    out.completed = true;
    out.t_reached = t1;
    return out;
}

}  // namespace ajd::detail
