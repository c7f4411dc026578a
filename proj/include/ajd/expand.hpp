// SPDX-License-Identifier: MIT
#pragma once

#include <cmath>
#include <limits>
#include <map>
#include <span>
#include <utility>

#include <Eigen/Dense>

#include "ajd/basis.hpp"
#include "ajd/detail/common.hpp"
#include "ajd/detail/quadrature.hpp"
#include "ajd/poly.hpp"
#include "ajd/weights.hpp"

namespace ajd {

//! Affine change of coordinates xi = A y + b chosen so that the first two
//! moments of the transformed variable match the target weight's.  `jacobian`
//! is |det A|, the density change-of-variables factor; `D` is the Gamma shape
//! parameter implied by the match on the first coordinate.
struct Standardization {
    Eigen::MatrixXd A;
    Eigen::VectorXd b;
    Eigen::MatrixXd A_inv;
    double jacobian = 1.0;
    double D = 0.0;

    static Standardization identity(std::size_t d) {
        Standardization st;
        st.A = Eigen::MatrixXd::Identity((Eigen::Index)d, (Eigen::Index)d);
        st.b = Eigen::VectorXd::Zero((Eigen::Index)d);
        st.A_inv = st.A;
        return st;
    }

    std::size_t dim() const { return (std::size_t)A.rows(); }
    Eigen::VectorXd apply(const Eigen::VectorXd& y) const { return A * y + b; }
    Eigen::VectorXd invert(const Eigen::VectorXd& xi) const { return A_inv * (xi - b); }
};

//! Scale map xi = y mu1/(mu2 - mu1^2) for a nonnegative scalar variable with
//! raw moments mu1, mu2.  The transformed variable has mean = variance = D+1
//! with D = mu1^2/(mu2 - mu1^2) - 1, matching the Gamma(1+D, 1) weight.
inline Standardization standardize_1d(double mu1, double mu2) {
    const double var = mu2 - mu1 * mu1;
    detail::require(var > 0.0, "standardize_1d: nonpositive variance, mu1=", mu1,
                    ", mu2=", mu2);
    detail::require(mu1 > 0.0, "standardize_1d: mean must be positive for a Gamma match");
    const double s = mu1 / var;
    Standardization st;
    st.A = Eigen::MatrixXd::Constant(1, 1, s);
    st.b = Eigen::VectorXd::Zero(1);
    st.A_inv = Eigen::MatrixXd::Constant(1, 1, 1.0 / s);
    st.jacobian = s;
    st.D = s * mu1 - 1.0;
    return st;
}

//! Demean, block-diagonalize and scale a pair (nonnegative, real) so that the
//! image has moments ((D+1, 0), diag(D+1, 1)): first the shear
//! Upsilon1 = ((1,0),(-b/a1,1)), upsilon1 = (0, b m1/a1 - m2) kills the mean
//! and cross-covariance of the second coordinate, then the diagonal scale
//! Upsilon2 = diag(m1/a1, 1/sqrt(a2 - b^2/a1)) matches the Gamma x bilateral
//! product weight, D = m1^2/a1 - 1.
inline Standardization standardize_2d(const Eigen::Vector2d& mean, const Eigen::Matrix2d& cov) {
    const double a1 = cov(0, 0), b = cov(0, 1), a2 = cov(1, 1);
    detail::require(a1 > 0.0 && a1 * a2 - b * b > 0.0,
                    "standardize_2d: singular covariance, a1=", a1, ", a2=", a2, ", b=", b);
    detail::require(mean(0) > 0.0,
                    "standardize_2d: first mean must be positive for a Gamma match");
    const double resid = a2 - b * b / a1;
    Eigen::Matrix2d U1;
    U1 << 1.0, 0.0, -b / a1, 1.0;
    const Eigen::Vector2d u1(0.0, b * mean(0) / a1 - mean(1));
    const Eigen::Matrix2d U2 =
        Eigen::Vector2d(mean(0) / a1, 1.0 / std::sqrt(resid)).asDiagonal();

    Standardization st;
    st.A = U2 * U1;
    st.b = U2 * u1;
    st.A_inv = st.A.inverse();
    st.jacobian = std::abs(st.A.determinant());
    st.D = mean(0) * mean(0) / a1 - 1.0;
    return st;
}

//! Projection coefficients c_alpha = <g/w, H_alpha> = sum_beta H_alpha[beta]
//! mu_beta for |alpha| <= J, from raw moments of the standardized variable.
//! Accumulated in extended precision: the monomial coefficients of high-order
//! basis elements are large and cancel almost completely near matched orders.
inline std::map<MultiIndex, double> expansion_coefficients(
    const std::map<MultiIndex, double>& moments, const OrthonormalBasis& basis, int J) {
    detail::require(J >= 0 && J <= basis.max_order, "expansion_coefficients: order ", J,
                    " outside basis range ", basis.max_order);
    std::map<MultiIndex, double> c;
    for (std::size_t k = 0; k < basis.size(); ++k) {
        if (basis.index[k].order() > J) continue;
        long double acc = 0.0L;
        for (const auto& [beta, h] : basis.H[k].terms()) {
            auto it = moments.find(beta);
            detail::require(it != moments.end(), "expansion_coefficients: missing moment ",
                            beta.str());
            acc += (long double)h * (long double)it->second;
        }
        c.emplace(basis.index[k], (double)acc);
    }
    const double c0 = c.at(MultiIndex(basis.dim()));
    detail::require(std::abs(c0 - 1.0) <= 1e-5,
                    "expansion_coefficients: moments are not normalized, c_0=", c0);
    c.at(MultiIndex(basis.dim())) = 1.0;
    return c;
}

//! Truncated orthonormal expansion of a transition density,
//!   g^(J)(y) = w(xi) (1 + sum_{1<=|alpha|<=J} c_alpha H_alpha(xi)) |det A|,
//! xi = A y + b.  `ratio` caches the combined pseudo-likelihood-ratio
//! polynomial sum c_alpha H_alpha including c_0 H_0 = 1.  Values may be
//! negative; total mass is 1 by orthogonality.  Immutable once built.
struct Expansion {
    OrthonormalBasis basis;
    Standardization xform;
    std::map<MultiIndex, double> coeffs;
    int order = 0;
    Polynomial ratio = Polynomial(1);

    std::size_t dim() const { return basis.dim(); }
};

//! Assemble an expansion from a basis, a coordinate map, and raw moments of
//! the standardized variable through order J.
inline Expansion make_expansion(OrthonormalBasis basis, Standardization xform,
                                const std::map<MultiIndex, double>& std_moments, int J) {
    detail::require(basis.dim() == xform.dim(), "make_expansion: dimension mismatch");
    Expansion e;
    e.basis = std::move(basis);
    e.xform = std::move(xform);
    e.coeffs = expansion_coefficients(std_moments, e.basis, J);
    e.order = J;
    Polynomial r(e.basis.dim());
    for (const auto& [a, c] : e.coeffs) r += e.basis.at(a) * c;
    e.ratio = std::move(r);
    return e;
}

inline double pseudo_density(const Expansion& e, const Eigen::VectorXd& y) {
    detail::require((std::size_t)y.size() == e.dim(), "pseudo_density: point dimension ",
                    y.size(), " != ", e.dim());
    const Eigen::VectorXd xi = e.xform.apply(y);
    const double lw =
        e.basis.weight->log_density(std::span<const double>(xi.data(), (std::size_t)xi.size()));
    if (lw == -std::numeric_limits<double>::infinity()) return 0.0;
    return std::exp(lw) * e.ratio(xi) * e.xform.jacobian;
}

inline double pseudo_density(const Expansion& e, double y) {
    return pseudo_density(e, Eigen::VectorXd::Constant(1, y));
}

//! Clamped evaluator for consumers that need a nonnegative density; the mass
//! removed is reported by mass_deficit.
inline double pseudo_density_floored(const Expansion& e, const Eigen::VectorXd& y) {
    return std::max(0.0, pseudo_density(e, y));
}

inline double pseudo_density_floored(const Expansion& e, double y) {
    return pseudo_density_floored(e, Eigen::VectorXd::Constant(1, y));
}

namespace detail {

inline const UnivariateWeight& expansion_factor(const Expansion& e, std::size_t i) {
    if (const auto* uw = dynamic_cast<const UnivariateWeight*>(e.basis.weight.get())) {
        require(i == 0, "expansion weight is univariate");
        return *uw;
    }
    const auto* pw = dynamic_cast<const ProductWeight*>(e.basis.weight.get());
    require(pw != nullptr, "expansion weight must be univariate or a product");
    return pw->factor(i);
}

//! Integral of f over the support of the weight's i-th factor.
template <typename F>
double integrate_factor_support(const UnivariateWeight& w, F&& f) {
    const auto [lo, hi] = w.support();
    constexpr double inf = std::numeric_limits<double>::infinity();
    if (lo == -inf && hi == inf) return integrate_real_line(f);
    if (hi == inf) return integrate_right_tail(f, lo);
    return integrate_finite(f, lo, hi);
}

}  // namespace detail

//! Mass clipped away by the floored evaluator: integral of max(0, -g^(J)).
//! Zero for an everywhere-nonnegative expansion.
inline double mass_deficit(const Expansion& e) {
    const auto clip = [&](double v) { return std::max(0.0, -v); };
    if (e.dim() == 1) {
        const auto& w = detail::expansion_factor(e, 0);
        const double s = e.xform.jacobian;
        return detail::integrate_factor_support(w, [&](double xi) {
            const double y = (xi - e.xform.b(0)) / e.xform.A(0, 0);
            return clip(pseudo_density(e, Eigen::VectorXd::Constant(1, y))) / s;
        });
    }
    detail::require(e.dim() == 2, "mass_deficit: supported for dimensions 1 and 2");
    const auto& w0 = detail::expansion_factor(e, 0);
    const auto& w1 = detail::expansion_factor(e, 1);
    const double s = e.xform.jacobian;
    return detail::integrate_factor_support(w0, [&](double xi0) {
        return detail::integrate_factor_support(w1, [&](double xi1) {
            const Eigen::VectorXd y = e.xform.invert(Eigen::Vector2d(xi0, xi1));
            return clip(pseudo_density(e, y)) / s;
        });
    });
}

//! Distribution function of a scalar expansion through the weight's
//! closed-form lower partial moments: F(y) = sum_beta ratio_beta
//! Gamma_w(beta, A y + b).
inline double pseudo_cdf(const Expansion& e, double y) {
    detail::require(e.dim() == 1, "pseudo_cdf: needs a one-dimensional expansion");
    const auto& w = detail::expansion_factor(e, 0);
    const double s = e.xform.A(0, 0);
    detail::require(s > 0.0, "pseudo_cdf: coordinate map must be increasing");
    const double ybar = s * y + e.xform.b(0);
    detail::KahanSum acc;
    for (const auto& [a, c] : e.ratio.terms()) acc.add(c * w.partial_moment(a[0], ybar));
    return acc.value();
}

//! Approximate moment generating function E^(J)[e^{a Y}] in the original
//! coordinate, through the weight's closed-form exponential moments.  Throws
//! once a/scale reaches the weight's exponential-moment boundary.
inline double pseudo_mgf(const Expansion& e, double a) {
    detail::require(e.dim() == 1, "pseudo_mgf: needs a one-dimensional expansion");
    const auto& w = detail::expansion_factor(e, 0);
    const double s = e.xform.A(0, 0);
    detail::require(s > 0.0, "pseudo_mgf: coordinate map must be increasing");
    const double as = a / s;
    long double acc = 0.0L;
    for (const auto& [idx, c] : e.ratio.terms()) acc += (long double)c * w.exp_moment(idx[0], as);
    return (double)acc * std::exp(-as * e.xform.b(0));
}

//! Upper exponential integral int_y^inf e^{a u} g^(J)(u) du, the expected
//! exercised value in option pricing.
inline double pseudo_exp_upper(const Expansion& e, double a, double y) {
    detail::require(e.dim() == 1, "pseudo_exp_upper: needs a one-dimensional expansion");
    const auto& w = detail::expansion_factor(e, 0);
    const double s = e.xform.A(0, 0);
    detail::require(s > 0.0, "pseudo_exp_upper: coordinate map must be increasing");
    const double as = a / s;
    const double ybar = s * y + e.xform.b(0);
    long double acc = 0.0L;
    for (const auto& [idx, c] : e.ratio.terms())
        acc += (long double)c * w.exp_partial_moment(idx[0], as, ybar);
    return (double)acc * std::exp(-as * e.xform.b(0));
}

//! Closed-form moment of the pseudo-density in the original coordinate:
//! int y^alpha g^(J)(y) dy, contracted against the weight's moments.
inline double pseudo_moment(const Expansion& e, const MultiIndex& alpha) {
    detail::require(alpha.dim() == e.dim(), "pseudo_moment: index dimension mismatch");
    const Polynomial mono = Polynomial::monomial(alpha).compose_affine(
        e.xform.A_inv, -(e.xform.A_inv * e.xform.b));
    const Polynomial integrand = mono * e.ratio;
    detail::KahanSum acc;
    for (const auto& [beta, c] : integrand.terms()) acc.add(c * e.basis.weight->moment(beta));
    return acc.value();
}

inline double pseudo_moment(const Expansion& e, int n) {
    detail::require(e.dim() == 1, "pseudo_moment: scalar order needs a 1-d expansion");
    return pseudo_moment(e, MultiIndex::unit(1, 0, n));
}

}  // namespace ajd
