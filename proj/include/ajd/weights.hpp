// SPDX-License-Identifier: MIT
#pragma once

#include <cmath>
#include <limits>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "ajd/detail/common.hpp"
#include "ajd/detail/quadrature.hpp"
#include "ajd/detail/special.hpp"
#include "ajd/poly.hpp"

namespace ajd {

//! Auxiliary density w on R^d with closed-form polynomial moments.
class Weight {
  public:
    virtual ~Weight() = default;
    virtual std::size_t dim() const = 0;
    //! lambda_alpha = integral of xi^alpha against w.
    virtual double moment(const MultiIndex& a) const = 0;
    //! log w(xi); -inf outside the support.
    virtual double log_density(std::span<const double> xi) const = 0;
    virtual std::unique_ptr<Weight> clone() const = 0;
    virtual std::string name() const = 0;

    double density(std::span<const double> xi) const {
        const double l = log_density(xi);
        return l == -std::numeric_limits<double>::infinity() ? 0.0 : std::exp(l);
    }
};

//! One-dimensional weight with partial and exponential moments, the
//! building block of product weights and of the pricing/CDF formulas.
class UnivariateWeight : public Weight {
  public:
    std::size_t dim() const final { return 1; }
    double moment(const MultiIndex& a) const final {
        detail::require(a.dim() == 1, name(), ": moment index must be one-dimensional");
        return moment1(a[0]);
    }
    double log_density(std::span<const double> xi) const final {
        detail::require(xi.size() == 1, name(), ": point must be one-dimensional");
        return log_density1(xi[0]);
    }

    virtual double moment1(int n) const = 0;
    virtual double log_density1(double x) const = 0;
    double density1(double x) const {
        const double l = log_density1(x);
        return l == -std::numeric_limits<double>::infinity() ? 0.0 : std::exp(l);
    }
    //! Support interval (lo may be -inf, hi +inf).
    virtual std::pair<double, double> support() const = 0;

    //! Lower partial moment: integral of x^n w(x) over (-inf, y].
    virtual double partial_moment(int n, double y) const;
    //! Exponential moment: integral of e^{ax} x^n w(x) over the support.
    virtual double exp_moment(int n, double a) const;
    //! Upper exponential partial moment: integral of e^{ax} x^n w(x) over [y, inf).
    virtual double exp_partial_moment(int n, double a, double y) const;
    //! Largest a0 >= 0 such that exp_moment is finite for |a| < a0 (inf if all a work).
    virtual double exp_moment_radius() const = 0;
};

namespace detail {
// default quadrature implementations shared by the virtual fallbacks
double uw_partial_moment(const UnivariateWeight& w, int n, double y);
double uw_exp_partial_moment(const UnivariateWeight& w, int n, double a, double y);
}  // namespace detail

inline double UnivariateWeight::partial_moment(int n, double y) const {
    return detail::uw_partial_moment(*this, n, y);
}
inline double UnivariateWeight::exp_moment(int n, double a) const {
    return exp_partial_moment(n, a, -std::numeric_limits<double>::infinity());
}
inline double UnivariateWeight::exp_partial_moment(int n, double a, double y) const {
    return detail::uw_exp_partial_moment(*this, n, a, y);
}

//! Gamma(1+D, 1) density gamma(xi; D) = e^{-xi} xi^D / Gamma(1+D) on [0, inf).
class GammaWeight final : public UnivariateWeight {
  public:
    explicit GammaWeight(double D) : D_(D), lg_(std::lgamma(D + 1.0)) {
        detail::require(D > -1.0, "GammaWeight: require D > -1, got D=", D);
    }

    double D() const { return D_; }
    std::string name() const override { return "gamma"; }
    std::unique_ptr<Weight> clone() const override { return std::make_unique<GammaWeight>(*this); }
    std::pair<double, double> support() const override {
        return {0.0, std::numeric_limits<double>::infinity()};
    }

    //! lambda_n = prod_{i=1}^n (D+i).
    double moment1(int n) const override {
        detail::require(n >= 0, "GammaWeight: negative moment order");
        long double p = 1.0L;
        for (int i = 1; i <= n; ++i) p *= (long double)D_ + i;
        return (double)p;
    }

    double log_density1(double x) const override {
        constexpr double inf = std::numeric_limits<double>::infinity();
        if (x < 0.0) return -inf;
        if (x == 0.0) return D_ == 0.0 ? 0.0 : (D_ > 0.0 ? -inf : inf);
        return -x + D_ * std::log(x) - lg_;
    }

    double partial_moment(int n, double y) const override {
        detail::require(n >= 0, "GammaWeight: negative moment order");
        if (y <= 0.0) return 0.0;
        return moment1(n) * detail::gamma_p(D_ + 1.0 + n, y);
    }

    //! Closed form prod(D+i) (1-a)^{-(D+1+n)}, finite for a < 1.
    double exp_moment(int n, double a) const override {
        detail::require(n >= 0, "GammaWeight: negative moment order");
        detail::require(a < 1.0, "GammaWeight: exponential moment diverges for a >= 1, a=", a);
        return moment1(n) * std::pow(1.0 - a, -(D_ + 1.0 + n));
    }

    double exp_partial_moment(int n, double a, double y) const override {
        if (y <= 0.0) return exp_moment(n, a);
        detail::require(n >= 0, "GammaWeight: negative moment order");
        detail::require(a < 1.0, "GammaWeight: exponential moment diverges for a >= 1, a=", a);
        return exp_moment(n, a) * boost::math::gamma_q(D_ + 1.0 + n, (1.0 - a) * y);
    }

    double exp_moment_radius() const override { return 1.0; }

  private:
    double D_;
    double lg_;
};

namespace detail {
inline constexpr int kBgMomentMax = 24;
inline constexpr double kBgMoment[25][12] = {
    {1.00000000000000000, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0},
    {0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0},
    {1.00000000000000000, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0},
    {0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0},
    {3.00000000000000000, 1.00000000000000000, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0},
    {0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0},
    {15.0000000000000000, 15.0000000000000000, 3.33333333333333333, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0},
    {0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0},
    {105.000000000000000, 210.000000000000000, 128.333333333333333, 23.3333333333333333, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0},
    {0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0},
    {945.000000000000000, 3150.00000000000000, 3675.00000000000000, 1750.00000000000000, 280.000000000000000, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0},
    {0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0},
    {10395.0000000000000, 51975.0000000000000, 98175.0000000000000, 86625.0000000000000, 35163.3333333333333, 5133.33333333333333, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0},
    {0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0},
    {135135.000000000000, 945945.000000000000, 2627625.00000000000, 3678675.00000000000, 2709373.33333333333, 980980.000000000000, 133466.666666666667, 0.0, 0.0, 0.0, 0.0, 0.0},
    {0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0},
    {2027025.00000000000, 18918900.0000000000, 72522450.0000000000, 147147000.000000000, 169394225.000000000, 109542766.666666667, 36336300.0000000000, 4671333.33333333333, 0.0, 0.0, 0.0, 0.0},
    {0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0},
    {34459425.0000000000, 413513100.000000000, 2090538450.00000000, 5789183400.00000000, 9550365825.00000000, 9541431900.00000000, 5583655855.55555556, 1726658266.66666667, 211767111.111111111, 0.0, 0.0, 0.0},
    {0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0},
    {654729075.000000000, 9820936125.00000000, 63290477250.0000000, 229155176250.000000, 511440404475.000000, 725658058125.000000, 649951079555.555556, 351074890833.333333, 102443096311.111111, 12070725333.3333333, 0.0, 0.0},
    {0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0},
    {13749310575.0000000, 252070693875.000000, 2016565551000.00000, 9242592108750.00000, 26781110831475.0000, 51039647533875.0000, 64445036739416.6667, 52869148276388.8889, 26726547380866.6667, 7424501973777.77778, 844950773333.333333, 0.0},
    {0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0},
    {316234143225.000000, 6957151150950.00000, 67638969523125.0000, 382643313302250.000, 1395424150295175.00, 3432452240066850.00, 5786579453696708.33, 6650855175381083.33, 5073342094402062.96, 2424702374516644.44, 645566867575259.259, 71257515217777.7778},
};
}  // namespace detail

//! Standardized bilateral Gamma density Gamma_b(C): mean 0, unit variance,
//! zero skewness, excess kurtosis C > 0.  Density in terms of the modified
//! Bessel function K, moments as tabulated polynomials in C (generated once
//! symbolically from the moment generating function).
class BilateralGammaWeight final : public UnivariateWeight {
  public:
    explicit BilateralGammaWeight(double C) : C_(C) {
        detail::require(C > 0.0, "BilateralGammaWeight: require C > 0, got C=", C);
        nu_ = 3.0 / C_ - 0.5;
        slope_ = std::sqrt(6.0 / C_);
        log_pref_ = (3.0 * (C_ - 2.0) / (4.0 * C_)) * std::log(2.0) +
                    ((C_ + 6.0) / (4.0 * C_)) * (std::log(3.0) - std::log(C_)) -
                    0.5 * std::log(detail::pi) - std::lgamma(3.0 / C_);
    }

    double C() const { return C_; }
    std::string name() const override { return "bilateral_gamma"; }
    std::unique_ptr<Weight> clone() const override {
        return std::make_unique<BilateralGammaWeight>(*this);
    }
    std::pair<double, double> support() const override {
        constexpr double inf = std::numeric_limits<double>::infinity();
        return {-inf, inf};
    }

    double moment1(int n) const override {
        detail::require(n >= 0, "BilateralGammaWeight: negative moment order");
        detail::require(n <= detail::kBgMomentMax,
                        "BilateralGammaWeight: moment order ", n, " beyond tabulated order ",
                        detail::kBgMomentMax);
        const auto& row = detail::kBgMoment[n];
        double v = 0.0;
        for (int j = (int)(sizeof(row) / sizeof(row[0])) - 1; j >= 0; --j) v = v * C_ + row[j];
        return v;
    }

    double log_density1(double x) const override {
        x = std::abs(x);
        if (x == 0.0) {
            if (nu_ <= 0.0) return std::numeric_limits<double>::infinity();
            // limit of |x|^nu K_nu(slope x): 2^{nu-1} Gamma(nu) slope^{-nu}
            return log_pref_ + (nu_ - 1.0) * std::log(2.0) + std::lgamma(nu_) -
                   nu_ * std::log(slope_);
        }
        const double z = slope_ * x;
        if (!std::isfinite(z)) return -std::numeric_limits<double>::infinity();
        return log_pref_ + nu_ * std::log(x) + detail::log_bessel_k(nu_, z);
    }

    //! Decay rate of the density: gamma_b(x) ~ e^{-sqrt(6/C)|x|} up to powers.
    double exp_moment_radius() const override { return slope_; }

  private:
    double C_;
    double nu_, slope_, log_pref_;
};

//! Gaussian N(mean, variance) weight; the Gram-Charlier base case.
class GaussianWeight final : public UnivariateWeight {
  public:
    GaussianWeight(double mean, double variance) : m_(mean), v_(variance) {
        detail::require(variance > 0.0, "GaussianWeight: require variance > 0, got ", variance);
        s_ = std::sqrt(variance);
    }

    double mean() const { return m_; }
    double variance() const { return v_; }
    std::string name() const override { return "gaussian"; }
    std::unique_ptr<Weight> clone() const override {
        return std::make_unique<GaussianWeight>(*this);
    }
    std::pair<double, double> support() const override {
        constexpr double inf = std::numeric_limits<double>::infinity();
        return {-inf, inf};
    }

    double moment1(int n) const override {
        detail::require(n >= 0, "GaussianWeight: negative moment order");
        // E[(m + sZ)^n] via binomial sum over standard-normal moments
        double sum = 0.0;
        for (int k = 0; k <= n; k += 2)
            sum += binom_(n, k) * double_fact_(k - 1) * std::pow(s_, k) * std::pow(m_, n - k);
        return sum;
    }

    double log_density1(double x) const override {
        const double z = (x - m_) / s_;
        return -0.5 * z * z - 0.5 * std::log(2.0 * detail::pi * v_);
    }

    double partial_moment(int n, double y) const override {
        detail::require(n >= 0, "GaussianWeight: negative moment order");
        const double t = (y - m_) / s_;
        // I_k(t) = int_{-inf}^t u^k phi(u) du by the classical recursion
        std::vector<double> I(n + 1);
        const double phi = detail::normal_pdf(t), Phi = detail::normal_cdf(t);
        if (n >= 0) I[0] = Phi;
        if (n >= 1) I[1] = -phi;
        for (int k = 2; k <= n; ++k)
            I[k] = -std::pow(t, k - 1) * phi + (k - 1) * I[k - 2];
        double sum = 0.0;
        for (int k = 0; k <= n; ++k)
            sum += binom_(n, k) * std::pow(s_, k) * std::pow(m_, n - k) * I[k];
        return sum;
    }

    double exp_moment(int n, double a) const override {
        // tilt: e^{ax} phi_{m,v}(x) = e^{am + a^2 v/2} phi_{m+av, v}(x)
        GaussianWeight tilted(m_ + a * v_, v_);
        return std::exp(a * m_ + 0.5 * a * a * v_) * tilted.moment1(n);
    }

    double exp_partial_moment(int n, double a, double y) const override {
        GaussianWeight tilted(m_ + a * v_, v_);
        return std::exp(a * m_ + 0.5 * a * a * v_) *
               (tilted.moment1(n) - tilted.partial_moment(n, y));
    }

    double exp_moment_radius() const override {
        return std::numeric_limits<double>::infinity();
    }

  private:
    static double binom_(int n, int k) {
        double r = 1.0;
        for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
        return r;
    }
    static double double_fact_(int k) {  // (k)!! with (-1)!! = 1
        double r = 1.0;
        for (int i = k; i > 1; i -= 2) r *= i;
        return r;
    }
    double m_, v_, s_;
};

//! Product weight w(xi) = prod_i w_i(xi_i) on the product of the supports.
class ProductWeight final : public Weight {
  public:
    explicit ProductWeight(std::vector<std::shared_ptr<const UnivariateWeight>> factors)
        : f_(std::move(factors)) {
        detail::require(!f_.empty(), "ProductWeight: need at least one factor");
        for (const auto& w : f_) detail::require(w != nullptr, "ProductWeight: null factor");
    }

    std::size_t dim() const override { return f_.size(); }
    std::string name() const override {
        std::string s = "product(";
        for (std::size_t i = 0; i < f_.size(); ++i) s += (i ? "," : "") + f_[i]->name();
        return s + ")";
    }
    std::unique_ptr<Weight> clone() const override {
        return std::make_unique<ProductWeight>(*this);
    }
    const UnivariateWeight& factor(std::size_t i) const { return *f_.at(i); }
    std::shared_ptr<const UnivariateWeight> factor_ptr(std::size_t i) const { return f_.at(i); }

    double moment(const MultiIndex& a) const override {
        detail::require(a.dim() == f_.size(), "ProductWeight: index dimension mismatch");
        double p = 1.0;
        for (std::size_t i = 0; i < f_.size(); ++i) p *= f_[i]->moment1(a[i]);
        return p;
    }

    double log_density(std::span<const double> xi) const override {
        detail::require(xi.size() == f_.size(), "ProductWeight: point dimension mismatch");
        double s = 0.0;
        for (std::size_t i = 0; i < f_.size(); ++i) s += f_[i]->log_density1(xi[i]);
        return s;
    }

  private:
    std::vector<std::shared_ptr<const UnivariateWeight>> f_;
};

namespace detail {

//! x^n w(x) evaluated through logs so that huge |x| underflows to 0 instead
//! of producing inf * 0 inside the tail quadratures.
inline double uw_moment_integrand(const UnivariateWeight& w, int n, double a, double x) {
    double l = w.log_density1(x);
    if (a != 0.0) l += a * x;
    if (!(l > -std::numeric_limits<double>::infinity())) return 0.0;
    if (n == 0) return std::exp(l);
    const double ax = std::abs(x);
    if (ax == 0.0) return 0.0;
    const double v = std::exp(n * std::log(ax) + l);
    return (n % 2 != 0 && x < 0.0) ? -v : v;
}

inline double uw_partial_moment(const UnivariateWeight& w, int n, double y) {
    require(n >= 0, w.name(), ": negative moment order");
    const auto [lo, hi] = w.support();
    if (y <= lo) return 0.0;
    auto f = [&](double x) { return uw_moment_integrand(w, n, 0.0, x); };
    // split at 0 (possible density kink) and at y
    const double top = std::min(y, hi);
    double sum = 0.0;
    if (lo == -std::numeric_limits<double>::infinity()) {
        const double mid = std::min(0.0, top);
        sum += integrate_left_tail(f, mid);
        if (top > 0.0) sum += integrate_finite(f, 0.0, top);
    } else {
        if (top > lo) sum += integrate_finite(f, lo, top);
    }
    return sum;
}

inline double uw_exp_partial_moment(const UnivariateWeight& w, int n, double a, double y) {
    require(n >= 0, w.name(), ": negative moment order");
    require(std::abs(a) < w.exp_moment_radius(), w.name(),
            ": exponential moment diverges at a=", a);
    const auto [lo, hi] = w.support();
    if (y >= hi) return 0.0;
    auto f = [&](double x) { return uw_moment_integrand(w, n, a, x); };
    const double bot = std::max(y, lo);
    double sum = 0.0;
    if (hi == std::numeric_limits<double>::infinity()) {
        const double mid = std::max(0.0, bot);
        sum += integrate_right_tail(f, mid);
        if (bot < 0.0) sum += integrate_finite(f, bot, 0.0);
    } else {
        if (bot < hi) sum += integrate_finite(f, bot, hi);
    }
    return sum;
}

}  // namespace detail

//! Lower partial moment of the bilateral Gamma weight,
//! Gamma_b(K, n) = integral of xi^n gamma_b(xi; C) over (-inf, K].
inline double bilateral_partial_moment(double K, int n, double C) {
    return BilateralGammaWeight(C).partial_moment(n, K);
}

}  // namespace ajd
