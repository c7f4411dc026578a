// SPDX-License-Identifier: MIT
#pragma once

#include <cmath>
#include <complex>
#include <cstddef>
#include <limits>
#include <map>
#include <optional>
#include <utility>
#include <vector>

#include <Eigen/Dense>
#include <unsupported/Eigen/MatrixFunctions>

#include "ajd/detail/common.hpp"
#include "ajd/detail/ode.hpp"
#include "ajd/poly.hpp"

namespace ajd {

//! One jump term of an affine model: scalar jump sizes J applied to a single
//! coordinate, J ~ exponential(mean) or a point mass.  Both families have all
//! moments, in closed form, which keeps the generator exact on polynomials.
struct JumpSpec {
    enum class Kind { exponential, point_mass };

    Kind kind = Kind::exponential;
    double intensity = 0.0;  // arrival rate
    double param = 0.0;      // exponential mean, or the point-mass height
    std::size_t coord = 0;   // coordinate receiving the jump

    static JumpSpec exponential(double intensity, double mean, std::size_t coord = 0) {
        detail::require(intensity >= 0.0, "JumpSpec: intensity must be >= 0");
        detail::require(mean > 0.0, "JumpSpec: exponential mean must be > 0");
        return {Kind::exponential, intensity, mean, coord};
    }
    static JumpSpec point_mass(double intensity, double height, std::size_t coord = 0) {
        detail::require(intensity >= 0.0, "JumpSpec: intensity must be >= 0");
        detail::require(std::isfinite(height), "JumpSpec: height must be finite");
        return {Kind::point_mass, intensity, height, coord};
    }
};

namespace detail {

inline double jump_raw_moment(JumpSpec::Kind kind, double param, int k) {
    if (k <= 0) return 1.0;
    if (kind == JumpSpec::Kind::point_mass) return std::pow(param, k);
    double m = 1.0;  // E J^k = k! mean^k
    for (int i = 1; i <= k; ++i) m *= i * param;
    return m;
}

inline double real_part(double x) { return x; }
inline double real_part(const std::complex<double>& z) { return z.real(); }
inline double exp_minus_one(double x) { return std::expm1(x); }
inline std::complex<double> exp_minus_one(const std::complex<double>& z) {
    return std::exp(z) - 1.0;
}

//! E exp(z J) - 1 for a jump size distribution.  The exponential transform has
//! a pole at z = 1/mean; evaluating at or beyond it raises ode_domain_error so
//! callers can distinguish transform breakdown from solution blow-up.
template <typename Scalar>
Scalar jump_mgf_m1(JumpSpec::Kind kind, double param, const Scalar& z) {
    if (kind == JumpSpec::Kind::exponential) {
        const Scalar nz = param * z;
        if (real_part(nz) >= 1.0)
            throw ode_domain_error("jump transform evaluated at or past its pole");
        return nz / (1.0 - nz);
    }
    return exp_minus_one(param * z);
}

//! Jump term in unconstrained coordinates: sizes J * dir with arrival
//! intensity l0 + lx . x.  Closed under affine changes of variables, unlike
//! the single-coordinate public form.
struct LinearJump {
    JumpSpec::Kind kind = JumpSpec::Kind::exponential;
    double param = 0.0;
    double l0 = 0.0;
    Eigen::VectorXd lx;
    Eigen::VectorXd dir;
};

inline Polynomial directional_derivative(const Polynomial& p, const Eigen::VectorXd& dir) {
    Polynomial r(p.dim());
    for (std::size_t k = 0; k < p.dim(); ++k) {
        const double w = dir[(Eigen::Index)k];
        if (w != 0.0) r += p.derivative(k) * w;
    }
    return r;
}

//! Raw coefficient data of an affine generator
//!
//!   A f(x) = sum_kl (A0 + sum_j x_j Ax_j)_kl d_k d_l f(x)
//!          + (b + B x) . grad f(x)
//!          + sum_jumps (l0 + lx . x) E[f(x + J dir) - f(x)]
//!
//! with the diffusion matrix multiplying second derivatives directly (no 1/2).
//! This form is closed under affine maps of the state, which is what the
//! centered moment computations rely on; admissibility is not assumed here.
struct GeneratorData {
    std::size_t dim = 0;
    Eigen::MatrixXd A0;
    std::vector<Eigen::MatrixXd> Ax;  // size dim
    Eigen::VectorXd b;
    Eigen::MatrixXd B;
    std::vector<LinearJump> jumps;

    //! Generator applied to a polynomial.  Exact: jumps enter through their
    //! raw moments via the Taylor expansion of p(x + J dir), a finite sum.
    Polynomial apply(const Polynomial& p) const {
        detail::require(p.dim() == dim, "GeneratorData: polynomial dimension mismatch");
        Polynomial out(dim);
        if (p.is_zero()) return out;

        std::vector<Polynomial> d1;
        d1.reserve(dim);
        for (std::size_t k = 0; k < dim; ++k) d1.push_back(p.derivative(k));

        for (std::size_t k = 0; k < dim; ++k) {
            if (d1[k].is_zero()) continue;
            if (b[(Eigen::Index)k] != 0.0) out += d1[k] * b[(Eigen::Index)k];
            for (std::size_t j = 0; j < dim; ++j) {
                const double v = B((Eigen::Index)k, (Eigen::Index)j);
                if (v != 0.0) out += Polynomial::variable(dim, j) * d1[k] * v;
            }
        }

        for (std::size_t k = 0; k < dim; ++k) {
            if (d1[k].is_zero()) continue;
            for (std::size_t l = 0; l < dim; ++l) {
                bool any = A0((Eigen::Index)k, (Eigen::Index)l) != 0.0;
                for (std::size_t j = 0; !any && j < dim; ++j)
                    any = Ax[j]((Eigen::Index)k, (Eigen::Index)l) != 0.0;
                if (!any) continue;
                const Polynomial d2 = d1[k].derivative(l);
                if (d2.is_zero()) continue;
                const double a0 = A0((Eigen::Index)k, (Eigen::Index)l);
                if (a0 != 0.0) out += d2 * a0;
                for (std::size_t j = 0; j < dim; ++j) {
                    const double v = Ax[j]((Eigen::Index)k, (Eigen::Index)l);
                    if (v != 0.0) out += Polynomial::variable(dim, j) * d2 * v;
                }
            }
        }

        for (const auto& jp : jumps) {
            Polynomial acc(dim);
            Polynomial q = p;
            double fact = 1.0;
            for (int r = 1; r <= p.degree(); ++r) {
                q = directional_derivative(q, jp.dir);
                if (q.is_zero()) break;
                fact *= r;
                const double mr = jump_raw_moment(jp.kind, jp.param, r);
                if (mr != 0.0) acc += q * (mr / fact);
            }
            if (acc.is_zero()) continue;
            if (jp.l0 != 0.0) out += acc * jp.l0;
            for (std::size_t j = 0; j < dim; ++j) {
                const double v = jp.lx[(Eigen::Index)j];
                if (v != 0.0) out += Polynomial::variable(dim, j) * acc * v;
            }
        }
        return out;
    }

    //! Generator data of the image process T X + c for invertible T.
    GeneratorData affine_image(const Eigen::MatrixXd& T, const Eigen::VectorXd& c) const {
        const auto d = (Eigen::Index)dim;
        detail::require(T.rows() == d && T.cols() == d && c.size() == d,
                        "GeneratorData: affine map shape mismatch");
        const Eigen::MatrixXd Tinv = T.inverse();
        detail::require((T * Tinv - Eigen::MatrixXd::Identity(d, d)).cwiseAbs().maxCoeff() < 1e-8,
                        "GeneratorData: affine map is numerically singular");

        GeneratorData r;
        r.dim = dim;
        std::vector<Eigen::MatrixXd> TAxT(dim);
        for (std::size_t j = 0; j < dim; ++j) TAxT[j] = T * Ax[j] * T.transpose();
        const Eigen::VectorXd tic = Tinv * c;

        r.A0 = T * A0 * T.transpose();
        for (std::size_t j = 0; j < dim; ++j)
            if (tic[(Eigen::Index)j] != 0.0) r.A0 -= tic[(Eigen::Index)j] * TAxT[j];
        r.Ax.assign(dim, Eigen::MatrixXd::Zero(d, d));
        for (std::size_t s = 0; s < dim; ++s)
            for (std::size_t j = 0; j < dim; ++j) {
                const double w = Tinv((Eigen::Index)j, (Eigen::Index)s);
                if (w != 0.0) r.Ax[s] += w * TAxT[j];
            }
        r.B = T * B * Tinv;
        r.b = T * b - r.B * c;
        r.jumps.reserve(jumps.size());
        for (const auto& jp : jumps)
            r.jumps.push_back({jp.kind, jp.param, jp.l0 - jp.lx.dot(tic),
                               Tinv.transpose() * jp.lx, T * jp.dir});
        return r;
    }
};

//! Right-hand side of the generalized Riccati system for E exp(phi + psi . x):
//! dphi = psi' A0 psi + b . psi + sum l0 (M(psi . dir) - 1) and the psi
//! equation collects the x-proportional parts.  Scalar is double or complex.
template <typename Scalar>
void riccati_derivative(const GeneratorData& g, const Scalar* psi, Scalar& dphi, Scalar* dpsi) {
    const auto d = (Eigen::Index)g.dim;
    dphi = Scalar(0);
    for (Eigen::Index k = 0; k < d; ++k) dpsi[k] = Scalar(0);

    for (Eigen::Index j = 0; j < d; ++j)
        for (Eigen::Index k = 0; k < d; ++k) {
            const double v = g.B(j, k);
            if (v != 0.0) dpsi[k] += v * psi[j];
        }
    for (Eigen::Index k = 0; k < d; ++k) {
        const double v = g.b[k];
        if (v != 0.0) dphi += v * psi[k];
    }
    for (Eigen::Index k = 0; k < d; ++k)
        for (Eigen::Index l = 0; l < d; ++l) {
            const double v0 = g.A0(k, l);
            if (v0 != 0.0) dphi += v0 * psi[k] * psi[l];
            for (Eigen::Index j = 0; j < d; ++j) {
                const double vj = g.Ax[(std::size_t)j](k, l);
                if (vj != 0.0) dpsi[j] += vj * psi[k] * psi[l];
            }
        }
    for (const auto& jp : g.jumps) {
        Scalar z(0);
        for (Eigen::Index k = 0; k < d; ++k) {
            const double v = jp.dir[k];
            if (v != 0.0) z += v * psi[k];
        }
        const Scalar mm = jump_mgf_m1(jp.kind, jp.param, z);
        if (jp.l0 != 0.0) dphi += jp.l0 * mm;
        for (Eigen::Index k = 0; k < d; ++k) {
            const double v = jp.lx[k];
            if (v != 0.0) dpsi[k] += v * mm;
        }
    }
}

}  // namespace detail

//! Affine jump-diffusion on the canonical state space R_+^m x R^n.
//!
//! The generator is
//!
//!   A f(x) = sum_kl (diag(0, a) + sum_{i<m} x_i alpha_i)_kl d_k d_l f(x)
//!          + (b + beta x) . grad f(x)  +  jump terms,
//!
//! so the diffusion matrices multiply second derivatives directly (they
//! absorb the usual factor 1/2).  `jump_m` holds jumps with constant arrival
//! intensity, `jump_mu[i]` jumps arriving at rate x_i per unit intensity.
//! Drift is stored fully compensated: no truncation-function convention.
class AffineModel {
  public:
    AffineModel(std::size_t m, std::size_t n, Eigen::MatrixXd a,
                std::vector<Eigen::MatrixXd> alpha, Eigen::VectorXd b, Eigen::MatrixXd beta,
                std::vector<JumpSpec> jump_m = {}, std::vector<std::vector<JumpSpec>> jump_mu = {})
        : m_(m),
          n_(n),
          a_(std::move(a)),
          alpha_(std::move(alpha)),
          b_(std::move(b)),
          beta_(std::move(beta)),
          jump_m_(std::move(jump_m)),
          jump_mu_(std::move(jump_mu)) {
        const auto d = (Eigen::Index)dim();
        detail::require(dim() >= 1, "AffineModel: state dimension must be >= 1");
        detail::require(a_.rows() == (Eigen::Index)n_ && a_.cols() == (Eigen::Index)n_,
                        "AffineModel: a must be n x n");
        detail::require(alpha_.size() == m_, "AffineModel: need one alpha matrix per R_+ coordinate");
        detail::require(b_.size() == d, "AffineModel: b must have length m + n");
        detail::require(beta_.rows() == d && beta_.cols() == d, "AffineModel: beta must be d x d");

        require_psd(a_, "a");
        for (std::size_t i = 0; i < m_; ++i) {
            detail::require(alpha_[i].rows() == d && alpha_[i].cols() == d,
                            "AffineModel: alpha matrices must be d x d");
            require_psd(alpha_[i], "alpha");
            for (std::size_t j = 0; j < m_; ++j)
                for (std::size_t k = 0; k < m_; ++k)
                    if (!(j == i && k == i))
                        detail::require(alpha_[i]((Eigen::Index)j, (Eigen::Index)k) == 0.0,
                                        "AffineModel: alpha_i may touch the R_+ block only at (i,i)");
        }
        for (std::size_t i = 0; i < m_; ++i)
            detail::require(b_[(Eigen::Index)i] >= 0.0,
                            "AffineModel: drift constant must be >= 0 on R_+ coordinates");

        for (std::size_t i = 0; i < m_; ++i) {
            for (std::size_t j = m_; j < dim(); ++j)
                detail::require(beta_((Eigen::Index)i, (Eigen::Index)j) == 0.0,
                                "AffineModel: R_+ drift cannot depend on the R^n block");
            for (std::size_t j = 0; j < m_; ++j)
                detail::require(j == i || beta_((Eigen::Index)i, (Eigen::Index)j) >= 0.0,
                                "AffineModel: R_+ drift cross terms must be >= 0");
        }

        if (jump_mu_.empty()) jump_mu_.resize(m_);
        detail::require(jump_mu_.size() == m_,
                        "AffineModel: need one proportional jump list per R_+ coordinate");
        for (const auto& s : jump_m_) require_jump(s);
        for (const auto& lst : jump_mu_)
            for (const auto& s : lst) require_jump(s);
    }

    std::size_t m() const { return m_; }
    std::size_t n() const { return n_; }
    std::size_t dim() const { return m_ + n_; }

    const Eigen::MatrixXd& a() const { return a_; }
    const std::vector<Eigen::MatrixXd>& alpha() const { return alpha_; }
    const Eigen::VectorXd& b() const { return b_; }
    //! Linear drift part: drift(x) = b + beta x.
    const Eigen::MatrixXd& beta() const { return beta_; }
    const std::vector<JumpSpec>& jump_m() const { return jump_m_; }
    const std::vector<std::vector<JumpSpec>>& jump_mu() const { return jump_mu_; }

    detail::GeneratorData data() const {
        const auto d = (Eigen::Index)dim();
        detail::GeneratorData g;
        g.dim = dim();
        g.A0 = Eigen::MatrixXd::Zero(d, d);
        g.A0.block((Eigen::Index)m_, (Eigen::Index)m_, (Eigen::Index)n_, (Eigen::Index)n_) = a_;
        g.Ax.assign(dim(), Eigen::MatrixXd::Zero(d, d));
        for (std::size_t i = 0; i < m_; ++i) g.Ax[i] = alpha_[i];
        g.b = b_;
        g.B = beta_;
        for (const auto& s : jump_m_)
            g.jumps.push_back({s.kind, s.param, s.intensity, Eigen::VectorXd::Zero(d),
                               Eigen::VectorXd::Unit(d, (Eigen::Index)s.coord)});
        for (std::size_t i = 0; i < m_; ++i)
            for (const auto& s : jump_mu_[i])
                g.jumps.push_back({s.kind, s.param, 0.0,
                                   s.intensity * Eigen::VectorXd::Unit(d, (Eigen::Index)i),
                                   Eigen::VectorXd::Unit(d, (Eigen::Index)s.coord)});
        return g;
    }

    Polynomial apply_generator(const Polynomial& p) const { return data().apply(p); }

  private:
    void require_psd(const Eigen::MatrixXd& M, const char* name) const {
        if (M.rows() == 0) return;
        const double scale = std::max(1.0, M.cwiseAbs().maxCoeff());
        detail::require((M - M.transpose()).cwiseAbs().maxCoeff() <= 1e-12 * scale,
                        detail::cat("AffineModel: ", name, " must be symmetric"));
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(M, Eigen::EigenvaluesOnly);
        detail::require(es.eigenvalues().minCoeff() >= -1e-12 * scale,
                        detail::cat("AffineModel: ", name, " must be positive semidefinite"));
    }
    void require_jump(const JumpSpec& s) const {
        detail::require(s.coord < dim(), "AffineModel: jump coordinate out of range");
        detail::require(s.intensity >= 0.0, "AffineModel: jump intensity must be >= 0");
        if (s.kind == JumpSpec::Kind::exponential)
            detail::require(s.param > 0.0, "AffineModel: exponential jump mean must be > 0");
        else if (s.coord < m_)
            detail::require(s.param >= 0.0,
                            "AffineModel: jumps on R_+ coordinates cannot point downward");
    }

    std::size_t m_, n_;
    Eigen::MatrixXd a_;
    std::vector<Eigen::MatrixXd> alpha_;
    Eigen::VectorXd b_;
    Eigen::MatrixXd beta_;
    std::vector<JumpSpec> jump_m_;
    std::vector<std::vector<JumpSpec>> jump_mu_;
};

//! Matrix of the generator on polynomials of total order <= degree, in the
//! graded monomial basis.  Column j holds the coefficients of A x^{alpha_j};
//! grading makes the matrix upper triangular with exact zeros below.
struct QMatrix {
    int degree = 0;
    std::vector<MultiIndex> basis;
    Eigen::MatrixXd entries;

    std::size_t position(const MultiIndex& a) const {
        const auto it = std::lower_bound(basis.begin(), basis.end(), a);
        detail::require(it != basis.end() && *it == a, "QMatrix: index not in basis");
        return (std::size_t)(it - basis.begin());
    }
};

namespace detail {

inline QMatrix build_q_matrix(const GeneratorData& g, int degree) {
    detail::require(degree >= 0, "build_q_matrix: degree must be >= 0");
    QMatrix q;
    q.degree = degree;
    q.basis = indices_up_to(g.dim, degree);
    const auto N = (Eigen::Index)q.basis.size();
    q.entries = Eigen::MatrixXd::Zero(N, N);
    for (Eigen::Index j = 0; j < N; ++j) {
        const Polynomial img = g.apply(Polynomial::monomial(q.basis[(std::size_t)j]));
        for (const auto& [a, c] : img.terms()) {
            detail::require(a.order() <= degree, "build_q_matrix: generator output left the basis");
            q.entries((Eigen::Index)q.position(a), j) = c;
        }
    }
    return q;
}

}  // namespace detail

inline QMatrix build_q_matrix(const AffineModel& model, int degree) {
    return detail::build_q_matrix(model.data(), degree);
}

namespace detail {

inline void require_state(const AffineModel& model, const Eigen::VectorXd& x0) {
    detail::require((std::size_t)x0.size() == model.dim(), "conditional moments: x0 has wrong length");
    for (std::size_t i = 0; i < model.m(); ++i)
        detail::require(x0[(Eigen::Index)i] >= 0.0, "conditional moments: x0 outside the state space");
}

}  // namespace detail

//! Conditional raw moments E[X_t^alpha | X_0 = x0] for all |alpha| <= degree.
//! Exact up to the matrix exponential: the moment vector solves a linear ODE
//! with the QMatrix as generator.
inline std::map<MultiIndex, double> conditional_moments(const AffineModel& model,
                                                        const Eigen::VectorXd& x0, double t,
                                                        int degree) {
    detail::require(t >= 0.0, "conditional_moments: t must be >= 0");
    detail::require_state(model, x0);
    const QMatrix q = build_q_matrix(model, degree);
    const Eigen::MatrixXd H = (q.entries * t).exp();
    const auto N = (Eigen::Index)q.basis.size();

    std::vector<std::vector<double>> pw(model.dim());
    for (std::size_t i = 0; i < model.dim(); ++i) {
        pw[i].assign((std::size_t)degree + 1, 1.0);
        for (int e = 1; e <= degree; ++e) pw[i][(std::size_t)e] = pw[i][(std::size_t)e - 1] * x0[(Eigen::Index)i];
    }
    std::vector<double> xv((std::size_t)N, 1.0);
    for (Eigen::Index i = 0; i < N; ++i) {
        const MultiIndex& a = q.basis[(std::size_t)i];
        double v = 1.0;
        for (std::size_t k = 0; k < model.dim(); ++k) v *= pw[k][(std::size_t)a[k]];
        xv[(std::size_t)i] = v;
    }

    std::map<MultiIndex, double> out;
    for (Eigen::Index j = 0; j < N; ++j) {
        detail::KahanSum s;
        for (Eigen::Index i = 0; i < N; ++i) s.add(H(i, j) * xv[(std::size_t)i]);
        out.emplace(q.basis[(std::size_t)j], s.value());
    }
    return out;
}

//! Conditional moments of the affine image T X_t + c given X_0 = x0, for all
//! orders <= degree.  Computed by first centering the process at x0 (so the
//! moment read-off needs only the constant row of the matrix exponential,
//! avoiding the catastrophic cancellation of the raw-moment route when the
//! transition scale is small against |x0|) and then shifting by T x0 + c.
inline std::map<MultiIndex, double> conditional_affine_moments(const AffineModel& model,
                                                               const Eigen::VectorXd& x0, double t,
                                                               const Eigen::MatrixXd& T,
                                                               const Eigen::VectorXd& c,
                                                               int degree) {
    detail::require(t >= 0.0, "conditional_affine_moments: t must be >= 0");
    detail::require_state(model, x0);
    const detail::GeneratorData g = model.data().affine_image(T, -(T * x0));
    const QMatrix q = detail::build_q_matrix(g, degree);
    const Eigen::MatrixXd H = (q.entries * t).exp();

    const Eigen::VectorXd delta = T * x0 + c;
    const auto d = (Eigen::Index)model.dim();
    const Eigen::MatrixXd eye = Eigen::MatrixXd::Identity(d, d);

    std::map<MultiIndex, double> out;
    for (const auto& beta : q.basis) {
        const Polynomial shifted = Polynomial::monomial(beta).compose_affine(eye, delta);
        detail::KahanSum s;
        for (const auto& [gamma, w] : shifted.terms())
            s.add(w * H(0, (Eigen::Index)q.position(gamma)));
        out.emplace(beta, s.value());
    }
    return out;
}

inline constexpr int kSmoothnessUnbounded = std::numeric_limits<int>::max();

//! Outcome of the transition density checks.  smoothness_p is the verified
//! number of continuous derivatives (kSmoothnessUnbounded when the bound is
//! vacuous), or empty when not even continuity is certified.
struct RegularityReport {
    bool density_exists = false;
    std::optional<int> smoothness_p;
    bool kcal_full_rank = false;
    std::optional<std::pair<double, double>> exp_moment_radii;
    std::optional<double> blow_up_time;
};

namespace detail {

//! Largest integer strictly below x, stepping down one when x sits on an
//! integer boundary (within relative slack 1e-12).  Empty when that integer
//! would be negative.
inline std::optional<int> largest_integer_below(double x) {
    if (!std::isfinite(x)) return x > 0.0 ? std::optional<int>(kSmoothnessUnbounded) : std::nullopt;
    const double slack = 1e-12 * std::max(1.0, std::abs(x));
    const double xr = std::round(x);
    const double p = (std::abs(x - xr) <= slack) ? xr - 1.0 : std::floor(x);
    if (p < 0.0) return std::nullopt;
    if (p >= (double)kSmoothnessUnbounded) return kSmoothnessUnbounded;
    return (int)p;
}

}  // namespace detail

//! Tests whether the time-t transition law has a density, and how smooth it
//! is.  The rank condition probes the span of the diffusion blocks along the
//! drift flow; the smoothness exponent is the boundary non-attainment margin
//! min_i b_i / alpha_{i,ii} - 1 on the R_+ block.
inline RegularityReport check_density_existence(const AffineModel& model) {
    const auto d = (Eigen::Index)model.dim();
    const auto m = (Eigen::Index)model.m();
    const auto n = (Eigen::Index)model.n();
    RegularityReport rep;

    Eigen::MatrixXd K = Eigen::MatrixXd::Zero(d, d * (n + 1));
    for (const auto& al : model.alpha()) K.block(0, 0, d, d) += al;
    // controllability-style blocks: beta_JJ^j a for j = 0 .. n-1
    const Eigen::MatrixXd Bjj = model.beta().block(m, m, n, n);
    Eigen::MatrixXd P = Eigen::MatrixXd::Identity(n, n);
    for (Eigen::Index j = 0; j < n; ++j) {
        K.block(m, d * (j + 1) + m, n, n) = P * model.a();
        P = Bjj * P;
    }
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(K);
    const auto& sv = svd.singularValues();
    const double thresh = (double)std::max(K.rows(), K.cols()) *
                          (sv.size() > 0 ? sv[0] : 0.0) * std::numeric_limits<double>::epsilon();
    Eigen::Index rank = 0;
    for (Eigen::Index i = 0; i < sv.size(); ++i)
        if (sv[i] > thresh) ++rank;
    rep.kcal_full_rank = (rank == d);

    if (m == 0) {
        rep.smoothness_p = kSmoothnessUnbounded;
    } else {
        double bound = std::numeric_limits<double>::infinity();
        for (Eigen::Index i = 0; i < m; ++i) {
            const double aii = model.alpha()[(std::size_t)i](i, i);
            if (aii > 0.0) bound = std::min(bound, model.b()[i] / aii);
            // a vanishing alpha_{i,ii} leaves row i of the span matrix zero,
            // so the rank test already rejects; skip it in the minimum
        }
        rep.smoothness_p = detail::largest_integer_below(bound - 1.0);
    }
    rep.density_exists = rep.kcal_full_rank && rep.smoothness_p.has_value();
    return rep;
}

//! Density check for the time integral of a scalar positive model (m = 1,
//! n = 0, no constant diffusion): the integrated law has a density with p
//! continuous derivatives when p < b / (2 alpha) - 1.
inline RegularityReport check_integrated_existence(const AffineModel& model) {
    detail::require(model.m() == 1 && model.n() == 0,
                    "check_integrated_existence: expects a scalar R_+ model");
    const double a00 = model.alpha()[0](0, 0);
    detail::require(a00 > 0.0, "check_integrated_existence: alpha_{1,11} must be > 0");
    RegularityReport rep;
    rep.kcal_full_rank = true;
    rep.smoothness_p = detail::largest_integer_below(model.b()[0] / (2.0 * a00) - 1.0);
    rep.density_exists = rep.smoothness_p.has_value();
    return rep;
}

//! Whether a Gamma-type reference weight with shape D is admissible against a
//! transition density with p continuous derivatives: ceil(D / 2) <= p.
inline bool check_assumption2(double D, std::optional<int> p) {
    detail::require(D > -1.0, "check_assumption2: D must exceed -1");
    if (!p.has_value()) return false;
    if (*p == kSmoothnessUnbounded) return true;
    const int need = (int)std::ceil(D / 2.0 - 1e-12);
    return need <= *p;
}

//! Result of probing two-sided exponential moments.  `finite` certifies
//! E exp(u . X_T) < inf on the whole box; otherwise the earliest failure time
//! and the corner responsible are reported.  A failure is a numerical
//! non-certificate, not a proof of explosion.
struct ExpMomentReport {
    enum class Status { finite, blow_up, jump_singularity };
    Status status = Status::finite;
    double t_star = 0.0;
    Eigen::VectorXd worst_u;
};

//! Integrates the real Riccati system at every corner of the box
//! [-eps1, eps1]^m x [-eps2, eps2]^n up to the horizon.  Blow-up shows as
//! step-size collapse; hitting the pole of an exponential jump transform is
//! reported separately.
inline ExpMomentReport exp_moment_check(const AffineModel& model, double eps1, double eps2,
                                        double horizon) {
    detail::require(eps1 >= 0.0 && eps2 >= 0.0, "exp_moment_check: radii must be >= 0");
    detail::require(horizon > 0.0, "exp_moment_check: horizon must be > 0");
    const std::size_t d = model.dim();
    detail::require(d <= 24, "exp_moment_check: state dimension too large");
    const detail::GeneratorData g = model.data();

    ExpMomentReport rep;
    rep.status = ExpMomentReport::Status::finite;
    rep.t_star = horizon;
    rep.worst_u = Eigen::VectorXd::Zero((Eigen::Index)d);

    for (std::size_t mask = 0; mask < (std::size_t(1) << d); ++mask) {
        Eigen::VectorXd u((Eigen::Index)d);
        for (std::size_t i = 0; i < d; ++i) {
            const double eps = i < model.m() ? eps1 : eps2;
            u[(Eigen::Index)i] = ((mask >> i) & 1u) ? eps : -eps;
        }
        double t_seen = 0.0;
        const detail::OdeRhs rhs = [&g, d, &t_seen](const detail::OdeState& y,
                                                    detail::OdeState& dy, double t) {
            t_seen = std::max(t_seen, t);
            dy.assign(d + 1, 0.0);
            detail::riccati_derivative<double>(g, y.data() + 1, dy[0], dy.data() + 1);
        };
        detail::OdeState y0(d + 1, 0.0);
        for (std::size_t i = 0; i < d; ++i) y0[i + 1] = u[(Eigen::Index)i];

        ExpMomentReport::Status status = ExpMomentReport::Status::finite;
        double t_fail = horizon;
        try {
            const auto res = detail::integrate_checked(rhs, std::move(y0), 0.0, horizon);
            if (!res.completed) {
                status = ExpMomentReport::Status::blow_up;
                t_fail = res.t_reached;
            }
        } catch (const detail::ode_domain_error&) {
            status = ExpMomentReport::Status::jump_singularity;
            t_fail = t_seen;
        }
        if (status != ExpMomentReport::Status::finite &&
            (rep.status == ExpMomentReport::Status::finite || t_fail < rep.t_star)) {
            rep.status = status;
            rep.t_star = t_fail;
            rep.worst_u = u;
        }
    }
    return rep;
}

}  // namespace ajd
