// SPDX-License-Identifier: MIT
#pragma once

#include <algorithm>
#include <cmath>
#include <memory>
#include <vector>

#include "ajd/detail/common.hpp"
#include "ajd/poly.hpp"
#include "ajd/weights.hpp"

namespace ajd {

//! Orthonormal polynomial basis {H_alpha : |alpha| <= max_order} of L²_w.
//!
//! Elements are stored in graded index order; H_0 = 1 and deg H_alpha =
//! |alpha|.  `norm[k]` holds the L²_w norm of the monic residual
//! xi^alpha - proj(xi^alpha), i.e. the normalization constant divided out of
//! element k.  All elements carry a positive leading coefficient.
struct OrthonormalBasis {
    std::shared_ptr<const Weight> weight;
    std::vector<MultiIndex> index;
    std::vector<Polynomial> H;
    std::vector<double> norm;
    int max_order = 0;

    std::size_t size() const { return H.size(); }
    std::size_t dim() const { return weight->dim(); }

    std::size_t position(const MultiIndex& a) const {
        auto it = std::lower_bound(index.begin(), index.end(), a);
        detail::require(it != index.end() && *it == a,
                        "OrthonormalBasis: index ", a.str(), " not in basis");
        return (std::size_t)(it - index.begin());
    }
    const Polynomial& at(const MultiIndex& a) const { return H[position(a)]; }
};

//! Gram-Schmidt orthonormalization of the monomials in graded order, with
//! inner products taken through the weight's closed-form moments.  Uses the
//! modified variant with one re-orthogonalization pass in extended precision;
//! classical GS loses orthogonality past order ~8 for skewed weights.
inline OrthonormalBasis gram_schmidt(std::shared_ptr<const Weight> w, int J) {
    detail::require(w != nullptr && J >= 0, "gram_schmidt: need a weight and J >= 0");
    const std::size_t d = w->dim();
    std::vector<MultiIndex> idx = indices_up_to(d, J);
    const std::size_t N = idx.size();

    std::vector<std::vector<long double>> M(N, std::vector<long double>(N));
    for (std::size_t i = 0; i < N; ++i)
        for (std::size_t j = i; j < N; ++j) M[i][j] = M[j][i] = w->moment(idx[i] + idx[j]);

    auto apply_M = [&](const std::vector<long double>& v) {
        std::vector<long double> r(N, 0.0L);
        for (std::size_t i = 0; i < N; ++i) {
            if (v[i] == 0.0L) continue;
            const long double vi = v[i];
            for (std::size_t j = 0; j < N; ++j) r[j] += M[i][j] * vi;
        }
        return r;
    };

    std::vector<std::vector<long double>> B;   // coefficient vectors of H_k
    std::vector<std::vector<long double>> MB;  // cached M * B[k]
    std::vector<double> norms;
    B.reserve(N);
    MB.reserve(N);

    for (std::size_t k = 0; k < N; ++k) {
        std::vector<long double> v(N, 0.0L);
        v[k] = 1.0L;
        for (int pass = 0; pass < 2; ++pass) {
            for (std::size_t j = 0; j < B.size(); ++j) {
                long double r = 0.0L;
                for (std::size_t i = 0; i <= k; ++i) r += v[i] * MB[j][i];
                for (std::size_t i = 0; i <= j; ++i) v[i] -= r * B[j][i];
            }
        }
        std::vector<long double> Mv = apply_M(v);
        long double n2 = 0.0L;
        for (std::size_t i = 0; i <= k; ++i) n2 += v[i] * Mv[i];
        if (!(n2 > 0.0L) || n2 <= 1e-30L * M[k][k])
            throw numerical_error(detail::cat(
                "gram_schmidt: numerically degenerate moment structure at index ",
                idx[k].str(), " for weight ", w->name()));
        const long double nrm = std::sqrt(n2);
        for (auto& c : v) c /= nrm;
        for (auto& c : Mv) c /= nrm;
        MB.push_back(std::move(Mv));
        B.push_back(std::move(v));
        norms.push_back((double)nrm);
    }

    OrthonormalBasis out;
    out.weight = std::shared_ptr<const Weight>(std::move(w));
    out.index = std::move(idx);
    out.max_order = J;
    out.norm = std::move(norms);
    out.H.reserve(N);
    for (std::size_t k = 0; k < N; ++k) {
        Polynomial p(d);
        for (std::size_t i = 0; i <= k; ++i)
            if (B[k][i] != 0.0L) p.set_coeff(out.index[i], (double)B[k][i]);
        out.H.push_back(std::move(p));
    }
    return out;
}

//! Closed-form basis for the Gamma weight: normalized generalized Laguerre
//! polynomials, sign-flipped to the positive-leading-coefficient convention.
//! Normalization constants HO_n = sqrt(prod_{i=1..n}(i+D) / n!).
inline OrthonormalBasis laguerre_basis(double D, int J) {
    detail::require(J >= 0, "laguerre_basis: J >= 0 required");
    OrthonormalBasis out;
    out.weight = std::make_shared<GammaWeight>(D);
    out.index = indices_up_to(1, J);
    out.max_order = J;

    const Polynomial x = Polynomial::variable(1, 0);
    std::vector<Polynomial> L;
    L.push_back(Polynomial::constant(1, 1.0));
    if (J >= 1) L.push_back(Polynomial::constant(1, D + 1.0) - x);
    for (int k = 1; k < J; ++k) {
        // (k+1) L_{k+1} = (2k+1+D - x) L_k - (k+D) L_{k-1}
        Polynomial next = (Polynomial::constant(1, 2.0 * k + 1.0 + D) - x) * L[k] -
                          (k + D) * L[k - 1];
        next *= 1.0 / (k + 1.0);
        L.push_back(std::move(next));
    }

    long double ho2 = 1.0L;  // prod(D+i)/n! accumulated
    for (int n = 0; n <= J; ++n) {
        if (n > 0) ho2 *= ((long double)D + n) / n;
        const double ho = (double)std::sqrt(ho2);
        out.norm.push_back(ho);
        // leading coefficient of L_n is (-1)^n / n!; flip odd orders
        const double sgn = (n % 2 == 0) ? 1.0 : -1.0;
        out.H.push_back(L[n] * (sgn / ho));
    }
    return out;
}

//! Closed-form order-4 basis for the bilateral Gamma weight (printed family).
inline OrthonormalBasis bilateral_closed_basis(double C) {
    OrthonormalBasis out;
    out.weight = std::make_shared<BilateralGammaWeight>(C);
    out.index = indices_up_to(1, 4);
    out.max_order = 4;

    const Polynomial x = Polynomial::variable(1, 0);
    const Polynomial one = Polynomial::constant(1, 1.0);
    std::vector<Polynomial> Ht;
    Ht.push_back(one);
    Ht.push_back(x);
    Ht.push_back(x * x - one);
    Ht.push_back(x * x * x - (C + 3.0) * x);
    Ht.push_back(x * x * x * x - (2.0 * (5.0 * C * C + 21.0 * C + 18.0) / (3.0 * (C + 2.0))) *
                                     (x * x - one) -
                 (C + 3.0) * one);

    const double ho[5] = {
        1.0, 1.0, std::sqrt(C + 2.0), std::sqrt(7.0 * C * C / 3.0 + 9.0 * C + 6.0),
        std::sqrt(2.0 * (55.0 * std::pow(C, 4) + 363.0 * std::pow(C, 3) + 822.0 * C * C +
                         756.0 * C + 216.0) /
                  (9.0 * (C + 2.0)))};
    for (int n = 0; n <= 4; ++n) {
        out.norm.push_back(ho[n]);
        out.H.push_back(Ht[n] * (1.0 / ho[n]));
    }
    return out;
}

//! Basis for the bilateral Gamma weight at arbitrary order: printed family
//! through order 4, Gram-Schmidt beyond.
inline OrthonormalBasis bilateral_basis(double C, int J) {
    if (J <= 4) {
        OrthonormalBasis b = bilateral_closed_basis(C);
        b.index.erase(b.index.begin() + (J + 1), b.index.end());
        b.H.erase(b.H.begin() + (J + 1), b.H.end());
        b.norm.erase(b.norm.begin() + (J + 1), b.norm.end());
        b.max_order = J;
        return b;
    }
    return gram_schmidt(std::make_shared<BilateralGammaWeight>(C), J);
}

//! Basis for the Gaussian weight: probabilists' Hermite polynomials in the
//! standardized variable, normalized by sqrt(n!).
inline OrthonormalBasis hermite_basis(double mean, double variance, int J) {
    detail::require(J >= 0, "hermite_basis: J >= 0 required");
    OrthonormalBasis out;
    out.weight = std::make_shared<GaussianWeight>(mean, variance);
    out.index = indices_up_to(1, J);
    out.max_order = J;

    const double s = std::sqrt(variance);
    // z(x) = (x - mean)/s as a polynomial
    Polynomial z = Polynomial::variable(1, 0);
    z *= 1.0 / s;
    z += Polynomial::constant(1, -mean / s);

    std::vector<Polynomial> He;
    He.push_back(Polynomial::constant(1, 1.0));
    if (J >= 1) He.push_back(z);
    for (int k = 1; k < J; ++k) He.push_back(z * He[k] - (double)k * He[k - 1]);

    long double fact = 1.0L;
    for (int n = 0; n <= J; ++n) {
        if (n > 0) fact *= n;
        const double nf = (double)std::sqrt(fact);
        out.norm.push_back(nf);
        out.H.push_back(He[n] * (1.0 / nf));
    }
    return out;
}

namespace detail {
//! Re-express a univariate polynomial as a d-variate one in coordinate `pos`.
inline Polynomial embed_univariate(const Polynomial& p, std::size_t d, std::size_t pos) {
    require(p.dim() == 1 && pos < d, "embed_univariate: bad arguments");
    Polynomial out(d);
    for (const auto& [a, c] : p.terms()) out.set_coeff(MultiIndex::unit(d, pos, a[0]), c);
    return out;
}
}  // namespace detail

//! Tensor-product basis of one-dimensional factor bases, truncated to total
//! order J: H_alpha(xi) = prod_i H^i_{alpha_i}(xi_i).
inline OrthonormalBasis product_basis(const std::vector<OrthonormalBasis>& factors, int J) {
    detail::require(!factors.empty() && J >= 0, "product_basis: need factors and J >= 0");
    const std::size_t d = factors.size();
    std::vector<std::shared_ptr<const UnivariateWeight>> ws;
    for (const auto& f : factors) {
        detail::require(f.dim() == 1, "product_basis: factors must be one-dimensional");
        detail::require(f.max_order >= J, "product_basis: factor order ", f.max_order,
                        " below requested order ", J);
        auto uw = std::dynamic_pointer_cast<const UnivariateWeight>(f.weight);
        detail::require(uw != nullptr, "product_basis: factor weight must be univariate");
        ws.push_back(std::move(uw));
    }

    OrthonormalBasis out;
    out.weight = std::make_shared<ProductWeight>(ws);
    out.index = indices_up_to(d, J);
    out.max_order = J;
    for (const auto& a : out.index) {
        Polynomial h = Polynomial::constant(d, 1.0);
        double nrm = 1.0;
        for (std::size_t i = 0; i < d; ++i) {
            h = h * detail::embed_univariate(factors[i].H[(std::size_t)a[i]], d, i);
            nrm *= factors[i].norm[(std::size_t)a[i]];
        }
        out.H.push_back(std::move(h));
        out.norm.push_back(nrm);
    }
    return out;
}

}  // namespace ajd
