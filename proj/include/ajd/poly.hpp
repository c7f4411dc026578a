// SPDX-License-Identifier: MIT
#pragma once

#include <algorithm>
#include <compare>
#include <cstdint>
#include <initializer_list>
#include <limits>
#include <map>
#include <numeric>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "ajd/detail/common.hpp"

namespace ajd {

//! Exponent vector of a monomial x_1^{k_1} ... x_d^{k_d}.
//!
//! Ordering is graded: first by total order |k|, ties broken by descending
//! first exponent (so for d = 2 the sequence runs 1, x1, x2, x1^2, x1 x2,
//! x2^2, ...).  This is the basis order used throughout for moment vectors
//! and generator matrices.
class MultiIndex {
  public:
    explicit MultiIndex(std::size_t dim) : k_(dim, 0) {}
    MultiIndex(std::initializer_list<int> k) : k_(k) {
        for (int e : k_) detail::require(e >= 0, "MultiIndex: negative exponent");
    }

    static MultiIndex unit(std::size_t dim, std::size_t i, int power = 1) {
        MultiIndex a(dim);
        a.k_.at(i) = power;
        return a;
    }

    std::size_t dim() const { return k_.size(); }
    int order() const { return std::accumulate(k_.begin(), k_.end(), 0); }

    int operator[](std::size_t i) const { return k_[i]; }
    int& operator[](std::size_t i) { return k_[i]; }

    bool operator==(const MultiIndex& o) const { return k_ == o.k_; }

    std::strong_ordering operator<=>(const MultiIndex& o) const {
        if (auto c = order() <=> o.order(); c != 0) return c;
        for (std::size_t i = 0; i < k_.size() && i < o.k_.size(); ++i)
            if (auto c = o.k_[i] <=> k_[i]; c != 0) return c;
        return k_.size() <=> o.k_.size();
    }

    MultiIndex operator+(const MultiIndex& o) const {
        detail::require(dim() == o.dim(), "MultiIndex: dimension mismatch");
        MultiIndex r(dim());
        for (std::size_t i = 0; i < dim(); ++i) r.k_[i] = k_[i] + o.k_[i];
        return r;
    }

    //! Componentwise k <= o.k (divisibility of the monomials).
    bool divides(const MultiIndex& o) const {
        if (dim() != o.dim()) return false;
        for (std::size_t i = 0; i < dim(); ++i)
            if (k_[i] > o.k_[i]) return false;
        return true;
    }

    std::string str() const {
        std::string s = "(";
        for (std::size_t i = 0; i < dim(); ++i) s += (i ? "," : "") + std::to_string(k_[i]);
        return s + ")";
    }

  private:
    std::vector<int> k_;
};

//! All multi-indices of dimension `dim` with 0 <= |k| <= max_order, in
//! graded order.  Size is binom(max_order + dim, dim).
inline std::vector<MultiIndex> indices_up_to(std::size_t dim, int max_order) {
    detail::require(dim >= 1 && max_order >= 0, "indices_up_to: bad arguments");
    std::vector<MultiIndex> out;
    std::vector<MultiIndex> level{MultiIndex(dim)};
    out.push_back(level[0]);
    for (int n = 1; n <= max_order; ++n) {
        std::vector<MultiIndex> next;
        // extend each index of order n-1 by one unit in every position that
        // keeps the representative unique (positions <= first nonzero from
        // the right would duplicate; generate canonically instead)
        std::map<MultiIndex, bool> seen;
        for (const auto& a : level)
            for (std::size_t i = 0; i < dim; ++i) {
                MultiIndex b = a;
                b[i] += 1;
                if (!seen.count(b)) {
                    seen.emplace(b, true);
                    next.push_back(b);
                }
            }
        std::sort(next.begin(), next.end());
        out.insert(out.end(), next.begin(), next.end());
        level = std::move(next);
    }
    return out;
}

inline constexpr int kDegreeOfZero = std::numeric_limits<int>::min();

//! Sparse real polynomial in d variables.
//!
//! Terms live in a map keyed by MultiIndex, so iteration is always in graded
//! order and all operations are deterministic.  Exact zeros are erased.
class Polynomial {
  public:
    using TermMap = std::map<MultiIndex, double>;

    explicit Polynomial(std::size_t dim) : dim_(dim) {
        detail::require(dim >= 1, "Polynomial: dim must be >= 1");
    }

    static Polynomial constant(std::size_t dim, double c) {
        Polynomial p(dim);
        p.set_coeff(MultiIndex(dim), c);
        return p;
    }
    static Polynomial variable(std::size_t dim, std::size_t i) {
        Polynomial p(dim);
        p.set_coeff(MultiIndex::unit(dim, i), 1.0);
        return p;
    }
    static Polynomial monomial(const MultiIndex& a, double c = 1.0) {
        Polynomial p(a.dim());
        p.set_coeff(a, c);
        return p;
    }

    std::size_t dim() const { return dim_; }
    const TermMap& terms() const { return terms_; }
    bool is_zero() const { return terms_.empty(); }

    int degree() const {
        return terms_.empty() ? kDegreeOfZero : terms_.rbegin()->first.order();
    }

    double coeff(const MultiIndex& a) const {
        auto it = terms_.find(a);
        return it == terms_.end() ? 0.0 : it->second;
    }

    void set_coeff(const MultiIndex& a, double c) {
        detail::require(a.dim() == dim_, "Polynomial: index dimension mismatch");
        if (c == 0.0)
            terms_.erase(a);
        else
            terms_[a] = c;
    }

    void add_term(const MultiIndex& a, double c) {
        detail::require(a.dim() == dim_, "Polynomial: index dimension mismatch");
        auto [it, fresh] = terms_.try_emplace(a, c);
        if (!fresh && (it->second += c) == 0.0) terms_.erase(it);
    }

    Polynomial& operator+=(const Polynomial& o) {
        detail::require(dim_ == o.dim_, "Polynomial: dimension mismatch");
        for (const auto& [a, c] : o.terms_) add_term(a, c);
        return *this;
    }
    Polynomial& operator-=(const Polynomial& o) {
        detail::require(dim_ == o.dim_, "Polynomial: dimension mismatch");
        for (const auto& [a, c] : o.terms_) add_term(a, -c);
        return *this;
    }
    Polynomial& operator*=(double s) {
        if (s == 0.0) {
            terms_.clear();
        } else {
            for (auto& [a, c] : terms_) c *= s;
        }
        return *this;
    }

    friend Polynomial operator+(Polynomial a, const Polynomial& b) { return a += b; }
    friend Polynomial operator-(Polynomial a, const Polynomial& b) { return a -= b; }
    friend Polynomial operator*(Polynomial a, double s) { return a *= s; }
    friend Polynomial operator*(double s, Polynomial a) { return a *= s; }

    friend Polynomial operator*(const Polynomial& a, const Polynomial& b) {
        detail::require(a.dim_ == b.dim_, "Polynomial: dimension mismatch");
        Polynomial r(a.dim_);
        for (const auto& [ia, ca] : a.terms_)
            for (const auto& [ib, cb] : b.terms_) r.add_term(ia + ib, ca * cb);
        return r;
    }

    //! Partial derivative with respect to variable i.
    Polynomial derivative(std::size_t i) const {
        detail::require(i < dim_, "Polynomial: derivative index out of range");
        Polynomial r(dim_);
        for (const auto& [a, c] : terms_)
            if (a[i] > 0) {
                MultiIndex b = a;
                b[i] -= 1;
                r.add_term(b, c * a[i]);
            }
        return r;
    }

    double operator()(std::span<const double> x) const {
        detail::require(x.size() == dim_, "Polynomial: evaluation point dimension mismatch");
        // cache powers per variable up to the needed exponent
        std::vector<std::vector<double>> pw(dim_);
        for (std::size_t i = 0; i < dim_; ++i) pw[i].push_back(1.0);
        detail::KahanSum s;
        for (const auto& [a, c] : terms_) {
            double t = c;
            for (std::size_t i = 0; i < dim_; ++i) {
                while ((int)pw[i].size() <= a[i]) pw[i].push_back(pw[i].back() * x[i]);
                t *= pw[i][a[i]];
            }
            s.add(t);
        }
        return s.value();
    }
    double operator()(std::initializer_list<double> x) const {
        return (*this)(std::span<const double>(x.begin(), x.size()));
    }
    double operator()(const Eigen::VectorXd& x) const {
        return (*this)(std::span<const double>(x.data(), (std::size_t)x.size()));
    }

    //! Composition with an affine map: returns q(y) = p(A y + b), where A is
    //! dim x m.  The result is a polynomial in m variables of equal degree.
    Polynomial compose_affine(const Eigen::MatrixXd& A, const Eigen::VectorXd& b) const {
        detail::require((std::size_t)A.rows() == dim_ && A.cols() >= 1 &&
                            b.size() == A.rows(),
                        "Polynomial: affine map shape mismatch");
        const std::size_t m = (std::size_t)A.cols();
        // linear forms l_i(y) = sum_j A(i,j) y_j + b_i and their cached powers
        std::vector<Polynomial> lin;
        lin.reserve(dim_);
        for (std::size_t i = 0; i < dim_; ++i) {
            Polynomial li = Polynomial::constant(m, b[(Eigen::Index)i]);
            for (std::size_t j = 0; j < m; ++j) {
                const double aij = A((Eigen::Index)i, (Eigen::Index)j);
                if (aij != 0.0) li.add_term(MultiIndex::unit(m, j), aij);
            }
            lin.push_back(std::move(li));
        }
        std::vector<std::vector<Polynomial>> pw(dim_);
        for (std::size_t i = 0; i < dim_; ++i) pw[i].push_back(Polynomial::constant(m, 1.0));
        Polynomial r(m);
        for (const auto& [a, c] : terms_) {
            Polynomial t = Polynomial::constant(m, c);
            for (std::size_t i = 0; i < dim_; ++i) {
                while ((int)pw[i].size() <= a[i]) pw[i].push_back(pw[i].back() * lin[i]);
                if (a[i] > 0) t = t * pw[i][a[i]];
            }
            r += t;
        }
        return r;
    }

    std::string str() const {
        if (terms_.empty()) return "0";
        std::string s;
        for (const auto& [a, c] : terms_) {
            s += s.empty() ? (c < 0 ? "-" : "") : (c < 0 ? " - " : " + ");
            std::string mono;
            for (std::size_t i = 0; i < dim_; ++i) {
                if (a[i] == 0) continue;
                mono += (mono.empty() ? "" : "*") + detail::cat("x", i + 1);
                if (a[i] > 1) mono += detail::cat("^", a[i]);
            }
            const double ac = std::abs(c);
            if (mono.empty())
                s += detail::cat(ac);
            else if (ac == 1.0)
                s += mono;
            else
                s += detail::cat(ac, "*") + mono;
        }
        return s;
    }

  private:
    std::size_t dim_;
    TermMap terms_;
};

}  // namespace ajd
