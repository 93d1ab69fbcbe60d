/**
 * @file polynomial.hpp
 * @brief Dense univariate polynomials with coefficients in ascending degree.
 */
#pragma once

#include <algorithm>
#include <vector>

#include "drg/kernels.hpp"
#include "drg/matrix.hpp"

namespace drg {

template <class T>
class Polynomial {
public:
    Polynomial() : c_{T(0)} {}
    explicit Polynomial(std::vector<T> coeffs) : c_(std::move(coeffs)) {
        if (c_.empty()) c_.push_back(T(0));
    }

    static Polynomial constant(const T& v) { return Polynomial({v}); }
    static Polynomial x() { return Polynomial({T(0), T(1)}); }

    /// prod_k (lambda - roots[k])
    static Polynomial from_roots(const std::vector<T>& roots) {
        Polynomial p = constant(T(1));
        for (const auto& r : roots) p = p.times_linear(r);
        return p;
    }

    /// Nominal degree (length - 1); trailing zeros are not trimmed.
    int degree() const noexcept { return static_cast<int>(c_.size()) - 1; }
    const std::vector<T>& coeffs() const noexcept { return c_; }
    T coeff(std::size_t k) const { return k < c_.size() ? c_[k] : T(0); }

    T operator()(const T& v) const {
        T acc(0);
        for (auto it = c_.rbegin(); it != c_.rend(); ++it) acc = acc * v + *it;
        return acc;
    }

    /// this * (lambda - root)
    Polynomial times_linear(const T& root) const {
        std::vector<T> out(c_.size() + 1, T(0));
        for (std::size_t k = 0; k < c_.size(); ++k) {
            out[k + 1] += c_[k];
            out[k] -= root * c_[k];
        }
        return Polynomial(std::move(out));
    }

    Polynomial& operator+=(const Polynomial& o) {
        if (o.c_.size() > c_.size()) c_.resize(o.c_.size(), T(0));
        for (std::size_t k = 0; k < o.c_.size(); ++k) c_[k] += o.c_[k];
        return *this;
    }
    Polynomial& operator-=(const Polynomial& o) {
        if (o.c_.size() > c_.size()) c_.resize(o.c_.size(), T(0));
        for (std::size_t k = 0; k < o.c_.size(); ++k) c_[k] -= o.c_[k];
        return *this;
    }
    Polynomial& operator*=(const T& s) {
        for (auto& x : c_) x *= s;
        return *this;
    }
    friend Polynomial operator+(Polynomial a, const Polynomial& b) { return a += b; }
    friend Polynomial operator-(Polynomial a, const Polynomial& b) { return a -= b; }
    friend Polynomial operator*(Polynomial a, const T& s) { return a *= s; }
    friend Polynomial operator*(const T& s, Polynomial a) { return a *= s; }

    friend Polynomial operator*(const Polynomial& a, const Polynomial& b) {
        std::vector<T> out(a.c_.size() + b.c_.size() - 1, T(0));
        for (std::size_t i = 0; i < a.c_.size(); ++i)
            for (std::size_t j = 0; j < b.c_.size(); ++j) out[i + j] += a.c_[i] * b.c_[j];
        return Polynomial(std::move(out));
    }

private:
    std::vector<T> c_;
};

/// Largest coefficient difference relative to max(1, largest coefficient of b).
template <class T>
double poly_rel_diff(const Polynomial<T>& a, const Polynomial<T>& b) {
    std::size_t len = std::max(a.coeffs().size(), b.coeffs().size());
    double scale = 1.0;
    double diff = 0.0;
    for (std::size_t k = 0; k < len; ++k) {
        scale = std::max(scale, std::abs(to_double(b.coeff(k))));
        T d = a.coeff(k) - b.coeff(k);
        if constexpr (is_exact_v<T>) {
            if (sgn(d) == 0) continue;
        }
        diff = std::max(diff, std::abs(to_double(d)));
    }
    return diff / scale;
}

/// p(M) by Horner's rule.
template <class T>
Matrix<T> matrix_poly_eval(const Polynomial<T>& p, const Matrix<T>& m) {
    if (!m.square()) throw ContractViolation("matrix_poly_eval: matrix is not square");
    const auto& c = p.coeffs();
    Matrix<T> acc(m.rows(), m.cols());
    for (auto it = c.rbegin(); it != c.rend(); ++it) {
        acc = acc * m;
        for (std::size_t i = 0; i < m.rows(); ++i) acc(i, i) += *it;
    }
    return acc;
}

/// p_0, ..., p_{d+1} from p_0 = 1 and lambda p_i = p_{i+1} + a_i p_i + x_i p_{i-1}; x[0] is ignored.
template <class T>
std::vector<Polynomial<T>> three_term_sequence(const std::vector<T>& a, const std::vector<T>& x) {
    std::vector<Polynomial<T>> p{Polynomial<T>::constant(T(1))};
    for (std::size_t i = 0; i < a.size(); ++i) {
        Polynomial<T> next = p[i].times_linear(a[i]);
        if (i > 0) next -= p[i - 1] * x[i];
        p.push_back(std::move(next));
    }
    return p;
}

/// prod_{h < i} (lambda - roots[h]) for i = 0..roots.size().
template <class T>
std::vector<Polynomial<T>> partial_products(const std::vector<T>& roots) {
    std::vector<Polynomial<T>> out{Polynomial<T>::constant(T(1))};
    for (const auto& r : roots) out.push_back(out.back().times_linear(r));
    return out;
}

/// p(M) v by Horner's rule on the vector.
template <class T>
Vec<T> poly_apply(const Polynomial<T>& p, const Matrix<T>& m, const Vec<T>& v) {
    const auto& c = p.coeffs();
    Vec<T> acc(v.size(), T(0));
    for (auto it = c.rbegin(); it != c.rend(); ++it) {
        acc = m.apply(acc);
        if (*it != 0) axpy(*it, v, acc);
    }
    return acc;
}

}  // namespace drg
