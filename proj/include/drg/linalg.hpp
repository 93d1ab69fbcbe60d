/**
 * @file linalg.hpp
 * @brief Subspaces, elimination, and symmetric eigendecomposition for both scalar modes.
 *
 * Floating subspaces carry orthonormal bases. Exact subspaces carry orthogonal
 * bases of primitive integer vectors, so no square roots are ever needed.
 */
#pragma once

#include <algorithm>
#include <numeric>
#include <utility>
#include <vector>

#include "drg/kernels.hpp"
#include "drg/matrix.hpp"

namespace drg {

/// Scales a rational vector to coprime integers with positive leading entry sign preserved.
void make_primitive(Vec<Rational>& v);

template <class T>
class Subspace {
public:
    explicit Subspace(std::size_t ambient = 0) : ambient_(ambient) {}

    static Subspace span(std::size_t ambient, const std::vector<Vec<T>>& vectors, double eps) {
        Subspace s(ambient);
        for (const auto& v : vectors) s.add(v, eps);
        return s;
    }

    std::size_t ambient() const noexcept { return ambient_; }
    std::size_t dim() const noexcept { return basis_.size(); }
    const std::vector<Vec<T>>& basis() const noexcept { return basis_; }
    const Vec<T>& norms2() const noexcept { return norms2_; }

    /// Component of v orthogonal to this subspace.
    Vec<T> residual(const Vec<T>& v) const {
        Vec<T> w(v);
        for (std::size_t k = 0; k < basis_.size(); ++k) {
            T c = dot(basis_[k], w) / norms2_[k];
            if (c != 0) axpy(T(-c), basis_[k], w);
        }
        return w;
    }

    Vec<T> project(const Vec<T>& v) const { return v - residual(v); }

    /// Extends the basis by the part of v outside the span; returns whether it grew.
    bool add(const Vec<T>& v, double eps) {
        Vec<T> w = residual(v);
        if constexpr (is_exact_v<T>) {
            if (is_zero_vector(w, eps)) return false;
            make_primitive(w);
        } else {
            w = residual(w);  // second pass restores orthogonality lost to rounding
            double nv = norm(v);
            double nw = norm(w);
            if (nw <= eps * std::max(1.0, nv)) return false;
            for (auto& x : w) x /= nw;
        }
        norms2_.push_back(dot(w, w));
        basis_.push_back(std::move(w));
        return true;
    }

    bool contains(const Vec<T>& v, double eps) const {
        return is_zero_vector(residual(v), eps, max_abs(v));
    }

    Matrix<T> basis_matrix() const { return Matrix<T>::from_columns(basis_, ambient_); }

    Matrix<T> projector() const {
        Matrix<T> p(ambient_, ambient_);
        for (std::size_t k = 0; k < basis_.size(); ++k) {
            const auto& b = basis_[k];
            for (std::size_t i = 0; i < ambient_; ++i) {
                if (b[i] == 0) continue;
                T bi = b[i] / norms2_[k];
                for (std::size_t j = 0; j < ambient_; ++j) p(i, j) += bi * b[j];
            }
        }
        return p;
    }

private:
    std::size_t ambient_;
    std::vector<Vec<T>> basis_;
    Vec<T> norms2_;
};

/// Reduced row echelon form; returns pivot columns. Float pivots below eps*max|M| count as zero.
template <class T>
std::vector<std::size_t> rref(Matrix<T>& m, double eps) {
    const double scale = std::max(1.0, m.max_abs());
    std::vector<std::size_t> pivots;
    std::size_t row = 0;
    for (std::size_t col = 0; col < m.cols() && row < m.rows(); ++col) {
        std::size_t best = row;
        double best_abs = std::abs(to_double(m(row, col)));
        for (std::size_t r = row; r < m.rows(); ++r) {
            double a = std::abs(to_double(m(r, col)));
            bool better = is_exact_v<T> ? (best_abs == 0.0 && m(r, col) != 0) : a > best_abs;
            if (better) {
                best = r;
                best_abs = a;
            }
        }
        if (is_zero(m(best, col), eps, scale)) {
            if constexpr (!is_exact_v<T>) {
                for (std::size_t r = row; r < m.rows(); ++r) m(r, col) = 0.0;
            }
            continue;
        }
        if (best != row)
            for (std::size_t j = 0; j < m.cols(); ++j) std::swap(m(best, j), m(row, j));
        T inv = T(1) / m(row, col);
        for (std::size_t j = col; j < m.cols(); ++j) m(row, j) *= inv;
        for (std::size_t r = 0; r < m.rows(); ++r) {
            if (r == row || m(r, col) == 0) continue;
            T f = m(r, col);
            for (std::size_t j = col; j < m.cols(); ++j)
                if (m(row, j) != 0) m(r, j) -= f * m(row, j);
            m(r, col) = 0;
        }
        pivots.push_back(col);
        ++row;
    }
    return pivots;
}

template <class T>
std::size_t rank(Matrix<T> m, double eps) {
    return rref(m, eps).size();
}

/// Basis of {x : M x = 0}, one vector per free column.
template <class T>
std::vector<Vec<T>> nullspace(Matrix<T> m, double eps) {
    auto pivots = rref(m, eps);
    std::vector<bool> is_pivot(m.cols(), false);
    for (auto p : pivots) is_pivot[p] = true;
    std::vector<Vec<T>> out;
    for (std::size_t f = 0; f < m.cols(); ++f) {
        if (is_pivot[f]) continue;
        Vec<T> x(m.cols(), T(0));
        x[f] = T(1);
        for (std::size_t r = 0; r < pivots.size(); ++r) x[pivots[r]] = -m(r, f);
        out.push_back(std::move(x));
    }
    return out;
}

/// Solves A X = B for square non-singular A.
template <class T>
Matrix<T> solve(const Matrix<T>& a, const Matrix<T>& b, double eps) {
    if (!a.square() || a.rows() != b.rows()) throw ContractViolation("solve: shape mismatch");
    const std::size_t n = a.rows();
    Matrix<T> aug(n, n + b.cols());
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) aug(i, j) = a(i, j);
        for (std::size_t j = 0; j < b.cols(); ++j) aug(i, n + j) = b(i, j);
    }
    auto pivots = rref(aug, eps);
    if (pivots.size() < n || pivots[n - 1] != n - 1) throw InconsistencyError("solve: singular system");
    Matrix<T> x(n, b.cols());
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < b.cols(); ++j) x(i, j) = aug(i, n + j);
    return x;
}

template <class T>
Subspace<T> intersect(const Subspace<T>& s1, const Subspace<T>& s2, double eps) {
    if (s1.ambient() != s2.ambient()) throw ContractViolation("intersect: ambient dimensions differ");
    const std::size_t n = s1.ambient();
    const std::size_t k1 = s1.dim();
    Matrix<T> m(n, k1 + s2.dim());
    for (std::size_t j = 0; j < k1; ++j)
        for (std::size_t i = 0; i < n; ++i) m(i, j) = s1.basis()[j][i];
    for (std::size_t j = 0; j < s2.dim(); ++j)
        for (std::size_t i = 0; i < n; ++i) m(i, k1 + j) = -s2.basis()[j][i];
    std::vector<Vec<T>> vectors;
    for (const auto& x : nullspace(m, eps)) {
        Vec<T> v(n, T(0));
        for (std::size_t j = 0; j < k1; ++j)
            if (x[j] != 0) axpy(x[j], s1.basis()[j], v);
        vectors.push_back(std::move(v));
    }
    return Subspace<T>::span(n, vectors, eps);
}

template <class T>
struct Eigenspace {
    T value;
    Subspace<T> space;
};

/// Cyclic Jacobi: eigenvalues (unsorted) and eigenvector columns of a symmetric matrix.
std::pair<std::vector<double>, Matrix<double>> jacobi_eigen(Matrix<double> a);

/// Sorted descending; values within eps*max(1,|lambda|) of a cluster's first member merge.
std::vector<std::vector<std::size_t>> cluster_descending(const std::vector<double>& values, double eps,
                                                         std::vector<std::size_t>& order);

std::vector<Eigenspace<double>> eig_sym(const Matrix<double>& m, double eps);

/// Exact eigenspaces; throws IrrationalValue when some eigenvalue is not rational.
std::vector<Eigenspace<Rational>> eig_sym(const Matrix<Rational>& m, double eps);

}  // namespace drg
