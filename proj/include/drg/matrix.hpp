/**
 * @file matrix.hpp
 * @brief Dense row-major matrix and vector helpers templated on the scalar.
 */
#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <vector>

#include "drg/errors.hpp"
#include "drg/scalar.hpp"

namespace drg {

template <class T>
using Vec = std::vector<T>;

template <class T>
class Matrix {
public:
    Matrix() = default;
    Matrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols, T(0)) {}

    static Matrix identity(std::size_t n) {
        Matrix m(n, n);
        for (std::size_t i = 0; i < n; ++i) m(i, i) = T(1);
        return m;
    }

    static Matrix diagonal(const Vec<T>& d) {
        Matrix m(d.size(), d.size());
        for (std::size_t i = 0; i < d.size(); ++i) m(i, i) = d[i];
        return m;
    }

    /// Matrix whose columns are the given vectors.
    static Matrix from_columns(const std::vector<Vec<T>>& cols, std::size_t rows) {
        Matrix m(rows, cols.size());
        for (std::size_t j = 0; j < cols.size(); ++j)
            for (std::size_t i = 0; i < rows; ++i) m(i, j) = cols[j][i];
        return m;
    }

    std::size_t rows() const noexcept { return rows_; }
    std::size_t cols() const noexcept { return cols_; }
    bool square() const noexcept { return rows_ == cols_; }

    T& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
    const T& operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

    Vec<T> column(std::size_t j) const {
        Vec<T> v(rows_);
        for (std::size_t i = 0; i < rows_; ++i) v[i] = (*this)(i, j);
        return v;
    }

    Matrix transpose() const {
        Matrix t(cols_, rows_);
        for (std::size_t i = 0; i < rows_; ++i)
            for (std::size_t j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
        return t;
    }

    T trace() const {
        T s(0);
        for (std::size_t i = 0; i < std::min(rows_, cols_); ++i) s += (*this)(i, i);
        return s;
    }

    Matrix& operator+=(const Matrix& o) {
        check_same(o);
        for (std::size_t k = 0; k < data_.size(); ++k) data_[k] += o.data_[k];
        return *this;
    }
    Matrix& operator-=(const Matrix& o) {
        check_same(o);
        for (std::size_t k = 0; k < data_.size(); ++k) data_[k] -= o.data_[k];
        return *this;
    }
    Matrix& operator*=(const T& s) {
        for (auto& x : data_) x *= s;
        return *this;
    }

    friend Matrix operator+(Matrix a, const Matrix& b) { return a += b; }
    friend Matrix operator-(Matrix a, const Matrix& b) { return a -= b; }
    friend Matrix operator*(Matrix a, const T& s) { return a *= s; }
    friend Matrix operator*(const T& s, Matrix a) { return a *= s; }

    bool operator==(const Matrix& o) const = default;

    /// Largest absolute entry, as a double.
    double max_abs() const {
        double m = 0;
        for (const auto& x : data_) m = std::max(m, std::abs(to_double(x)));
        return m;
    }

    bool symmetric(double eps) const {
        if (!square()) return false;
        double scale = max_abs();
        for (std::size_t i = 0; i < rows_; ++i)
            for (std::size_t j = i + 1; j < cols_; ++j)
                if (!is_zero(T((*this)(i, j) - (*this)(j, i)), eps, scale)) return false;
        return true;
    }

    Vec<T> apply(const Vec<T>& v) const {
        Vec<T> out(rows_, T(0));
        for (std::size_t i = 0; i < rows_; ++i) {
            T acc(0);
            for (std::size_t j = 0; j < cols_; ++j) {
                const T& a = (*this)(i, j);
                if (a != 0) acc += a * v[j];
            }
            out[i] = acc;
        }
        return out;
    }

    template <class U>
    Matrix<U> cast() const {
        Matrix<U> m(rows_, cols_);
        for (std::size_t i = 0; i < rows_; ++i)
            for (std::size_t j = 0; j < cols_; ++j) {
                if constexpr (std::is_same_v<U, double>) {
                    m(i, j) = to_double((*this)(i, j));
                } else {
                    m(i, j) = U((*this)(i, j));
                }
            }
        return m;
    }

private:
    void check_same(const Matrix& o) const {
        if (rows_ != o.rows_ || cols_ != o.cols_) throw ContractViolation("matrix shape mismatch");
    }

    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<T> data_;
};

/// Maximum absolute entrywise difference.
template <class T>
double max_abs_diff(const Matrix<T>& a, const Matrix<T>& b) {
    if (a.rows() != b.rows() || a.cols() != b.cols()) throw ContractViolation("matrix shape mismatch");
    double m = 0;
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < a.cols(); ++j) {
            T d = a(i, j) - b(i, j);
            m = std::max(m, std::abs(to_double(d)));
        }
    return m;
}

template <class T>
T dot(const Vec<T>& a, const Vec<T>& b) {
    T s(0);
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (a[i] != 0 && b[i] != 0) s += a[i] * b[i];
    }
    return s;
}

/// y += alpha * x
template <class T>
void axpy(const T& alpha, const Vec<T>& x, Vec<T>& y) {
    for (std::size_t i = 0; i < x.size(); ++i) {
        if (x[i] != 0) y[i] += alpha * x[i];
    }
}

template <class T>
Vec<T> scaled(const Vec<T>& x, const T& s) {
    Vec<T> y(x);
    for (auto& v : y) v *= s;
    return y;
}

template <class T>
Vec<T> operator+(const Vec<T>& a, const Vec<T>& b) {
    Vec<T> c(a);
    for (std::size_t i = 0; i < c.size(); ++i) c[i] += b[i];
    return c;
}

template <class T>
Vec<T> operator-(const Vec<T>& a, const Vec<T>& b) {
    Vec<T> c(a);
    for (std::size_t i = 0; i < c.size(); ++i) c[i] -= b[i];
    return c;
}

template <class T>
double norm(const Vec<T>& v) {
    double s = 0;
    for (const auto& x : v) {
        double d = to_double(x);
        s += d * d;
    }
    return std::sqrt(s);
}

template <class T>
double max_abs(const Vec<T>& v) {
    double m = 0;
    for (const auto& x : v) m = std::max(m, std::abs(to_double(x)));
    return m;
}

template <class T>
bool is_zero_vector(const Vec<T>& v, double eps, double scale = 1.0) {
    for (const auto& x : v)
        if (!is_zero(x, eps, scale)) return false;
    return true;
}

}  // namespace drg
