/**
 * @file kernels.hpp
 * @brief Data-parallel kernels (OpenMP) and their serial reference versions.
 *
 * Every output element is produced by exactly one thread and reductions are
 * finished serially in index order, so parallel results are bit-identical to
 * the serial reference regardless of the thread count.
 */
#pragma once

#include <cstddef>
#include <vector>

#include "drg/matrix.hpp"

namespace drg {

namespace serial {

template <class T>
Matrix<T> matmul(const Matrix<T>& a, const Matrix<T>& b) {
    if (a.cols() != b.rows()) throw ContractViolation("matmul: inner dimensions differ");
    Matrix<T> c(a.rows(), b.cols());
    for (std::size_t i = 0; i < a.rows(); ++i) {
        for (std::size_t k = 0; k < a.cols(); ++k) {
            const T& aik = a(i, k);
            if (aik == 0) continue;
            for (std::size_t j = 0; j < b.cols(); ++j) c(i, j) += aik * b(k, j);
        }
    }
    return c;
}

/// sum over all entries of x .* y .* z
template <class T>
T triple_hadamard_sum(const Matrix<T>& x, const Matrix<T>& y, const Matrix<T>& z) {
    T total(0);
    for (std::size_t i = 0; i < x.rows(); ++i) {
        T row(0);
        for (std::size_t j = 0; j < x.cols(); ++j) row += x(i, j) * y(i, j) * z(i, j);
        total += row;
    }
    return total;
}

/// Distances from every vertex by breadth-first search; -1 marks unreachable.
std::vector<int> all_pairs_bfs(const std::vector<std::vector<int>>& adjacency);

/// counts[((x*n + y)*(D+1) + i)*(D+1) + j] = |{z : d(x,z)=i, d(y,z)=j}|
std::vector<int> pair_sphere_counts(const std::vector<int>& dist, std::size_t n, int diameter);

}  // namespace serial

namespace parallel {

template <class T>
Matrix<T> matmul(const Matrix<T>& a, const Matrix<T>& b) {
    if (a.cols() != b.rows()) throw ContractViolation("matmul: inner dimensions differ");
    Matrix<T> c(a.rows(), b.cols());
    const long rows = static_cast<long>(a.rows());
#pragma omp parallel for schedule(static)
    for (long i = 0; i < rows; ++i) {
        for (std::size_t k = 0; k < a.cols(); ++k) {
            const T& aik = a(static_cast<std::size_t>(i), k);
            if (aik == 0) continue;
            for (std::size_t j = 0; j < b.cols(); ++j) c(static_cast<std::size_t>(i), j) += aik * b(k, j);
        }
    }
    return c;
}

template <class T>
T triple_hadamard_sum(const Matrix<T>& x, const Matrix<T>& y, const Matrix<T>& z) {
    std::vector<T> rows(x.rows(), T(0));
    const long n = static_cast<long>(x.rows());
#pragma omp parallel for schedule(static)
    for (long i = 0; i < n; ++i) {
        T row(0);
        auto ii = static_cast<std::size_t>(i);
        for (std::size_t j = 0; j < x.cols(); ++j) row += x(ii, j) * y(ii, j) * z(ii, j);
        rows[ii] = row;
    }
    T total(0);
    for (const auto& r : rows) total += r;
    return total;
}

std::vector<int> all_pairs_bfs(const std::vector<std::vector<int>>& adjacency);
std::vector<int> pair_sphere_counts(const std::vector<int>& dist, std::size_t n, int diameter);

}  // namespace parallel

template <class T>
Matrix<T> operator*(const Matrix<T>& a, const Matrix<T>& b) {
    return parallel::matmul(a, b);
}

}  // namespace drg
