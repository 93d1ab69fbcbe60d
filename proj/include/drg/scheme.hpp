/**
 * @file scheme.hpp
 * @brief Primitive idempotents, Krein parameters and Q-polynomial orderings.
 */
#pragma once

#include <algorithm>
#include <numeric>
#include <vector>

#include "drg/errors.hpp"
#include "drg/kernels.hpp"
#include "drg/linalg.hpp"

namespace drg {

template <class T>
struct SpectralData {
    std::vector<T> theta;          ///< eigenvalue of A on E_i
    std::vector<Matrix<T>> E;      ///< primitive idempotents
    std::vector<T> multiplicity;   ///< rank of E_i
    double idempotent_residual = 0;  ///< max |eigenspace projector - product formula|

    int diameter() const { return static_cast<int>(theta.size()) - 1; }

    /// Entry i of the result is entry perm[i] of this ordering.
    SpectralData reordered(const std::vector<int>& perm) const {
        SpectralData out;
        out.idempotent_residual = idempotent_residual;
        for (int p : perm) {
            out.theta.push_back(theta[p]);
            out.E.push_back(E[p]);
            out.multiplicity.push_back(multiplicity[p]);
        }
        return out;
    }
};

/// Eigenvalues in descending order with E_i built both as eigenspace projectors and as
/// prod_{j != i} (A - theta_j I) / (theta_i - theta_j); the product form is returned.
template <class T>
SpectralData<T> primitive_idempotents(const Matrix<T>& a, int diameter, double eps) {
    auto spaces = eig_sym(a, eps);
    if (static_cast<int>(spaces.size()) != diameter + 1)
        throw InconsistencyError("adjacency matrix has " + std::to_string(spaces.size()) +
                                 " distinct eigenvalues, expected diameter + 1 = " + std::to_string(diameter + 1));
    const std::size_t n = a.rows();
    SpectralData<T> sd;
    for (const auto& s : spaces) sd.theta.push_back(s.value);
    for (std::size_t i = 0; i < spaces.size(); ++i) {
        Matrix<T> prod = Matrix<T>::identity(n);
        for (std::size_t j = 0; j < spaces.size(); ++j) {
            if (j == i) continue;
            Matrix<T> factor = a;
            for (std::size_t k = 0; k < n; ++k) factor(k, k) -= sd.theta[j];
            prod = prod * factor;
            prod *= T(T(1) / T(sd.theta[i] - sd.theta[j]));
        }
        Matrix<T> proj = spaces[i].space.projector();
        sd.idempotent_residual = std::max(sd.idempotent_residual, max_abs_diff(prod, proj));
        sd.multiplicity.push_back(prod.trace());
        sd.E.push_back(std::move(prod));
    }
    if (sd.idempotent_residual > eps * std::max(1.0, static_cast<double>(n)))
        throw InconsistencyError("eigenspace projectors disagree with the product formula");
    return sd;
}

template <class T>
struct KreinTable {
    int diameter = 0;
    std::vector<T> q;  ///< q^h_ij at (h*(D+1) + i)*(D+1) + j

    const T& Q(int h, int i, int j) const {
        const int w = diameter + 1;
        return q[static_cast<std::size_t>((h * w + i) * w + j)];
    }
};

/// q^h_ij = |X| sum_{x,y} (E_i)_xy (E_j)_xy (E_h)_xy / m_h, checked against
/// q^0_ij = delta_ij m_i, symmetry in i and j, and nonnegativity up to eps |X|.
template <class T>
KreinTable<T> krein_parameters(const SpectralData<T>& sd, double eps) {
    const int D = sd.diameter();
    const int w = D + 1;
    const std::size_t n = sd.E.front().rows();
    const T size(static_cast<long>(n));
    KreinTable<T> kt;
    kt.diameter = D;
    kt.q.assign(static_cast<std::size_t>(w * w * w), T(0));
    const long triples = static_cast<long>(w * w * w);
#pragma omp parallel for schedule(dynamic)
    for (long idx = 0; idx < triples; ++idx) {
        int h = static_cast<int>(idx / (w * w));
        int i = static_cast<int>((idx / w) % w);
        int j = static_cast<int>(idx % w);
        if (j < i) continue;
        T s = serial::triple_hadamard_sum(sd.E[i], sd.E[j], sd.E[h]);
        kt.q[static_cast<std::size_t>(idx)] = size * s / sd.multiplicity[h];
    }
    for (int h = 0; h < w; ++h)
        for (int i = 0; i < w; ++i)
            for (int j = 0; j < i; ++j) kt.q[static_cast<std::size_t>((h * w + i) * w + j)] = kt.Q(h, j, i);

    const double tol = eps * static_cast<double>(n);
    for (int h = 0; h < w; ++h)
        for (int i = 0; i < w; ++i)
            for (int j = 0; j < w; ++j) {
                const T& v = kt.Q(h, i, j);
                if (to_double(v) < -tol) throw InconsistencyError("negative Krein parameter");
                if (h == 0) {
                    T expected = i == j ? sd.multiplicity[i] : T(0);
                    if (!is_zero(T(v - expected), eps, to_double(expected) + n))
                        throw InconsistencyError("q^0_ij differs from delta_ij m_i");
                }
            }
    return kt;
}

/// Orderings (perm[0] = 0) under which q^h_ij vanishes when one index exceeds the sum of the
/// other two and is nonzero when it equals that sum, in lexicographic order.
template <class T>
std::vector<std::vector<int>> q_polynomial_orderings(const KreinTable<T>& kt, std::size_t vertices, double eps) {
    const int D = kt.diameter;
    std::vector<int> rest(static_cast<std::size_t>(D));
    std::iota(rest.begin(), rest.end(), 1);
    std::vector<std::vector<int>> candidates;
    do {
        std::vector<int> perm{0};
        perm.insert(perm.end(), rest.begin(), rest.end());
        candidates.push_back(perm);
    } while (std::next_permutation(rest.begin(), rest.end()));

    const double scale = static_cast<double>(vertices);
    std::vector<char> ok(candidates.size(), 0);
    const long count = static_cast<long>(candidates.size());
#pragma omp parallel for schedule(dynamic)
    for (long c = 0; c < count; ++c) {
        const auto& p = candidates[static_cast<std::size_t>(c)];
        bool good = true;
        for (int h = 0; h <= D && good; ++h)
            for (int i = 0; i <= D && good; ++i)
                for (int j = 0; j <= D && good; ++j) {
                    const T& v = kt.Q(p[h], p[i], p[j]);
                    bool zero = is_zero(v, eps, scale);
                    int mx = std::max({h, i, j});
                    int others = h + i + j - mx;
                    if (mx > others && !zero) good = false;
                    if (mx == others && zero) good = false;
                }
        ok[static_cast<std::size_t>(c)] = good ? 1 : 0;
    }
    std::vector<std::vector<int>> out;
    for (std::size_t c = 0; c < candidates.size(); ++c)
        if (ok[c]) out.push_back(candidates[c]);
    return out;
}

template <class T>
KreinTable<T> reorder(const KreinTable<T>& kt, const std::vector<int>& perm) {
    KreinTable<T> out = kt;
    const int w = kt.diameter + 1;
    for (int h = 0; h < w; ++h)
        for (int i = 0; i < w; ++i)
            for (int j = 0; j < w; ++j) out.q[static_cast<std::size_t>((h * w + i) * w + j)] = kt.Q(perm[h], perm[i], perm[j]);
    return out;
}

/// b*_i = q^i_{1,i+1}, c*_i = q^i_{1,i-1}, a*_i = q^i_{1,i} under the current ordering.
template <class T>
struct DualIntersectionNumbers {
    std::vector<T> b, c, a;
};

template <class T>
DualIntersectionNumbers<T> dual_intersection_numbers(const KreinTable<T>& kt) {
    const int D = kt.diameter;
    DualIntersectionNumbers<T> out;
    for (int i = 0; i <= D; ++i) {
        out.a.push_back(kt.Q(i, 1, i));
        out.b.push_back(i < D ? kt.Q(i, 1, i + 1) : T(0));
        out.c.push_back(i > 0 ? kt.Q(i, 1, i - 1) : T(0));
    }
    return out;
}

}  // namespace drg
