/**
 * @file terwilliger.hpp
 * @brief Dual idempotents with respect to a base vertex and the decomposition of the
 *        standard module into irreducible modules of the subconstituent algebra.
 */
#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "drg/graph.hpp"
#include "drg/linalg.hpp"
#include "drg/scheme.hpp"

namespace drg {

template <class T>
struct DualData {
    int base_vertex = 0;
    std::vector<std::vector<int>> spheres;  ///< vertices at distance i from the base vertex
    std::vector<T> theta_star;              ///< dual eigenvalue on sphere i
    Vec<T> a_star_diag;                     ///< diagonal of the dual adjacency matrix

    std::size_t size() const { return a_star_diag.size(); }
    int diameter() const { return static_cast<int>(spheres.size()) - 1; }

    Matrix<T> a_star() const { return Matrix<T>::diagonal(a_star_diag); }

    Matrix<T> e_star(int i) const {
        Matrix<T> m(size(), size());
        for (int y : spheres[static_cast<std::size_t>(i)]) m(y, y) = T(1);
        return m;
    }

    /// E*_i v (restriction to sphere i).
    Vec<T> mask(int i, const Vec<T>& v) const {
        Vec<T> out(v.size(), T(0));
        for (int y : spheres[static_cast<std::size_t>(i)]) out[y] = v[y];
        return out;
    }

    Vec<T> apply_a_star(const Vec<T>& v) const {
        Vec<T> out(v);
        for (std::size_t y = 0; y < out.size(); ++y) out[y] *= a_star_diag[y];
        return out;
    }
};

/// A* = diag(|X| (E_1)_{xy}); its value on each sphere must be constant and pairwise distinct.
template <class T>
DualData<T> dual_data(const DistanceData& dd, const SpectralData<T>& sd, int base_vertex, double eps) {
    if (base_vertex < 0 || base_vertex >= dd.n) throw ContractViolation("base vertex out of range");
    if (sd.diameter() < 1) throw ContractViolation("dual data needs diameter at least 1");
    DualData<T> out;
    out.base_vertex = base_vertex;
    const T size(static_cast<long>(dd.n));
    const auto& e1 = sd.E[1];
    out.a_star_diag.assign(static_cast<std::size_t>(dd.n), T(0));
    for (int y = 0; y < dd.n; ++y) out.a_star_diag[y] = size * e1(base_vertex, y);
    for (int i = 0; i <= dd.diameter; ++i) {
        out.spheres.push_back(dd.sphere(base_vertex, i));
        const auto& s = out.spheres.back();
        T value = out.a_star_diag[s.front()];
        for (int y : s)
            if (!near(out.a_star_diag[y], value, eps))
                throw InconsistencyError("dual adjacency matrix is not constant on sphere " + std::to_string(i));
        out.theta_star.push_back(value);
    }
    for (std::size_t i = 0; i < out.theta_star.size(); ++i)
        for (std::size_t j = i + 1; j < out.theta_star.size(); ++j)
            if (near(out.theta_star[i], out.theta_star[j], eps))
                throw InconsistencyError("dual eigenvalues " + std::to_string(i) + " and " + std::to_string(j) +
                                         " coincide");
    return out;
}

/// Largest violation of E*_i A E*_j = 0 and E_i A* E_j = 0 for |i - j| > 1.
template <class T>
double tridiagonality_residual(const Matrix<T>& a, const DualData<T>& dual, const SpectralData<T>& sd) {
    const int D = dual.diameter();
    double worst = 0;
    for (int i = 0; i <= D; ++i)
        for (int j = i + 2; j <= D; ++j) {
            for (int y : dual.spheres[i])
                for (int z : dual.spheres[j]) worst = std::max(worst, std::abs(to_double(a(y, z))));
        }
    Matrix<T> as = dual.a_star();
    for (int i = 0; i <= D; ++i)
        for (int j = i + 2; j <= D; ++j) worst = std::max(worst, (sd.E[i] * as * sd.E[j]).max_abs());
    return worst;
}

struct ModuleProfile {
    int endpoint = 0;        ///< r
    int dual_endpoint = 0;   ///< t
    int diameter = 0;        ///< d
    int dual_diameter = 0;   ///< d*
    bool thin = false;
    bool dual_thin = false;
    std::vector<int> dims_star;  ///< dim E*_i W
    std::vector<int> dims;       ///< dim E_i W
    int dimension = 0;
};

template <class T>
struct TModule {
    Subspace<T> space;
    ModuleProfile profile;
};

/// Support sizes, endpoints and thinness of an irreducible module.
template <class T>
ModuleProfile module_profile(const Subspace<T>& w, const DualData<T>& dual, const SpectralData<T>& sd, double eps) {
    const int D = dual.diameter();
    ModuleProfile p;
    p.dimension = static_cast<int>(w.dim());
    for (int i = 0; i <= D; ++i) {
        std::vector<Vec<T>> star, prim;
        for (const auto& b : w.basis()) {
            star.push_back(dual.mask(i, b));
            prim.push_back(sd.E[i].apply(b));
        }
        p.dims_star.push_back(static_cast<int>(Subspace<T>::span(w.ambient(), star, eps).dim()));
        p.dims.push_back(static_cast<int>(Subspace<T>::span(w.ambient(), prim, eps).dim()));
    }
    auto interval = [&](const std::vector<int>& dims, int& start, int& length, const char* what) {
        start = -1;
        int last = -1;
        for (int i = 0; i <= D; ++i)
            if (dims[i] > 0) {
                if (start < 0) start = i;
                if (last >= 0 && last != i - 1)
                    throw InconsistencyError(std::string(what) + " support of a module is not an interval");
                last = i;
            }
        if (start < 0) throw InconsistencyError("zero module");
        length = last - start;
    };
    interval(p.dims_star, p.endpoint, p.diameter, "E*");
    interval(p.dims, p.dual_endpoint, p.dual_diameter, "E");
    p.thin = std::all_of(p.dims_star.begin(), p.dims_star.end(), [](int x) { return x <= 1; });
    p.dual_thin = std::all_of(p.dims.begin(), p.dims.end(), [](int x) { return x <= 1; });
    if (p.thin) {
        if (!p.dual_thin || p.diameter != p.dual_diameter)
            throw InconsistencyError("thin module is not dual thin with equal diameters");
        // E_i W = E_i E*_r W
        Vec<T> v;
        for (const auto& b : w.basis()) {
            v = dual.mask(p.endpoint, b);
            if (!is_zero_vector(v, eps)) break;
        }
        for (int i = 0; i <= D; ++i) {
            bool nonzero = !is_zero_vector(sd.E[i].apply(v), eps, max_abs(v));
            if (nonzero != (p.dims[i] == 1)) throw InconsistencyError("E_i W differs from E_i E*_r W");
        }
    }
    return p;
}

struct DecomposeOptions {
    double eps = 1e-9;
    std::uint64_t seed = 1;
    int max_retries = 8;
};

template <class T>
struct Decomposition {
    std::vector<TModule<T>> modules;  ///< sorted by (r, t, d)
    int attempts = 0;                 ///< random draws used
    std::string method;
};

/// Float mode: eigenspaces of a seeded random symmetric element of the commutant of {A, A*}.
Decomposition<double> decompose_standard_module(const Matrix<double>& a, const DualData<double>& dual,
                                                const SpectralData<double>& sd, const DecomposeOptions& opt);

/// Exact mode: sweeps endpoints r = 0..D, splits E*_r of the uncovered part into joint eigenspaces of
/// E*_r A E*_r and E*_r E_j E*_r, and generates one thin module per vector of an orthogonal basis.
/// Throws IrrationalValue or DecompositionError when exact splitting is impossible.
Decomposition<Rational> decompose_standard_module(const Matrix<Rational>& a, const DualData<Rational>& dual,
                                                  const SpectralData<Rational>& sd, const DecomposeOptions& opt);

/// Smallest subspace containing v and closed under A and A*.
template <class T>
Subspace<T> generated_module(const Vec<T>& v, const Matrix<T>& a, const DualData<T>& dual, double eps) {
    Subspace<T> w(v.size());
    w.add(v, eps);
    for (std::size_t k = 0; k < w.dim(); ++k) {
        Vec<T> b = w.basis()[k];
        w.add(a.apply(b), eps);
        w.add(dual.apply_a_star(b), eps);
    }
    return w;
}

/// max ||(I - P) Y P|| over Y in {A, A*} for the module projector P.
template <class T>
double invariance_residual(const Subspace<T>& w, const Matrix<T>& a, const DualData<T>& dual) {
    double worst = 0;
    for (const auto& b : w.basis()) {
        double scale = std::max(1.0, max_abs(b));
        worst = std::max(worst, max_abs(w.residual(a.apply(b))) / scale);
        worst = std::max(worst, max_abs(w.residual(dual.apply_a_star(b))) / scale);
    }
    return worst;
}

}  // namespace drg
