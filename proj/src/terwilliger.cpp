#include "drg/terwilliger.hpp"

#include <algorithm>
#include <random>

namespace drg {

namespace {

template <class T>
void sort_modules(std::vector<TModule<T>>& modules) {
    std::stable_sort(modules.begin(), modules.end(), [](const TModule<T>& x, const TModule<T>& y) {
        const auto& p = x.profile;
        const auto& q = y.profile;
        return std::tie(p.endpoint, p.dual_endpoint, p.diameter) < std::tie(q.endpoint, q.dual_endpoint, q.diameter);
    });
}

/// Uniform in [-1, 1) from raw generator bits, identical on every platform.
double uniform_pm1(std::mt19937_64& gen) {
    return static_cast<double>(gen() >> 11) * 0x1.0p-52 - 1.0;
}

/// Symmetric block-diagonal (with respect to the spheres) solutions of C A = A C.
std::vector<Matrix<double>> commutant_basis(const Matrix<double>& a, const DualData<double>& dual, double eps) {
    const std::size_t n = a.rows();
    std::vector<int> sphere_of(n), pos(n);
    std::vector<std::size_t> offset;
    std::size_t unknowns = 0;
    for (std::size_t i = 0; i < dual.spheres.size(); ++i) {
        offset.push_back(unknowns);
        const auto& s = dual.spheres[i];
        for (std::size_t p = 0; p < s.size(); ++p) {
            sphere_of[s[p]] = static_cast<int>(i);
            pos[s[p]] = static_cast<int>(p);
        }
        unknowns += s.size() * (s.size() + 1) / 2;
    }
    // index of the (min, max) position pair in the row-major upper triangle of the block
    auto tri = [&](int y, int w) {
        std::size_t i = static_cast<std::size_t>(sphere_of[y]);
        std::size_t k = dual.spheres[i].size();
        std::size_t p = static_cast<std::size_t>(std::min(pos[y], pos[w]));
        std::size_t q = static_cast<std::size_t>(std::max(pos[y], pos[w]));
        return offset[i] + p * (2 * k - p + 1) / 2 + (q - p);
    };
    std::vector<std::vector<int>> nbr(n);
    for (std::size_t y = 0; y < n; ++y)
        for (std::size_t z = 0; z < n; ++z)
            if (a(y, z) != 0.0) nbr[y].push_back(static_cast<int>(z));

    std::vector<std::vector<double>> rows;
    for (std::size_t y = 0; y < n; ++y)
        for (std::size_t z = y + 1; z < n; ++z) {
            std::vector<double> row(unknowns, 0.0);
            bool any = false;
            // (C A)_{yz} = sum_w C_{yw} A_{wz},  (A C)_{yz} = sum_w A_{yw} C_{wz}
            for (int w : nbr[z])
                if (sphere_of[w] == sphere_of[y]) {
                    row[tri(static_cast<int>(y), w)] += 1.0;
                    any = true;
                }
            for (int w : nbr[y])
                if (sphere_of[w] == sphere_of[z]) {
                    row[tri(w, static_cast<int>(z))] -= 1.0;
                    any = true;
                }
            if (any) rows.push_back(std::move(row));
        }
    Matrix<double> m(rows.size(), unknowns);
    for (std::size_t r = 0; r < rows.size(); ++r)
        for (std::size_t c = 0; c < unknowns; ++c) m(r, c) = rows[r][c];

    std::vector<Matrix<double>> basis;
    for (const auto& x : nullspace(m, eps)) {
        Matrix<double> c(n, n);
        for (const auto& s : dual.spheres)
            for (int y : s)
                for (int w : s) c(y, w) = x[tri(y, w)];
        basis.push_back(std::move(c));
    }
    return basis;
}

bool acts_as_scalar(const Subspace<double>& s, const Matrix<double>& c, double eps) {
    Matrix<double> b = s.basis_matrix();
    Matrix<double> x = b.transpose() * c * b;
    double scale = std::max(1.0, c.max_abs());
    double lambda = x.trace() / static_cast<double>(x.rows());
    for (std::size_t i = 0; i < x.rows(); ++i)
        for (std::size_t j = 0; j < x.cols(); ++j) {
            double expected = i == j ? lambda : 0.0;
            if (std::abs(x(i, j) - expected) > eps * scale * static_cast<double>(s.ambient())) return false;
        }
    return true;
}

}  // namespace

Decomposition<double> decompose_standard_module(const Matrix<double>& a, const DualData<double>& dual,
                                                const SpectralData<double>& sd, const DecomposeOptions& opt) {
    const std::size_t n = a.rows();
    auto basis = commutant_basis(a, dual, opt.eps);
    const double tol = opt.eps * static_cast<double>(n);
    Decomposition<double> out;
    out.method = "commutant";
    for (int attempt = 0; attempt <= opt.max_retries; ++attempt) {
        out.attempts = attempt + 1;
        std::mt19937_64 gen(opt.seed + static_cast<std::uint64_t>(attempt));
        Matrix<double> c0(n, n);
        for (const auto& b : basis) c0 += b * uniform_pm1(gen);
        auto spaces = eig_sym(c0, opt.eps);
        bool ok = true;
        std::vector<TModule<double>> modules;
        for (const auto& es : spaces) {
            const auto& s = es.space;
            if (invariance_residual(s, a, dual) > tol) {
                ok = false;
                break;
            }
            if (generated_module(s.basis().front(), a, dual, opt.eps).dim() != s.dim()) {
                ok = false;
                break;
            }
            for (const auto& b : basis)
                if (!acts_as_scalar(s, b, opt.eps)) {
                    ok = false;
                    break;
                }
            if (!ok) break;
            modules.push_back({s, module_profile(s, dual, sd, opt.eps)});
        }
        if (!ok) continue;
        sort_modules(modules);
        out.modules = std::move(modules);
        return out;
    }
    throw DecompositionError("commutant eigenspaces failed the irreducibility checks after " +
                             std::to_string(opt.max_retries) + " retries");
}

Decomposition<Rational> decompose_standard_module(const Matrix<Rational>& a, const DualData<Rational>& dual,
                                                  const SpectralData<Rational>& sd, const DecomposeOptions& opt) {
    const std::size_t n = a.rows();
    const int D = dual.diameter();
    const double eps = opt.eps;
    Decomposition<Rational> out;
    out.method = "endpoint-sweep";
    std::vector<TModule<Rational>> found;
    std::size_t covered = 0;
    for (int r = 0; r <= D; ++r) {
        const auto& sphere = dual.spheres[static_cast<std::size_t>(r)];
        const std::size_t k = sphere.size();
        auto restrict_to_sphere = [&](const Vec<Rational>& v) {
            Vec<Rational> out_v(k);
            for (std::size_t p = 0; p < k; ++p) out_v[p] = v[sphere[p]];
            return out_v;
        };
        auto lift = [&](const Vec<Rational>& v) {
            Vec<Rational> out_v(n, Rational(0));
            for (std::size_t p = 0; p < k; ++p) out_v[sphere[p]] = v[p];
            return out_v;
        };
        Subspace<Rational> covered_part(k);
        for (const auto& m : found)
            for (const auto& b : m.space.basis()) covered_part.add(restrict_to_sphere(b), eps);
        Subspace<Rational> free_part(k);
        for (std::size_t p = 0; p < k; ++p) {
            Vec<Rational> e(k, Rational(0));
            e[p] = 1;
            free_part.add(covered_part.residual(e), eps);
        }
        if (free_part.dim() == 0) continue;
        Matrix<Rational> proj = free_part.projector();
        auto block = [&](const Matrix<Rational>& m) {
            Matrix<Rational> b(k, k);
            for (std::size_t p = 0; p < k; ++p)
                for (std::size_t q = 0; q < k; ++q) b(p, q) = m(sphere[p], sphere[q]);
            return b;
        };
        Matrix<Rational> a_block = block(a);
        std::vector<Matrix<Rational>> e_blocks;
        for (const auto& e : sd.E) e_blocks.push_back(block(e));

        bool done = false;
        for (int attempt = 0; attempt <= opt.max_retries && !done; ++attempt) {
            out.attempts += 1;
            std::mt19937_64 gen(opt.seed + static_cast<std::uint64_t>(attempt));
            Matrix<Rational> mix = a_block;
            for (const auto& eb : e_blocks) mix += eb * Rational(static_cast<long>(1 + gen() % 997));
            Matrix<Rational> kmat = proj * mix * proj;
            std::vector<TModule<Rational>> fresh;
            bool ok = true;
            for (const auto& es : eig_sym(kmat, eps)) {
                Subspace<Rational> piece = intersect(es.space, free_part, eps);
                for (const auto& v : piece.basis()) {
                    Subspace<Rational> w = generated_module(lift(v), a, dual, eps);
                    ModuleProfile prof = module_profile(w, dual, sd, eps);
                    if (!prof.thin || prof.endpoint != r) {
                        ok = false;
                        break;
                    }
                    fresh.push_back({std::move(w), prof});
                }
                if (!ok) break;
            }
            if (!ok) continue;
            // mutual orthogonality of the new modules
            for (std::size_t i = 0; i < fresh.size() && ok; ++i)
                for (std::size_t j = i + 1; j < fresh.size() && ok; ++j)
                    for (const auto& b : fresh[i].space.basis())
                        if (!is_zero_vector(fresh[j].space.project(b), eps)) {
                            ok = false;
                            break;
                        }
            if (!ok) continue;
            for (auto& m : fresh) {
                covered += m.space.dim();
                found.push_back(std::move(m));
            }
            done = true;
        }
        if (!done)
            throw DecompositionError("exact splitting at endpoint " + std::to_string(r) + " did not yield thin modules");
    }
    if (covered != n) throw DecompositionError("modules do not cover the standard module");
    sort_modules(found);
    out.modules = std::move(found);
    return out;
}

}  // namespace drg
