/**
 * @file module_invariants.hpp
 * @brief Matrix pipeline: scalars, bases, representations and split sequences of a thin module,
 *        computed from the actions of A, A*, E_i and E*_i on the module.
 *
 * All computations run in coordinates of the module's orthogonal basis, so every operator is a
 * (d+1) x (d+1) matrix and inner products use the Gram diagonal of that basis.
 */
#pragma once

#include <cmath>
#include <string>
#include <vector>

#include "drg/audit.hpp"
#include "drg/errors.hpp"
#include "drg/parameter_array.hpp"
#include "drg/polynomial.hpp"
#include "drg/terwilliger.hpp"

namespace drg {

template <class T>
struct ModuleContext {
    int r = 0;
    int t = 0;
    int d = 0;
    double eps = 1e-9;
    std::vector<Vec<T>> basis;  ///< ambient orthogonal basis of W
    Vec<T> gram;                ///< squared norms of `basis`
    Matrix<T> A, As;            ///< actions of A and A* on W
    std::vector<Matrix<T>> Es;  ///< action of E*_{r+i}, 0 <= i <= d
    std::vector<Matrix<T>> E;   ///< action of E_{t+i}, 0 <= i <= d
    std::vector<T> theta;       ///< theta_{t+i}
    std::vector<T> theta_star;  ///< theta*_{r+i}

    std::size_t dim() const { return basis.size(); }

    Vec<T> ambient(const Vec<T>& c) const {
        Vec<T> out(basis.front().size(), T(0));
        for (std::size_t k = 0; k < c.size(); ++k)
            if (c[k] != 0) axpy(c[k], basis[k], out);
        return out;
    }

    T inner(const Vec<T>& x, const Vec<T>& y) const {
        T s(0);
        for (std::size_t k = 0; k < x.size(); ++k) s += x[k] * y[k] * gram[k];
        return s;
    }

    T norm2(const Vec<T>& x) const { return inner(x, x); }
};

namespace detail {

template <class T>
double mat_residual(const Matrix<T>& x, const Matrix<T>& expected) {
    return max_abs_diff(x, expected) / std::max(1.0, expected.max_abs());
}

template <class T>
double vec_residual(const Vec<T>& x, const Vec<T>& expected) {
    Vec<T> diff = x - expected;
    if constexpr (is_exact_v<T>) {
        if (is_zero_vector(diff, 0.0)) return 0.0;
    }
    return max_abs(diff) / std::max(1.0, max_abs(expected));
}

template <class T>
Matrix<T> shifted(const Matrix<T>& m, const T& s) {
    Matrix<T> out(m);
    for (std::size_t i = 0; i < m.rows(); ++i) out(i, i) -= s;
    return out;
}

template <class T>
Matrix<T> power_of(const Matrix<T>& m, int e) {
    Matrix<T> out = Matrix<T>::identity(m.rows());
    for (int k = 0; k < e; ++k) out = out * m;
    return out;
}

/// |<x,y>| / (|x| |y|), zero when exactly orthogonal.
template <class T>
double cosine(const ModuleContext<T>& ctx, const Vec<T>& x, const Vec<T>& y) {
    T ip = ctx.inner(x, y);
    if constexpr (is_exact_v<T>) {
        if (sgn(ip) == 0) return 0.0;
    }
    return std::abs(to_double(ip)) / std::sqrt(to_double(ctx.norm2(x)) * to_double(ctx.norm2(y)));
}

/// Coordinates of the operator Y in the basis given by the columns `cols`: Y w_j = sum_i X_{ij} w_i.
template <class T>
Matrix<T> represent(const Matrix<T>& y, const std::vector<Vec<T>>& cols, double eps) {
    Matrix<T> w = Matrix<T>::from_columns(cols, cols.front().size());
    return solve(w, y * w, eps);
}

/// Spanning vector of the column space of a rank-one action, taken from its largest column.
template <class T>
Vec<T> rank_one_generator(const Matrix<T>& m) {
    std::size_t best = 0;
    double best_norm = -1;
    for (std::size_t j = 0; j < m.cols(); ++j) {
        double nj = max_abs(m.column(j));
        if (nj > best_norm) {
            best_norm = nj;
            best = j;
        }
    }
    return m.column(best);
}

}  // namespace detail

/// Restricts A, A*, E_i and E*_i to a thin module with d >= 1.
template <class T>
ModuleContext<T> make_module_context(const TModule<T>& module, const Matrix<T>& a, const DualData<T>& dual,
                                     const SpectralData<T>& sd, double eps) {
    const auto& p = module.profile;
    if (!p.thin) throw PreconditionError("module analysis requires a thin module");
    if (p.diameter < 1) throw PreconditionError("module analysis requires diameter at least 1");
    ModuleContext<T> ctx;
    ctx.r = p.endpoint;
    ctx.t = p.dual_endpoint;
    ctx.d = p.diameter;
    ctx.eps = eps;
    ctx.basis = module.space.basis();
    ctx.gram = module.space.norms2();
    const std::size_t m = ctx.dim();
    auto restrict_op = [&](auto&& apply) {
        Matrix<T> out(m, m);
        for (std::size_t k = 0; k < m; ++k) {
            Vec<T> y = apply(ctx.basis[k]);
            for (std::size_t j = 0; j < m; ++j) out(j, k) = dot(ctx.basis[j], y) / ctx.gram[j];
        }
        return out;
    };
    ctx.A = restrict_op([&](const Vec<T>& b) { return a.apply(b); });
    ctx.As = restrict_op([&](const Vec<T>& b) { return dual.apply_a_star(b); });
    for (int i = 0; i <= ctx.d; ++i) {
        ctx.Es.push_back(restrict_op([&](const Vec<T>& b) { return dual.mask(ctx.r + i, b); }));
        ctx.E.push_back(restrict_op([&](const Vec<T>& b) { return sd.E[ctx.t + i].apply(b); }));
        ctx.theta.push_back(sd.theta[ctx.t + i]);
        ctx.theta_star.push_back(dual.theta_star[ctx.r + i]);
    }
    return ctx;
}

/// Minimal polynomials, the triple-product law and the two End(W) bases.
template <class T>
void structure_audit(const ModuleContext<T>& ctx, Audit& audit) {
    using detail::mat_residual;
    const int d = ctx.d;
    const std::size_t m = ctx.dim();
    const Matrix<T> zero(m, m);
    Matrix<T> pa = Matrix<T>::identity(m), pas = Matrix<T>::identity(m);
    for (int i = 0; i <= d; ++i) {
        pa = pa * detail::shifted(ctx.A, ctx.theta[i]);
        pas = pas * detail::shifted(ctx.As, ctx.theta_star[i]);
    }
    audit.record("minimal_polynomial", mat_residual(pa, zero));
    audit.record("minimal_polynomial", mat_residual(pas, zero));

    std::vector<Matrix<T>> ap{Matrix<T>::identity(m)}, asp{Matrix<T>::identity(m)};
    for (int h = 1; h <= d; ++h) {
        ap.push_back(ap.back() * ctx.A);
        asp.push_back(asp.back() * ctx.As);
    }
    for (int h = 0; h <= d; ++h)
        for (int i = 0; i <= d; ++i)
            for (int j = 0; j <= d; ++j) {
                const int gap = std::abs(i - j);
                if (h > gap) continue;
                Matrix<T> x = ctx.Es[i] * ap[h] * ctx.Es[j];
                Matrix<T> y = ctx.E[i] * asp[h] * ctx.E[j];
                double scale = std::max(1.0, ap[h].max_abs());
                double scale_s = std::max(1.0, asp[h].max_abs());
                if (h < gap) {
                    audit.record("triple_product_zero", x.max_abs() / scale);
                    audit.record("triple_product_zero", y.max_abs() / scale_s);
                } else {
                    audit.require("triple_product_nonzero", !is_zero(T(x.max_abs()), ctx.eps, scale),
                                  "E*_{r+i}A^hE*_{r+j} vanishes at h = |i-j| = " + std::to_string(h));
                    audit.require("triple_product_nonzero", !is_zero(T(y.max_abs()), ctx.eps, scale_s),
                                  "E_{t+i}A*^hE_{t+j} vanishes at h = |i-j| = " + std::to_string(h));
                }
            }

    auto end_rank = [&](const std::vector<Matrix<T>>& powers, const Matrix<T>& idem) {
        const std::size_t count = powers.size() * powers.size();
        Matrix<T> flat(count, m * m);
        std::size_t row = 0;
        for (const auto& pm : powers)
            for (const auto& pn : powers) {
                Matrix<T> x = pm * idem * pn;
                for (std::size_t k = 0; k < m * m; ++k) flat(row, k) = x(k / m, k % m);
                ++row;
            }
        return rank(flat, ctx.eps);
    };
    const std::size_t full = m * m;
    audit.require("end_basis", end_rank(ap, ctx.Es[0]) == full, "A^m E*_r A^n do not span End(W)");
    audit.require("end_basis", end_rank(asp, ctx.E[0]) == full, "A*^m E_t A*^n do not span End(W)");
}

/// a_i, x_i, a*_i, x*_i as traces on W, with the operator identities they satisfy.
template <class T>
void trace_scalars(const ModuleContext<T>& ctx, ModuleScalars<T>& s, Audit& audit) {
    using detail::mat_residual;
    const int d = ctx.d;
    s.a.assign(d + 1, T(0));
    s.a_star.assign(d + 1, T(0));
    s.x.assign(d + 1, T(0));
    s.x_star.assign(d + 1, T(0));
    for (int i = 0; i <= d; ++i) {
        const auto& es = ctx.Es[i];
        const auto& e = ctx.E[i];
        s.a[i] = (es * ctx.A).trace();
        s.a_star[i] = (e * ctx.As).trace();
        audit.record("a_operator", mat_residual(es * ctx.A * es, es * s.a[i]));
        audit.record("a_operator", mat_residual(e * ctx.As * e, e * s.a_star[i]));
        if (i == 0) continue;
        const auto& es0 = ctx.Es[i - 1];
        const auto& e0 = ctx.E[i - 1];
        s.x[i] = (es * ctx.A * es0 * ctx.A).trace();
        s.x_star[i] = (e * ctx.As * e0 * ctx.As).trace();
        audit.record("x_operator", mat_residual(es * ctx.A * es0 * ctx.A * es, es * s.x[i]));
        audit.record("x_operator", mat_residual(es0 * ctx.A * es * ctx.A * es0, es0 * s.x[i]));
        audit.record("x_operator", mat_residual(e * ctx.As * e0 * ctx.As * e, e * s.x_star[i]));
        audit.record("x_operator", mat_residual(e0 * ctx.As * e * ctx.As * e0, e0 * s.x_star[i]));
        audit.require("x_positive", s.x[i] > 0 && !is_zero(s.x[i], ctx.eps), "x_" + std::to_string(i));
        audit.require("x_positive", s.x_star[i] > 0 && !is_zero(s.x_star[i], ctx.eps), "x*_" + std::to_string(i));
    }
    T sa(0), st(0), sas(0), sts(0);
    for (int i = 0; i <= d; ++i) {
        sa += s.a[i];
        st += ctx.theta[i];
        sas += s.a_star[i];
        sts += ctx.theta_star[i];
    }
    audit.compare("a_sum", sa, st);
    audit.compare("a_sum", sas, sts);
}

/// m_i, m*_i, nu, k_i, k*_i from traces of products of primitive and dual idempotents.
template <class T>
void overlap_scalars(const ModuleContext<T>& ctx, ModuleScalars<T>& s, Audit& audit) {
    using detail::mat_residual;
    const int d = ctx.d;
    s.m.assign(d + 1, T(0));
    s.m_star.assign(d + 1, T(0));
    const auto& es_r = ctx.Es[0];
    const auto& e_t = ctx.E[0];
    for (int i = 0; i <= d; ++i) {
        const auto& e = ctx.E[i];
        const auto& es = ctx.Es[i];
        s.m[i] = (e * es_r).trace();
        s.m_star[i] = (es * e_t).trace();
        audit.record("m_operator", mat_residual(e * es_r * e, e * s.m[i]));
        audit.record("m_operator", mat_residual(es_r * e * es_r, es_r * s.m[i]));
        audit.record("m_operator", mat_residual(es * e_t * es, es * s.m_star[i]));
        audit.record("m_operator", mat_residual(e_t * es * e_t, e_t * s.m_star[i]));
        audit.require("m_positive", s.m[i] > 0 && !is_zero(s.m[i], ctx.eps), "m_" + std::to_string(i));
        audit.require("m_positive", s.m_star[i] > 0 && !is_zero(s.m_star[i], ctx.eps), "m*_" + std::to_string(i));
    }
    if (is_zero(s.m[0], ctx.eps)) throw DecompositionError("degenerate overlap: m_0(W) vanishes");
    audit.compare("m0_equals_m0_star", s.m[0], s.m_star[0]);
    T sum(0), sum_star(0);
    for (int i = 0; i <= d; ++i) {
        sum += s.m[i];
        sum_star += s.m_star[i];
    }
    audit.compare("m_sum", sum, T(1));
    audit.compare("m_sum", sum_star, T(1));
    s.nu = T(1) / s.m[0];
    audit.record("nu_operator", mat_residual(e_t * es_r * e_t * s.nu, e_t));
    audit.record("nu_operator", mat_residual(es_r * e_t * es_r * s.nu, es_r));
    s.k.assign(d + 1, T(0));
    s.k_star.assign(d + 1, T(0));
    T ksum(0), ksum_star(0);
    for (int i = 0; i <= d; ++i) {
        s.k[i] = s.m_star[i] * s.nu;
        s.k_star[i] = s.m[i] * s.nu;
        ksum += s.k[i];
        ksum_star += s.k_star[i];
    }
    audit.compare("k0", s.k[0], T(1));
    audit.compare("k0", s.k_star[0], T(1));
    audit.compare("k_sum", ksum, s.nu);
    audit.compare("k_sum", ksum_star, s.nu);
}

template <class T>
struct ModuleBases {
    Vec<T> u;  ///< spans E_t W (module coordinates)
    Vec<T> v;  ///< spans E*_r W
    std::vector<Vec<T>> power, dual_power, standard, dual_standard, split, down_split;
};

/// Scales a spanning vector of a one-dimensional space: unit ambient norm with the first
/// largest-magnitude coordinate positive (float), or that coordinate equal to 1 (exact).
template <class T>
Vec<T> normalize_direction(const ModuleContext<T>& ctx, const Vec<T>& c) {
    Vec<T> amb = ctx.ambient(c);
    const double top = max_abs(amb);
    if (top == 0.0) throw DecompositionError("cannot normalize a zero vector");
    std::size_t lead = 0;
    for (std::size_t k = 0; k < amb.size(); ++k)
        if (std::abs(to_double(amb[k])) >= top * (1.0 - 1e-9)) {
            lead = k;
            break;
        }
    if constexpr (is_exact_v<T>) {
        return scaled(c, T(T(1) / amb[lead]));
    } else {
        double s = std::sqrt(ctx.norm2(c));
        if (amb[lead] < 0) s = -s;
        return scaled(c, 1.0 / s);
    }
}

/// u, v and the six bases of W.
template <class T>
ModuleBases<T> standard_bases(const ModuleContext<T>& ctx, const ModuleScalars<T>& s, Audit& audit) {
    using detail::vec_residual;
    const int d = ctx.d;
    const double eps = ctx.eps;
    ModuleBases<T> b;
    b.u = normalize_direction(ctx, detail::rank_one_generator(ctx.E[0]));
    b.v = normalize_direction(ctx, detail::rank_one_generator(ctx.Es[0]));

    Vec<T> apv = b.v, asu = b.u;
    for (int i = 0; i <= d; ++i) {
        if (i > 0) {
            apv = ctx.A.apply(apv);
            asu = ctx.As.apply(asu);
        }
        b.power.push_back(ctx.Es[i].apply(apv));
        b.dual_power.push_back(ctx.E[i].apply(asu));
        b.standard.push_back(ctx.Es[i].apply(b.u));
        b.dual_standard.push_back(ctx.E[i].apply(b.v));
    }
    auto tau = partial_products(std::vector<T>(ctx.theta.begin(), ctx.theta.end() - 1));
    std::vector<T> reversed(ctx.theta.rbegin(), ctx.theta.rend() - 1);
    auto eta = partial_products(reversed);
    for (int i = 0; i <= d; ++i) {
        b.split.push_back(poly_apply(tau[i], ctx.A, b.v));
        b.down_split.push_back(poly_apply(eta[i], ctx.A, b.v));
    }

    auto check_family = [&](const char* name, const std::vector<Vec<T>>& fam, bool orthogonal) {
        for (int i = 0; i <= d; ++i)
            audit.require("basis_nonzero", !is_zero_vector(fam[i], eps), std::string(name) + "[" + std::to_string(i) + "]");
        if (rank(Matrix<T>::from_columns(fam, ctx.dim()), eps) != ctx.dim())
            audit.require("basis_independent", false, name);
        if (!orthogonal) return;
        for (int i = 0; i <= d; ++i)
            for (int j = i + 1; j <= d; ++j) audit.record("basis_orthogonal", detail::cosine(ctx, fam[i], fam[j]));
    };
    check_family("power", b.power, true);
    check_family("dual_power", b.dual_power, true);
    check_family("standard", b.standard, true);
    check_family("dual_standard", b.dual_standard, true);
    check_family("split", b.split, false);
    check_family("down_split", b.down_split, false);

    // a standard basis sums to u, a dual standard basis to v
    Vec<T> total(ctx.dim(), T(0)), total_star(ctx.dim(), T(0));
    for (int i = 0; i <= d; ++i) {
        total = total + b.standard[i];
        total_star = total_star + b.dual_standard[i];
    }
    audit.record("standard_sum", vec_residual(total, b.u));
    audit.record("standard_sum", vec_residual(total_star, b.v));
    audit.record("standard_sum", vec_residual(ctx.E[0].apply(total), total));
    audit.record("standard_sum", vec_residual(ctx.Es[0].apply(total_star), total_star));

    // p_i(A)v = E*_{r+i}A^i v, p_{d+1}(A)v = 0, p_{d+1} = prod (lambda - theta_{t+i})
    auto p = three_term_sequence(s.a, s.x);
    auto ps = three_term_sequence(s.a_star, s.x_star);
    const Vec<T> zero(ctx.dim(), T(0));
    for (int i = 0; i <= d; ++i) {
        audit.record("p_push", vec_residual(poly_apply(p[i], ctx.A, b.v), b.power[i]));
        audit.record("p_push", vec_residual(poly_apply(ps[i], ctx.As, b.u), b.dual_power[i]));
    }
    audit.record("p_push", vec_residual(poly_apply(p[d + 1], ctx.A, b.v), zero) / std::max(1.0, max_abs(b.v)));
    audit.record("p_push", vec_residual(poly_apply(ps[d + 1], ctx.As, b.u), zero) / std::max(1.0, max_abs(b.u)));
    audit.record("p_last_roots", poly_rel_diff(p[d + 1], Polynomial<T>::from_roots(ctx.theta)));
    audit.record("p_last_roots", poly_rel_diff(ps[d + 1], Polynomial<T>::from_roots(ctx.theta_star)));
    return b;
}

template <class T>
struct RepMatrices {
    Matrix<T> a_flat, a_star_flat;    ///< standard basis
    Matrix<T> a_sharp, a_star_sharp;  ///< dual standard basis
    Matrix<T> a_power;                ///< power basis
    Matrix<T> a_star_dual_power;      ///< dual power basis
    Matrix<T> a_split, a_star_split;  ///< split basis
    Matrix<T> a_down, a_star_down;    ///< down-split basis
};

/// Representation matrices in the standard, dual standard and power bases; exports b_i, c_i, b*_i, c*_i.
template <class T>
RepMatrices<T> rep_matrices(const ModuleContext<T>& ctx, const ModuleBases<T>& b, ModuleScalars<T>& s, Audit& audit) {
    using detail::mat_residual;
    const int d = ctx.d;
    const std::size_t m = ctx.dim();
    RepMatrices<T> rep;
    rep.a_flat = detail::represent(ctx.A, b.standard, ctx.eps);
    rep.a_star_flat = detail::represent(ctx.As, b.standard, ctx.eps);
    rep.a_sharp = detail::represent(ctx.A, b.dual_standard, ctx.eps);
    rep.a_star_sharp = detail::represent(ctx.As, b.dual_standard, ctx.eps);
    rep.a_power = detail::represent(ctx.A, b.power, ctx.eps);
    rep.a_star_dual_power = detail::represent(ctx.As, b.dual_power, ctx.eps);

    audit.record("flat_sharp_diagonal", mat_residual(rep.a_star_flat, Matrix<T>::diagonal(ctx.theta_star)));
    audit.record("flat_sharp_diagonal", mat_residual(rep.a_sharp, Matrix<T>::diagonal(ctx.theta)));

    s.b.assign(d + 1, T(0));
    s.c.assign(d + 1, T(0));
    s.b_star.assign(d + 1, T(0));
    s.c_star.assign(d + 1, T(0));
    for (int i = 0; i <= d; ++i) {
        if (i < d) {
            s.b[i] = rep.a_flat(i, i + 1);
            s.b_star[i] = rep.a_star_sharp(i, i + 1);
        }
        if (i > 0) {
            s.c[i] = rep.a_flat(i, i - 1);
            s.c_star[i] = rep.a_star_sharp(i, i - 1);
        }
    }
    // tridiagonal with diagonal a_i and constant row sums
    auto expected_tridiagonal = [&](const std::vector<T>& diag, const std::vector<T>& bb, const std::vector<T>& cc) {
        Matrix<T> x(m, m);
        for (int i = 0; i <= d; ++i) {
            x(i, i) = diag[i];
            if (i < d) x(i, i + 1) = bb[i];
            if (i > 0) x(i, i - 1) = cc[i];
        }
        return x;
    };
    audit.record("flat_tridiagonal", mat_residual(rep.a_flat, expected_tridiagonal(s.a, s.b, s.c)));
    audit.record("flat_tridiagonal", mat_residual(rep.a_star_sharp, expected_tridiagonal(s.a_star, s.b_star, s.c_star)));
    for (int i = 0; i <= d; ++i) {
        T row(0), row_star(0);
        for (std::size_t j = 0; j < m; ++j) {
            row += rep.a_flat(i, j);
            row_star += rep.a_star_sharp(i, j);
        }
        audit.compare("row_sum", row, ctx.theta[0]);
        audit.compare("row_sum", row_star, ctx.theta_star[0]);
        audit.compare("abc_sum", s.c[i] + s.a[i] + s.b[i], ctx.theta[0]);
        audit.compare("abc_sum", s.c_star[i] + s.a_star[i] + s.b_star[i], ctx.theta_star[0]);
        if (i < d) {
            audit.require("bc_nonzero", !is_zero(s.b[i], ctx.eps), "b_" + std::to_string(i));
            audit.require("bc_nonzero", !is_zero(s.b_star[i], ctx.eps), "b*_" + std::to_string(i));
        }
        if (i > 0) {
            audit.require("bc_nonzero", !is_zero(s.c[i], ctx.eps), "c_" + std::to_string(i));
            audit.require("bc_nonzero", !is_zero(s.c_star[i], ctx.eps), "c*_" + std::to_string(i));
            audit.compare("bc_product", s.b[i - 1] * s.c[i], s.x[i]);
            audit.compare("bc_product", s.b_star[i - 1] * s.c_star[i], s.x_star[i]);
            audit.compare("k_recurrence", s.k[i] * s.c[i], s.k[i - 1] * s.b[i - 1]);
            audit.compare("k_recurrence", s.k_star[i] * s.c_star[i], s.k_star[i - 1] * s.b_star[i - 1]);
        }
    }
    // k_i = b_0..b_{i-1} / (c_1..c_i) and b_0..b_{i-1} = p_i(theta_t)
    auto p = three_term_sequence(s.a, s.x);
    auto ps = three_term_sequence(s.a_star, s.x_star);
    T bp(1), cp(1), bps(1), cps(1);
    for (int i = 0; i <= d; ++i) {
        if (i > 0) {
            bp *= s.b[i - 1];
            cp *= s.c[i];
            bps *= s.b_star[i - 1];
            cps *= s.c_star[i];
        }
        audit.compare("k_product", bp / cp, s.k[i]);
        audit.compare("k_product", bps / cps, s.k_star[i]);
        audit.compare("b_product", bp, p[i](ctx.theta[0]));
        audit.compare("b_product", bps, ps[i](ctx.theta_star[0]));
    }
    // power basis: subdiagonal 1, diagonal a_i, superdiagonal x_i
    auto expected_power = [&](const std::vector<T>& diag, const std::vector<T>& xx) {
        Matrix<T> x(m, m);
        for (int i = 0; i <= d; ++i) {
            x(i, i) = diag[i];
            if (i < d) {
                x(i + 1, i) = T(1);
                x(i, i + 1) = xx[i + 1];
            }
        }
        return x;
    };
    audit.record("power_representation", mat_residual(rep.a_power, expected_power(s.a, s.x)));
    audit.record("power_representation", mat_residual(rep.a_star_dual_power, expected_power(s.a_star, s.x_star)));
    return rep;
}

/// Split subspaces U_i and U_i (down), the split sequences and the parameter array.
template <class T>
ParameterArray<T> split_decomposition(const ModuleContext<T>& ctx, const ModuleBases<T>& b, RepMatrices<T>& rep,
                                      Audit& audit) {
    using detail::mat_residual;
    using detail::vec_residual;
    const int d = ctx.d;
    const std::size_t m = ctx.dim();
    const double eps = ctx.eps;
    ParameterArray<T> pa;
    pa.r = ctx.r;
    pa.t = ctx.t;
    pa.d = d;
    pa.theta = ctx.theta;
    pa.theta_star = ctx.theta_star;

    for (int i = 0; i <= d; ++i) {
        std::vector<Vec<T>> low(b.standard.begin(), b.standard.begin() + i + 1);
        std::vector<Vec<T>> high(b.dual_standard.begin() + i, b.dual_standard.end());
        std::vector<Vec<T>> first(b.dual_standard.begin(), b.dual_standard.begin() + (d - i) + 1);
        auto s_low = Subspace<T>::span(m, low, eps);
        auto u = intersect(s_low, Subspace<T>::span(m, high, eps), eps);
        auto u_down = intersect(s_low, Subspace<T>::span(m, first, eps), eps);
        audit.require("split_dimension", u.dim() == 1, "U_" + std::to_string(i));
        audit.require("split_dimension", u_down.dim() == 1, "U_" + std::to_string(i) + " (down)");
        if (u.dim() == 1) audit.record("split_intersection", vec_residual(u.project(b.split[i]), b.split[i]));
        if (u_down.dim() == 1)
            audit.record("split_intersection", vec_residual(u_down.project(b.down_split[i]), b.down_split[i]));
    }

    auto eigen = [&](const Vec<T>& w, const T& th, const T& ths, const char* name) {
        Vec<T> op = detail::shifted(ctx.A, th).apply(detail::shifted(ctx.As, ths).apply(w));
        T value = ctx.inner(w, op) / ctx.norm2(w);
        audit.record(name, vec_residual(op, scaled(w, value)));
        audit.require("split_nonzero", !is_zero(value, eps), name);
        return value;
    };
    for (int i = 1; i <= d; ++i) {
        pa.varphi.push_back(eigen(b.split[i], ctx.theta[i - 1], ctx.theta_star[i], "varphi_eigen"));
        pa.phi.push_back(eigen(b.down_split[i], ctx.theta[d - i + 1], ctx.theta_star[i], "phi_eigen"));
    }

    rep.a_split = detail::represent(ctx.A, b.split, eps);
    rep.a_star_split = detail::represent(ctx.As, b.split, eps);
    rep.a_down = detail::represent(ctx.A, b.down_split, eps);
    rep.a_star_down = detail::represent(ctx.As, b.down_split, eps);
    Matrix<T> la(m, m), ua(m, m), ld(m, m), ud(m, m);
    for (int i = 0; i <= d; ++i) {
        la(i, i) = ctx.theta[i];
        ld(i, i) = ctx.theta[d - i];
        ua(i, i) = ctx.theta_star[i];
        ud(i, i) = ctx.theta_star[i];
        if (i < d) {
            la(i + 1, i) = T(1);
            ld(i + 1, i) = T(1);
            ua(i, i + 1) = pa.vp(i + 1);
            ud(i, i + 1) = pa.ph(i + 1);
        }
    }
    audit.record("split_representation", mat_residual(rep.a_split, la));
    audit.record("split_representation", mat_residual(rep.a_star_split, ua));
    audit.record("split_representation", mat_residual(rep.a_down, ld));
    audit.record("split_representation", mat_residual(rep.a_star_down, ud));
    audit_split_relations(pa, audit);
    return pa;
}

/// Inner products between the standard and dual standard bases and the transition formulas.
template <class T>
void inner_product_audit(const ModuleContext<T>& ctx, const ModuleBases<T>& b, const ModuleScalars<T>& s,
                         Audit& audit) {
    using detail::vec_residual;
    const int d = ctx.d;
    const T uu = ctx.norm2(b.u);
    const T vv = ctx.norm2(b.v);
    const T uv = ctx.inner(b.u, b.v);
    audit.require("uv_nonzero", !is_zero(uv, ctx.eps, std::sqrt(to_double(uu) * to_double(vv))));
    audit.compare("er_et", ctx.inner(b.standard[0], b.dual_standard[0]), uv / s.nu);
    audit.record("er_et", vec_residual(b.standard[0], scaled(b.v, T(uv / vv))));
    audit.record("er_et", vec_residual(b.dual_standard[0], scaled(b.u, T(uv / uu))));
    audit.compare("er_et", s.nu * uv * uv, uu * vv);

    auto p = three_term_sequence(s.a, s.x);
    auto ps = three_term_sequence(s.a_star, s.x_star);
    std::vector<Polynomial<T>> vpoly, vspoly, upoly, uspoly;
    T cp(1), cps(1);
    for (int i = 0; i <= d; ++i) {
        if (i > 0) {
            cp *= s.c[i];
            cps *= s.c_star[i];
        }
        vpoly.push_back(p[i] * T(T(1) / cp));
        vspoly.push_back(ps[i] * T(T(1) / cps));
        upoly.push_back(p[i] * T(T(1) / p[i](ctx.theta[0])));
        uspoly.push_back(ps[i] * T(T(1) / ps[i](ctx.theta_star[0])));
    }
    for (int i = 0; i <= d; ++i) {
        audit.compare("inner_same", ctx.norm2(b.standard[i]), uu * s.k[i] / s.nu);
        audit.compare("inner_same", ctx.norm2(b.dual_standard[i]), vv * s.k_star[i] / s.nu);
        // v_i(A) E*_r u = E*_{r+i} u and the dual
        audit.record("v_push", vec_residual(poly_apply(vpoly[i], ctx.A, b.standard[0]), b.standard[i]));
        audit.record("v_push", vec_residual(poly_apply(vspoly[i], ctx.As, b.dual_standard[0]), b.dual_standard[i]));
        Vec<T> trans(ctx.dim(), T(0)), trans_star(ctx.dim(), T(0));
        for (int j = 0; j <= d; ++j) {
            const T lhs = ctx.inner(b.standard[i], b.dual_standard[j]);
            const T common = s.k[i] * s.k_star[j] * uv / s.nu;
            audit.compare("inner_different", lhs, upoly[i](ctx.theta[j]) * common);
            audit.compare("inner_different", lhs, uspoly[j](ctx.theta_star[i]) * common);
            axpy(vpoly[i](ctx.theta[j]), b.dual_standard[j], trans);
            axpy(vspoly[i](ctx.theta_star[j]), b.standard[j], trans_star);
        }
        audit.record("transition", vec_residual(scaled(trans, T(uv / vv)), b.standard[i]));
        audit.record("transition", vec_residual(scaled(trans_star, T(uv / uu)), b.dual_standard[i]));
    }
}

template <class T>
struct ModuleAnalysis {
    ModuleProfile profile;
    ModuleScalars<T> scalars;
    ParameterArray<T> params;
    RepMatrices<T> reps;
    ModuleBases<T> bases;
    Audit audit;
};

/// Runs the whole matrix pipeline on one thin module with d >= 1.
template <class T>
ModuleAnalysis<T> analyze_module(const TModule<T>& module, const Matrix<T>& a, const DualData<T>& dual,
                                 const SpectralData<T>& sd, double eps) {
    ModuleAnalysis<T> out;
    out.profile = module.profile;
    auto ctx = make_module_context(module, a, dual, sd, eps);
    out.scalars.origin = "matrix";
    structure_audit(ctx, out.audit);
    trace_scalars(ctx, out.scalars, out.audit);
    overlap_scalars(ctx, out.scalars, out.audit);
    out.bases = standard_bases(ctx, out.scalars, out.audit);
    out.reps = rep_matrices(ctx, out.bases, out.scalars, out.audit);
    out.params = split_decomposition(ctx, out.bases, out.reps, out.audit);
    inner_product_audit(ctx, out.bases, out.scalars, out.audit);
    return out;
}

}  // namespace drg
