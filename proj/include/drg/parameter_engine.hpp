/**
 * @file parameter_engine.hpp
 * @brief Formula pipeline: every scalar and polynomial of a thin module reconstructed from its
 *        parameter array alone, with each quantity computed by at least two independent closed forms.
 */
#pragma once

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "drg/audit.hpp"
#include "drg/errors.hpp"
#include "drg/matrix.hpp"
#include "drg/parameter_array.hpp"
#include "drg/polynomial.hpp"

namespace drg {

struct ValidationIssue {
    std::string what;
    int index = -1;  ///< 1-based for split sequences, 0-based for eigenvalue sequences, -1 if global
};

struct ValidationReport {
    std::vector<ValidationIssue> issues;
    SplitRelationResiduals split;
    bool valid() const { return issues.empty(); }
};

namespace detail {

/// Largest magnitude in the eigenvalue data, used to scale zero tests.
template <class T>
double array_scale(const ParameterArray<T>& pa) {
    double s = 1.0;
    for (const auto& x : pa.theta) s = std::max(s, std::abs(to_double(x)));
    for (const auto& x : pa.theta_star) s = std::max(s, std::abs(to_double(x)));
    return s;
}

template <class T>
void check_distinct(const std::vector<T>& seq, const std::string& name, double eps, ValidationReport& rep) {
    for (std::size_t i = 0; i < seq.size(); ++i)
        for (std::size_t j = i + 1; j < seq.size(); ++j)
            if (near(seq[i], seq[j], eps))
                rep.issues.push_back({name + " entries " + std::to_string(i) + " and " + std::to_string(j) +
                                          " coincide",
                                      static_cast<int>(j)});
}

}  // namespace detail

/// Lengths, distinct eigenvalues, nonzero split sequences, and the two relations tying the split
/// sequences together. Each problem is reported with its index.
template <class T>
ValidationReport validate_parameter_array(const ParameterArray<T>& pa, double eps) {
    ValidationReport rep;
    const int d = pa.d;
    if (d < 0 || pa.r < 0 || pa.t < 0) {
        rep.issues.push_back({"r, t and d must be nonnegative", -1});
        return rep;
    }
    const auto n = static_cast<std::size_t>(d);
    auto len = [&](const auto& v, std::size_t want, const std::string& name) {
        if (v.size() != want)
            rep.issues.push_back(
                {name + " has length " + std::to_string(v.size()) + ", expected " + std::to_string(want), -1});
    };
    len(pa.theta, n + 1, "theta");
    len(pa.theta_star, n + 1, "theta_star");
    len(pa.varphi, n, "varphi");
    len(pa.phi, n, "phi");
    if (!rep.valid()) return rep;

    detail::check_distinct(pa.theta, "theta", eps, rep);
    detail::check_distinct(pa.theta_star, "theta_star", eps, rep);
    const double scale = detail::array_scale(pa);
    for (int i = 1; i <= d; ++i) {
        if (is_zero(pa.vp(i), eps, scale)) rep.issues.push_back({"varphi_" + std::to_string(i) + " is zero", i});
        if (is_zero(pa.ph(i), eps, scale)) rep.issues.push_back({"phi_" + std::to_string(i) + " is zero", i});
    }
    if (!rep.valid() || d == 0) return rep;

    rep.split = split_relation_residuals(pa);
    for (int i = 1; i <= d; ++i) {
        if (rep.split.varphi[static_cast<std::size_t>(i - 1)] > eps)
            rep.issues.push_back({"varphi_" + std::to_string(i) + " disagrees with the value recomputed from phi", i});
        if (rep.split.phi[static_cast<std::size_t>(i - 1)] > eps)
            rep.issues.push_back({"phi_" + std::to_string(i) + " disagrees with the value recomputed from varphi", i});
    }
    return rep;
}

/// Throws ValidationError carrying the first issue.
template <class T>
void require_valid(const ParameterArray<T>& pa, double eps) {
    auto rep = validate_parameter_array(pa, eps);
    if (!rep.valid()) throw ValidationError(rep.issues.front().what, rep.issues.front().index);
}

/// Evaluation helpers for the tau/eta products and the split-sequence products of a parameter array.
template <class T>
class ArrayTerms {
public:
    ArrayTerms(const ParameterArray<T>& pa, double eps) : pa_(pa), eps_(eps), scale_(detail::array_scale(pa)) {}

    int d() const { return pa_.d; }
    const T& th(int i) const { return pa_.th(i); }
    const T& ts(int i) const { return pa_.ths(i); }
    T vp(int i) const { return pa_.vp(i); }
    T ph(int i) const { return pa_.ph(i); }

    /// prod_{h<i} (x - theta_{t+h}) and the starred / reversed variants.
    T tau(int i, const T& x) const { return prod(i, x, [&](int h) { return th(h); }); }
    T tau_s(int i, const T& x) const { return prod(i, x, [&](int h) { return ts(h); }); }
    T eta(int i, const T& x) const { return prod(i, x, [&](int h) { return th(d() - h); }); }
    T eta_s(int i, const T& x) const { return prod(i, x, [&](int h) { return ts(d() - h); }); }

    /// varphi_1 ... varphi_i
    T vp_prod(int i) const {
        T p(1);
        for (int h = 1; h <= i; ++h) p *= vp(h);
        return p;
    }
    /// phi_1 ... phi_i
    T ph_prod(int i) const {
        T p(1);
        for (int h = 1; h <= i; ++h) p *= ph(h);
        return p;
    }
    /// phi_d phi_{d-1} ... phi_{d-i+1}
    T ph_rev_prod(int i) const {
        T p(1);
        for (int h = 0; h < i; ++h) p *= ph(d() - h);
        return p;
    }

    /// num / den, refusing a denominator that vanishes.
    T div(const T& num, const T& den, const char* label) const {
        if (is_zero(den, eps_, scale_)) throw FormulaMismatch(std::string("vanishing denominator in ") + label);
        return num / den;
    }

private:
    template <class F>
    T prod(int i, const T& x, F root) const {
        T p(1);
        for (int h = 0; h < i; ++h) p *= x - root(h);
        return p;
    }

    const ParameterArray<T>& pa_;
    double eps_;
    double scale_;
};

namespace detail {

/// b_i, c_i from a_i and varphi_1 (rows 1..d-1 solve the two three-term identities); X is the
/// eigenvalue sequence, Y the dual one. Entries outside the formula's range stay zero.
template <class T, class FX, class FY>
void intarray_rational(int d, const T& varphi1, FX X, FY Y, const std::vector<T>& a, const ArrayTerms<T>& f,
                       std::vector<T>& b, std::vector<T>& c) {
    b.assign(static_cast<std::size_t>(d + 1), T(0));
    c.assign(static_cast<std::size_t>(d + 1), T(0));
    b[0] = f.div(varphi1, T(Y(1) - Y(0)), "b_0");
    for (int i = 1; i <= d - 1; ++i) {
        const T ai = a[static_cast<std::size_t>(i)];
        T common = T((X(0) - X(1)) * (Y(0) - Y(i))) + varphi1;
        b[static_cast<std::size_t>(i)] =
            f.div(T((X(0) - ai) * (Y(i) - Y(i - 1)) + common), T(Y(i + 1) - Y(i - 1)), "b_i");
        c[static_cast<std::size_t>(i)] =
            f.div(T((X(0) - ai) * (Y(i) - Y(i + 1)) + common), T(Y(i - 1) - Y(i + 1)), "c_i");
    }
    c[static_cast<std::size_t>(d)] = f.div(T(varphi1 + (X(1) - X(0)) * (Y(d) - Y(0))), T(Y(d - 1) - Y(d)), "c_d");
}

/// Rows 1..d-1 of b_i, c_i from the eigenvalue data and varphi_1 only (requires d >= 2).
template <class T, class FX, class FY>
void intarray_free(int d, const T& varphi1, FX X, FY Y, const ArrayTerms<T>& f, std::vector<T>& b,
                   std::vector<T>& c) {
    b.assign(static_cast<std::size_t>(d + 1), T(0));
    c.assign(static_cast<std::size_t>(d + 1), T(0));
    const T ratio = f.div(T(Y(1) - Y(d - 1)), T(Y(d) - Y(0)), "f_i");
    for (int i = 1; i <= d - 1; ++i) {
        const T lead = Y(i) - Y(0);
        auto fpm = [&](int s) { return T(Y(1) - Y(i - s) - lead * ratio); };
        auto gpm = [&](int s) {
            return T(lead * ((X(2) - X(1)) * (Y(i) - Y(d)) - (X(1) - X(0)) * (Y(i - s) - Y(d - 1))));
        };
        b[static_cast<std::size_t>(i)] = f.div(T(varphi1 * fpm(1) + gpm(1)),
                                               T((Y(i + 1) - Y(i)) * (Y(i + 1) - Y(i - 1))), "b_i");
        c[static_cast<std::size_t>(i)] = f.div(T(varphi1 * fpm(-1) + gpm(-1)),
                                               T((Y(i - 1) - Y(i)) * (Y(i - 1) - Y(i + 1))), "c_i");
    }
}

template <class T>
void compare_range(Audit& audit, const std::string& name, const std::vector<T>& x, const std::vector<T>& y, int lo,
                   int hi) {
    for (int i = lo; i <= hi; ++i) audit.compare(name, x[static_cast<std::size_t>(i)], y[static_cast<std::size_t>(i)]);
}

}  // namespace detail

template <class T>
struct DerivedScalars {
    ModuleScalars<T> scalars;
    Audit audit;
};

/// Throws FormulaMismatch naming every audit entry above eps.
inline void require_audit(const Audit& audit, double eps, const std::string& context) {
    auto bad = audit.violations(eps);
    if (bad.empty()) return;
    std::string msg = context + ": closed forms disagree:";
    for (const auto& b : bad) msg += " " + b;
    throw FormulaMismatch(msg);
}

/// All module scalars from the parameter array. Reported values: a_i and a*_i from the varphi forms,
/// b, c (and duals) from the tau/eta product forms, x, k, k*, nu from their product forms; every
/// alternative closed form is recorded in the audit. With `strict`, disagreement above eps throws.
template <class T>
DerivedScalars<T> derived_scalars(const ParameterArray<T>& pa, double eps, bool strict = true) {
    require_valid(pa, eps);
    const int d = pa.d;
    const auto n = static_cast<std::size_t>(d + 1);
    ArrayTerms<T> f(pa, eps);
    DerivedScalars<T> out;
    ModuleScalars<T>& s = out.scalars;
    Audit& audit = out.audit;
    s.origin = "formula";
    s.a.assign(n, T(0));
    s.a_star.assign(n, T(0));
    s.b.assign(n, T(0));
    s.b_star.assign(n, T(0));
    s.c.assign(n, T(0));
    s.c_star.assign(n, T(0));
    s.x.assign(n, T(0));
    s.x_star.assign(n, T(0));
    s.k.assign(n, T(0));
    s.k_star.assign(n, T(0));
    auto at = [](std::vector<T>& v, int i) -> T& { return v[static_cast<std::size_t>(i)]; };

    // a_i, a*_i: varphi forms (reported) against phi forms
    for (int i = 0; i <= d; ++i) {
        T a1 = f.th(i), a2 = f.th(d - i), s1 = f.ts(i), s2 = f.ts(d - i);
        if (i > 0) {
            a1 += f.div(f.vp(i), T(f.ts(i) - f.ts(i - 1)), "a_i");
            a2 += f.div(f.ph(i), T(f.ts(i) - f.ts(i - 1)), "a_i");
            s1 += f.div(f.vp(i), T(f.th(i) - f.th(i - 1)), "a*_i");
            s2 += f.div(f.ph(d - i + 1), T(f.th(i) - f.th(i - 1)), "a*_i");
        }
        if (i < d) {
            a1 += f.div(f.vp(i + 1), T(f.ts(i) - f.ts(i + 1)), "a_i");
            a2 += f.div(f.ph(i + 1), T(f.ts(i) - f.ts(i + 1)), "a_i");
            s1 += f.div(f.vp(i + 1), T(f.th(i) - f.th(i + 1)), "a*_i");
            s2 += f.div(f.ph(d - i), T(f.th(i) - f.th(i + 1)), "a*_i");
        }
        at(s.a, i) = a1;
        at(s.a_star, i) = s1;
        audit.compare("a_varphi_vs_phi", a1, a2);
        audit.compare("a_star_varphi_vs_phi", s1, s2);
    }
    {
        T sa(0), st(0), sas(0), sts(0);
        for (int i = 0; i <= d; ++i) {
            sa += at(s.a, i);
            st += f.th(i);
            sas += at(s.a_star, i);
            sts += f.ts(i);
        }
        audit.compare("a_sum", sa, st);
        audit.compare("a_star_sum", sas, sts);
    }

    // b, c and duals: product forms
    for (int i = 0; i < d; ++i) {
        at(s.b, i) = f.div(T(f.vp(i + 1) * f.tau_s(i, f.ts(i))), f.tau_s(i + 1, f.ts(i + 1)), "b_i");
        at(s.b_star, i) = f.div(T(f.vp(i + 1) * f.tau(i, f.th(i))), f.tau(i + 1, f.th(i + 1)), "b*_i");
    }
    for (int i = 1; i <= d; ++i) {
        at(s.c, i) = f.div(T(f.ph(i) * f.eta_s(d - i, f.ts(i))), f.eta_s(d - i + 1, f.ts(i - 1)), "c_i");
        at(s.c_star, i) =
            f.div(T(f.ph(d - i + 1) * f.eta(d - i, f.th(i))), f.eta(d - i + 1, f.th(i - 1)), "c*_i");
    }
    const double scale = detail::array_scale(pa);
    for (int i = 0; i < d; ++i) {
        audit.require("b_nonzero", !is_zero(at(s.b, i), eps, scale), "b_" + std::to_string(i));
        audit.require("b_star_nonzero", !is_zero(at(s.b_star, i), eps, scale), "b*_" + std::to_string(i));
        audit.require("c_nonzero", !is_zero(at(s.c, i + 1), eps, scale), "c_" + std::to_string(i + 1));
        audit.require("c_star_nonzero", !is_zero(at(s.c_star, i + 1), eps, scale), "c*_" + std::to_string(i + 1));
    }
    for (int i = 0; i <= d; ++i) {
        audit.compare("abc_sum", T(at(s.a, i) + at(s.b, i) + at(s.c, i)), f.th(0));
        audit.compare("abc_star_sum", T(at(s.a_star, i) + at(s.b_star, i) + at(s.c_star, i)), f.ts(0));
    }

    if (d >= 1) {
        auto X = [&](int j) { return f.th(j); };
        auto Y = [&](int j) { return f.ts(j); };
        std::vector<T> b1, c1, b2, c2;
        detail::intarray_rational(d, f.vp(1), X, Y, s.a, f, b1, c1);
        detail::compare_range(audit, "b_rational_form", b1, s.b, 0, d - 1);
        detail::compare_range(audit, "c_rational_form", c1, s.c, 1, d);
        detail::intarray_rational(d, f.vp(1), Y, X, s.a_star, f, b1, c1);
        detail::compare_range(audit, "b_star_rational_form", b1, s.b_star, 0, d - 1);
        detail::compare_range(audit, "c_star_rational_form", c1, s.c_star, 1, d);
        if (d >= 2) {
            detail::intarray_free(d, f.vp(1), X, Y, f, b2, c2);
            detail::compare_range(audit, "b_eigenvalue_form", b2, s.b, 1, d - 1);
            detail::compare_range(audit, "c_eigenvalue_form", c2, s.c, 1, d - 1);
            detail::intarray_free(d, f.vp(1), Y, X, f, b2, c2);
            detail::compare_range(audit, "b_star_eigenvalue_form", b2, s.b_star, 1, d - 1);
            detail::compare_range(audit, "c_star_eigenvalue_form", c2, s.c_star, 1, d - 1);

            // two expressions for varphi_2
            const T r1 = f.div(T(f.th(1) - f.th(d - 1)), T(f.th(0) - f.th(d)), "varphi_2");
            const T r2 = f.div(T(f.ts(1) - f.ts(d - 1)), T(f.ts(0) - f.ts(d)), "varphi_2");
            T v2a = f.vp(1) * (1 + r1) + (f.ts(1) - f.ts(0)) * (f.th(d) + f.th(d - 1) - f.th(0) - f.th(1)) +
                    (f.ts(2) - f.ts(0)) * (f.th(1) - f.th(d));
            T v2b = f.vp(1) * (1 + r2) + (f.th(1) - f.th(0)) * (f.ts(d) + f.ts(d - 1) - f.ts(0) - f.ts(1)) +
                    (f.th(2) - f.th(0)) * (f.ts(1) - f.ts(d));
            audit.compare("varphi2_forms", v2a, f.vp(2));
            audit.compare("varphi2_forms", v2b, f.vp(2));
        }
    }

    // three-term identities in tau_1, tau_2 (entries outside 0..d vanish)
    auto get = [&](const std::vector<T>& v, int i) { return (i < 0 || i > d) ? T(0) : v[static_cast<std::size_t>(i)]; };
    auto ts_at = [&](int i) { return (i < 0 || i > d) ? T(0) : f.ts(i); };
    auto th_at = [&](int i) { return (i < 0 || i > d) ? T(0) : f.th(i); };
    for (int i = 0; i <= d && d >= 1; ++i) {
        T lhs = get(s.c, i) * f.tau_s(1, ts_at(i - 1)) + get(s.a, i) * f.tau_s(1, f.ts(i)) +
                get(s.b, i) * f.tau_s(1, ts_at(i + 1));
        audit.compare("three_term_tau", lhs, T(f.vp(1) + f.th(1) * f.tau_s(1, f.ts(i))));
        T lhs_s = get(s.c_star, i) * f.tau(1, th_at(i - 1)) + get(s.a_star, i) * f.tau(1, f.th(i)) +
                  get(s.b_star, i) * f.tau(1, th_at(i + 1));
        audit.compare("three_term_tau", lhs_s, T(f.vp(1) + f.ts(1) * f.tau(1, f.th(i))));
        if (d >= 2) {
            T l2 = get(s.c, i) * f.tau_s(2, ts_at(i - 1)) + get(s.a, i) * f.tau_s(2, f.ts(i)) +
                   get(s.b, i) * f.tau_s(2, ts_at(i + 1));
            audit.compare("three_term_tau2", l2, T(f.vp(2) * f.tau_s(1, f.ts(i)) + f.th(2) * f.tau_s(2, f.ts(i))));
            T l2s = get(s.c_star, i) * f.tau(2, th_at(i - 1)) + get(s.a_star, i) * f.tau(2, f.th(i)) +
                    get(s.b_star, i) * f.tau(2, th_at(i + 1));
            audit.compare("three_term_tau2", l2s, T(f.vp(2) * f.tau(1, f.th(i)) + f.ts(2) * f.tau(2, f.th(i))));
        }
    }

    // x_i, x*_i
    for (int i = 1; i <= d; ++i) {
        at(s.x, i) = f.div(T(f.vp(i) * f.ph(i) * f.tau_s(i - 1, f.ts(i - 1)) * f.eta_s(d - i, f.ts(i))),
                           T(f.tau_s(i, f.ts(i)) * f.eta_s(d - i + 1, f.ts(i - 1))), "x_i");
        at(s.x_star, i) = f.div(T(f.vp(i) * f.ph(d - i + 1) * f.tau(i - 1, f.th(i - 1)) * f.eta(d - i, f.th(i))),
                                T(f.tau(i, f.th(i)) * f.eta(d - i + 1, f.th(i - 1))), "x*_i");
        audit.compare("x_bc", T(at(s.b, i - 1) * at(s.c, i)), at(s.x, i));
        audit.compare("x_star_bc", T(at(s.b_star, i - 1) * at(s.c_star, i)), at(s.x_star, i));
    }

    // k_i, k*_i, nu
    const T eta_d0 = f.eta(d, f.th(0));
    const T eta_s_d0 = f.eta_s(d, f.ts(0));
    T bprod(1), cprod(1), bsprod(1), csprod(1), ksum(0), kssum(0);
    for (int i = 0; i <= d; ++i) {
        at(s.k, i) = f.div(T(f.vp_prod(i) * eta_s_d0), T(f.ph_prod(i) * f.tau_s(i, f.ts(i)) * f.eta_s(d - i, f.ts(i))),
                           "k_i");
        at(s.k_star, i) = f.div(T(f.vp_prod(i) * eta_d0),
                                T(f.ph_rev_prod(i) * f.tau(i, f.th(i)) * f.eta(d - i, f.th(i))), "k*_i");
        if (i > 0) {
            bprod *= at(s.b, i - 1);
            cprod *= at(s.c, i);
            bsprod *= at(s.b_star, i - 1);
            csprod *= at(s.c_star, i);
            audit.compare("k_recurrence", T(at(s.k, i) * at(s.c, i)), T(at(s.k, i - 1) * at(s.b, i - 1)));
            audit.compare("k_star_recurrence", T(at(s.k_star, i) * at(s.c_star, i)),
                          T(at(s.k_star, i - 1) * at(s.b_star, i - 1)));
        }
        audit.compare("k_bc_product", T(bprod / cprod), at(s.k, i));
        audit.compare("k_star_bc_product", T(bsprod / csprod), at(s.k_star, i));
        ksum += at(s.k, i);
        kssum += at(s.k_star, i);
    }
    s.nu = f.div(T(eta_d0 * eta_s_d0), f.ph_prod(d), "nu");
    audit.compare("nu_k_sum", ksum, s.nu);
    audit.compare("nu_k_star_sum", kssum, s.nu);
    s.m.assign(n, T(0));
    s.m_star.assign(n, T(0));
    for (int i = 0; i <= d; ++i) {
        at(s.m, i) = at(s.k_star, i) / s.nu;
        at(s.m_star, i) = at(s.k, i) / s.nu;
    }

    // split sequences recovered from a_j and a*_j, four ways each
    for (int i = 1; i <= d; ++i) {
        T lo(0), hi(0), lo_s(0), hi_s(0), plo(0), phi_hi(0), plo_s(0), phi_hi_s(0);
        for (int j = 0; j <= d; ++j) {
            T dv = f.th(j) - at(s.a, j);
            T dvs = f.ts(j) - at(s.a_star, j);
            T dp = f.th(d - j) - at(s.a, j);
            T dps = f.ts(j) - at(s.a_star, d - j);
            (j < i ? lo : hi) += dv;
            (j < i ? lo_s : hi_s) += dvs;
            (j < i ? plo : phi_hi) += dp;
            (j < i ? plo_s : phi_hi_s) += dps;
        }
        const T dts = f.ts(i) - f.ts(i - 1);
        const T dth = f.th(i) - f.th(i - 1);
        const T dth_rev = f.th(d - i) - f.th(d - i + 1);
        audit.compare("varphi_forms", T(dts * lo), f.vp(i));
        audit.compare("varphi_forms", T(-dts * hi), f.vp(i));
        audit.compare("varphi_forms", T(dth * lo_s), f.vp(i));
        audit.compare("varphi_forms", T(-dth * hi_s), f.vp(i));
        audit.compare("phi_forms", T(dts * plo), f.ph(i));
        audit.compare("phi_forms", T(-dts * phi_hi), f.ph(i));
        audit.compare("phi_forms", T(dth_rev * plo_s), f.ph(i));
        audit.compare("phi_forms", T(-dth_rev * phi_hi_s), f.ph(i));
    }
    audit_split_relations(pa, audit);

    if (strict) require_audit(audit, eps, "derived_scalars");
    return out;
}

/// Coefficient vectors of the polynomials attached to a module. p and p* run over 0..d+1, the
/// others over 0..d.
template <class T>
struct PolynomialSequence {
    std::vector<Polynomial<T>> p, p_star;
    std::vector<Polynomial<T>> u, u_star;
    std::vector<Polynomial<T>> v, v_star;
    std::vector<Polynomial<T>> tau, tau_star;
    std::vector<Polynomial<T>> eta, eta_star;
};

template <class T>
struct PolynomialResult {
    PolynomialSequence<T> seq;
    Audit audit;
};

/// Builds p, u, v (and duals) from the three-term recurrence and rebuilds p and u from the tau and
/// eta expansions; the normalization identities are audited.
template <class T>
PolynomialResult<T> polynomial_sequences(const ParameterArray<T>& pa, const ModuleScalars<T>& ds, double eps,
                                         bool strict = true) {
    const int d = pa.d;
    ArrayTerms<T> f(pa, eps);
    PolynomialResult<T> out;
    auto& q = out.seq;
    Audit& audit = out.audit;

    q.p = three_term_sequence(ds.a, ds.x);
    q.p_star = three_term_sequence(ds.a_star, ds.x_star);
    std::vector<T> roots, roots_s, roots_rev, roots_s_rev;
    for (int h = 0; h <= d; ++h) {
        roots.push_back(f.th(h));
        roots_s.push_back(f.ts(h));
        roots_rev.push_back(f.th(d - h));
        roots_s_rev.push_back(f.ts(d - h));
    }
    auto head = [d](std::vector<Polynomial<T>> v) {
        v.resize(static_cast<std::size_t>(d + 1));
        return v;
    };
    q.tau = head(partial_products(roots));
    q.tau_star = head(partial_products(roots_s));
    q.eta = head(partial_products(roots_rev));
    q.eta_star = head(partial_products(roots_s_rev));

    auto P = [](const std::vector<Polynomial<T>>& v, int i) -> const Polynomial<T>& {
        return v[static_cast<std::size_t>(i)];
    };
    auto S = [](const std::vector<T>& v, int i) -> const T& { return v[static_cast<std::size_t>(i)]; };

    T bprod(1), bsprod(1), cprod(1), csprod(1);
    for (int i = 0; i <= d; ++i) {
        const auto& pi = P(q.p, i);
        const auto& psi = P(q.p_star, i);
        audit.record("p_monic", std::max(rel_err(pi.coeff(static_cast<std::size_t>(i)), T(1)),
                                         rel_err(psi.coeff(static_cast<std::size_t>(i)), T(1))));
        if (i > 0) {
            bprod *= S(ds.b, i - 1);
            bsprod *= S(ds.b_star, i - 1);
            cprod *= S(ds.c, i);
            csprod *= S(ds.c_star, i);
        }
        const T pt = pi(f.th(0));
        const T pst = psi(f.ts(0));
        audit.compare("b_product_at_theta0", bprod, pt);
        audit.compare("b_product_at_theta0", bsprod, pst);
        audit.compare("p_at_theta0", T(f.vp_prod(i) / f.tau_s(i, f.ts(i))), pt);
        audit.compare("p_at_theta0", T(f.vp_prod(i) / f.tau(i, f.th(i))), pst);
        audit.compare("p_at_thetad", T(f.ph_prod(i) / f.tau_s(i, f.ts(i))), pi(f.th(d)));
        audit.compare("p_at_thetad", T(f.ph_rev_prod(i) / f.tau(i, f.th(i))), psi(f.ts(d)));

        Polynomial<T> ui = pi * f.div(T(1), pt, "u_i");
        Polynomial<T> usi = psi * f.div(T(1), pst, "u*_i");
        audit.compare("u_at_thetad", ui(f.th(d)), T(f.ph_prod(i) / f.vp_prod(i)));
        q.u.push_back(ui);
        q.u_star.push_back(usi);
        Polynomial<T> vi = pi * (T(1) / cprod);
        Polynomial<T> vsi = psi * (T(1) / csprod);
        audit.compare("v_at_theta0", vi(f.th(0)), S(ds.k, i));
        audit.compare("v_at_theta0", vsi(f.ts(0)), S(ds.k_star, i));
        audit.record("v_equals_k_u", std::max(poly_rel_diff(vi, ui * S(ds.k, i)), poly_rel_diff(vsi, usi * S(ds.k_star, i))));
        q.v.push_back(vi);
        q.v_star.push_back(vsi);

        // expansions in the tau and eta bases
        Polynomial<T> u_tau, us_tau, u_eta, p_tau, p_eta, ps_tau, ps_eta;
        for (int h = 0; h <= i; ++h) {
            u_tau += P(q.tau, h) * (f.tau_s(h, f.ts(i)) / f.vp_prod(h));
            us_tau += P(q.tau_star, h) * (f.tau(h, f.th(i)) / f.vp_prod(h));
            u_eta += P(q.eta, h) * (f.tau_s(h, f.ts(i)) / f.ph_prod(h));
            p_tau += P(q.tau, h) * (f.vp_prod(i) * f.tau_s(h, f.ts(i)) / (f.vp_prod(h) * f.tau_s(i, f.ts(i))));
            p_eta += P(q.eta, h) * (f.ph_prod(i) * f.tau_s(h, f.ts(i)) / (f.ph_prod(h) * f.tau_s(i, f.ts(i))));
            ps_tau += P(q.tau_star, h) * (f.vp_prod(i) * f.tau(h, f.th(i)) / (f.vp_prod(h) * f.tau(i, f.th(i))));
            ps_eta += P(q.eta_star, h) *
                      (f.ph_rev_prod(i) * f.tau(h, f.th(i)) / (f.ph_rev_prod(h) * f.tau(i, f.th(i))));
        }
        u_eta *= T(f.ph_prod(i) / f.vp_prod(i));
        audit.record("u_tau_expansion", poly_rel_diff(u_tau, ui));
        audit.record("u_tau_expansion", poly_rel_diff(us_tau, usi));
        audit.record("u_eta_expansion", poly_rel_diff(u_eta, ui));
        audit.record("p_tau_expansion", poly_rel_diff(p_tau, pi));
        audit.record("p_tau_expansion", poly_rel_diff(ps_tau, psi));
        audit.record("p_eta_expansion", poly_rel_diff(p_eta, pi));
        audit.record("p_eta_expansion", poly_rel_diff(ps_eta, psi));
    }
    audit.record("p_last_product", poly_rel_diff(P(q.p, d + 1), Polynomial<T>::from_roots(roots)));
    audit.record("p_last_product", poly_rel_diff(P(q.p_star, d + 1), Polynomial<T>::from_roots(roots_s)));

    // lambda u_i = c_i u_{i-1} + a_i u_i + b_i u_{i+1} as polynomials for i < d
    const Polynomial<T> lam = Polynomial<T>::x();
    for (int i = 0; i < d; ++i) {
        auto rec = [&](const std::vector<Polynomial<T>>& u, const std::vector<T>& a, const std::vector<T>& b,
                       const std::vector<T>& c) {
            Polynomial<T> rhs = P(u, i) * S(a, i) + P(u, i + 1) * S(b, i);
            if (i > 0) rhs += P(u, i - 1) * S(c, i);
            return poly_rel_diff(lam * P(u, i), rhs);
        };
        audit.record("u_recurrence", rec(q.u, ds.a, ds.b, ds.c));
        audit.record("u_recurrence", rec(q.u_star, ds.a_star, ds.b_star, ds.c_star));
        // lambda v_i = b_{i-1} v_{i-1} + a_i v_i + c_{i+1} v_{i+1}
        auto recv = [&](const std::vector<Polynomial<T>>& v, const std::vector<T>& a, const std::vector<T>& b,
                        const std::vector<T>& c) {
            Polynomial<T> rhs = P(v, i) * S(a, i) + P(v, i + 1) * S(c, i + 1);
            if (i > 0) rhs += P(v, i - 1) * S(b, i - 1);
            return poly_rel_diff(lam * P(v, i), rhs);
        };
        audit.record("v_recurrence", recv(q.v, ds.a, ds.b, ds.c));
        audit.record("v_recurrence", recv(q.v_star, ds.a_star, ds.b_star, ds.c_star));
    }

    if (strict) require_audit(audit, eps, "polynomial_sequences");
    return out;
}

/// Askey-Wilson duality for u, p and v on the (d+1)^2 grid, the two difference equations, and the
/// three-term relations at the eigenvalues.
template <class T>
Audit duality_audit(const ParameterArray<T>& pa, const ModuleScalars<T>& ds, const PolynomialSequence<T>& q) {
    const int d = pa.d;
    Audit audit;
    auto U = [&](const std::vector<Polynomial<T>>& v, int i, const T& x) {
        return (i < 0 || i > d) ? T(0) : v[static_cast<std::size_t>(i)](x);
    };
    auto S = [](const std::vector<T>& v, int i) -> const T& { return v[static_cast<std::size_t>(i)]; };
    auto th = [&](int i) { return (i < 0 || i > d) ? T(0) : pa.th(i); };
    auto ts = [&](int i) { return (i < 0 || i > d) ? T(0) : pa.ths(i); };
    for (int i = 0; i <= d; ++i)
        for (int j = 0; j <= d; ++j) {
            audit.compare("aw_u", U(q.u, i, pa.th(j)), U(q.u_star, j, pa.ths(i)));
            audit.compare("aw_p", T(U(q.p, i, pa.th(j)) / U(q.p, i, pa.th(0))),
                          T(U(q.p_star, j, pa.ths(i)) / U(q.p_star, j, pa.ths(0))));
            audit.compare("aw_v", T(U(q.v, i, pa.th(j)) / S(ds.k, i)), T(U(q.v_star, j, pa.ths(i)) / S(ds.k_star, j)));

            // coefficients at out-of-range indices vanish, so the evaluation point there is irrelevant
            T rhs1 = S(ds.a, i) * U(q.u_star, j, pa.ths(i));
            if (i < d) rhs1 += S(ds.b, i) * U(q.u_star, j, ts(i + 1));
            if (i > 0) rhs1 += S(ds.c, i) * U(q.u_star, j, ts(i - 1));
            audit.compare("difference_equation", T(pa.th(j) * U(q.u_star, j, pa.ths(i))), rhs1);
            T rhs2 = S(ds.a_star, i) * U(q.u, j, pa.th(i));
            if (i < d) rhs2 += S(ds.b_star, i) * U(q.u, j, th(i + 1));
            if (i > 0) rhs2 += S(ds.c_star, i) * U(q.u, j, th(i - 1));
            audit.compare("difference_equation", T(pa.ths(j) * U(q.u, j, pa.th(i))), rhs2);

            T rhs3 = S(ds.a, i) * U(q.u, i, pa.th(j));
            if (i < d) rhs3 += S(ds.b, i) * U(q.u, i + 1, pa.th(j));
            if (i > 0) rhs3 += S(ds.c, i) * U(q.u, i - 1, pa.th(j));
            audit.compare("three_term", T(pa.th(j) * U(q.u, i, pa.th(j))), rhs3);
            T rhs4 = S(ds.a_star, i) * U(q.u_star, i, pa.ths(j));
            if (i < d) rhs4 += S(ds.b_star, i) * U(q.u_star, i + 1, pa.ths(j));
            if (i > 0) rhs4 += S(ds.c_star, i) * U(q.u_star, i - 1, pa.ths(j));
            audit.compare("three_term", T(pa.ths(j) * U(q.u_star, i, pa.ths(j))), rhs4);
        }
    return audit;
}

template <class T>
struct OrthogonalityResult {
    Matrix<T> P, P_star;
    Audit audit;
};

/// Residual of sum(terms) = rhs, relative to max(nu, sum |terms|).
template <class T>
double sum_residual(const std::vector<T>& terms, const T& rhs, const T& nu) {
    T sum(0);
    double mag = std::abs(to_double(nu));
    for (const auto& x : terms) {
        sum += x;
        mag += std::abs(to_double(x));
    }
    T diff = sum - rhs;
    if constexpr (is_exact_v<T>) {
        if (sgn(diff) == 0) return 0.0;
    }
    return std::abs(to_double(diff)) / std::max(1.0, mag);
}

/// The twelve orthogonality relations for every (i, j), the matrices P and P*, P* P = nu I and
/// Y^sharp P = P Y^flat for Y = A, A*.
template <class T>
OrthogonalityResult<T> orthogonality_audit(const ParameterArray<T>& pa, const ModuleScalars<T>& ds,
                                           const PolynomialSequence<T>& q) {
    const int d = pa.d;
    const auto n = static_cast<std::size_t>(d + 1);
    OrthogonalityResult<T> out;
    Audit& audit = out.audit;
    auto S = [](const std::vector<T>& v, int i) -> const T& { return v[static_cast<std::size_t>(i)]; };
    auto ev = [](const std::vector<Polynomial<T>>& v, int i, const T& x) { return v[static_cast<std::size_t>(i)](x); };
    const T& nu = ds.nu;
    std::vector<T> xprod(n, T(1)), xsprod(n, T(1));
    for (int h = 1; h <= d; ++h) {
        xprod[static_cast<std::size_t>(h)] = xprod[static_cast<std::size_t>(h - 1)] * S(ds.x, h);
        xsprod[static_cast<std::size_t>(h)] = xsprod[static_cast<std::size_t>(h - 1)] * S(ds.x_star, h);
    }
    for (int i = 0; i <= d; ++i)
        for (int j = 0; j <= d; ++j) {
            const bool same = i == j;
            auto delta = [&](const T& x) { return same ? x : T(0); };
            std::vector<T> t1, t2, t3, t4, t5, t6, t7, t8, t9, t10, t11, t12;
            for (int h = 0; h <= d; ++h) {
                const T& th = pa.th(h);
                const T& ts = pa.ths(h);
                t1.push_back(ev(q.v, i, th) * ev(q.v, j, th) * S(ds.k_star, h));
                t2.push_back(ev(q.v, h, pa.th(i)) * ev(q.v, h, pa.th(j)) / S(ds.k, h));
                t3.push_back(ev(q.u, i, th) * ev(q.u, j, th) * S(ds.k_star, h));
                t4.push_back(ev(q.u, h, pa.th(i)) * ev(q.u, h, pa.th(j)) * S(ds.k, h));
                t5.push_back(ev(q.p, i, th) * ev(q.p, j, th) * S(ds.k_star, h));
                t6.push_back(ev(q.p, h, pa.th(i)) * ev(q.p, h, pa.th(j)) / S(xprod, h));
                t7.push_back(ev(q.u_star, i, ts) * ev(q.u_star, j, ts) * S(ds.k, h));
                t8.push_back(ev(q.u_star, h, pa.ths(i)) * ev(q.u_star, h, pa.ths(j)) * S(ds.k_star, h));
                t9.push_back(ev(q.v_star, i, ts) * ev(q.v_star, j, ts) * S(ds.k, h));
                t10.push_back(ev(q.v_star, h, pa.ths(i)) * ev(q.v_star, h, pa.ths(j)) / S(ds.k_star, h));
                t11.push_back(ev(q.p_star, i, ts) * ev(q.p_star, j, ts) * S(ds.k, h));
                t12.push_back(ev(q.p_star, h, pa.ths(i)) * ev(q.p_star, h, pa.ths(j)) / S(xsprod, h));
            }
            audit.record("ortho1", sum_residual(t1, delta(T(nu * S(ds.k, i))), nu));
            audit.record("ortho2", sum_residual(t2, delta(T(nu / S(ds.k_star, i))), nu));
            audit.record("ortho3", sum_residual(t3, delta(T(nu / S(ds.k, i))), nu));
            audit.record("ortho4", sum_residual(t4, delta(T(nu / S(ds.k_star, i))), nu));
            audit.record("ortho5", sum_residual(t5, delta(T(nu * S(xprod, i))), nu));
            audit.record("ortho6", sum_residual(t6, delta(T(nu / S(ds.k_star, i))), nu));
            audit.record("ortho7", sum_residual(t7, delta(T(nu / S(ds.k_star, i))), nu));
            audit.record("ortho8", sum_residual(t8, delta(T(nu / S(ds.k, i))), nu));
            audit.record("ortho9", sum_residual(t9, delta(T(nu * S(ds.k_star, i))), nu));
            audit.record("ortho10", sum_residual(t10, delta(T(nu / S(ds.k, i))), nu));
            audit.record("ortho11", sum_residual(t11, delta(T(nu * S(xsprod, i))), nu));
            audit.record("ortho12", sum_residual(t12, delta(T(nu / S(ds.k, i))), nu));
        }

    out.P = Matrix<T>(n, n);
    out.P_star = Matrix<T>(n, n);
    for (int i = 0; i <= d; ++i)
        for (int j = 0; j <= d; ++j) {
            out.P(static_cast<std::size_t>(i), static_cast<std::size_t>(j)) = ev(q.v, j, pa.th(i));
            out.P_star(static_cast<std::size_t>(i), static_cast<std::size_t>(j)) = ev(q.v_star, j, pa.ths(i));
        }
    Matrix<T> nu_i = Matrix<T>::identity(n) * nu;
    Matrix<T> psp = out.P_star * out.P;
    audit.record("pstar_p", max_abs_diff(psp, nu_i) / std::max(1.0, std::abs(to_double(nu))));

    Matrix<T> a_flat(n, n), a_sharp(n, n), as_flat(n, n), as_sharp(n, n);
    for (int i = 0; i <= d; ++i) {
        const auto k = static_cast<std::size_t>(i);
        a_flat(k, k) = S(ds.a, i);
        a_sharp(k, k) = pa.th(i);
        as_flat(k, k) = pa.ths(i);
        as_sharp(k, k) = S(ds.a_star, i);
        if (i < d) {
            a_flat(k, k + 1) = S(ds.b, i);
            as_sharp(k, k + 1) = S(ds.b_star, i);
        }
        if (i > 0) {
            a_flat(k, k - 1) = S(ds.c, i);
            as_sharp(k, k - 1) = S(ds.c_star, i);
        }
    }
    auto intertwine = [&](const Matrix<T>& sharp, const Matrix<T>& flat) {
        Matrix<T> lhs = sharp * out.P;
        Matrix<T> rhs = out.P * flat;
        return max_abs_diff(lhs, rhs) / std::max(1.0, rhs.max_abs());
    };
    audit.record("sharp_flat_intertwine", intertwine(a_sharp, a_flat));
    audit.record("sharp_flat_intertwine", intertwine(as_sharp, as_flat));
    return out;
}

enum class IsoVerdict { isomorphic, not_isomorphic, incomparable };

inline const char* to_string(IsoVerdict v) {
    switch (v) {
        case IsoVerdict::isomorphic: return "isomorphic";
        case IsoVerdict::not_isomorphic: return "not_isomorphic";
        case IsoVerdict::incomparable: return "incomparable";
    }
    return "?";
}

/// The eight endpoint quantities whose pairwise equalities are mutually equivalent for modules with
/// equal (r, t, d) and eigenvalue data: varphi_1, varphi_d, phi_1, phi_d, a_0, a_d, a*_0, a*_d.
template <class T>
std::vector<T> endpoint_quantities(const ParameterArray<T>& pa) {
    const int d = pa.d;
    auto a = [&](int i, bool dual) {
        const auto& X = dual ? pa.theta : pa.theta_star;
        const auto& Y = dual ? pa.theta_star : pa.theta;
        auto x = [&](int j) { return X[static_cast<std::size_t>(j)]; };
        T v = Y[static_cast<std::size_t>(i)];
        if (i > 0) v += pa.vp(i) / (x(i) - x(i - 1));
        if (i < d) v += pa.vp(i + 1) / (x(i) - x(i + 1));
        return v;
    };
    return {pa.vp(1), pa.vp(d), pa.ph(1), pa.ph(d), a(0, false), a(d, false), a(0, true), a(d, true)};
}

/// Isomorphism of the modules behind two validated arrays. d = 0: equal (r, t). d > 0: equal (r, t, d)
/// and varphi_1, provided the eigenvalue data agree; differing eigenvalue data gives `incomparable`.
/// When an audit is supplied, the equivalence of the eight endpoint equalities is asserted.
template <class T>
IsoVerdict isomorphism_test(const ParameterArray<T>& x, const ParameterArray<T>& y, double eps,
                            Audit* audit = nullptr) {
    require_valid(x, eps);
    require_valid(y, eps);
    if (x.r != y.r || x.t != y.t || x.d != y.d) return IsoVerdict::not_isomorphic;
    if (x.d == 0) return IsoVerdict::isomorphic;
    for (std::size_t i = 0; i < x.theta.size(); ++i)
        if (!near(x.theta[i], y.theta[i], eps) || !near(x.theta_star[i], y.theta_star[i], eps))
            return IsoVerdict::incomparable;
    const bool same = near(x.vp(1), y.vp(1), eps);
    if (audit) {
        auto qx = endpoint_quantities(x);
        auto qy = endpoint_quantities(y);
        for (std::size_t k = 0; k < qx.size(); ++k)
            audit->require("endpoint_equivalence", near(qx[k], qy[k], eps) == same,
                           "quantity " + std::to_string(k) + " breaks the equivalence");
    }
    return same ? IsoVerdict::isomorphic : IsoVerdict::not_isomorphic;
}

/// Largest absolute and relative deviations between two sets of module scalars.
struct ScalarDeviation {
    double max_abs = 0;
    double max_rel = 0;
    std::vector<std::pair<std::string, double>> per_field;  ///< relative deviation per field
    std::string worst_field;
};

template <class T>
ScalarDeviation scalar_deviation(const ModuleScalars<T>& x, const ModuleScalars<T>& y) {
    ScalarDeviation out;
    auto field = [&](const std::string& name, const std::vector<T>& u, const std::vector<T>& v) {
        double rel = 0;
        if (u.size() != v.size()) {
            rel = INFINITY;
            out.max_abs = INFINITY;
        } else {
            for (std::size_t i = 0; i < u.size(); ++i) {
                T diff = u[i] - v[i];
                double ad = std::abs(to_double(diff));
                if constexpr (is_exact_v<T>) {
                    if (sgn(diff) == 0) ad = 0;
                }
                out.max_abs = std::max(out.max_abs, ad);
                rel = std::max(rel, rel_err(u[i], v[i]));
            }
        }
        out.per_field.emplace_back(name, rel);
        if (out.worst_field.empty() || rel > out.max_rel) {
            out.worst_field = name;
            out.max_rel = rel;
        }
    };
    field("a", x.a, y.a);
    field("a_star", x.a_star, y.a_star);
    field("b", x.b, y.b);
    field("b_star", x.b_star, y.b_star);
    field("c", x.c, y.c);
    field("c_star", x.c_star, y.c_star);
    field("x", x.x, y.x);
    field("x_star", x.x_star, y.x_star);
    field("k", x.k, y.k);
    field("k_star", x.k_star, y.k_star);
    field("m", x.m, y.m);
    field("m_star", x.m_star, y.m_star);
    field("nu", std::vector<T>{x.nu}, std::vector<T>{y.nu});
    return out;
}

/// Formula-pipeline result for one array.
template <class T>
struct FormulaAnalysis {
    ModuleScalars<T> scalars;
    PolynomialSequence<T> polynomials;
    Matrix<T> P, P_star;
    Audit audit;
};

/// derived_scalars, polynomial_sequences, duality_audit and orthogonality_audit in one pass, non-strict:
/// every residual lands in the returned audit.
template <class T>
FormulaAnalysis<T> analyze_parameter_array(const ParameterArray<T>& pa, double eps) {
    FormulaAnalysis<T> out;
    auto ds = derived_scalars(pa, eps, false);
    out.scalars = std::move(ds.scalars);
    out.audit.merge(ds.audit, "scalars.");
    auto ps = polynomial_sequences(pa, out.scalars, eps, false);
    out.polynomials = std::move(ps.seq);
    out.audit.merge(ps.audit, "polynomials.");
    out.audit.merge(duality_audit(pa, out.scalars, out.polynomials), "duality.");
    auto orth = orthogonality_audit(pa, out.scalars, out.polynomials);
    out.P = std::move(orth.P);
    out.P_star = std::move(orth.P_star);
    out.audit.merge(orth.audit, "orthogonality.");
    return out;
}

}  // namespace drg
