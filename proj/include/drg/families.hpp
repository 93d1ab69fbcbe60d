/**
 * @file families.hpp
 * @brief Recognition of q-Racah-type and classical-parameter eigenvalue data, the fitted family
 *        parameters, and the family-specific closed forms for split sequences, intersection numbers
 *        and the polynomials u_i evaluated at the eigenvalues.
 *
 * The root pair r1(W), r2(W) enters every closed form only through its sum and product, so all
 * evaluations use those two symmetric functions; the individual roots are reported when real.
 */
#pragma once

#include <cmath>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "drg/audit.hpp"
#include "drg/errors.hpp"
#include "drg/parameter_array.hpp"
#include "drg/parameter_engine.hpp"
#include "drg/scalar.hpp"

namespace drg {

/// Intersection and dual intersection numbers produced by a family's closed forms.
template <class T>
struct FamilyIntersection {
    std::vector<T> a, b, c;
    std::vector<T> a_star, b_star, c_star;
};

namespace detail {

template <class T>
T square_root_or_throw(const T& x, const char* what) {
    if constexpr (is_exact_v<T>) {
        auto r = exact_sqrt(x);
        if (!r) throw IrrationalValue(std::string(what) + " is irrational");
        return *r;
    } else {
        return std::sqrt(x);
    }
}

/// Real roots of x^2 - sum x + prod in ascending order, or nothing when complex or irrational.
template <class T>
std::optional<std::pair<T, T>> quadratic_roots(const T& sum, const T& prod, double eps) {
    T disc = sum * sum - 4 * prod;
    const double scale = std::abs(to_double(T(sum * sum))) + std::abs(to_double(T(4 * prod)));
    if (!is_zero(disc, eps, scale) && disc < 0) return std::nullopt;
    if (disc < 0) disc = 0;
    std::optional<T> root;
    if constexpr (is_exact_v<T>) {
        root = exact_sqrt(disc);
    } else {
        root = std::sqrt(disc);
    }
    if (!root) return std::nullopt;
    T lo = (sum - *root) / 2;
    T hi = (sum + *root) / 2;
    return std::make_pair(lo, hi);
}

/// (1 - r1 x)(1 - r2 x)
template <class T>
T pair_one_minus(const T& sum, const T& prod, const T& x) {
    return T(1 - sum * x + prod * x * x);
}

/// (r1 - y)(r2 - y)
template <class T>
T pair_minus(const T& sum, const T& prod, const T& y) {
    return T(prod - sum * y + y * y);
}

template <class T>
T checked_div(const T& num, const T& den, double eps, const std::string& factor) {
    if (is_zero(den, eps)) throw InconsistencyError("vanishing factor " + factor);
    return num / den;
}

}  // namespace detail

template <class T>
struct QRacahFit {
    int D = 0;
    T q, h, h_star, s, s_star;
    T r_sum, r_prod;                          ///< r1 + r2 and r1 r2
    std::optional<std::pair<T, T>> r_roots;  ///< (r1, r2) ascending, when real
    T theta0, theta_star0;
    Audit audit;
};

template <class T>
struct QRacahModule {
    T tau;
    T r_sum, r_prod;  ///< r1(W) + r2(W) and r1(W) r2(W)
    std::optional<std::pair<T, T>> r_roots;
    Audit audit;
};

namespace detail {

/// Common ratio beta with seq_{i+2} - seq_{i-1} = (beta + 1)(seq_{i+1} - seq_i); needs length >= 4.
template <class T>
T recurrence_beta(const std::vector<T>& seq, double eps, const std::string& name) {
    const int D = static_cast<int>(seq.size()) - 1;
    auto at = [&](int i) { return seq[static_cast<std::size_t>(i)]; };
    std::optional<T> beta;
    for (int i = 1; i + 2 <= D; ++i) {
        T b = (at(i + 2) - at(i - 1)) / (at(i + 1) - at(i)) - 1;
        if (!beta) {
            beta = b;
        } else if (!near(b, *beta, eps)) {
            throw NotOfType(name + ": the ratio test is not constant", i);
        }
    }
    return *beta;
}

/// Coefficients (c0, c1, c2) with seq_i = c0 + c1 x^i + c2 x^{-i}, from seq_0..seq_2.
template <class T>
std::vector<T> fit_three_exponentials(const std::vector<T>& seq, const T& x, double eps) {
    const T d1 = seq[1] - seq[0];
    const T d2 = seq[2] - seq[0];
    const T a11 = x - 1, a12 = 1 / x - 1;
    const T a21 = x * x - 1, a22 = 1 / (x * x) - 1;
    const T det = a11 * a22 - a12 * a21;
    if (is_zero(det, eps)) throw NotOfType("degenerate exponential fit");
    T c1 = (d1 * a22 - a12 * d2) / det;
    T c2 = (a11 * d2 - a21 * d1) / det;
    T c0 = seq[0] - c1 - c2;
    return {c0, c1, c2};
}

}  // namespace detail

/// Fits the global q-Racah parameters from the trivial module's parameter array (r = t = 0, d = D).
/// The canonical base satisfies |q| > 1.
template <class T>
QRacahFit<T> fit_q_racah(const ParameterArray<T>& pa, double eps) {
    if (pa.r != 0 || pa.t != 0) throw NotOfType("a global fit needs the trivial module's array (r = t = 0)");
    const int D = pa.d;
    if (D < 3) throw NotOfType("the ratio test needs D >= 3");
    QRacahFit<T> fit;
    fit.D = D;
    const T beta = detail::recurrence_beta(pa.theta, eps, "theta");
    const T beta_s = detail::recurrence_beta(pa.theta_star, eps, "theta_star");
    if (!near(beta, beta_s, eps)) throw NotOfType("theta and theta_star have different bases");
    const T disc = beta * beta - 4;
    if (is_zero(disc, eps, 4.0)) throw NotOfType("the base is q = 1 or q = -1");
    if (disc < 0) throw NotOfType("the base q is not real");
    const T root = detail::square_root_or_throw(disc, "the base q");
    const T q = beta > 0 ? T((beta + root) / 2) : T((beta - root) / 2);
    fit.q = q;

    auto side = [&](const std::vector<T>& seq, T& h, T& s, const std::string& name) {
        auto c = detail::fit_three_exponentials(seq, q, eps);
        h = c[2];
        if (is_zero(h, eps)) throw NotOfType(name + ": h vanishes");
        s = c[1] / (h * q);
        if (is_zero(s, eps)) throw NotOfType(name + ": s vanishes");
        for (int i = 0; i <= D; ++i) {
            T model = seq[0] + h * power(q, -i) * (1 - power(q, i)) * (1 - s * power(q, i + 1));
            double res = rel_err(model, seq[static_cast<std::size_t>(i)]);
            fit.audit.record(name + "_form", res);
            if (res > eps) throw NotOfType(name + " is not of q-Racah form", i);
            for (int j = 0; j <= D; ++j) {
                T diff = h * (power(q, i) - power(q, j)) * (s * q - power(q, -i - j));
                fit.audit.compare(name + "_difference", diff, T(seq[static_cast<std::size_t>(i)] - seq[static_cast<std::size_t>(j)]));
            }
        }
    };
    side(pa.theta, fit.h, fit.s, "theta");
    side(pa.theta_star, fit.h_star, fit.s_star, "theta_star");
    fit.theta0 = pa.th(0);
    fit.theta_star0 = pa.ths(0);

    const T hh = fit.h * fit.h_star;
    fit.r_prod = fit.s * fit.s_star * power(q, D + 1);
    // (1 - r1 q)(1 - r2 q) from varphi_1
    const T base1 = hh * power(q, -1) * (1 - q) * (1 - power(q, -D));
    const T pair1 = pa.vp(1) / base1;
    fit.r_sum = (1 + fit.r_prod * q * q - pair1) / q;
    fit.r_roots = detail::quadratic_roots(fit.r_sum, fit.r_prod, eps);
    for (int i = 1; i <= D; ++i) {
        const T common = hh * power(q, 1 - 2 * i) * (1 - power(q, i)) * (1 - power(q, i - D - 1));
        T vp = common * detail::pair_one_minus(fit.r_sum, fit.r_prod, power(q, i));
        T ph = common * detail::pair_minus(fit.r_sum, fit.r_prod, T(fit.s_star * power(q, i))) / fit.s_star;
        double rv = rel_err(vp, pa.vp(i));
        double rp = rel_err(ph, pa.ph(i));
        fit.audit.record("varphi_form", rv);
        fit.audit.record("phi_form", rp);
        if (rv > eps || rp > eps) throw NotOfType("split sequences are not of q-Racah form", i);
    }
    return fit;
}

/// tau(W), and r1(W), r2(W) through their symmetric functions; the q-Racah shape of every varphi_i
/// and phi_i is the membership test.
template <class T>
QRacahModule<T> q_racah_module_params(const QRacahFit<T>& fit, const ParameterArray<T>& pa, double eps) {
    require_valid(pa, eps);
    const int d = pa.d, r = pa.r, t = pa.t;
    if (d < 1) throw NotOfType("module diameter is 0");
    const T& q = fit.q;
    const T hh = fit.h * fit.h_star;
    const T ss = fit.s * fit.s_star;
    QRacahModule<T> m;
    auto lead = [&](int i) { return T(hh * (1 - power(q, i)) * (1 - power(q, d - i + 1))); };
    m.tau = detail::checked_div(pa.vp(1), lead(1), eps, "(1-q)(1-q^d)") + ss * power(q, r + t + 2) +
            power(q, -r - t - 1 - d);
    m.r_sum = m.tau * power(q, r + t + d);
    m.r_prod = ss * power(q, 2 * r + 2 * t + d + 1);
    m.r_roots = detail::quadratic_roots(m.r_sum, m.r_prod, eps);
    for (int i = 1; i <= d; ++i) {
        T vp = lead(i) * (m.tau - ss * power(q, r + t + i + 1) - power(q, -r - t - i - d));
        T ph = lead(i) * (m.tau - fit.s_star * power(q, r - t - d + i) - fit.s * power(q, t - r - i + 1));
        double rv = rel_err(vp, pa.vp(i));
        double rp = rel_err(ph, pa.ph(i));
        m.audit.record("varphi_tau_form", rv);
        m.audit.record("phi_tau_form", rp);
        if (rv > eps || rp > eps) throw NotOfType("module split sequences are not of q-Racah shape", i);
        const T common = hh * power(q, 1 - 2 * i - t - r) * (1 - power(q, i)) * (1 - power(q, i - d - 1));
        const T sq = fit.s_star * power(q, i + 2 * r);
        m.audit.compare("varphi_root_form", T(common * detail::pair_one_minus(m.r_sum, m.r_prod, power(q, i))),
                        pa.vp(i));
        m.audit.compare("phi_root_form",
                        T(common * detail::pair_minus(m.r_sum, m.r_prod, sq) / (fit.s_star * power(q, 2 * r))),
                        pa.ph(i));
    }
    return m;
}

/// u_i(theta_{t+j}) as the terminating 4phi3 sum.
template <class T>
T q_racah_u_eval(const QRacahFit<T>& fit, const QRacahModule<T>& m, const ParameterArray<T>& pa, int i, int j,
                 double eps) {
    const T& q = fit.q;
    const int r = pa.r, t = pa.t, d = pa.d;
    const T a1 = power(q, -i), a2 = fit.s_star * power(q, 2 * r + i + 1);
    const T a3 = power(q, -j), a4 = fit.s * power(q, 2 * t + j + 1);
    const T b3 = power(q, -d);
    T sum(1), term(1);
    for (int k = 0; k < std::min(i, j); ++k) {
        const T qk = power(q, k);
        T num = (1 - a1 * qk) * (1 - a2 * qk) * (1 - a3 * qk) * (1 - a4 * qk);
        T den = detail::pair_one_minus(m.r_sum, m.r_prod, T(qk * q)) * (1 - b3 * qk) * (1 - qk * q);
        term = term * detail::checked_div(num, den, eps, "(r1 q, r2 q, q^-d, q; q)_" + std::to_string(k + 1)) * q;
        sum += term;
    }
    return sum;
}

namespace detail {

/// Closed forms for b_i, c_i, a_i of a q-Racah module; the dual numbers use the same routine with
/// (h, s*, r, t, theta_t) replaced by (h*, s, t, r, theta*_r).
template <class T>
void q_racah_numbers(const T& q, const T& h, const T& s_star, int r, int t, int d, const T& theta_t,
                     const T& r_sum, const T& r_prod, double eps, std::vector<T>& a, std::vector<T>& b,
                     std::vector<T>& c) {
    const auto n = static_cast<std::size_t>(d + 1);
    a.assign(n, T(0));
    b.assign(n, T(0));
    c.assign(n, T(0));
    const T hq = h * power(q, -t);
    auto sq = [&](int e) { return T(s_star * power(q, e)); };
    if (d >= 1) {
        b[0] = checked_div(T(hq * (1 - power(q, -d)) * pair_one_minus(r_sum, r_prod, q)), T(1 - sq(2 * r + 2)), eps,
                           "1 - s* q^(2r+2)");
        c[static_cast<std::size_t>(d)] =
            checked_div(T(hq * (1 - power(q, d)) * pair_minus(r_sum, r_prod, sq(2 * r + d))),
                        T(sq(2 * r + d) * (1 - sq(2 * r + 2 * d))), eps, "s* q^(2r+d)(1 - s* q^(2r+2d))");
    }
    for (int i = 1; i <= d - 1; ++i) {
        b[static_cast<std::size_t>(i)] = checked_div(
            T(hq * (1 - power(q, i - d)) * (1 - sq(2 * r + i + 1)) * pair_one_minus(r_sum, r_prod, power(q, i + 1))),
            T((1 - sq(2 * r + 2 * i + 1)) * (1 - sq(2 * r + 2 * i + 2))), eps, "b_i denominator");
        c[static_cast<std::size_t>(i)] = checked_div(
            T(hq * (1 - power(q, i)) * (1 - sq(2 * r + i + d + 1)) * pair_minus(r_sum, r_prod, sq(2 * r + i))),
            T(sq(2 * r + d) * (1 - sq(2 * r + 2 * i)) * (1 - sq(2 * r + 2 * i + 1))), eps, "c_i denominator");
    }
    for (std::size_t i = 0; i < n; ++i) a[i] = theta_t - b[i] - c[i];
}

}  // namespace detail

/// Intersection and dual intersection numbers of a q-Racah module from the closed forms.
template <class T>
FamilyIntersection<T> q_racah_intersection_numbers(const QRacahFit<T>& fit, const QRacahModule<T>& m,
                                                   const ParameterArray<T>& pa, double eps) {
    FamilyIntersection<T> out;
    detail::q_racah_numbers(fit.q, fit.h, fit.s_star, pa.r, pa.t, pa.d, pa.th(0), m.r_sum, m.r_prod, eps, out.a,
                            out.b, out.c);
    detail::q_racah_numbers(fit.q, fit.h_star, fit.s, pa.t, pa.r, pa.d, pa.ths(0), m.r_sum, m.r_prod, eps,
                            out.a_star, out.b_star, out.c_star);
    return out;
}

/// The graph's intersection and dual intersection numbers from the global parameters.
template <class T>
FamilyIntersection<T> q_racah_graph_intersection_numbers(const QRacahFit<T>& fit, double eps) {
    FamilyIntersection<T> out;
    detail::q_racah_numbers(fit.q, fit.h, fit.s_star, 0, 0, fit.D, fit.theta0, fit.r_sum, fit.r_prod, eps, out.a,
                            out.b, out.c);
    detail::q_racah_numbers(fit.q, fit.h_star, fit.s, 0, 0, fit.D, fit.theta_star0, fit.r_sum, fit.r_prod, eps,
                            out.a_star, out.b_star, out.c_star);
    return out;
}

template <class T>
struct ClassicalFit {
    int D = 0;
    T b, alpha, sigma;
    T eta, mu, h;
    T eta_star, h_star, theta_star0;
    T tau;
    Audit audit;
};

template <class T>
struct ClassicalModule {
    T tau;
    T alpha, sigma;  ///< alpha(W), sigma(W)
    Audit audit;
};

/// Fits classical parameters (D, b, alpha, sigma) from the trivial module's array and the graph's
/// intersection numbers, then the eigenvalue constants and tau of the trivial module.
template <class T>
ClassicalFit<T> fit_classical(const ParameterArray<T>& pa, const std::vector<T>& b_graph,
                              const std::vector<T>& c_graph, double eps) {
    if (pa.r != 0 || pa.t != 0) throw NotOfType("a global fit needs the trivial module's array (r = t = 0)");
    const int D = pa.d;
    if (D < 3) throw NotOfType("classical fit needs D >= 3");
    if (b_graph.size() != static_cast<std::size_t>(D + 1) || c_graph.size() != static_cast<std::size_t>(D + 1))
        throw ContractViolation("fit_classical: intersection arrays must have length D + 1");
    ClassicalFit<T> fit;
    fit.D = D;
    auto ts = [&](int i) { return pa.ths(i); };
    auto cg = [&](int i) { return c_graph[static_cast<std::size_t>(i)]; };
    auto bg = [&](int i) { return b_graph[static_cast<std::size_t>(i)]; };

    // (theta*_{i+1} - theta*_i) / (theta*_i - theta*_{i-1}) = 1/b
    std::optional<T> ratio;
    for (int i = 1; i <= D - 1; ++i) {
        T rho = (ts(i + 1) - ts(i)) / (ts(i) - ts(i - 1));
        if (!ratio) {
            ratio = rho;
        } else if (!near(rho, *ratio, eps)) {
            throw NotOfType("dual eigenvalue differences are not geometric", i);
        }
    }
    if (is_zero(*ratio, eps)) throw NotOfType("dual eigenvalue differences vanish");
    const T b = 1 / *ratio;
    if (is_zero(T(b - 1), eps) || is_zero(T(b + 1), eps)) throw NotOfType("b is 1 or -1");
    fit.b = b;
    fit.alpha = cg(2) / (b + 1) - 1;
    fit.sigma = bg(0) * (b - 1) / (power(b, D) - 1);
    for (int i = 1; i <= D; ++i) {
        T ci = (power(b, i) - 1) / (b - 1) * (1 + fit.alpha * (power(b, i - 1) - 1) / (b - 1));
        double res = rel_err(ci, cg(i));
        fit.audit.record("c_classical_form", res);
        if (res > eps) throw NotOfType("c_i is not of classical form", i);
    }
    for (int i = 0; i < D; ++i) {
        T bi = (power(b, D) - power(b, i)) / (b - 1) * (fit.sigma - fit.alpha * (power(b, i) - 1) / (b - 1));
        double res = rel_err(bi, bg(i));
        fit.audit.record("b_classical_form", res);
        if (res > eps) throw NotOfType("b_i is not of classical form", i);
    }
    const T bm1sq = (b - 1) * (b - 1);
    fit.eta = ((fit.sigma - 1) * (1 - b) - fit.alpha * (power(b, D) + 1)) / bm1sq;
    fit.mu = (fit.alpha - b + 1) / bm1sq;
    fit.h = power(b, D) * (fit.sigma * b - fit.sigma + fit.alpha) / bm1sq;
    for (int i = 0; i <= D; ++i) {
        T th = fit.eta + fit.mu * power(b, i) + fit.h * power(b, -i);
        double res = rel_err(th, pa.th(i));
        fit.audit.record("theta_form", res);
        if (res > eps) throw NotOfType("eigenvalue ordering is not of classical form", i);
    }
    fit.theta_star0 = ts(0);
    const T bracket = (fit.sigma - fit.alpha) * (power(b, D - 1) - 1) - b + 1 - fit.sigma * (power(b, D) - 1);
    fit.eta_star = fit.theta_star0 * (1 + b / (b - 1) * bracket / (fit.sigma * (power(b, D) - 1)));
    fit.h_star = fit.theta_star0 - fit.eta_star;
    if (is_zero(fit.h_star, eps)) throw NotOfType("h* vanishes");
    for (int i = 0; i <= D; ++i) {
        T th = fit.eta_star + fit.h_star * power(b, -i);
        double res = rel_err(th, ts(i));
        fit.audit.record("theta_star_form", res);
        if (res > eps) throw NotOfType("dual eigenvalues are not of classical form", i);
        for (int j = 0; j <= D; ++j) {
            fit.audit.compare("theta_difference", T((power(b, i) - power(b, j)) * (fit.mu - fit.h * power(b, -i - j))),
                              T(pa.th(i) - pa.th(j)));
            fit.audit.compare("theta_star_difference", T(fit.h_star * power(b, -i - j) * (power(b, j) - power(b, i))),
                              T(ts(i) - ts(j)));
        }
    }
    const T hh = fit.h * fit.h_star;
    fit.tau = pa.vp(1) / ((1 - b) * (1 - power(b, D))) + hh * power(b, -1 - D);
    for (int i = 1; i <= D; ++i) {
        const T lead = (1 - power(b, i)) * (1 - power(b, D - i + 1));
        fit.audit.compare("varphi_form", T(lead * (fit.tau - hh * power(b, -i - D))), pa.vp(i));
        fit.audit.compare("phi_form", T(lead * (fit.tau - fit.h_star * fit.mu * power(b, -i))), pa.ph(i));
    }
    // identities that pin h*, tau and theta*_0 to (b, alpha, sigma, D)
    const T& mu = fit.mu;
    const T& h = fit.h;
    fit.audit.compare("h_star_closed_form",
                      T(-(power(b, D - 1) * (mu * b * b - h) * (mu * b - h)) /
                        ((mu * power(b, D + 1) - h) * (power(b, D - 1) + mu * (b - 1) * (power(b, D - 1) - 1)))),
                      fit.h_star);
    fit.audit.compare("tau_closed_form", T(fit.h_star * (1 + mu * b - mu) / (b * (b - 1))), fit.tau);
    fit.audit.compare("theta_star0_closed_form",
                      T(fit.h_star * fit.sigma * (power(b, D) - 1) * (1 - b) / (b * bracket)), fit.theta_star0);
    // the graph's intersection numbers in terms of (mu, h, h*, tau)
    for (int i = 0; i < D; ++i)
        fit.audit.compare("graph_b_form",
                          T(power(b, 2 * i + 1) * (1 - power(b, D - i)) * (fit.tau - hh * power(b, -i - D - 1)) /
                            fit.h_star),
                          bg(i));
    for (int i = 1; i <= D; ++i)
        fit.audit.compare("graph_c_form",
                          T(power(b, i) * (power(b, i) - 1) * (fit.tau - fit.h_star * mu * power(b, -i)) / fit.h_star),
                          cg(i));
    return fit;
}

/// Overload taking the graph's intersection numbers from the trivial array itself.
template <class T>
ClassicalFit<T> fit_classical(const ParameterArray<T>& pa, double eps) {
    auto ds = derived_scalars(pa, eps);
    return fit_classical(pa, ds.scalars.b, ds.scalars.c, eps);
}

/// tau(W) and alpha(W), sigma(W); the classical shape of every varphi_i and phi_i is the membership test.
template <class T>
ClassicalModule<T> classical_module_params(const ClassicalFit<T>& fit, const ParameterArray<T>& pa, double eps) {
    require_valid(pa, eps);
    const int d = pa.d, r = pa.r, t = pa.t;
    if (d < 1) throw NotOfType("module diameter is 0");
    const T& b = fit.b;
    const T hh = fit.h * fit.h_star;
    ClassicalModule<T> m;
    auto lead = [&](int i) { return T((1 - power(b, i)) * (1 - power(b, d - i + 1))); };
    m.tau = detail::checked_div(pa.vp(1), lead(1), eps, "(1-b)(1-b^d)") + hh * power(b, -r - t - 1 - d);
    for (int i = 1; i <= d; ++i) {
        T vp = lead(i) * (m.tau - hh * power(b, -r - t - i - d));
        T ph = lead(i) * (m.tau - fit.h_star * fit.mu * power(b, -r + t - i));
        double rv = rel_err(vp, pa.vp(i));
        double rp = rel_err(ph, pa.ph(i));
        m.audit.record("varphi_tau_form", rv);
        m.audit.record("phi_tau_form", rp);
        if (rv > eps || rp > eps) throw NotOfType("module split sequences are not of classical shape", i);
    }
    if (is_zero(fit.h, eps)) m.audit.require("tau_nonzero_when_h_zero", !is_zero(m.tau, eps));
    m.alpha = m.tau * power(b, r + 1) * (b - 1) * (b - 1) / fit.h_star;
    m.sigma = (fit.h * power(b, -t) * (b - 1) * (b - 1) - m.alpha * power(b, d)) / (power(b, d) * (b - 1));
    return m;
}

/// Intersection and dual intersection numbers of a classical module from the closed forms, with the
/// alpha(W), sigma(W) forms recorded in `audit` when supplied.
template <class T>
FamilyIntersection<T> classical_intersection_numbers(const ClassicalFit<T>& fit, const ClassicalModule<T>& m,
                                                     const ParameterArray<T>& pa, double eps, Audit* audit = nullptr) {
    const int d = pa.d, r = pa.r, t = pa.t;
    const auto n = static_cast<std::size_t>(d + 1);
    const T& b = fit.b;
    const T& mu = fit.mu;
    const T& h = fit.h;
    const T& hs = fit.h_star;
    const T hh = h * hs;
    const T& tau = m.tau;
    FamilyIntersection<T> out;
    out.a.assign(n, T(0));
    out.b.assign(n, T(0));
    out.c.assign(n, T(0));
    out.a_star.assign(n, T(0));
    out.b_star.assign(n, T(0));
    out.c_star.assign(n, T(0));
    auto g = [&](int e) { return T(mu * power(b, t) - h * power(b, e)); };  // mu b^t - h b^e
    for (int i = 0; i < d; ++i) {
        const auto k = static_cast<std::size_t>(i);
        out.b[k] = power(b, r + 2 * i + 1) * (1 - power(b, d - i)) * (tau - hh * power(b, -r - t - i - d - 1)) / hs;
        if (i == 0) {
            out.b_star[k] = detail::checked_div(T((power(b, d) - 1) * (tau - hh * power(b, -r - t - d - 1))),
                                                g(-t - 1), eps, "mu b^t - h b^(-t-1)");
        } else {
            out.b_star[k] = detail::checked_div(
                T(power(b, -i) * (power(b, d - i) - 1) * (tau - hh * power(b, -r - t - i - d - 1)) * g(-t - i)),
                T(g(-t - 2 * i - 1) * g(-t - 2 * i)), eps, "b*_i denominator");
        }
    }
    for (int i = 1; i <= d; ++i) {
        const auto k = static_cast<std::size_t>(i);
        out.c[k] = power(b, r + i) * (power(b, i) - 1) * (tau - hs * mu * power(b, -r + t - i)) / hs;
        if (i == d) {
            out.c_star[k] = detail::checked_div(T(power(b, -d + 1) * (1 - power(b, d)) *
                                                  (tau - hs * mu * power(b, -r + t - 1))),
                                                g(-t - 2 * d + 1), eps, "mu b^t - h b^(-t-2d+1)");
        } else {
            out.c_star[k] = detail::checked_div(
                T(power(b, d - 2 * i + 1) * (1 - power(b, i)) * (tau - hs * mu * power(b, -r + t - d + i - 1)) *
                  g(-t - i - d)),
                T(g(-t - 2 * i) * g(-t - 2 * i + 1)), eps, "c*_i denominator");
        }
    }
    for (std::size_t k = 0; k < n; ++k) {
        out.a[k] = pa.th(0) - out.b[k] - out.c[k];
        out.a_star[k] = pa.ths(0) - out.b_star[k] - out.c_star[k];
    }
    if (audit) {
        const T bm1 = b - 1;
        for (int i = 1; i <= d; ++i)
            audit->compare("c_alpha_form",
                           T((power(b, i) - 1) / bm1 * (out.c[1] + m.alpha * (power(b, i - 1) - 1) / bm1)),
                           out.c[static_cast<std::size_t>(i)]);
        for (int i = 0; i < d; ++i)
            audit->compare("b_alpha_sigma_form",
                           T((power(b, d) - power(b, i)) / bm1 * (m.sigma - m.alpha * (power(b, i) - 1) / bm1)),
                           out.b[static_cast<std::size_t>(i)]);
    }
    return out;
}

/// u_i(theta_{t+j}) as the terminating 3phi2 sum (h != 0) or 2phi1 sum (h = 0).
template <class T>
T classical_u_eval(const ClassicalFit<T>& fit, const ClassicalModule<T>& m, const ParameterArray<T>& pa, int i, int j,
                   double eps) {
    const T& b = fit.b;
    const int r = pa.r, t = pa.t, d = pa.d;
    const T a1 = power(b, -i), a2 = power(b, -j), b1 = power(b, -d);
    T sum(1), term(1);
    if (!is_zero(fit.h, eps)) {
        const T a3 = fit.mu * power(b, 2 * t + j) / fit.h;
        const T b2 = m.tau * power(b, r + t + d + 1) / (fit.h * fit.h_star);
        for (int k = 0; k < std::min(i, j); ++k) {
            const T bk = power(b, k);
            T num = (1 - a1 * bk) * (1 - a2 * bk) * (1 - a3 * bk);
            T den = (1 - b1 * bk) * (1 - b2 * bk) * (1 - bk * b);
            term = term * detail::checked_div(num, den, eps, "(b^-d, b2, b; b)_" + std::to_string(k + 1)) * b;
            sum += term;
        }
    } else {
        const T z = detail::checked_div(T(fit.mu * fit.h_star * power(b, -r + t + j - d)), m.tau, eps, "tau(W)");
        for (int k = 0; k < std::min(i, j); ++k) {
            const T bk = power(b, k);
            T num = (1 - a1 * bk) * (1 - a2 * bk);
            T den = (1 - b1 * bk) * (1 - bk * b);
            term = term * detail::checked_div(num, den, eps, "(b^-d, b; b)_" + std::to_string(k + 1)) * z;
            sum += term;
        }
    }
    return sum;
}

}  // namespace drg
