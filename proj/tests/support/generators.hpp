/**
 * @file generators.hpp
 * @brief Random parameter arrays for tests: generic Leonard arrays built from a common recurrence base,
 *        q-Racah arrays from their defining parameters, and classical-parameter arrays.
 *
 * Everything here is built directly from the defining formulas, independently of the library's
 * fitting and derivation code.
 */
#pragma once

#include <optional>
#include <random>
#include <vector>

#include "drg/parameter_array.hpp"
#include "drg/scalar.hpp"

namespace drg::testing {

using Q = Rational;

/// Nonzero rational p/q with |p| <= pmax and 1 <= q <= qmax.
inline Q random_nonzero(std::mt19937_64& rng, int pmax, int qmax) {
    std::uniform_int_distribution<int> pd(1, pmax), qd(1, qmax), sd(0, 1);
    Q x(pd(rng), qd(rng));
    x.canonicalize();
    return sd(rng) ? x : Q(-x);
}

/// Completes an array from theta, theta_star and varphi_1: phi_i from varphi_1, then varphi_i from phi_1.
inline ParameterArray<Q> complete_split(int r, int t, std::vector<Q> th, std::vector<Q> ts, const Q& varphi1) {
    const int d = static_cast<int>(th.size()) - 1;
    ParameterArray<Q> pa{r, t, d, std::move(th), std::move(ts), {}, {}};
    const Q span = pa.th(0) - pa.th(d);
    Q ratio_sum = 0;
    std::vector<Q> sums;
    for (int i = 1; i <= d; ++i) {
        ratio_sum += (pa.th(i - 1) - pa.th(d - i + 1)) / span;
        sums.push_back(ratio_sum);
    }
    for (int i = 1; i <= d; ++i)
        pa.phi.push_back(varphi1 * sums[static_cast<std::size_t>(i - 1)] +
                         (pa.ths(i) - pa.ths(0)) * (pa.th(d - i + 1) - pa.th(0)));
    const Q phi1 = pa.phi[0];
    for (int i = 1; i <= d; ++i)
        pa.varphi.push_back(phi1 * sums[static_cast<std::size_t>(i - 1)] +
                            (pa.ths(i) - pa.ths(0)) * (pa.th(i - 1) - pa.th(d)));
    return pa;
}

inline bool distinct(const std::vector<Q>& v) {
    for (std::size_t i = 0; i < v.size(); ++i)
        for (std::size_t j = i + 1; j < v.size(); ++j)
            if (v[i] == v[j]) return false;
    return true;
}

inline bool nonzero(const std::vector<Q>& v) {
    for (const auto& x : v)
        if (sgn(x) == 0) return false;
    return true;
}

enum class SequenceKind { q_type, quadratic, alternating };

/// x_i for 0 <= i <= d satisfying the three-term recurrence with the base fixed by `kind` and `q`.
inline std::vector<Q> recurrent_sequence(std::mt19937_64& rng, SequenceKind kind, const Q& q, int d) {
    const Q c0 = random_nonzero(rng, 9, 3), c1 = random_nonzero(rng, 9, 3), c2 = random_nonzero(rng, 9, 3);
    std::vector<Q> out;
    for (int i = 0; i <= d; ++i) {
        switch (kind) {
            case SequenceKind::q_type:
                out.push_back(c0 + c1 * power(q, i) + c2 * power(q, -i));
                break;
            case SequenceKind::quadratic:
                out.push_back(c0 + c1 * i + c2 * i * i);
                break;
            case SequenceKind::alternating: {
                const int sign = (i % 2 == 0) ? 1 : -1;
                out.push_back(c0 + c1 * sign + c2 * i * sign);
                break;
            }
        }
    }
    return out;
}

/// A random valid Leonard parameter array of diameter d (retries until distinctness and nonvanishing hold).
inline ParameterArray<Q> random_leonard_array(std::mt19937_64& rng, int d, int r = 0, int t = 0) {
    static const Q bases[] = {Q(2), Q(3), Q(-2), Q(3, 2), Q(-5, 3)};
    std::uniform_int_distribution<int> kind_d(0, 2), base_d(0, 4);
    for (;;) {
        const auto kind = static_cast<SequenceKind>(kind_d(rng));
        const Q q = bases[base_d(rng)];
        auto th = recurrent_sequence(rng, kind, q, d);
        auto ts = recurrent_sequence(rng, kind, q, d);
        if (!distinct(th) || !distinct(ts)) continue;
        auto pa = complete_split(r, t, th, ts, random_nonzero(rng, 30, 4));
        if (nonzero(pa.varphi) && nonzero(pa.phi)) return pa;
    }
}

/// Global q-Racah parameters; r2 is determined by r1 r2 = s s* q^(D+1).
struct QRacahParams {
    int D = 3;
    Q q, h, h_star, s, s_star, r1, theta0, theta_star0;
    Q r2() const { return s * s_star * power(q, D + 1) / r1; }
};

inline ParameterArray<Q> q_racah_array(const QRacahParams& p) {
    ParameterArray<Q> pa;
    pa.d = p.D;
    const Q& q = p.q;
    const Q r2 = p.r2();
    for (int i = 0; i <= p.D; ++i) {
        pa.theta.push_back(p.theta0 + p.h * power(q, -i) * (1 - power(q, i)) * (1 - p.s * power(q, i + 1)));
        pa.theta_star.push_back(p.theta_star0 +
                                p.h_star * power(q, -i) * (1 - power(q, i)) * (1 - p.s_star * power(q, i + 1)));
    }
    for (int i = 1; i <= p.D; ++i) {
        const Q common = p.h * p.h_star * power(q, 1 - 2 * i) * (1 - power(q, i)) * (1 - power(q, i - p.D - 1));
        pa.varphi.push_back(common * (1 - p.r1 * power(q, i)) * (1 - r2 * power(q, i)));
        pa.phi.push_back(common * (p.r1 - p.s_star * power(q, i)) * (r2 - p.s_star * power(q, i)) / p.s_star);
    }
    return pa;
}

/// Random real q-Racah parameters with |q| > 1 giving a valid array.
inline QRacahParams random_q_racah(std::mt19937_64& rng, int D) {
    static const Q bases[] = {Q(2), Q(3), Q(-2), Q(-3), Q(3, 2), Q(5, 2), Q(-4, 3)};
    std::uniform_int_distribution<int> base_d(0, 6);
    for (;;) {
        QRacahParams p;
        p.D = D;
        p.q = bases[base_d(rng)];
        p.h = random_nonzero(rng, 6, 3);
        p.h_star = random_nonzero(rng, 6, 3);
        p.s = random_nonzero(rng, 7, 5);
        p.s_star = random_nonzero(rng, 7, 5);
        p.r1 = random_nonzero(rng, 7, 5);
        p.theta0 = random_nonzero(rng, 20, 2);
        p.theta_star0 = random_nonzero(rng, 20, 2);
        if (p.r1 == p.r2()) continue;
        auto pa = q_racah_array(p);
        if (distinct(pa.theta) && distinct(pa.theta_star) && nonzero(pa.varphi) && nonzero(pa.phi)) return p;
    }
}

/// Module array of a q-Racah graph: eigenvalues restricted to the module's ranges and split sequences
/// from the tau(W) forms.
inline ParameterArray<Q> q_racah_module_array(const QRacahParams& p, int r, int t, int d, const Q& tau) {
    ParameterArray<Q> pa;
    pa.r = r;
    pa.t = t;
    pa.d = d;
    const Q& q = p.q;
    for (int i = 0; i <= d; ++i) {
        const int j = t + i, k = r + i;
        pa.theta.push_back(p.theta0 + p.h * power(q, -j) * (1 - power(q, j)) * (1 - p.s * power(q, j + 1)));
        pa.theta_star.push_back(p.theta_star0 +
                                p.h_star * power(q, -k) * (1 - power(q, k)) * (1 - p.s_star * power(q, k + 1)));
    }
    const Q hh = p.h * p.h_star;
    for (int i = 1; i <= d; ++i) {
        const Q lead = hh * (1 - power(q, i)) * (1 - power(q, d - i + 1));
        pa.varphi.push_back(lead * (tau - p.s * p.s_star * power(q, r + t + i + 1) - power(q, -r - t - i - d)));
        pa.phi.push_back(lead * (tau - p.s_star * power(q, r - t - d + i) - p.s * power(q, t - r - i + 1)));
    }
    return pa;
}

struct ClassicalParams {
    int D = 3;
    Q b, alpha, sigma, theta_star0;
};

/// Intersection numbers from classical parameters.
inline void classical_bc(const ClassicalParams& p, std::vector<Q>& bi, std::vector<Q>& ci) {
    const Q& b = p.b;
    bi.assign(static_cast<std::size_t>(p.D + 1), Q(0));
    ci.assign(static_cast<std::size_t>(p.D + 1), Q(0));
    for (int i = 0; i <= p.D; ++i) {
        const Q gi = (power(b, i) - 1) / (b - 1);
        ci[static_cast<std::size_t>(i)] = gi * (1 + p.alpha * (power(b, i - 1) - 1) / (b - 1));
        bi[static_cast<std::size_t>(i)] = (power(b, p.D) - power(b, i)) / (b - 1) * (p.sigma - p.alpha * gi);
    }
    ci[0] = 0;
}

/// Trivial-module array of a graph with classical parameters: theta_i = [D-i](sigma - alpha [i]) - [i]
/// with [j] = (b^j - 1)/(b - 1), dual eigenvalues geometric in b^-i starting from theta*_1 / theta*_0 =
/// theta_1 / k, and varphi_1 = b_0 (theta*_1 - theta*_0). Empty optional when degenerate.
inline std::optional<ParameterArray<Q>> classical_array(const ClassicalParams& p) {
    const Q& b = p.b;
    auto gauss = [&](int j) { return Q((power(b, j) - 1) / (b - 1)); };
    std::vector<Q> th, ts;
    for (int i = 0; i <= p.D; ++i) th.push_back(gauss(p.D - i) * (p.sigma - p.alpha * gauss(i)) - gauss(i));
    std::vector<Q> bi, ci;
    classical_bc(p, bi, ci);
    for (int i = 0; i < p.D; ++i)
        if (sgn(bi[static_cast<std::size_t>(i)]) == 0 || sgn(ci[static_cast<std::size_t>(i + 1)]) == 0) return {};
    if (!distinct(th) || sgn(p.theta_star0) == 0) return {};
    const Q k = bi[0];
    const Q theta1 = th[1];
    const Q ts1 = p.theta_star0 * theta1 / k;
    for (int i = 0; i <= p.D; ++i)
        ts.push_back(p.theta_star0 + (ts1 - p.theta_star0) * (power(b, -i) - 1) / (Q(1) / b - 1));
    if (!distinct(ts)) return {};
    const Q varphi1 = k * (ts1 - p.theta_star0);
    auto pa = complete_split(0, 0, th, ts, varphi1);
    if (!nonzero(pa.varphi) || !nonzero(pa.phi)) return {};
    return pa;
}

/// Multiplicity of theta_1 from the cosine sequence u_i = theta*_i / theta*_0:
/// m = n / sum_i k_i u_i^2 with k_i and n from the intersection numbers.
inline Q classical_multiplicity(const ClassicalParams& p) {
    std::vector<Q> bi, ci;
    classical_bc(p, bi, ci);
    const auto pa = *classical_array(p);
    Q k = 1, n = 0, sum = 0;
    for (int i = 0; i <= p.D; ++i) {
        if (i > 0) k = k * bi[static_cast<std::size_t>(i - 1)] / ci[static_cast<std::size_t>(i)];
        const Q u = pa.ths(i) / pa.ths(0);
        n += k;
        sum += k * u * u;
    }
    return n / sum;
}

/// Random classical parameters with the given D and b giving a valid array, with theta*_0 set to the
/// multiplicity of theta_1; `h_zero` forces
/// alpha = sigma (1 - b).
inline ClassicalParams random_classical(std::mt19937_64& rng, int D, const Q& b, bool h_zero) {
    for (;;) {
        ClassicalParams p;
        p.D = D;
        p.b = b;
        p.sigma = random_nonzero(rng, 9, 2);
        p.alpha = h_zero ? Q(p.sigma * (1 - b)) : random_nonzero(rng, 5, 2);
        p.theta_star0 = 1;
        if (!classical_array(p)) continue;
        p.theta_star0 = classical_multiplicity(p);
        if (sgn(p.theta_star0) != 0 && classical_array(p)) return p;
    }
}

}  // namespace drg::testing
