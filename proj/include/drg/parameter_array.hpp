/**
 * @file parameter_array.hpp
 * @brief Parameter array of a thin irreducible module and shared per-module scalars.
 */
#pragma once

#include <string>
#include <vector>

#include "drg/audit.hpp"
#include "drg/scalar.hpp"

namespace drg {

/// (theta_{t+i}), (theta*_{r+i}) for 0 <= i <= d and the split sequences varphi_i, phi_i for
/// 1 <= i <= d; the sequences are stored 0-based, so varphi[i-1] holds varphi_i.
template <class T>
struct ParameterArray {
    int r = 0;
    int t = 0;
    int d = 0;
    std::vector<T> theta;
    std::vector<T> theta_star;
    std::vector<T> varphi;
    std::vector<T> phi;

    const T& th(int i) const { return theta[static_cast<std::size_t>(i)]; }
    const T& ths(int i) const { return theta_star[static_cast<std::size_t>(i)]; }
    /// varphi_i with varphi_0 = 0.
    T vp(int i) const { return i == 0 ? T(0) : varphi[static_cast<std::size_t>(i - 1)]; }
    T ph(int i) const { return i == 0 ? T(0) : phi[static_cast<std::size_t>(i - 1)]; }

    template <class U>
    ParameterArray<U> cast() const {
        auto conv = [](const std::vector<T>& v) {
            std::vector<U> out;
            for (const auto& x : v) {
                if constexpr (std::is_same_v<U, double>) {
                    out.push_back(to_double(x));
                } else {
                    out.push_back(U(x));
                }
            }
            return out;
        };
        return {r, t, d, conv(theta), conv(theta_star), conv(varphi), conv(phi)};
    }
};

/// Per-index residuals of the relations expressing each split sequence through the other, plus the
/// three endpoint relations phi_1, phi_d and varphi_d in terms of varphi_1 or phi_1.
struct SplitRelationResiduals {
    std::vector<double> varphi;  ///< index i-1 holds the residual at varphi_i
    std::vector<double> phi;
    double phi_1 = 0;
    double phi_d = 0;
    double varphi_d = 0;
};

template <class T>
SplitRelationResiduals split_relation_residuals(const ParameterArray<T>& pa) {
    SplitRelationResiduals out;
    const int d = pa.d;
    if (d < 1) return out;
    const T span = pa.th(0) - pa.th(d);
    T ratio_sum(0);
    for (int i = 1; i <= d; ++i) {
        ratio_sum += (pa.th(i - 1) - pa.th(d - i + 1)) / span;
        T varphi = pa.ph(1) * ratio_sum + (pa.ths(i) - pa.ths(0)) * (pa.th(i - 1) - pa.th(d));
        T phi = pa.vp(1) * ratio_sum + (pa.ths(i) - pa.ths(0)) * (pa.th(d - i + 1) - pa.th(0));
        out.varphi.push_back(rel_err(varphi, pa.vp(i)));
        out.phi.push_back(rel_err(phi, pa.ph(i)));
    }
    out.phi_1 = rel_err(T(pa.vp(1) + (pa.ths(1) - pa.ths(0)) * (pa.th(d) - pa.th(0))), pa.ph(1));
    out.phi_d = rel_err(T(pa.vp(1) + (pa.ths(d) - pa.ths(0)) * (pa.th(1) - pa.th(0))), pa.ph(d));
    out.varphi_d = rel_err(T(pa.ph(1) + (pa.ths(d) - pa.ths(0)) * (pa.th(d - 1) - pa.th(d))), pa.vp(d));
    return out;
}

/// Records the maxima of split_relation_residuals.
template <class T>
void audit_split_relations(const ParameterArray<T>& pa, Audit& audit) {
    if (pa.d < 1) return;
    auto res = split_relation_residuals(pa);
    for (double x : res.varphi) audit.record("varphi_from_phi", x);
    for (double x : res.phi) audit.record("phi_from_varphi", x);
    audit.record("phi1_from_varphi1", res.phi_1);
    audit.record("phid_from_varphi1", res.phi_d);
    audit.record("varphid_from_phi1", res.varphi_d);
}

/// Intersection numbers, dual intersection numbers, valencies and multiplicities of a module.
/// Every sequence has length d+1 with b[d] = c[0] = x[0] = 0 (and likewise for the starred ones).
template <class T>
struct ModuleScalars {
    std::string origin;
    std::vector<T> a, a_star;
    std::vector<T> b, b_star;
    std::vector<T> c, c_star;
    std::vector<T> x, x_star;
    std::vector<T> m, m_star;
    std::vector<T> k, k_star;
    T nu = T(0);
};

}  // namespace drg
