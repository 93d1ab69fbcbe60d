#include "drg/linalg.hpp"

#include <cmath>

namespace drg {

void make_primitive(Vec<Rational>& v) {
    mpz_class lcm_den = 1;
    mpz_class gcd_num = 0;
    for (const auto& x : v) {
        if (sgn(x) == 0) continue;
        mpz_lcm(lcm_den.get_mpz_t(), lcm_den.get_mpz_t(), x.get_den().get_mpz_t());
        mpz_gcd(gcd_num.get_mpz_t(), gcd_num.get_mpz_t(), x.get_num().get_mpz_t());
    }
    if (gcd_num == 0) return;
    Rational f(lcm_den, gcd_num);
    f.canonicalize();
    for (auto& x : v) x *= f;
}

std::pair<std::vector<double>, Matrix<double>> jacobi_eigen(Matrix<double> a) {
    const std::size_t n = a.rows();
    Matrix<double> v = Matrix<double>::identity(n);
    double total = 0;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) total += a(i, j) * a(i, j);
    const double target = 1e-30 * std::max(total, 1e-300);
    for (int sweep = 0; sweep < 100; ++sweep) {
        double off = 0;
        for (std::size_t p = 0; p < n; ++p)
            for (std::size_t q = p + 1; q < n; ++q) off += a(p, q) * a(p, q);
        if (off <= target) break;
        for (std::size_t p = 0; p < n; ++p) {
            for (std::size_t q = p + 1; q < n; ++q) {
                double apq = a(p, q);
                if (apq == 0.0) continue;
                double theta = (a(q, q) - a(p, p)) / (2.0 * apq);
                double t = (theta >= 0 ? 1.0 : -1.0) / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
                double c = 1.0 / std::sqrt(t * t + 1.0);
                double s = t * c;
                for (std::size_t k = 0; k < n; ++k) {
                    double akp = a(k, p);
                    double akq = a(k, q);
                    a(k, p) = c * akp - s * akq;
                    a(k, q) = s * akp + c * akq;
                }
                for (std::size_t k = 0; k < n; ++k) {
                    double apk = a(p, k);
                    double aqk = a(q, k);
                    a(p, k) = c * apk - s * aqk;
                    a(q, k) = s * apk + c * aqk;
                }
                for (std::size_t k = 0; k < n; ++k) {
                    double vkp = v(k, p);
                    double vkq = v(k, q);
                    v(k, p) = c * vkp - s * vkq;
                    v(k, q) = s * vkp + c * vkq;
                }
            }
        }
    }
    std::vector<double> values(n);
    for (std::size_t i = 0; i < n; ++i) values[i] = a(i, i);
    return {values, v};
}

std::vector<std::vector<std::size_t>> cluster_descending(const std::vector<double>& values, double eps,
                                                         std::vector<std::size_t>& order) {
    order.resize(values.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return values[a] > values[b]; });
    std::vector<std::vector<std::size_t>> clusters;
    for (std::size_t idx : order) {
        if (!clusters.empty()) {
            double lead = values[clusters.back().front()];
            if (std::abs(lead - values[idx]) <= eps * std::max(1.0, std::abs(lead))) {
                clusters.back().push_back(idx);
                continue;
            }
        }
        clusters.push_back({idx});
    }
    return clusters;
}

std::vector<Eigenspace<double>> eig_sym(const Matrix<double>& m, double eps) {
    if (!m.symmetric(eps)) throw ContractViolation("eig_sym: matrix is not symmetric");
    auto [values, vectors] = jacobi_eigen(m);
    std::vector<std::size_t> order;
    auto clusters = cluster_descending(values, eps, order);
    std::vector<Eigenspace<double>> out;
    for (const auto& cl : clusters) {
        double mean = 0;
        std::vector<Vec<double>> cols;
        for (auto idx : cl) {
            mean += values[idx];
            cols.push_back(vectors.column(idx));
        }
        mean /= static_cast<double>(cl.size());
        out.push_back({mean, Subspace<double>::span(m.rows(), cols, eps)});
    }
    return out;
}

std::vector<Eigenspace<Rational>> eig_sym(const Matrix<Rational>& m, double eps) {
    if (!m.symmetric(eps)) throw ContractViolation("eig_sym: matrix is not symmetric");
    const std::size_t n = m.rows();
    auto [values, vectors] = jacobi_eigen(m.cast<double>());
    std::vector<std::size_t> order;
    auto clusters = cluster_descending(values, 1e-7, order);
    std::vector<Eigenspace<Rational>> out;
    std::size_t total = 0;
    for (const auto& cl : clusters) {
        double mean = 0;
        for (auto idx : cl) mean += values[idx];
        mean /= static_cast<double>(cl.size());
        Rational lambda = rational_approximation(mean, 1000000, 1e-9);
        if (!out.empty() && out.back().value == lambda) continue;
        Matrix<Rational> shifted = m;
        for (std::size_t i = 0; i < n; ++i) shifted(i, i) -= lambda;
        auto kernel = nullspace(shifted, eps);
        if (kernel.empty()) continue;
        total += kernel.size();
        out.push_back({lambda, Subspace<Rational>::span(n, kernel, eps)});
    }
    if (total != n) throw IrrationalValue("eigenvalues are not all rational");
    return out;
}

}  // namespace drg
