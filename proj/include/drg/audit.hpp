/**
 * @file audit.hpp
 * @brief Named residual maxima and failed predicates collected by the checks.
 */
#pragma once

#include <algorithm>
#include <string>
#include <utility>
#include <vector>

#include "drg/scalar.hpp"

namespace drg {

class Audit {
public:
    /// Keeps the largest residual seen under `name`; insertion order is preserved.
    void record(const std::string& name, double residual) {
        for (auto& [n, r] : residuals_)
            if (n == name) {
                r = std::max(r, residual);
                return;
            }
        residuals_.emplace_back(name, residual);
    }

    /// Records |lhs - rhs| / max(1, |rhs|).
    void compare(const std::string& name, const Rational& lhs, const Rational& rhs) {
        record(name, rel_err(lhs, rhs));
    }
    void compare(const std::string& name, double lhs, double rhs) { record(name, rel_err(lhs, rhs)); }

    void require(const std::string& name, bool ok, const std::string& detail = {}) {
        if (!ok) failures_.push_back(detail.empty() ? name : name + ": " + detail);
    }

    void merge(const Audit& other, const std::string& prefix = {}) {
        for (const auto& [n, r] : other.residuals_) record(prefix + n, r);
        for (const auto& f : other.failures_) failures_.push_back(prefix + f);
    }

    const std::vector<std::pair<std::string, double>>& residuals() const noexcept { return residuals_; }
    const std::vector<std::string>& failures() const noexcept { return failures_; }

    double max_residual() const {
        double m = 0;
        for (const auto& [n, r] : residuals_) m = std::max(m, r);
        return m;
    }

    double residual(const std::string& name) const {
        for (const auto& [n, r] : residuals_)
            if (n == name) return r;
        return 0.0;
    }

    bool passed(double eps) const { return failures_.empty() && max_residual() <= eps; }

    /// Names whose residual exceeds eps, followed by failed predicates.
    std::vector<std::string> violations(double eps) const {
        std::vector<std::string> out;
        for (const auto& [n, r] : residuals_)
            if (r > eps) out.push_back(n);
        out.insert(out.end(), failures_.begin(), failures_.end());
        return out;
    }

private:
    std::vector<std::pair<std::string, double>> residuals_;
    std::vector<std::string> failures_;
};

}  // namespace drg
