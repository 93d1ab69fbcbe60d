/**
 * @file scalar.hpp
 * @brief Scalar policy shared by the floating and exact rational code paths.
 */
#pragma once

#include <gmpxx.h>

#include <cmath>
#include <optional>
#include <string>
#include <type_traits>

namespace drg {

using Rational = mpq_class;

enum class Mode { exact, floating };

template <class T>
inline constexpr bool is_exact_v = std::is_same_v<T, Rational>;

inline double to_double(double x) { return x; }
inline double to_double(const Rational& x) { return x.get_d(); }

template <class T>
T from_int(long v) {
    return T(v);
}

template <class T>
T abs_of(const T& x) {
    if constexpr (is_exact_v<T>) {
        return Rational(abs(x));
    } else {
        return std::abs(x);
    }
}

/// Zero test: exact equality for rationals, |x| <= eps * max(1, scale) otherwise.
template <class T>
bool is_zero(const T& x, double eps, double scale = 1.0) {
    if constexpr (is_exact_v<T>) {
        return sgn(x) == 0;
    } else {
        return std::abs(x) <= eps * std::max(1.0, std::abs(scale));
    }
}

/// Equality up to a relative tolerance (exact equality for rationals).
template <class T>
bool near(const T& a, const T& b, double eps) {
    if constexpr (is_exact_v<T>) {
        return a == b;
    } else {
        return std::abs(a - b) <= eps * std::max({1.0, std::abs(a), std::abs(b)});
    }
}

/// |a - b| / max(1, |b|), computed exactly before rounding when T is rational.
template <class T>
double rel_err(const T& a, const T& b) {
    T diff = a - b;
    double den = std::max(1.0, std::abs(to_double(b)));
    if constexpr (is_exact_v<T>) {
        if (sgn(diff) == 0) return 0.0;
    }
    return std::abs(to_double(diff)) / den;
}

/// Integer power with possibly negative exponent.
template <class T>
T power(const T& base, int e) {
    T result = from_int<T>(1);
    T b = base;
    unsigned n = static_cast<unsigned>(e < 0 ? -e : e);
    while (n) {
        if (n & 1u) result *= b;
        b *= b;
        n >>= 1u;
    }
    if (e < 0) result = from_int<T>(1) / result;
    return result;
}

/// Square root when it exists in T (always for non-negative doubles).
std::optional<Rational> exact_sqrt(const Rational& x);
std::optional<double> exact_sqrt(double x);

/// Lossless text form: "p/q" for rationals, 17 significant digits for doubles.
std::string format_scalar(const Rational& x);
std::string format_scalar(double x);

/// Parses "3", "-1/2", "0.25", "1e-3" (and a Unicode minus sign).
Rational parse_rational(const std::string& text);
double parse_double(const std::string& text);

template <class T>
T parse_scalar(const std::string& text) {
    if constexpr (is_exact_v<T>) {
        return parse_rational(text);
    } else {
        return parse_double(text);
    }
}

/// Best rational approximation with bounded denominator (continued fractions).
Rational rational_approximation(double x, long max_denominator, double eps);

}  // namespace drg
