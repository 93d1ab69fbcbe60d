#include "drg/scalar.hpp"

#include <cstdio>
#include <cstdlib>

#include "drg/errors.hpp"

namespace drg {

namespace {

std::string normalize_minus(std::string s) {
    const std::string unicode_minus = "\xE2\x88\x92";
    for (std::size_t pos; (pos = s.find(unicode_minus)) != std::string::npos;) {
        s.replace(pos, unicode_minus.size(), "-");
    }
    auto first = s.find_first_not_of(" \t");
    auto last = s.find_last_not_of(" \t");
    if (first == std::string::npos) return {};
    return s.substr(first, last - first + 1);
}

Rational parse_decimal(const std::string& s) {
    std::size_t i = 0;
    bool negative = false;
    if (i < s.size() && (s[i] == '+' || s[i] == '-')) negative = s[i++] == '-';
    std::string digits;
    long exponent = 0;
    bool seen_digit = false;
    bool seen_point = false;
    for (; i < s.size(); ++i) {
        char ch = s[i];
        if (ch >= '0' && ch <= '9') {
            digits += ch;
            seen_digit = true;
            if (seen_point) --exponent;
        } else if (ch == '.' && !seen_point) {
            seen_point = true;
        } else {
            break;
        }
    }
    if (!seen_digit) throw ParseError("not a number: '" + s + "'");
    if (i < s.size()) {
        if (s[i] != 'e' && s[i] != 'E') throw ParseError("not a number: '" + s + "'");
        char* end = nullptr;
        std::string tail = s.substr(i + 1);
        long e = std::strtol(tail.c_str(), &end, 10);
        if (tail.empty() || *end != '\0') throw ParseError("bad exponent in '" + s + "'");
        exponent += e;
    }
    mpz_class num(digits, 10);
    mpz_class scale;
    mpz_ui_pow_ui(scale.get_mpz_t(), 10, static_cast<unsigned long>(exponent < 0 ? -exponent : exponent));
    Rational value = exponent < 0 ? Rational(num, scale) : Rational(num * scale);
    value.canonicalize();
    return negative ? Rational(-value) : value;
}

}  // namespace

std::optional<Rational> exact_sqrt(const Rational& x) {
    if (sgn(x) < 0) return std::nullopt;
    const mpz_class& n = x.get_num();
    const mpz_class& d = x.get_den();
    if (!mpz_perfect_square_p(n.get_mpz_t()) || !mpz_perfect_square_p(d.get_mpz_t())) return std::nullopt;
    mpz_class rn, rd;
    mpz_sqrt(rn.get_mpz_t(), n.get_mpz_t());
    mpz_sqrt(rd.get_mpz_t(), d.get_mpz_t());
    Rational r(rn, rd);
    r.canonicalize();
    return r;
}

std::optional<double> exact_sqrt(double x) {
    if (x < 0) return std::nullopt;
    return std::sqrt(x);
}

std::string format_scalar(const Rational& x) { return x.get_str(); }

std::string format_scalar(double x) {
    if (x == 0.0) return "0";  // folds -0
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

Rational parse_rational(const std::string& text) {
    std::string s = normalize_minus(text);
    if (s.empty()) throw ParseError("empty number");
    auto slash = s.find('/');
    if (slash == std::string::npos) return parse_decimal(s);
    Rational num = parse_decimal(s.substr(0, slash));
    Rational den = parse_decimal(s.substr(slash + 1));
    if (sgn(den) == 0) throw ParseError("zero denominator in '" + text + "'");
    return Rational(num / den);
}

double parse_double(const std::string& text) {
    std::string s = normalize_minus(text);
    if (s.empty()) throw ParseError("empty number");
    auto slash = s.find('/');
    auto one = [&](const std::string& part) {
        char* end = nullptr;
        double v = std::strtod(part.c_str(), &end);
        if (part.empty() || *end != '\0') throw ParseError("not a number: '" + text + "'");
        return v;
    };
    if (slash == std::string::npos) return one(s);
    double den = one(s.substr(slash + 1));
    if (den == 0.0) throw ParseError("zero denominator in '" + text + "'");
    return one(s.substr(0, slash)) / den;
}

Rational rational_approximation(double x, long max_denominator, double eps) {
    // Convergents h/k of the continued fraction of x.
    mpz_class h_prev = 1, h = static_cast<long>(std::floor(x));
    mpz_class k_prev = 0, k = 1;
    double frac = x - std::floor(x);
    Rational best(h, k);
    for (int iter = 0; iter < 64; ++iter) {
        if (std::abs(best.get_d() - x) <= eps * std::max(1.0, std::abs(x))) break;
        if (frac < 1e-15) break;
        double inv = 1.0 / frac;
        long a = static_cast<long>(std::floor(inv));
        frac = inv - static_cast<double>(a);
        mpz_class h_next = a * h + h_prev;
        mpz_class k_next = a * k + k_prev;
        if (k_next > max_denominator) break;
        h_prev = h;
        h = h_next;
        k_prev = k;
        k = k_next;
        best = Rational(h, k);
        best.canonicalize();
    }
    return best;
}

}  // namespace drg
