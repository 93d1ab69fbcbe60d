#include <doctest.h>

#include <random>

#include "drg/errors.hpp"
#include "drg/kernels.hpp"
#include "drg/linalg.hpp"
#include "drg/polynomial.hpp"
#include "drg/scalar.hpp"

using namespace drg;

TEST_SUITE("numeric_kernel") {
    TEST_CASE("rational parsing and formatting") {
        CHECK(parse_rational("-1/2") == Rational(-1, 2));
        CHECK(parse_rational("0.25") == Rational(1, 4));
        CHECK(parse_rational("6/4") == Rational(3, 2));
        CHECK(parse_rational("\xE2\x88\x92" "3") == Rational(-3));
        CHECK_THROWS_AS(parse_rational("1/0"), ParseError);
        CHECK_THROWS_AS(parse_rational("abc"), ParseError);
        CHECK(format_scalar(Rational(-3, 4)) == "-3/4");
        CHECK(format_scalar(Rational(5)) == "5");
        CHECK(parse_double(format_scalar(0.1)) == 0.1);
    }

    TEST_CASE("exact square roots and continued-fraction rounding") {
        CHECK(exact_sqrt(Rational(9, 4)) == Rational(3, 2));
        CHECK_FALSE(exact_sqrt(Rational(2)).has_value());
        CHECK(rational_approximation(0.3333333333333333, 1000, 1e-12) == Rational(1, 3));
        CHECK(power(Rational(2), -3) == Rational(1, 8));
    }

    TEST_CASE("serial and parallel kernels agree") {
        std::mt19937_64 rng(5);
        std::uniform_int_distribution<int> d(-4, 4);
        Matrix<Rational> a(7, 5), b(5, 6);
        for (std::size_t i = 0; i < 7; ++i)
            for (std::size_t j = 0; j < 5; ++j) a(i, j) = Rational(d(rng), 3);
        for (std::size_t i = 0; i < 5; ++i)
            for (std::size_t j = 0; j < 6; ++j) b(i, j) = Rational(d(rng));
        const auto s = serial::matmul(a, b);
        const auto p = parallel::matmul(a, b);
        CHECK(max_abs_diff(s, p) == 0.0);
        // entry (i, j) recomputed by hand
        Rational e = 0;
        for (std::size_t k = 0; k < 5; ++k) e += a(3, k) * b(k, 2);
        CHECK(s(3, 2) == e);
        Matrix<Rational> x(4, 4), y(4, 4), z(4, 4);
        Rational manual = 0;
        for (std::size_t i = 0; i < 4; ++i)
            for (std::size_t j = 0; j < 4; ++j) {
                x(i, j) = d(rng), y(i, j) = d(rng), z(i, j) = d(rng);
                manual += x(i, j) * y(i, j) * z(i, j);
            }
        CHECK(serial::triple_hadamard_sum(x, y, z) == manual);
        CHECK(parallel::triple_hadamard_sum(x, y, z) == manual);
    }

    TEST_CASE("rank, nullspace and solve") {
        Matrix<Rational> m(3, 3);
        m(0, 0) = 1, m(0, 1) = 2, m(0, 2) = 3;
        m(1, 0) = 2, m(1, 1) = 4, m(1, 2) = 6;
        m(2, 0) = 1, m(2, 1) = 0, m(2, 2) = 1;
        CHECK(rank(m, 0.0) == 2);
        auto ns = nullspace(m, 0.0);
        REQUIRE(ns.size() == 1);
        CHECK(is_zero_vector(m.apply(ns[0]), 0.0));
        Matrix<double> a = Matrix<double>::identity(2);
        a(0, 1) = 1;
        Matrix<double> rhs(2, 1);
        rhs(0, 0) = 3, rhs(1, 0) = 1;
        auto sol = solve(a, rhs, 1e-12);
        CHECK(sol(0, 0) == doctest::Approx(2));
        CHECK(sol(1, 0) == doctest::Approx(1));
    }

    TEST_CASE("symmetric eigenspaces, exact and float") {
        // path on three vertices: eigenvalues sqrt2, 0, -sqrt2 are irrational
        Matrix<Rational> p3(3, 3);
        p3(0, 1) = p3(1, 0) = p3(1, 2) = p3(2, 1) = 1;
        CHECK_THROWS_AS(eig_sym(p3, 1e-9), IrrationalValue);
        Matrix<double> pf(3, 3);
        pf(0, 1) = pf(1, 0) = pf(1, 2) = pf(2, 1) = 1;
        auto fs = eig_sym(pf, 1e-9);
        REQUIRE(fs.size() == 3);
        CHECK(fs[0].value == doctest::Approx(std::sqrt(2.0)));
        // K4: eigenvalues 3 (once) and -1 (three times)
        Matrix<Rational> k4(4, 4);
        for (std::size_t i = 0; i < 4; ++i)
            for (std::size_t j = 0; j < 4; ++j) k4(i, j) = i == j ? 0 : 1;
        auto es = eig_sym(k4, 1e-9);
        REQUIRE(es.size() == 2);
        CHECK(es[0].value == 3);
        CHECK(es[0].space.dim() == 1);
        CHECK(es[1].value == -1);
        CHECK(es[1].space.dim() == 3);
    }

    TEST_CASE("polynomials") {
        auto p = Polynomial<Rational>::from_roots({Rational(1), Rational(-2)});
        CHECK(p(Rational(1)) == 0);
        CHECK(p(Rational(0)) == -2);
        CHECK(p.degree() == 2);
        auto q = p * p;
        CHECK(q(Rational(3)) == p(Rational(3)) * p(Rational(3)));
    }
}
