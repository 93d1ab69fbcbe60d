#include <doctest.h>

#include <random>

#include "drg/errors.hpp"
#include "drg/families.hpp"
#include "support/generators.hpp"
#include "support/oracles.hpp"

using namespace drg;
using namespace drg::testing;

namespace {

ParameterArray<Q> cube_array() {
    return {0, 0, 3, {3, 1, -1, -3}, {3, 1, -1, -3}, {-6, -8, -6}, {6, 8, 6}};
}

/// theta_i with theta_{i+2} - theta_{i-1} = 4 (theta_{i+1} - theta_i), so q + 1/q = 3 and q is irrational.
std::vector<Q> golden_sequence(const Q& shift) {
    std::vector<Q> s{Q(0), Q(1), Q(5)};
    s.push_back(s[0] + 4 * (s[2] - s[1]));
    s.push_back(s[1] + 4 * (s[3] - s[2]));
    for (auto& x : s) x += shift;
    return s;
}

}  // namespace

TEST_SUITE("families") {
    TEST_CASE("q-Racah fit rejects q = 1 and irrational q in exact mode") {
        CHECK_THROWS_AS(fit_q_racah(cube_array(), 0.0), NotOfType);
        auto pa = complete_split(0, 0, golden_sequence(Q(0)), golden_sequence(Q(2)), Q(-7));
        REQUIRE(validate_parameter_array(pa, 0.0).valid());
        CHECK_THROWS_AS(fit_q_racah(pa, 0.0), IrrationalValue);
        try {
            auto fit = fit_q_racah(pa.cast<double>(), 1e-9);
            CHECK(fit.q + 1.0 / fit.q == doctest::Approx(3.0));
            CHECK(std::abs(fit.q) > 1.0);
        } catch (const NotOfType&) {
            // a degenerate subfamily is a valid outcome; q itself is checked above
        }
    }

    TEST_CASE("q-Racah fit and module parameters on generated data") {
        std::mt19937_64 rng(21);
        for (int it = 0; it < 10; ++it) {
            auto p = random_q_racah(rng, 3 + it % 3);
            auto pa = q_racah_array(p);
            auto fit = fit_q_racah(pa, 0.0);
            CHECK(fit.q == p.q);
            CHECK(fit.h == p.h);
            CHECK(fit.s_star == p.s_star);
            CHECK(fit.audit.passed(0.0));
            auto gi = q_racah_graph_intersection_numbers(fit, 0.0);
            auto want = oracle_scalars(pa);
            CHECK(gi.b == want.b);
            CHECK(gi.c_star == want.c_star);
        }
    }

    TEST_CASE("classical fit") {
        CHECK_THROWS_AS(fit_classical(cube_array(), 0.0), NotOfType);
        std::mt19937_64 rng(22);
        for (int it = 0; it < 10; ++it) {
            auto p = random_classical(rng, 3 + it % 3, it % 2 ? Q(2) : Q(-2), it == 0);
            auto pa = *classical_array(p);
            auto fit = fit_classical(pa, 0.0);
            CHECK(fit.b == p.b);
            CHECK(fit.alpha == p.alpha);
            CHECK(fit.sigma == p.sigma);
            if (it == 0) CHECK(fit.h == 0);
            auto m = classical_module_params(fit, pa, 0.0);
            auto in = classical_intersection_numbers(fit, m, pa, 0.0);
            CHECK(scalar_mismatch(ModuleScalars<Q>{"", in.a, in.a_star, in.b, in.b_star, in.c, in.c_star, {}, {}, {},
                                                   {}, {}, {}, oracle_scalars(pa).nu},
                                  oracle_scalars(pa)) == 0.0);
        }
    }

    TEST_CASE("a non-trivial module cannot seed a global fit") {
        std::mt19937_64 rng(23);
        auto p = random_q_racah(rng, 4);
        auto pm = q_racah_module_array(p, 1, 1, 2, Q(3));
        CHECK_THROWS_AS(fit_q_racah(pm, 0.0), NotOfType);
    }
}
