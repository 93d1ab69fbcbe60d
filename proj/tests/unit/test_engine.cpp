#include <doctest.h>

#include <random>

#include "drg/errors.hpp"
#include "drg/parameter_engine.hpp"
#include "support/generators.hpp"
#include "support/oracles.hpp"

using namespace drg;
using namespace drg::testing;

namespace {

ParameterArray<Q> cube_array() {
    return {0, 0, 3, {3, 1, -1, -3}, {3, 1, -1, -3}, {-6, -8, -6}, {6, 8, 6}};
}

}  // namespace

TEST_SUITE("parameter_engine") {
    TEST_CASE("formula scalars equal the closed-form oracle on random arrays") {
        std::mt19937_64 rng(11);
        for (int it = 0; it < 40; ++it) {
            const int d = 1 + it % 6;
            auto pa = random_leonard_array(rng, d, it % 3, (it / 3) % 3);
            REQUIRE(validate_parameter_array(pa, 0.0).valid());
            auto ds = derived_scalars(pa, 0.0);
            CHECK(ds.audit.passed(0.0));
            const auto want = oracle_scalars(pa);
            CHECK(scalar_mismatch(ds.scalars, want) == 0.0);
            CHECK(ds.scalars.k == want.k);
            CHECK(ds.scalars.k_star == want.k_star);
        }
    }

    TEST_CASE("polynomials and the full formula suite") {
        std::mt19937_64 rng(12);
        for (int it = 0; it < 20; ++it) {
            auto pa = random_leonard_array(rng, 2 + it % 5);
            auto fa = analyze_parameter_array(pa, 0.0);
            CHECK(fa.audit.passed(0.0));
            const auto o = oracle_polynomials(pa.d, fa.scalars);
            for (int i = 0; i <= pa.d + 1; ++i)
                CHECK(coeff_rel(fa.polynomials.p[static_cast<std::size_t>(i)], o.p[static_cast<std::size_t>(i)]) == 0.0);
            for (int i = 0; i <= pa.d; ++i) {
                CHECK(fa.polynomials.u[static_cast<std::size_t>(i)](pa.th(0)) == 1);
                // P_ij = v_j(theta_i)
                for (int j = 0; j <= pa.d; ++j)
                    CHECK(fa.P(static_cast<std::size_t>(i), static_cast<std::size_t>(j)) ==
                          o.v[static_cast<std::size_t>(j)](pa.th(i)));
            }
        }
    }

    TEST_CASE("validation") {
        auto pa = cube_array();
        CHECK(validate_parameter_array(pa, 0.0).valid());
        auto dup = pa;
        dup.theta[1] = dup.theta[0];
        auto rep = validate_parameter_array(dup, 0.0);
        REQUIRE_FALSE(rep.valid());
        CHECK(rep.issues.front().index == 1);
        CHECK_THROWS_AS(require_valid(dup, 0.0), ValidationError);
        auto zero = pa;
        zero.varphi[1] = 0;
        CHECK_FALSE(validate_parameter_array(zero, 0.0).valid());
        auto broken = pa;
        broken.phi[1] = 9;
        CHECK_FALSE(validate_parameter_array(broken, 0.0).valid());
    }

    TEST_CASE("isomorphism") {
        std::mt19937_64 rng(13);
        auto pa = random_leonard_array(rng, 4);
        CHECK(isomorphism_test(pa, pa, 0.0) == IsoVerdict::isomorphic);
        auto other = complete_split(0, 0, pa.theta, pa.theta_star, Q(pa.vp(1) + 1));
        if (validate_parameter_array(other, 0.0).valid())
            CHECK(isomorphism_test(pa, other, 0.0) == IsoVerdict::not_isomorphic);
        auto shifted = pa;
        shifted.r = 1;
        CHECK(isomorphism_test(pa, shifted, 0.0) == IsoVerdict::not_isomorphic);
    }

    TEST_CASE("float arithmetic tracks exact arithmetic") {
        std::mt19937_64 rng(14);
        auto pa = random_leonard_array(rng, 5);
        auto ex = derived_scalars(pa, 0.0);
        auto fl = derived_scalars(pa.cast<double>(), 1e-9);
        auto dev = scalar_deviation(fl.scalars, [&] {
            ModuleScalars<double> s;
            auto conv = [](const std::vector<Q>& v) {
                std::vector<double> out;
                for (const auto& x : v) out.push_back(to_double(x));
                return out;
            };
            s.a = conv(ex.scalars.a), s.a_star = conv(ex.scalars.a_star);
            s.b = conv(ex.scalars.b), s.b_star = conv(ex.scalars.b_star);
            s.c = conv(ex.scalars.c), s.c_star = conv(ex.scalars.c_star);
            s.x = conv(ex.scalars.x), s.x_star = conv(ex.scalars.x_star);
            s.k = conv(ex.scalars.k), s.k_star = conv(ex.scalars.k_star);
            s.m = conv(ex.scalars.m), s.m_star = conv(ex.scalars.m_star);
            s.nu = to_double(ex.scalars.nu);
            return s;
        }());
        CHECK(dev.max_rel < 1e-9);
    }
}
