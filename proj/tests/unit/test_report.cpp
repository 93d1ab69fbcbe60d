#include <doctest.h>

#include <random>

#include "drg/errors.hpp"
#include "drg/graph.hpp"
#include "drg/json_io.hpp"
#include "drg/report.hpp"
#include "support/generators.hpp"

using namespace drg;
using namespace drg::graphs;
using namespace drg::testing;

namespace {

Json cube_doc() {
    return Json::parse(R"({"r": 0, "t": 0, "d": 3, "theta": [3, 1, -1, -3], "theta_star": ["3", "1", "-1", "-3"],
                          "varphi": [-6, -8, -6], "phi": [6, 8, 6], "note": "kept"})");
}

}  // namespace

TEST_SUITE("cli_report") {
    TEST_CASE("scalar JSON input") {
        CHECK(scalar_from_json<Rational>(Json::parse("0.25"), "x") == Rational(1, 4));
        CHECK(scalar_from_json<Rational>(Json("-2/6"), "x") == Rational(-1, 3));
        CHECK(scalar_from_json<Rational>(Json(7), "x") == 7);
        CHECK(scalar_from_json<double>(Json("1/4"), "x") == 0.25);
        CHECK_THROWS_AS(scalar_from_json<Rational>(Json::array(), "x"), ParseError);
    }

    TEST_CASE("parameter array round trip keeps unknown keys") {
        auto doc = parameter_array_from_json<Rational>(cube_doc());
        CHECK(doc.array.d == 3);
        CHECK(doc.array.theta_star[3] == -3);
        CHECK(doc.extra.at("note") == "kept");
        auto back = parameter_array_to_json(doc.array, doc.extra);
        CHECK(back.at("phi")[1] == "8");
        CHECK(back.at("note") == "kept");
        auto bad = cube_doc();
        bad["varphi"].erase(0);
        CHECK_THROWS_AS(parameter_array_from_json<Rational>(bad), ParseError);
        auto missing = cube_doc();
        missing.erase("phi");
        CHECK_THROWS_AS(parameter_array_from_json<Rational>(missing), ParseError);
    }

    TEST_CASE("analyze-params") {
        RunOptions opt;
        auto res = run_analyze_params(cube_doc(), opt);
        CHECK(res.exit_code == exit_ok);
        CHECK(res.report.at("scalars").at("nu") == "8");
        CHECK(res.report.at("parameter_array").at("note") == "kept");
        auto dup = cube_doc();
        dup["theta"][1] = 3;
        CHECK(run_analyze_params(dup, opt).exit_code == exit_audit_failure);
        opt.mode = Mode::floating;
        CHECK(run_analyze_params(cube_doc(), opt).exit_code == exit_ok);
    }

    TEST_CASE("fit-family on parameter arrays") {
        std::mt19937_64 rng(31);
        auto p = random_q_racah(rng, 4);
        RunOptions opt;
        opt.family = "qracah";
        auto res = run_fit_family_params(parameter_array_to_json(q_racah_array(p)), opt);
        CHECK(res.exit_code == exit_ok);
        CHECK(res.report.at("families").at("q_racah").at("status") == "fitted");
        opt.family = "classical";
        CHECK(run_fit_family_params(parameter_array_to_json(q_racah_array(p)), opt).exit_code == exit_audit_failure);
        auto c = random_classical(rng, 4, Q(3), false);
        CHECK(run_fit_family_params(parameter_array_to_json(*classical_array(c)), opt).exit_code == exit_ok);
    }

    TEST_CASE("graph commands and exit codes") {
        RunOptions opt;
        CHECK(run_analyze_graph(hypercube(3), opt).exit_code == exit_ok);
        CHECK(run_analyze_graph(path(4), opt).exit_code == exit_not_distance_regular);
        CHECK(run_analyze_graph(complete(5), opt).exit_code == exit_not_q_polynomial);
        auto lp = run_analyze_graph(line_graph(petersen()), opt);
        CHECK(lp.exit_code == exit_not_q_polynomial);
        CHECK(lp.report.at("q_polynomial_orderings").at("all").empty());
        opt.mode = Mode::floating;
        opt.eps = 0.0;
        auto strict = run_cross_check(johnson(6, 3), opt);
        CHECK(strict.exit_code == exit_audit_failure);
        CHECK(strict.report.contains("modules"));
    }

    TEST_CASE("identical runs give identical bytes") {
        RunOptions opt;
        opt.mode = Mode::floating;
        opt.seed = 9;
        CHECK(dump_json(run_analyze_graph(johnson(6, 3), opt).report) ==
              dump_json(run_analyze_graph(johnson(6, 3), opt).report));
    }
}
