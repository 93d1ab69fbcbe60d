#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "drg/errors.hpp"
#include "drg/graph.hpp"
#include "drg/json_io.hpp"
#include "drg/report.hpp"

namespace {

struct CommonFlags {
    std::string mode = "exact";
    std::optional<double> tol;
    std::uint64_t seed = 1;
    std::string out;
};

void add_common(CLI::App* sub, CommonFlags& f) {
    sub->add_option("--mode", f.mode, "Arithmetic: exact (rational) or float")
        ->check(CLI::IsMember({"exact", "float"}));
    sub->add_option("--tol", f.tol, "Float-mode tolerance (overrides DRG_TOL)");
    sub->add_option("--seed", f.seed, "Seed for randomized decomposition");
    sub->add_option("--out", f.out, "Write the report here instead of stdout");
}

drg::RunOptions options_from(const CommonFlags& f) {
    drg::RunOptions opt;
    opt.mode = f.mode == "float" ? drg::Mode::floating : drg::Mode::exact;
    if (const char* env = std::getenv("DRG_TOL"); env && *env) opt.eps = drg::parse_double(env);
    if (f.tol) opt.eps = *f.tol;
    if (!(opt.eps >= 0)) throw drg::ParseError("tolerance must be nonnegative");
    opt.seed = f.seed;
    return opt;
}

void emit(const drg::Json& report, const std::string& out) {
    const std::string text = drg::dump_json(report);
    if (out.empty()) {
        std::cout << text;
        return;
    }
    std::ofstream f(out, std::ios::binary);
    if (!f) throw drg::ParseError("cannot write " + out);
    f << text;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Thin modules of Q-polynomial distance-regular graphs"};
    app.require_subcommand(1);

    CommonFlags fa, fp, fc, ff;
    std::string graph_a, params_p, graph_c, graph_f, params_f, family_p, family_f;
    int base_a = 0, base_c = 0, base_f = 0;

    auto* analyze = app.add_subcommand("analyze-graph", "Analyze every thin module of a graph");
    analyze->add_option("--input", graph_a, "Edge-list file")->required();
    analyze->add_option("--base-vertex", base_a, "Base vertex");
    add_common(analyze, fa);

    auto* params = app.add_subcommand("analyze-params", "Run the formula suite on a parameter array");
    params->add_option("--params", params_p, "Parameter array JSON")->required();
    params->add_option("--family", family_p, "Also fit a family")->check(CLI::IsMember({"qracah", "classical"}));
    add_common(params, fp);

    auto* cross = app.add_subcommand("cross-check", "Compare both pipelines on every thin module");
    cross->add_option("--input", graph_c, "Edge-list file")->required();
    cross->add_option("--base-vertex", base_c, "Base vertex");
    add_common(cross, fc);

    auto* fit = app.add_subcommand("fit-family", "Fit q-Racah or classical parameters");
    auto* fit_in = fit->add_option("--input", graph_f, "Edge-list file");
    auto* fit_params = fit->add_option("--params", params_f, "Trivial-module parameter array JSON");
    fit_in->excludes(fit_params);
    fit->add_option("--family", family_f, "Family")->required()->check(CLI::IsMember({"qracah", "classical"}));
    fit->add_option("--base-vertex", base_f, "Base vertex");
    add_common(fit, ff);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : drg::exit_parse;
    }

    try {
        drg::CommandResult res;
        std::string out;
        if (*analyze) {
            auto opt = options_from(fa);
            opt.base_vertex = base_a;
            out = fa.out;
            res = drg::run_analyze_graph(drg::load_graph_file(graph_a), opt);
        } else if (*params) {
            auto opt = options_from(fp);
            opt.family = family_p;
            out = fp.out;
            res = drg::run_analyze_params(drg::read_json_file(params_p), opt);
        } else if (*cross) {
            auto opt = options_from(fc);
            opt.base_vertex = base_c;
            out = fc.out;
            res = drg::run_cross_check(drg::load_graph_file(graph_c), opt);
        } else {
            auto opt = options_from(ff);
            opt.family = family_f;
            opt.base_vertex = base_f;
            out = ff.out;
            if (graph_f.empty() == params_f.empty()) throw drg::ParseError("fit-family needs --input or --params");
            res = graph_f.empty() ? drg::run_fit_family_params(drg::read_json_file(params_f), opt)
                                  : drg::run_fit_family_graph(drg::load_graph_file(graph_f), opt);
        }
        emit(res.report, out);
        if (res.exit_code != drg::exit_ok && res.report.contains("error"))
            std::cerr << "drg: " << res.report["error"].get<std::string>() << "\n";
        return res.exit_code;
    } catch (const drg::ParseError& e) {
        std::cerr << "drg: " << e.what() << "\n";
        return drg::exit_parse;
    } catch (const drg::NotDistanceRegular& e) {
        std::cerr << "drg: " << e.what() << "\n";
        return drg::exit_not_distance_regular;
    } catch (const drg::NotQPolynomial& e) {
        std::cerr << "drg: " << e.what() << "\n";
        return drg::exit_not_q_polynomial;
    } catch (const std::exception& e) {
        std::cerr << "drg: " << e.what() << "\n";
        return drg::exit_audit_failure;
    }
}
