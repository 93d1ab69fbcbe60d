#include "drg/report.hpp"

#include <algorithm>
#include <functional>
#include <optional>

#include "drg/errors.hpp"
#include "drg/families.hpp"
#include "drg/module_invariants.hpp"
#include "drg/parameter_engine.hpp"
#include "drg/scheme.hpp"
#include "drg/terwilliger.hpp"

namespace drg {

namespace {

enum class Command { analyze_graph, cross_check, fit_family };

const char* mode_name(Mode m) { return m == Mode::exact ? "exact" : "float"; }

template <class T>
Mode mode_of() {
    return is_exact_v<T> ? Mode::exact : Mode::floating;
}

Json header(const std::string& command, Mode mode, const RunOptions& opt) {
    Json j = Json::object();
    j["schema"] = kSchemaVersion;
    j["tool"] = {{"name", "drg"}, {"version", kToolVersion}};
    j["command"] = command;
    j["mode"] = mode_name(mode);
    j["requested_mode"] = mode_name(opt.mode);
    j["tolerance"] = format_scalar(opt.eps);
    j["seed"] = opt.seed;
    return j;
}

Json with_origin(const std::string& origin, const Json& body) {
    Json out = {{"origin", origin}};
    for (const auto& [key, value] : body.items()) out[key] = value;
    return out;
}

Json longs_to_json(const std::vector<long>& v) {
    Json out = Json::array();
    for (long x : v) out.push_back(std::to_string(x));
    return out;
}

template <class T>
Json scalars_json(const ModuleScalars<T>& s, const std::string& origin) {
    Json j = Json::object();
    j["origin"] = origin;
    j["a"] = scalars_to_json(s.a);
    j["b"] = scalars_to_json(s.b);
    j["c"] = scalars_to_json(s.c);
    j["a_star"] = scalars_to_json(s.a_star);
    j["b_star"] = scalars_to_json(s.b_star);
    j["c_star"] = scalars_to_json(s.c_star);
    j["x"] = scalars_to_json(s.x);
    j["x_star"] = scalars_to_json(s.x_star);
    j["k"] = scalars_to_json(s.k);
    j["k_star"] = scalars_to_json(s.k_star);
    j["m"] = scalars_to_json(s.m);
    j["m_star"] = scalars_to_json(s.m_star);
    j["nu"] = scalar_to_json(s.nu);
    return j;
}

Json deviation_json(const ScalarDeviation& dev, double gate) {
    Json per = Json::object();
    for (const auto& [name, r] : dev.per_field) per[name] = residual_to_json(r);
    return {{"origin", "matrix_vs_formula"},
            {"max_abs", residual_to_json(dev.max_abs)},
            {"max_rel", residual_to_json(dev.max_rel)},
            {"worst_field", dev.worst_field},
            {"per_field", per},
            {"passed", dev.max_rel <= gate}};
}

Json profile_json(const ModuleProfile& p) {
    return {{"r", p.endpoint},           {"t", p.dual_endpoint}, {"d", p.diameter},
            {"d_star", p.dual_diameter}, {"thin", p.thin},       {"dual_thin", p.dual_thin},
            {"dimension", p.dimension},  {"dims_star", p.dims_star}, {"dims", p.dims}};
}

/// Collects gated residual blocks and failures; the exit code is derived from it.
struct Gate {
    double tol = 0;
    std::vector<std::string> failures;

    void audit(const std::string& where, const Audit& a) {
        for (const auto& v : a.violations(tol)) failures.push_back(where + ": " + v);
    }
    void fail(const std::string& what) { failures.push_back(what); }
    bool passed() const { return failures.empty(); }
    Json json() const { return {{"passed", passed()}, {"failures", failures}}; }
};

template <class T>
struct ModuleRun {
    int index = 0;
    ModuleProfile profile;
    bool analyzed = false;
    std::string skipped;
    std::optional<ModuleAnalysis<T>> matrix;
    std::optional<FormulaAnalysis<T>> formula;
    ScalarDeviation deviation;
    int iso_class = -1;
};

/// Closed-form intersection numbers and u_i(theta_{t+j}) against the formula pipeline.
template <class T>
void compare_family(const FamilyIntersection<T>& fi, const ParameterArray<T>& pa, const FormulaAnalysis<T>& fa,
                    const std::function<T(int, int)>& u_eval, Audit& audit) {
    const auto& s = fa.scalars;
    auto cmp = [&](const std::string& name, const std::vector<T>& x, const std::vector<T>& y) {
        for (std::size_t i = 0; i < x.size() && i < y.size(); ++i) audit.compare(name, x[i], y[i]);
        if (x.size() != y.size()) audit.require(name, false, "length mismatch");
    };
    cmp("a_closed_form", fi.a, s.a);
    cmp("b_closed_form", fi.b, s.b);
    cmp("c_closed_form", fi.c, s.c);
    cmp("a_star_closed_form", fi.a_star, s.a_star);
    cmp("b_star_closed_form", fi.b_star, s.b_star);
    cmp("c_star_closed_form", fi.c_star, s.c_star);
    for (int i = 0; i <= pa.d; ++i)
        for (int j = 0; j <= pa.d; ++j)
            audit.compare("u_hypergeometric", u_eval(i, j),
                          fa.polynomials.u[static_cast<std::size_t>(i)](pa.th(j)));
}

template <class T>
Json optional_roots_json(const std::optional<std::pair<T, T>>& roots) {
    if (!roots) return nullptr;
    return Json::array({scalar_to_json(roots->first), scalar_to_json(roots->second)});
}

/// One analyzed array handed to the family fitters.
template <class T>
struct FitTarget {
    int module_index = 0;
    const ParameterArray<T>* params = nullptr;
    const FormulaAnalysis<T>* formula = nullptr;
};

template <class T>
Json q_racah_section(const ParameterArray<T>& trivial, const std::vector<FitTarget<T>>& targets,
                     const std::vector<T>* graph_b, const std::vector<T>* graph_c, double eps, Gate& gate,
                     bool& fitted) {
    Json j = Json::object();
    j["origin"] = "family:q_racah";
    fitted = false;
    QRacahFit<T> fit;
    try {
        fit = fit_q_racah(trivial, eps);
    } catch (const NotOfType& e) {
        j["status"] = "not_of_type";
        j["reason"] = e.what();
        return j;
    } catch (const IrrationalValue& e) {
        j["status"] = "not_rational";
        j["reason"] = e.what();
        return j;
    }
    fitted = true;
    j["status"] = "fitted";
    j["parameters"] = {{"D", fit.D},
                       {"q", scalar_to_json(fit.q)},
                       {"h", scalar_to_json(fit.h)},
                       {"h_star", scalar_to_json(fit.h_star)},
                       {"s", scalar_to_json(fit.s)},
                       {"s_star", scalar_to_json(fit.s_star)},
                       {"r1_plus_r2", scalar_to_json(fit.r_sum)},
                       {"r1_times_r2", scalar_to_json(fit.r_prod)},
                       {"r1_r2", optional_roots_json(fit.r_roots)},
                       {"theta_0", scalar_to_json(fit.theta0)},
                       {"theta_star_0", scalar_to_json(fit.theta_star0)}};
    j["fit_residuals"] = audit_to_json(fit.audit);
    gate.audit("q_racah.fit", fit.audit);
    if (graph_b && graph_c) {
        Audit ga;
        try {
            auto gi = q_racah_graph_intersection_numbers(fit, eps);
            for (std::size_t i = 0; i < gi.b.size(); ++i) {
                ga.compare("graph_b", gi.b[i], (*graph_b)[i]);
                ga.compare("graph_c", gi.c[i], (*graph_c)[i]);
            }
        } catch (const Error& e) {
            ga.require("graph_intersection_numbers", false, e.what());
        }
        j["graph_residuals"] = audit_to_json(ga);
        gate.audit("q_racah.graph", ga);
    }
    Json mods = Json::array();
    for (const auto& tg : targets) {
        Json mj = Json::object();
        mj["module"] = tg.module_index;
        Audit ma;
        try {
            auto m = q_racah_module_params(fit, *tg.params, eps);
            mj["tau"] = scalar_to_json(m.tau);
            mj["r1_plus_r2"] = scalar_to_json(m.r_sum);
            mj["r1_times_r2"] = scalar_to_json(m.r_prod);
            mj["r1_r2"] = optional_roots_json(m.r_roots);
            ma.merge(m.audit);
            auto fi = q_racah_intersection_numbers(fit, m, *tg.params, eps);
            std::function<T(int, int)> u = [&](int i, int jj) { return q_racah_u_eval(fit, m, *tg.params, i, jj, eps); };
            compare_family(fi, *tg.params, *tg.formula, u, ma);
        } catch (const Error& e) {
            ma.require("module_fit", false, e.what());
        }
        mj["residuals"] = audit_to_json(ma);
        gate.audit("q_racah.module" + std::to_string(tg.module_index), ma);
        mods.push_back(std::move(mj));
    }
    j["modules"] = std::move(mods);
    return j;
}

template <class T>
Json classical_section(const ParameterArray<T>& trivial, const std::vector<FitTarget<T>>& targets,
                       const std::vector<T>& graph_b, const std::vector<T>& graph_c, double eps, Gate& gate,
                       bool& fitted) {
    Json j = Json::object();
    j["origin"] = "family:classical";
    fitted = false;
    ClassicalFit<T> fit;
    try {
        fit = fit_classical(trivial, graph_b, graph_c, eps);
    } catch (const NotOfType& e) {
        j["status"] = "not_of_type";
        j["reason"] = e.what();
        return j;
    }
    fitted = true;
    j["status"] = "fitted";
    j["parameters"] = {{"D", fit.D},
                       {"b", scalar_to_json(fit.b)},
                       {"alpha", scalar_to_json(fit.alpha)},
                       {"sigma", scalar_to_json(fit.sigma)},
                       {"eta", scalar_to_json(fit.eta)},
                       {"mu", scalar_to_json(fit.mu)},
                       {"h", scalar_to_json(fit.h)},
                       {"eta_star", scalar_to_json(fit.eta_star)},
                       {"h_star", scalar_to_json(fit.h_star)},
                       {"theta_star_0", scalar_to_json(fit.theta_star0)},
                       {"tau", scalar_to_json(fit.tau)}};
    j["fit_residuals"] = audit_to_json(fit.audit);
    gate.audit("classical.fit", fit.audit);
    Json mods = Json::array();
    for (const auto& tg : targets) {
        Json mj = Json::object();
        mj["module"] = tg.module_index;
        Audit ma;
        try {
            auto m = classical_module_params(fit, *tg.params, eps);
            mj["tau"] = scalar_to_json(m.tau);
            mj["alpha"] = scalar_to_json(m.alpha);
            mj["sigma"] = scalar_to_json(m.sigma);
            ma.merge(m.audit);
            auto fi = classical_intersection_numbers(fit, m, *tg.params, eps, &ma);
            std::function<T(int, int)> u = [&](int i, int jj) { return classical_u_eval(fit, m, *tg.params, i, jj, eps); };
            compare_family(fi, *tg.params, *tg.formula, u, ma);
        } catch (const Error& e) {
            ma.require("module_fit", false, e.what());
        }
        mj["residuals"] = audit_to_json(ma);
        gate.audit("classical.module" + std::to_string(tg.module_index), ma);
        mods.push_back(std::move(mj));
    }
    j["modules"] = std::move(mods);
    return j;
}

/// Thrown inside the exact pipeline when it has to be rerun in float mode.
struct NeedsFloat {
    std::string reason;
};

template <class T>
CommandResult graph_pipeline(const Graph& g, const RunOptions& opt, Command cmd, const std::string& command_name,
                             const std::string& fallback_reason) {
    CommandResult res;
    Json& rep = res.report;
    rep = header(command_name, mode_of<T>(), opt);
    rep["fallback"] = fallback_reason.empty() ? Json(nullptr) : Json(fallback_reason);
    rep["base_vertex"] = opt.base_vertex;
    Gate gate;
    gate.tol = is_exact_v<T> ? 0.0 : opt.eps;

    auto finish = [&](int code) {
        rep["verdict"] = gate.json();
        res.exit_code = code != exit_ok ? code : (gate.passed() ? exit_ok : exit_audit_failure);
        rep["exit_code"] = res.exit_code;
        return res;
    };

    Json graph_j = {{"origin", "graph"}, {"vertices", g.n}, {"edges", g.edges.size()}};
    auto dd = distance_data(g);
    graph_j["diameter"] = dd.diameter;
    IntersectionNumbers ints;
    try {
        ints = verify_distance_regular(g, dd);
    } catch (const NotDistanceRegular& e) {
        graph_j["distance_regular"] = false;
        rep["graph"] = graph_j;
        rep["error"] = e.what();
        return finish(exit_not_distance_regular);
    }
    graph_j["distance_regular"] = true;
    graph_j["valency"] = ints.valency();
    graph_j["intersection_numbers"] = {{"origin", "graph"},
                                       {"a", longs_to_json(ints.a)},
                                       {"b", longs_to_json(ints.b)},
                                       {"c", longs_to_json(ints.c)},
                                       {"k", longs_to_json(ints.k)}};
    rep["graph"] = graph_j;
    const int D = dd.diameter;
    if (opt.base_vertex < 0 || opt.base_vertex >= g.n) throw PreconditionError("base vertex out of range");

    const double float_eps = std::max(opt.eps, kStructuralTolerance);
    Matrix<T> A = g.adjacency_matrix<T>();
    SpectralData<T> sd;
    try {
        sd = primitive_idempotents(A, D, float_eps);
    } catch (const IrrationalValue& e) {
        throw NeedsFloat{e.what()};
    }
    auto kt = krein_parameters(sd, float_eps);
    auto ords = q_polynomial_orderings(kt, static_cast<std::size_t>(g.n), float_eps);
    Json scheme = {{"origin", "spectrum"},
                   {"eigenvalues", scalars_to_json(sd.theta)},
                   {"multiplicities", scalars_to_json(sd.multiplicity)},
                   {"idempotent_residual", residual_to_json(sd.idempotent_residual)}};
    rep["scheme"] = scheme;
    Json ord_j = Json::array();
    for (const auto& o : ords) ord_j.push_back(o);
    rep["q_polynomial_orderings"] = {{"origin", "spectrum"}, {"all", ord_j}};
    if (ords.empty()) {
        rep["error"] = "no ordering of the primitive idempotents is Q-polynomial";
        return finish(exit_not_q_polynomial);
    }
    if (D < 3 || ints.valency() < 3) {
        rep["error"] = "module analysis needs diameter >= 3 and valency >= 3";
        return finish(exit_not_q_polynomial);
    }
    rep["q_polynomial_orderings"]["analyzed"] = ords.front();
    auto sdq = sd.reordered(ords.front());
    rep["scheme"]["q_ordered_eigenvalues"] = scalars_to_json(sdq.theta);
    rep["scheme"]["q_ordered_multiplicities"] = scalars_to_json(sdq.multiplicity);

    auto dual = dual_data(dd, sdq, opt.base_vertex, float_eps);
    rep["dual"] = {{"origin", "spectrum"},
                   {"dual_eigenvalues", scalars_to_json(dual.theta_star)},
                   {"tridiagonality_residual", residual_to_json(tridiagonality_residual(A, dual, sdq))}};
    {
        Audit sa;
        sa.record("idempotent_residual", sd.idempotent_residual / std::max(1.0, static_cast<double>(g.n)));
        sa.record("tridiagonality_residual", tridiagonality_residual(A, dual, sdq));
        gate.audit("scheme", sa);
    }

    DecomposeOptions dopt;
    dopt.eps = float_eps;
    dopt.seed = opt.seed;
    Decomposition<T> dec;
    try {
        dec = decompose_standard_module(A, dual, sdq, dopt);
    } catch (const IrrationalValue& e) {
        throw NeedsFloat{e.what()};
    } catch (const DecompositionError& e) {
        if constexpr (is_exact_v<T>) throw NeedsFloat{e.what()};
        throw;
    }
    rep["decomposition"] = {{"method", dec.method}, {"attempts", dec.attempts}, {"modules", dec.modules.size()}};

    std::vector<ModuleRun<T>> runs;
    for (std::size_t idx = 0; idx < dec.modules.size(); ++idx) {
        const auto& mod = dec.modules[idx];
        ModuleRun<T> run;
        run.index = static_cast<int>(idx);
        run.profile = mod.profile;
        if (!mod.profile.thin) {
            run.skipped = "not thin";
        } else if (mod.profile.diameter == 0) {
            run.skipped = "diameter 0";
        } else {
            run.matrix = analyze_module(mod, A, dual, sdq, float_eps);
            run.formula = analyze_parameter_array(run.matrix->params, float_eps);
            run.deviation = scalar_deviation(run.matrix->scalars, run.formula->scalars);
            run.analyzed = true;
        }
        runs.push_back(std::move(run));
    }

    // isomorphism classes by the parameter arrays
    int classes = 0;
    Audit iso_audit;
    for (auto& run : runs) {
        if (!run.analyzed) continue;
        for (const auto& prev : runs) {
            if (&prev == &run) break;
            if (!prev.analyzed) continue;
            if (isomorphism_test(run.matrix->params, prev.matrix->params, float_eps, &iso_audit) ==
                IsoVerdict::isomorphic) {
                run.iso_class = prev.iso_class;
                break;
            }
        }
        if (run.iso_class < 0) run.iso_class = classes++;
    }

    // trivial-module identities
    Json trivial_j = Json::object();
    trivial_j["origin"] = "matrix_vs_graph";
    const ModuleRun<T>* trivial = nullptr;
    for (const auto& run : runs)
        if (run.analyzed && run.profile.endpoint == 0 && run.profile.dual_endpoint == 0 && run.profile.diameter == D)
            trivial = &run;
    std::vector<T> graph_b, graph_c;
    for (int i = 0; i <= D; ++i) {
        graph_b.push_back(T(ints.b[static_cast<std::size_t>(i)]));
        graph_c.push_back(T(ints.c[static_cast<std::size_t>(i)]));
    }
    if (!trivial) {
        gate.fail("trivial module not found");
        trivial_j["found"] = false;
    } else {
        trivial_j["found"] = true;
        trivial_j["module"] = trivial->index;
        Audit ta;
        const auto& ms = trivial->matrix->scalars;
        const auto& pa = trivial->matrix->params;
        for (int i = 0; i <= D; ++i) {
            const auto k = static_cast<std::size_t>(i);
            ta.compare("a_equals_graph", ms.a[k], T(ints.a[k]));
            ta.compare("b_equals_graph", ms.b[k], T(ints.b[k]));
            ta.compare("c_equals_graph", ms.c[k], T(ints.c[k]));
            ta.compare("k_equals_graph", ms.k[k], T(ints.k[k]));
            ta.compare("theta_equals_eigenvalue", pa.theta[k], sdq.theta[k]);
            ta.compare("theta_star_equals_dual_eigenvalue", pa.theta_star[k], dual.theta_star[k]);
            ta.compare("k_star_equals_multiplicity", ms.k_star[k], sdq.multiplicity[k]);
        }
        ta.compare("nu_equals_vertex_count", ms.nu, T(static_cast<long>(g.n)));
        // m_i = b*_0 ... b*_{i-1} / (c*_1 ... c*_i) from the formula pipeline
        const auto& fs = trivial->formula->scalars;
        T ratio(1);
        for (int i = 0; i <= D; ++i) {
            if (i > 0) ratio = ratio * fs.b_star[static_cast<std::size_t>(i - 1)] / fs.c_star[static_cast<std::size_t>(i)];
            ta.compare("multiplicity_dual_product", ratio, sdq.multiplicity[static_cast<std::size_t>(i)]);
        }
        trivial_j["residuals"] = audit_to_json(ta);
        gate.audit("trivial_module", ta);
    }
    rep["trivial_module"] = trivial_j;

    Json mods = Json::array();
    int thin = 0, analyzed = 0;
    for (const auto& run : runs) {
        Json mj = Json::object();
        mj["index"] = run.index;
        mj["profile"] = profile_json(run.profile);
        thin += run.profile.thin ? 1 : 0;
        if (!run.analyzed) {
            mj["analyzed"] = false;
            mj["reason"] = run.skipped;
            mods.push_back(std::move(mj));
            continue;
        }
        ++analyzed;
        mj["analyzed"] = true;
        mj["isomorphism_class"] = run.iso_class;
        const std::string where = "module" + std::to_string(run.index);
        if (cmd != Command::cross_check) {
            mj["parameter_array"] = with_origin("matrix", parameter_array_to_json(run.matrix->params));
            mj["matrix"] = scalars_json(run.matrix->scalars, "matrix");
            mj["formula"] = scalars_json(run.formula->scalars, "formula");
            mj["residuals"] = {{"matrix", audit_to_json(run.matrix->audit)},
                               {"formula", audit_to_json(run.formula->audit)}};
            gate.audit(where + ".matrix", run.matrix->audit);
            gate.audit(where + ".formula", run.formula->audit);
        }
        mj["cross_check"] = deviation_json(run.deviation, gate.tol);
        if (!(run.deviation.max_rel <= gate.tol))
            gate.fail(where + ": pipelines disagree on " + run.deviation.worst_field);
        mods.push_back(std::move(mj));
    }
    rep["module_summary"] = {{"total", runs.size()},
                             {"thin", thin},
                             {"analyzed", analyzed},
                             {"isomorphism_classes", classes},
                             {"isomorphism_audit", audit_to_json(iso_audit)}};
    gate.audit("isomorphism", iso_audit);
    rep["modules"] = std::move(mods);

    if (cmd != Command::cross_check && trivial) {
        std::vector<FitTarget<T>> targets;
        for (const auto& run : runs)
            if (run.analyzed) targets.push_back({run.index, &run.matrix->params, &*run.formula});
        Json fam = Json::object();
        bool q_fitted = false, c_fitted = false;
        const bool want_q = opt.family.empty() || opt.family == "qracah";
        const bool want_c = opt.family.empty() || opt.family == "classical";
        if (want_q)
            fam["q_racah"] = q_racah_section(trivial->matrix->params, targets, &graph_b, &graph_c, float_eps, gate,
                                             q_fitted);
        if (want_c)
            fam["classical"] =
                classical_section(trivial->matrix->params, targets, graph_b, graph_c, float_eps, gate, c_fitted);
        rep["families"] = std::move(fam);
        if (cmd == Command::fit_family && !(q_fitted || c_fitted)) gate.fail("graph is not of the requested family");
    }

    if (cmd == Command::cross_check) {
        // the cross-check gates only on the pipeline deviations
        Gate dev_gate;
        dev_gate.tol = gate.tol;
        for (const auto& f : gate.failures)
            if (f.find("pipelines disagree") != std::string::npos) dev_gate.fail(f);
        gate = dev_gate;
    }
    return finish(exit_ok);
}

CommandResult run_graph(const Graph& g, const RunOptions& opt, Command cmd, const std::string& name) {
    if (opt.mode == Mode::exact) {
        try {
            return graph_pipeline<Rational>(g, opt, cmd, name, "");
        } catch (const NeedsFloat& nf) {
            return graph_pipeline<double>(g, opt, cmd, name, "exact mode unavailable: " + nf.reason);
        }
    }
    try {
        return graph_pipeline<double>(g, opt, cmd, name, "");
    } catch (const NeedsFloat& nf) {
        throw DecompositionError(nf.reason);
    }
}

template <class T>
CommandResult params_pipeline(const Json& doc, const RunOptions& opt, bool fit_only) {
    CommandResult res;
    Json& rep = res.report;
    rep = header(fit_only ? "fit-family" : "analyze-params", mode_of<T>(), opt);
    Gate gate;
    gate.tol = is_exact_v<T> ? 0.0 : opt.eps;
    const double float_eps = std::max(opt.eps, kStructuralTolerance);
    auto parsed = parameter_array_from_json<T>(doc);
    const auto& pa = parsed.array;
    rep["parameter_array"] = with_origin("input", parameter_array_to_json(pa, parsed.extra));

    auto finish = [&]() {
        rep["verdict"] = gate.json();
        res.exit_code = gate.passed() ? exit_ok : exit_audit_failure;
        rep["exit_code"] = res.exit_code;
        return res;
    };

    auto validation = validate_parameter_array(pa, float_eps);
    Json issues = Json::array();
    for (const auto& is : validation.issues) issues.push_back({{"what", is.what}, {"index", is.index}});
    rep["validation"] = {{"valid", validation.valid()}, {"issues", issues}};
    if (!validation.valid()) {
        gate.fail("parameter array is not valid");
        return finish();
    }
    if (pa.d == 0) {
        rep["note"] = "diameter 0: no polynomial or orthogonality analysis";
        return finish();
    }
    auto fa = analyze_parameter_array(pa, float_eps);
    if (!fit_only) {
        rep["scalars"] = scalars_json(fa.scalars, "formula");
        rep["residuals"] = {{"formula", audit_to_json(fa.audit)}};
        gate.audit("formula", fa.audit);
    }
    if (!opt.family.empty()) {
        std::vector<FitTarget<T>> targets{{0, &pa, &fa}};
        bool fitted = false;
        Json fam = Json::object();
        if (opt.family == "qracah") {
            fam["q_racah"] = q_racah_section<T>(pa, targets, nullptr, nullptr, float_eps, gate, fitted);
        } else if (opt.family == "classical") {
            try {
                auto ds = derived_scalars(pa, float_eps, false);
                fam["classical"] =
                    classical_section(pa, targets, ds.scalars.b, ds.scalars.c, float_eps, gate, fitted);
            } catch (const Error& e) {
                fam["classical"] = {{"origin", "family:classical"}, {"status", "error"}, {"reason", e.what()}};
            }
        } else {
            throw ParseError("unknown family '" + opt.family + "'");
        }
        if (!fitted) gate.fail("parameter array is not of the requested family");
        rep["families"] = std::move(fam);
    }
    return finish();
}

CommandResult run_params(const Json& doc, const RunOptions& opt, bool fit_only) {
    if (opt.mode == Mode::exact) return params_pipeline<Rational>(doc, opt, fit_only);
    return params_pipeline<double>(doc, opt, fit_only);
}

}  // namespace

CommandResult run_analyze_graph(const Graph& g, const RunOptions& opt) {
    return run_graph(g, opt, Command::analyze_graph, "analyze-graph");
}

CommandResult run_cross_check(const Graph& g, const RunOptions& opt) {
    return run_graph(g, opt, Command::cross_check, "cross-check");
}

CommandResult run_fit_family_graph(const Graph& g, const RunOptions& opt) {
    return run_graph(g, opt, Command::fit_family, "fit-family");
}

CommandResult run_analyze_params(const Json& doc, const RunOptions& opt) { return run_params(doc, opt, false); }

CommandResult run_fit_family_params(const Json& doc, const RunOptions& opt) { return run_params(doc, opt, true); }

}  // namespace drg
