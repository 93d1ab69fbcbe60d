/**
 * @file report.hpp
 * @brief Command drivers behind the `drg` tool: each runs a pipeline and returns a JSON report and
 *        an exit code. Reports contain no timing or host data, so equal inputs give equal bytes.
 */
#pragma once

#include <cstdint>
#include <string>

#include "drg/graph.hpp"
#include "drg/json_io.hpp"
#include "drg/scalar.hpp"

namespace drg {

enum ExitCode : int {
    exit_ok = 0,
    exit_parse = 2,
    exit_not_distance_regular = 3,
    exit_not_q_polynomial = 4,
    exit_audit_failure = 5,
};

inline constexpr const char* kToolVersion = "1.0.0";
inline constexpr int kSchemaVersion = 1;
inline constexpr double kDefaultTolerance = 1e-9;
/// Floor for rank, clustering and membership decisions; the user tolerance only moves the gates.
inline constexpr double kStructuralTolerance = 1e-9;

struct RunOptions {
    Mode mode = Mode::exact;
    double eps = kDefaultTolerance;  ///< gate in float mode; exact mode gates at 0
    std::uint64_t seed = 1;
    int base_vertex = 0;
    std::string family;  ///< "", "qracah" or "classical"
};

struct CommandResult {
    Json report;
    int exit_code = exit_ok;
};

/// Full pipeline: distance-regularity, spectrum, Krein table and Q-orderings, module decomposition,
/// both pipelines per thin module, trivial-module checks and family fits.
CommandResult run_analyze_graph(const Graph& g, const RunOptions& opt);

/// Field-by-field comparison of the two pipelines per thin module; gates on the deviations only.
CommandResult run_cross_check(const Graph& g, const RunOptions& opt);

/// Global family fit from the trivial module plus module-level fits of every thin module.
CommandResult run_fit_family_graph(const Graph& g, const RunOptions& opt);

/// Validation and the full formula suite on one parameter array, plus an optional family fit.
CommandResult run_analyze_params(const Json& doc, const RunOptions& opt);

/// Family fit of a trivial-module parameter array.
CommandResult run_fit_family_params(const Json& doc, const RunOptions& opt);

}  // namespace drg
