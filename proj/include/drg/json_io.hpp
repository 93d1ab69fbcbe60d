/**
 * @file json_io.hpp
 * @brief JSON form of parameter arrays and scalar sequences. Scalars are written as strings
 *        ("p/q" in exact mode, 17 significant digits in float mode); unknown keys survive a round trip.
 */
#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "drg/audit.hpp"
#include "drg/parameter_array.hpp"
#include "drg/scalar.hpp"

namespace drg {

using Json = nlohmann::ordered_json;

/// Scalar from a JSON string ("3", "-1/2", "0.25") or a JSON number.
template <class T>
T scalar_from_json(const Json& j, const std::string& where);

template <class T>
Json scalar_to_json(const T& x) {
    return format_scalar(x);
}

template <class T>
Json scalars_to_json(const std::vector<T>& v) {
    Json out = Json::array();
    for (const auto& x : v) out.push_back(scalar_to_json(x));
    return out;
}

inline Json residual_to_json(double x) { return format_scalar(x); }

/// {"max": ..., "entries": {name: residual, ...}, "failures": [...]} in insertion order.
Json audit_to_json(const Audit& audit);

/// A parameter array with the document it came from, so unrecognized keys can be written back.
template <class T>
struct ParameterArrayDocument {
    ParameterArray<T> array;
    Json extra = Json::object();
};

/// Parses {"r","t","d","theta","theta_star","varphi","phi", ...}; throws ParseError on missing keys,
/// wrong lengths or malformed numbers.
template <class T>
ParameterArrayDocument<T> parameter_array_from_json(const Json& j);

template <class T>
Json parameter_array_to_json(const ParameterArray<T>& pa, const Json& extra = Json::object());

/// Reads a JSON file; throws ParseError on I/O or syntax errors.
Json read_json_file(const std::string& path);

/// Two-space indented text with a trailing newline.
std::string dump_json(const Json& j);

}  // namespace drg
