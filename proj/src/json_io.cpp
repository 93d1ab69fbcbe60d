#include "drg/json_io.hpp"

#include <fstream>
#include <sstream>

#include "drg/errors.hpp"

namespace drg {

template <class T>
T scalar_from_json(const Json& j, const std::string& where) {
    try {
        if (j.is_string()) return parse_scalar<T>(j.get<std::string>());
        if (j.is_number_integer()) return T(j.get<long>());
        if (j.is_number_unsigned()) return T(static_cast<long>(j.get<unsigned long>()));
        // the serializer's shortest round-trip text parses to the same double, and exactly in rational mode
        if (j.is_number_float()) return parse_scalar<T>(j.dump());
    } catch (const ParseError& e) {
        throw ParseError(where + ": " + e.what());
    }
    throw ParseError(where + ": expected a number or numeric string");
}

template Rational scalar_from_json<Rational>(const Json&, const std::string&);
template double scalar_from_json<double>(const Json&, const std::string&);

Json audit_to_json(const Audit& audit) {
    Json entries = Json::object();
    for (const auto& [name, r] : audit.residuals()) entries[name] = residual_to_json(r);
    Json out = Json::object();
    out["max"] = residual_to_json(audit.max_residual());
    out["entries"] = std::move(entries);
    out["failures"] = audit.failures();
    return out;
}

namespace {

const char* const kArrayKeys[] = {"r", "t", "d", "theta", "theta_star", "varphi", "phi"};

int read_index(const Json& j, const char* key) {
    if (!j.contains(key)) throw ParseError(std::string("parameter array: missing \"") + key + "\"");
    const Json& v = j.at(key);
    if (v.is_number_integer()) return v.get<int>();
    if (v.is_string()) {
        try {
            std::size_t used = 0;
            int x = std::stoi(v.get<std::string>(), &used);
            if (used == v.get<std::string>().size()) return x;
        } catch (const std::exception&) {
        }
    }
    throw ParseError(std::string("parameter array: \"") + key + "\" must be an integer");
}

template <class T>
std::vector<T> read_sequence(const Json& j, const char* key, std::size_t length) {
    if (!j.contains(key)) throw ParseError(std::string("parameter array: missing \"") + key + "\"");
    const Json& v = j.at(key);
    if (!v.is_array()) throw ParseError(std::string("parameter array: \"") + key + "\" must be an array");
    if (v.size() != length)
        throw ParseError(std::string("parameter array: \"") + key + "\" has length " + std::to_string(v.size()) +
                         ", expected " + std::to_string(length));
    std::vector<T> out;
    for (std::size_t i = 0; i < v.size(); ++i)
        out.push_back(scalar_from_json<T>(v[i], std::string(key) + "[" + std::to_string(i) + "]"));
    return out;
}

}  // namespace

template <class T>
ParameterArrayDocument<T> parameter_array_from_json(const Json& j) {
    if (!j.is_object()) throw ParseError("parameter array: expected a JSON object");
    ParameterArrayDocument<T> doc;
    auto& pa = doc.array;
    pa.r = read_index(j, "r");
    pa.t = read_index(j, "t");
    pa.d = read_index(j, "d");
    if (pa.r < 0 || pa.t < 0 || pa.d < 0) throw ParseError("parameter array: r, t and d must be nonnegative");
    const auto n = static_cast<std::size_t>(pa.d);
    pa.theta = read_sequence<T>(j, "theta", n + 1);
    pa.theta_star = read_sequence<T>(j, "theta_star", n + 1);
    pa.varphi = read_sequence<T>(j, "varphi", n);
    pa.phi = read_sequence<T>(j, "phi", n);
    for (const auto& [key, value] : j.items()) {
        bool known = false;
        for (const char* k : kArrayKeys) known = known || key == k;
        if (!known) doc.extra[key] = value;
    }
    return doc;
}

template ParameterArrayDocument<Rational> parameter_array_from_json<Rational>(const Json&);
template ParameterArrayDocument<double> parameter_array_from_json<double>(const Json&);

template <class T>
Json parameter_array_to_json(const ParameterArray<T>& pa, const Json& extra) {
    Json out = Json::object();
    out["r"] = pa.r;
    out["t"] = pa.t;
    out["d"] = pa.d;
    out["theta"] = scalars_to_json(pa.theta);
    out["theta_star"] = scalars_to_json(pa.theta_star);
    out["varphi"] = scalars_to_json(pa.varphi);
    out["phi"] = scalars_to_json(pa.phi);
    for (const auto& [key, value] : extra.items()) out[key] = value;
    return out;
}

template Json parameter_array_to_json<Rational>(const ParameterArray<Rational>&, const Json&);
template Json parameter_array_to_json<double>(const ParameterArray<double>&, const Json&);

Json read_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open " + path);
    std::stringstream buf;
    buf << in.rdbuf();
    try {
        return Json::parse(buf.str());
    } catch (const nlohmann::json::parse_error& e) {
        throw ParseError(path + ": " + e.what());
    }
}

std::string dump_json(const Json& j) { return j.dump(2) + "\n"; }

}  // namespace drg
