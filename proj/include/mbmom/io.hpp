#ifndef MBMOM_IO_HPP
#define MBMOM_IO_HPP

#include <cstddef>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "error.hpp"
#include "model.hpp"
#include "scalar.hpp"

namespace mbmom {

/// A parsed model file: the validated network plus its display names.
struct ModelFile {
    std::string name;
    std::vector<std::string> class_names;
    std::vector<std::string> queue_names;
    NetworkModel network;

    bool operator==(const ModelFile&) const = default;
    ValidatedModel model() const { return validate_model(network); }
};

namespace detail {

using json = nlohmann::ordered_json;

inline const json& require(const json& obj, const char* key, const std::string& path) {
    if (!obj.is_object()) throw ParseError(path + ": expected an object");
    auto it = obj.find(key);
    if (it == obj.end()) throw ParseError(path + ": missing field '" + key + "'");
    return *it;
}

inline std::string field_string(const json& v, const std::string& path) {
    if (!v.is_string()) throw ParseError(path + ": expected a string");
    return v.get<std::string>();
}

inline int field_int(const json& v, const std::string& path) {
    if (!v.is_number_integer()) throw ParseError(path + ": expected an integer");
    const auto x = v.get<long long>();
    if (x < -1'000'000'000LL || x > 1'000'000'000LL) throw ParseError(path + ": integer out of range");
    return static_cast<int>(x);
}

/// Rationals are strings ("3/10", "0.3"); bare integers are also exact.
inline ExactScalar field_rational(const json& v, const std::string& path) {
    if (v.is_number_integer()) return ExactScalar(static_cast<long>(v.get<long long>()));
    if (!v.is_string()) throw ParseError(path + ": expected a rational string such as \"3/10\"");
    try {
        return parse_exact(v.get<std::string>());
    } catch (const ParseError& e) {
        throw ParseError(path + ": " + e.what());
    }
}

inline const json& field_array(const json& obj, const char* key, const std::string& path) {
    const json& v = require(obj, key, path);
    if (!v.is_array()) throw ParseError(path + "." + key + ": expected an array");
    return v;
}

inline std::size_t line_of(const std::string& text, std::size_t byte) {
    std::size_t line = 1;
    for (std::size_t i = 0; i < byte && i < text.size(); ++i) line += text[i] == '\n' ? 1 : 0;
    return line;
}

}  // namespace detail

inline ModelFile parse_model_file(const std::string& text) {
    using detail::json;
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ParseError("line " + std::to_string(detail::line_of(text, e.byte)) + ": invalid JSON (" + e.what() + ")");
    }
    ModelFile out;
    out.name = detail::field_string(detail::require(doc, "name", "model"), "name");

    const json& classes = detail::field_array(doc, "classes", "model");
    for (std::size_t r = 0; r < classes.size(); ++r) {
        const std::string path = "classes[" + std::to_string(r) + "]";
        const json& c = classes[r];
        out.class_names.push_back(detail::field_string(detail::require(c, "name", path), path + ".name"));
        out.network.populations.push_back(
            detail::field_int(detail::require(c, "population", path), path + ".population"));
        out.network.think_times.push_back(
            detail::field_rational(detail::require(c, "think_time", path), path + ".think_time"));
    }

    const json& queues = detail::field_array(doc, "queues", "model");
    for (std::size_t k = 0; k < queues.size(); ++k) {
        const std::string path = "queues[" + std::to_string(k) + "]";
        const json& q = queues[k];
        out.queue_names.push_back(detail::field_string(detail::require(q, "name", path), path + ".name"));
        int copies = 1;
        if (q.is_object() && q.contains("multiplicity")) copies = detail::field_int(q["multiplicity"], path + ".multiplicity");
        out.network.multiplicities.push_back(copies);
        const json& demands = detail::field_array(q, "demands", path);
        if (demands.size() != classes.size()) {
            throw ParseError(path + ".demands: expected " + std::to_string(classes.size()) + " entries, got " +
                             std::to_string(demands.size()));
        }
        std::vector<ExactScalar> row;
        for (std::size_t r = 0; r < demands.size(); ++r) {
            row.push_back(detail::field_rational(demands[r], path + ".demands[" + std::to_string(r) + "]"));
        }
        out.network.demands.push_back(std::move(row));
    }
    try {
        out.network = validate_model(out.network).raw();
    } catch (const InvalidModel& e) {
        throw ParseError(std::string("model: ") + e.what());
    }
    return out;
}

inline ModelFile load_model_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ParseError("cannot open model file '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_model_file(buf.str());
}

inline nlohmann::ordered_json to_json(const ModelFile& file) {
    using detail::json;
    json classes = json::array();
    for (std::size_t r = 0; r < file.class_names.size(); ++r) {
        classes.push_back({{"name", file.class_names[r]},
                           {"population", file.network.populations[r]},
                           {"think_time", to_string(file.network.think_times[r])}});
    }
    json queues = json::array();
    for (std::size_t k = 0; k < file.queue_names.size(); ++k) {
        json demands = json::array();
        for (const auto& d : file.network.demands[k]) demands.push_back(to_string(d));
        queues.push_back({{"name", file.queue_names[k]},
                          {"multiplicity", file.network.multiplicities[k]},
                          {"demands", std::move(demands)}});
    }
    json doc = json::object();
    doc["name"] = file.name;
    doc["classes"] = std::move(classes);
    doc["queues"] = std::move(queues);
    return doc;
}

inline std::string serialize_model_file(const ModelFile& file) { return to_json(file).dump(2) + "\n"; }

}  // namespace mbmom

#endif  // MBMOM_IO_HPP
