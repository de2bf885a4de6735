// SPDX-License-Identifier: Apache-2.0
#include "crag/kg/value.hpp"

#include "crag/common/text.hpp"

namespace crag::kg {

std::optional<double> Value::as_number() const {
    if (auto* i = std::get_if<std::int64_t>(&v_)) return static_cast<double>(*i);
    if (auto* d = std::get_if<double>(&v_)) return *d;
    if (auto* s = std::get_if<std::string>(&v_)) return text::parse_number(*s);
    return std::nullopt;
}

std::string Value::to_text() const {
    struct Visitor {
        std::string operator()(std::monostate) const { return ""; }
        std::string operator()(bool b) const { return b ? "true" : "false"; }
        std::string operator()(std::int64_t i) const { return std::to_string(i); }
        std::string operator()(double d) const { return text::format_double(d); }
        std::string operator()(const std::string& s) const { return s; }
        std::string operator()(const StringList& l) const { return text::join(l, ", "); }
    };
    return std::visit(Visitor{}, v_);
}

nlohmann::json to_json(const Value& v) {
    struct Visitor {
        nlohmann::json operator()(std::monostate) const { return nullptr; }
        nlohmann::json operator()(bool b) const { return b; }
        nlohmann::json operator()(std::int64_t i) const { return i; }
        nlohmann::json operator()(double d) const { return d; }
        nlohmann::json operator()(const std::string& s) const { return s; }
        nlohmann::json operator()(const StringList& l) const { return l; }
    };
    return std::visit(Visitor{}, v.storage());
}

nlohmann::json to_json(const Record& r) {
    auto out = nlohmann::json::object();
    for (const auto& [k, v] : r) out[k] = to_json(v);
    return out;
}

std::optional<Value> value_from_json(const nlohmann::json& j) {
    if (j.is_null()) return Value{};
    if (j.is_boolean()) return Value(j.get<bool>());
    if (j.is_number_integer()) return Value(j.get<std::int64_t>());
    if (j.is_number_float()) return Value(j.get<double>());
    if (j.is_string()) return Value(j.get<std::string>());
    if (j.is_array()) {
        StringList out;
        for (const auto& e : j) {
            if (e.is_string()) {
                out.push_back(e.get<std::string>());
            } else if (e.is_number() || e.is_boolean()) {
                out.push_back(e.dump());
            } else {
                return std::nullopt;
            }
        }
        return Value(std::move(out));
    }
    return std::nullopt;
}

}  // namespace crag::kg
