// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include <nlohmann/json.hpp>

namespace crag::kg {

using StringList = std::vector<std::string>;

/// Field value in a knowledge-graph record. Lists only ever hold strings
/// (genres, filmographies, cast names).
class Value {
public:
    using Storage = std::variant<std::monostate, bool, std::int64_t, double, std::string, StringList>;

    Value() = default;
    Value(bool b) : v_(b) {}
    Value(int i) : v_(static_cast<std::int64_t>(i)) {}
    Value(std::int64_t i) : v_(i) {}
    Value(double d) : v_(d) {}
    Value(const char* s) : v_(std::string(s)) {}
    Value(std::string s) : v_(std::move(s)) {}
    Value(StringList l) : v_(std::move(l)) {}

    const Storage& storage() const { return v_; }

    bool is_null() const { return std::holds_alternative<std::monostate>(v_); }
    bool is_list() const { return std::holds_alternative<StringList>(v_); }
    const StringList* list() const { return std::get_if<StringList>(&v_); }

    /// Numeric view: ints, doubles and strings that parse as numbers.
    std::optional<double> as_number() const;

    /// Plain-text rendering; lists are joined with ", ".
    std::string to_text() const;

    friend bool operator==(const Value&, const Value&) = default;

private:
    Storage v_;
};

using Record = std::map<std::string, Value, std::less<>>;

nlohmann::json to_json(const Value& v);
nlohmann::json to_json(const Record& r);

/// Scalars and arrays of scalars only; nested objects are rejected.
std::optional<Value> value_from_json(const nlohmann::json& j);

}  // namespace crag::kg
