// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace crag::kgql {

enum class ApiFunction {
    get_person,
    get_movie,
    get_movie_person_cast,
    get_movie_person_crew,
    get_movie_person_oscar,
};

enum class CmpOp { eq, neq, ge, le };

/// Entity argument: a name/title literal, `None` (unconstrained) or `*`
/// (values of the previous statement's output).
struct Arg {
    enum class Kind { String, None, Star };
    Kind kind = Kind::None;
    std::string text;

    static Arg string(std::string s) { return Arg{Kind::String, std::move(s)}; }
    static Arg none() { return Arg{Kind::None, {}}; }
    static Arg star() { return Arg{Kind::Star, {}}; }

    friend bool operator==(const Arg&, const Arg&) = default;
};

using Literal = std::variant<std::string, double, bool>;

struct Condition {
    CmpOp op = CmpOp::eq;
    std::string key;
    Literal value;

    friend bool operator==(const Condition&, const Condition&) = default;
};

struct ApiCall {
    ApiFunction function = ApiFunction::get_movie;
    std::vector<Arg> args;  // entity arguments only; the condition slot is `conditions`
    std::vector<Condition> conditions;

    friend bool operator==(const ApiCall&, const ApiCall&) = default;
};

struct SortSpec {
    std::vector<Condition> conditions;  // empty when written as None
    std::string key;
    bool descending = false;

    friend bool operator==(const SortSpec&, const SortSpec&) = default;
};

/// `["key"]`; the key "len" requests the row count.
struct ProjectionSpec {
    std::string key;

    bool is_len() const { return key == "len"; }
    friend bool operator==(const ProjectionSpec&, const ProjectionSpec&) = default;
};

struct ModifierSet {
    bool all = false;
    bool avg = false;
    std::optional<std::size_t> slice;  // [:n], n >= 1

    friend bool operator==(const ModifierSet&, const ModifierSet&) = default;
};

struct Statement {
    std::variant<ApiCall, SortSpec> body;
    std::optional<ProjectionSpec> projection;
    ModifierSet modifiers;

    bool is_sort() const { return std::holds_alternative<SortSpec>(body); }
    const ApiCall* call() const { return std::get_if<ApiCall>(&body); }
    const SortSpec* sort() const { return std::get_if<SortSpec>(&body); }

    friend bool operator==(const Statement&, const Statement&) = default;
};

struct QueryProgram {
    std::vector<Statement> statements;

    friend bool operator==(const QueryProgram&, const QueryProgram&) = default;
};

/// A function name table. The movie dialect is the only one shipped; other
/// domains register their own names and entity arities here.
struct FunctionSpec {
    std::string_view name;
    ApiFunction function;
    std::size_t entity_args;
};

struct Dialect {
    std::vector<FunctionSpec> functions;

    const FunctionSpec* find(std::string_view name) const;
    const FunctionSpec* find(ApiFunction f) const;
};

const Dialect& movie_dialect();

std::string_view to_string(ApiFunction f);
std::string_view to_string(CmpOp op);
std::optional<CmpOp> parse_cmp_op(std::string_view name);

}  // namespace crag::kgql
