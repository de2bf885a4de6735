// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "crag/kg/store.hpp"
#include "crag/kg/value.hpp"
#include "crag/kgql/ast.hpp"

namespace crag::kgql {

using kg::Record;
using kg::Value;

class ExecError : public std::runtime_error {
public:
    enum class Kind { unknown_key, type_mismatch, empty_pipeline, backend_miss };

    ExecError(Kind kind, const std::string& detail)
        : std::runtime_error(std::string(name(kind)) + ": " + detail), kind_(kind) {}

    Kind kind() const { return kind_; }
    static std::string_view name(Kind k);

private:
    Kind kind_;
};

/// Output of one statement.
///
/// Unprojected results hold `records`; projected ones hold `scalars`
/// (a single scalar for len/AVG). `matched` keeps the filtered rows before
/// projection so a following sort can consume them. Without ALL or a slice
/// the full list is kept and `take_first` marks that only element 0 is
/// presented.
struct ResultSet {
    std::size_t source_statement = 0;
    std::optional<std::string> projected_key;
    bool aggregated = false;
    std::vector<Record> records;
    std::vector<Value> scalars;
    bool take_first = false;

    std::vector<Record> matched;
    std::vector<std::string> schema;
    std::string subject;    // "movie 'rain man'", used for NL rendering
    bool consumed = false;  // superseded by a following sort

    bool projected() const { return projected_key.has_value(); }
    std::size_t size() const { return projected() ? scalars.size() : records.size(); }
    bool empty() const { return size() == 0; }

    std::span<const Value> presented_scalars() const;
    std::span<const Record> presented_records() const;

    /// Rows/scalars/flags only; provenance fields are ignored.
    bool same_rows(const ResultSet& other) const;
};

struct ExecutionContext {
    std::vector<ResultSet> emitted;
    const ResultSet* last_result() const { return emitted.empty() ? nullptr : &emitted.back(); }
};

/// Evaluates a parsed program statement by statement. Unresolvable entity
/// names give empty results; unknown projection keys, sorts over nothing
/// and ill-typed comparisons throw ExecError.
std::vector<ResultSet> execute_program(const QueryProgram& program, const kg::KgDatabase& db);

/// eq/neq: numeric when both sides parse as numbers, otherwise trimmed
/// case-insensitive string equality. ge/le: numeric, or lexicographic when
/// both sides are ISO dates (YYYY[-MM[-DD]]); anything else throws
/// type_mismatch. Bounds are inclusive. A missing or null key makes every
/// comparison false. List values match when any element matches.
bool eval_condition(const Record& record, const Condition& condition);

/// Filters by the spec's conditions, then stable-sorts on the key. Rows
/// without the key go last in both directions.
std::vector<Record> apply_sort(std::vector<Record> rows, const SortSpec& spec);

/// Projection, len, AVG, slice and ALL/take-first handling over filtered
/// rows. `schema` lists the legal projection keys.
ResultSet project_and_aggregate(std::vector<Record> rows, const std::vector<std::string>& schema,
                                const std::optional<ProjectionSpec>& projection,
                                const ModifierSet& modifiers);

/// One sentence per non-consumed result, joined by single spaces.
std::string to_natural_language(const std::vector<ResultSet>& results, const QueryProgram& program);

/// Column names of the view a function reads.
std::vector<std::string> view_schema(ApiFunction f, const kg::KgDatabase& db);

/// Materialized view rows for a function (persons, movies, or the
/// link-table join for get_movie_person_X).
std::vector<Record> view_rows(ApiFunction f, const kg::KgDatabase& db);

nlohmann::json to_json(const ResultSet& r);

}  // namespace crag::kgql
