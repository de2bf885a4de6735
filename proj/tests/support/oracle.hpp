// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "crag/kg/store.hpp"
#include "crag/kgql/ast.hpp"
#include "crag/kgql/exec.hpp"

namespace crag::testing {

/// Row-scan reference interpreter for KGQL. Builds its own joined rows from
/// the database tables and evaluates statements with plain loops.
struct OracleResult {
    std::optional<std::string> projected_key;
    bool aggregated = false;
    std::vector<kg::Record> records;
    std::vector<kg::Value> scalars;
    bool take_first = false;
    bool consumed = false;
    std::vector<kg::Record> matched;
};

class OracleError : public std::runtime_error {
public:
    OracleError(kgql::ExecError::Kind kind, const std::string& what) : std::runtime_error(what), kind(kind) {}
    kgql::ExecError::Kind kind;
};

std::vector<kg::Record> oracle_rows(kgql::ApiFunction f, const kg::KgDatabase& db);
std::vector<OracleResult> oracle_execute(const kgql::QueryProgram& program, const kg::KgDatabase& db);

/// Empty string when equal, otherwise a description of the first difference.
std::string compare_results(const std::vector<kgql::ResultSet>& got, const std::vector<OracleResult>& want);

/// Runs both interpreters. Errors must agree by kind.
std::string check_program(const kgql::QueryProgram& program, const kg::KgDatabase& db);

}  // namespace crag::testing
