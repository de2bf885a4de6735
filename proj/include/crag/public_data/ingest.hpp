// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "crag/public_data/entity_index.hpp"

namespace crag::public_data {

/// Column-to-attribute mapping:
///   {"key": "<column>",
///    "attributes": [{"column": "...", "name": "...", "list_sep": "|"?}, ...]}
struct IngestMapping {
    struct Field {
        std::string column;
        std::string name;
        std::optional<std::string> list_sep;
    };
    std::string key_column;
    std::vector<Field> fields;
};

IngestMapping mapping_from_json(const nlohmann::json& j);
IngestMapping load_mapping(const std::filesystem::path& path);

/// RFC 4180 records: quoted fields may hold commas, newlines and doubled
/// quotes. A trailing newline does not add an empty record.
std::vector<std::vector<std::string>> parse_csv(std::string_view text);

/// Rows keyed by column name, from CSV with a header row, or from a JSON
/// array of flat objects (chosen by the .json extension).
std::vector<nlohmann::json> read_rows(const std::filesystem::path& input);

/// One EntityDoc per row. Empty or missing values are skipped; a row with
/// no key or no attributes left throws std::runtime_error naming the row.
std::vector<EntityDoc> ingest_rows(Domain domain, const std::vector<nlohmann::json>& rows,
                                   const IngestMapping& mapping);

}  // namespace crag::public_data
