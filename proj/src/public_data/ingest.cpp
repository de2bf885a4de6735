// SPDX-License-Identifier: Apache-2.0
#include "crag/public_data/ingest.hpp"

#include <fstream>
#include <sstream>

#include "crag/common/text.hpp"

namespace crag::public_data {
namespace {

std::string read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::string cell_text(const nlohmann::json& v) {
    if (v.is_null()) return {};
    if (v.is_string()) return v.get<std::string>();
    if (v.is_number_integer()) return std::to_string(v.get<std::int64_t>());
    if (v.is_number()) return text::format_double(v.get<double>());
    if (v.is_boolean()) return v.get<bool>() ? "true" : "false";
    return v.dump();
}

}  // namespace

IngestMapping mapping_from_json(const nlohmann::json& j) {
    IngestMapping m;
    m.key_column = j.at("key").get<std::string>();
    for (const auto& f : j.at("attributes")) {
        IngestMapping::Field field;
        field.column = f.at("column").get<std::string>();
        field.name = f.value("name", field.column);
        if (f.contains("list_sep")) field.list_sep = f["list_sep"].get<std::string>();
        m.fields.push_back(std::move(field));
    }
    if (m.fields.empty()) throw std::runtime_error("mapping has no attributes");
    return m;
}

IngestMapping load_mapping(const std::filesystem::path& path) {
    return mapping_from_json(nlohmann::json::parse(read_file(path)));
}

std::vector<std::vector<std::string>> parse_csv(std::string_view text) {
    std::vector<std::vector<std::string>> rows;
    std::vector<std::string> row;
    std::string field;
    bool quoted = false, any = false;
    for (std::size_t i = 0; i < text.size(); ++i) {
        char c = text[i];
        if (quoted) {
            if (c == '"') {
                if (i + 1 < text.size() && text[i + 1] == '"') {
                    field.push_back('"');
                    ++i;
                } else {
                    quoted = false;
                }
            } else {
                field.push_back(c);
            }
            continue;
        }
        switch (c) {
            case '"': quoted = true; any = true; break;
            case ',':
                row.push_back(std::move(field));
                field.clear();
                any = true;
                break;
            case '\r': break;
            case '\n':
                row.push_back(std::move(field));
                field.clear();
                rows.push_back(std::move(row));
                row.clear();
                any = false;
                break;
            default: field.push_back(c); any = true;
        }
    }
    if (quoted) throw std::runtime_error("unterminated quoted CSV field");
    if (any || !field.empty()) {
        row.push_back(std::move(field));
        rows.push_back(std::move(row));
    }
    return rows;
}

std::vector<nlohmann::json> read_rows(const std::filesystem::path& input) {
    auto body = read_file(input);
    std::vector<nlohmann::json> rows;
    if (input.extension() == ".json") {
        auto doc = nlohmann::json::parse(body);
        if (!doc.is_array()) throw std::runtime_error(input.string() + ": expected a JSON array of objects");
        for (auto& r : doc) rows.push_back(std::move(r));
        return rows;
    }
    auto records = parse_csv(body);
    if (records.empty()) return rows;
    const auto& header = records.front();
    for (std::size_t r = 1; r < records.size(); ++r) {
        if (records[r].size() == 1 && records[r][0].empty()) continue;
        if (records[r].size() != header.size())
            throw std::runtime_error(input.string() + ": record " + std::to_string(r + 1) + " has " +
                                     std::to_string(records[r].size()) + " fields, header has " +
                                     std::to_string(header.size()));
        nlohmann::json obj = nlohmann::json::object();
        for (std::size_t c = 0; c < header.size(); ++c) obj[header[c]] = records[r][c];
        rows.push_back(std::move(obj));
    }
    return rows;
}

std::vector<EntityDoc> ingest_rows(Domain domain, const std::vector<nlohmann::json>& rows,
                                   const IngestMapping& mapping) {
    std::vector<EntityDoc> out;
    for (std::size_t r = 0; r < rows.size(); ++r) {
        const auto& row = rows[r];
        auto where = "row " + std::to_string(r + 1);
        auto key = text::normalize_key(row.contains(mapping.key_column) ? cell_text(row[mapping.key_column]) : "");
        if (key.empty()) throw std::runtime_error(where + ": missing key column '" + mapping.key_column + "'");
        Attributes attrs;
        for (const auto& f : mapping.fields) {
            if (!row.contains(f.column)) continue;
            const auto& cell = row[f.column];
            if (cell.is_array()) {
                std::vector<std::string> items;
                for (const auto& v : cell)
                    if (auto s = std::string(text::trim(cell_text(v))); !s.empty()) items.push_back(s);
                if (!items.empty()) attrs.emplace_back(f.name, std::move(items));
                continue;
            }
            auto value = std::string(text::trim(cell_text(cell)));
            if (value.empty()) continue;
            if (f.list_sep) {
                std::vector<std::string> items;
                for (const auto& piece : text::split(value, *f.list_sep))
                    if (auto s = std::string(text::trim(piece)); !s.empty()) items.push_back(s);
                attrs.emplace_back(f.name, std::move(items));
            } else {
                attrs.emplace_back(f.name, std::move(value));
            }
        }
        if (attrs.empty()) throw std::runtime_error(where + ": no attribute values");
        out.push_back({domain, std::move(key), serialize_entity(attrs)});
    }
    return out;
}

}  // namespace crag::public_data
