// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_map>
#include <variant>
#include <vector>

#include <nlohmann/json.hpp>

#include "crag/kg/value.hpp"

namespace crag::kg {

struct PersonRow {
    std::string name;
    std::string birthday;  // "YYYY-MM-DD" or empty
    StringList acted_movies;
    StringList directed_movies;
    std::vector<std::size_t> oscar_awards;  // indices into KgDatabase::oscar()
    Record attributes;                      // extra flat fields, e.g. gender

    friend bool operator==(const PersonRow&, const PersonRow&) = default;
};

struct MovieRow {
    std::string title;
    std::string release_date;
    std::string original_title;
    std::string original_language;
    std::int64_t budget = 0;
    std::int64_t revenue = 0;
    double rating = 0.0;
    StringList genres;
    std::int64_t year = 0;
    std::vector<std::size_t> oscar_awards;
    std::vector<std::size_t> cast;
    std::vector<std::size_t> crew;
    Record attributes;

    friend bool operator==(const MovieRow&, const MovieRow&) = default;
};

struct CastRow {
    std::string movie_name;
    std::string name;
    std::string character;
    std::int64_t year = 0;
    std::size_t movie = 0;  // index into movies()

    friend bool operator==(const CastRow&, const CastRow&) = default;
};

struct CrewRow {
    std::string movie_name;
    std::string name;
    std::string job;
    std::int64_t year = 0;
    std::size_t movie = 0;

    friend bool operator==(const CrewRow&, const CrewRow&) = default;
};

struct OscarRow {
    std::int64_t year = 0;  // ceremony year
    std::string category;
    std::string name;  // empty for awards that are not person-linked
    std::string movie;
    bool winner = false;
    std::size_t movie_index = 0;

    friend bool operator==(const OscarRow&, const OscarRow&) = default;
};

/// Thrown for malformed fixture files. `where` carries "line N" for JSON
/// syntax errors or a field path such as "movies[2].budget".
class LoadError : public std::runtime_error {
public:
    LoadError(std::string where, const std::string& message)
        : std::runtime_error(where + ": " + message), where_(std::move(where)) {}
    const std::string& where() const { return where_; }

private:
    std::string where_;
};

/// Thrown when a row violates a referential or value invariant.
class IntegrityError : public std::runtime_error {
public:
    IntegrityError(std::string row, const std::string& message)
        : std::runtime_error(row + ": " + message), row_(std::move(row)) {}
    const std::string& row() const { return row_; }

private:
    std::string row_;
};

/// Immutable in-memory movie knowledge graph: five relational tables with
/// person/movie back-references derived at construction.
class KgDatabase {
public:
    KgDatabase() = default;

    /// Validates every invariant and derives the back-reference lists.
    /// Throws IntegrityError naming the first offending row.
    static KgDatabase from_tables(std::vector<PersonRow> persons, std::vector<MovieRow> movies,
                                  std::vector<CastRow> cast, std::vector<CrewRow> crew,
                                  std::vector<OscarRow> oscar);

    const std::vector<PersonRow>& persons() const { return persons_; }
    const std::vector<MovieRow>& movies() const { return movies_; }
    const std::vector<CastRow>& cast() const { return cast_; }
    const std::vector<CrewRow>& crew() const { return crew_; }
    const std::vector<OscarRow>& oscar() const { return oscar_; }

    /// Normalized (case/whitespace-insensitive) lookups.
    const PersonRow* find_person(std::string_view name) const;
    std::vector<std::size_t> find_movies(std::string_view title) const;

    friend bool operator==(const KgDatabase&, const KgDatabase&) = default;

private:
    std::vector<PersonRow> persons_;
    std::vector<MovieRow> movies_;
    std::vector<CastRow> cast_;
    std::vector<CrewRow> crew_;
    std::vector<OscarRow> oscar_;
    std::unordered_map<std::string, std::size_t> person_index_;
    std::unordered_map<std::string, std::vector<std::size_t>> movie_index_;
};

KgDatabase load_kg(const std::filesystem::path& path);
KgDatabase parse_kg(std::string_view json_text);
KgDatabase kg_from_json(const nlohmann::json& doc);

// --- coarse mock-API surface ---------------------------------------------

enum class CoarseCall { person_info, movie_info, year_info };

std::optional<CoarseCall> parse_coarse_call(std::string_view name);
std::string_view to_string(CoarseCall call);

using CoarseKey = std::variant<std::string, std::int64_t>;

struct CoarseApiResponse {
    bool found = false;
    nlohmann::json payload = nlohmann::json::object();

    friend bool operator==(const CoarseApiResponse&, const CoarseApiResponse&) = default;
};

/// Throws std::invalid_argument when the key type does not match the call
/// (year_info takes an integer, the others a string). Unknown keys yield
/// found=false.
CoarseApiResponse coarse_get(const KgDatabase& db, CoarseCall call, const CoarseKey& key);

nlohmann::json to_json(const CoarseApiResponse& r);

// --- entity resolution ---------------------------------------------------

enum class EntityTable { person, movie };

/// Best-matching stored key for a free-text name, or nullopt.
///
/// Cascade, first stage with a candidate wins:
///   1. exact byte equality
///   2. equality after normalize_key
///   3. substring containment either way (normalized); smallest length
///      difference wins
///   4. Jaccard overlap of term sets; highest score wins, zero never matches
/// Ties inside a stage go to the lexicographically smallest key.
std::optional<std::string> resolve_entity(const KgDatabase& db, EntityTable table,
                                          std::string_view query_name);

}  // namespace crag::kg
