// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <filesystem>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

#include <nlohmann/json.hpp>

#include "crag/web/scoring.hpp"

namespace crag::public_data {

enum class Domain { movie, finance, music, sports, other };

std::string_view to_string(Domain d);
std::optional<Domain> parse_domain(std::string_view s);

struct EntityDoc {
    Domain domain = Domain::other;
    std::string key;        // normalized
    std::string paragraph;  // non-empty

    friend bool operator==(const EntityDoc&, const EntityDoc&) = default;
};

nlohmann::ordered_json to_json(const EntityDoc& d);
EntityDoc entity_doc_from_json(const nlohmann::json& j);

using AttributeValue = std::variant<std::string, std::vector<std::string>>;
using Attributes = std::vector<std::pair<std::string, AttributeValue>>;

/// One "The <attr> is <value>." sentence per attribute, in order, joined
/// with a space. The title attribute is quoted with the period inside the
/// quotes. Lists of two or more use "are" and join with " and ".
/// Throws std::invalid_argument for an empty attribute list.
std::string serialize_entity(const Attributes& attributes);

class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

enum class MatchLevel { exact, substring, embedding };

struct MatchPolicy {
    MatchLevel level = MatchLevel::substring;
    double threshold = 0.8;  // embedding level only, in (0, 1]

    /// Throws ConfigError on an out-of-range threshold.
    void validate() const;
};

/// Movie and music match by substring, finance tickers exactly. Sports and
/// other have no index; the returned policy is unused for them.
MatchPolicy default_policy(Domain d);

/// True for domains that have preprocessed data.
bool has_index(Domain d);

class EntityIndex {
public:
    EntityIndex() = default;
    explicit EntityIndex(std::vector<EntityDoc> docs);

    /// JSONL of EntityDoc. Throws std::runtime_error naming the bad line.
    static EntityIndex load(const std::filesystem::path& path);
    void save(const std::filesystem::path& path) const;

    const std::vector<EntityDoc>& docs() const { return docs_; }
    void merge(const EntityIndex& other);

private:
    std::vector<EntityDoc> docs_;
};

/// Paragraphs of `domain` docs matching the entities. Order follows entity
/// order, then index order; repeated paragraphs are dropped. Blank entities
/// match nothing. Domains without an index give nothing.
/// Throws ConfigError for the embedding level without an embedder.
std::vector<std::string> lookup_paragraphs(std::span<const std::string> entities, const EntityIndex& index,
                                           Domain domain, const MatchPolicy& policy,
                                           const web::Embedder* embedder = nullptr);

}  // namespace crag::public_data
