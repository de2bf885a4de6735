// SPDX-License-Identifier: Apache-2.0
#include "crag/public_data/entity_index.hpp"

#include <array>
#include <fstream>
#include <set>

#include "crag/common/text.hpp"

namespace crag::public_data {
namespace {

constexpr std::array<std::pair<Domain, std::string_view>, 5> kDomains = {{
    {Domain::movie, "movie"},
    {Domain::finance, "finance"},
    {Domain::music, "music"},
    {Domain::sports, "sports"},
    {Domain::other, "other"},
}};

bool matches(std::string_view entity, const EntityDoc& doc, const MatchPolicy& policy,
             const web::Embedder* embedder, const std::vector<float>* entity_vec) {
    switch (policy.level) {
        case MatchLevel::exact: return entity == doc.key;
        case MatchLevel::substring:
            return doc.key.find(entity) != std::string::npos || entity.find(doc.key) != std::string_view::npos;
        case MatchLevel::embedding:
            return web::cosine(*entity_vec, embedder->embed(doc.key)) >= policy.threshold;
    }
    return false;
}

}  // namespace

std::string_view to_string(Domain d) {
    for (const auto& [k, v] : kDomains)
        if (k == d) return v;
    return "other";
}

std::optional<Domain> parse_domain(std::string_view s) {
    for (const auto& [k, v] : kDomains)
        if (v == s) return k;
    return std::nullopt;
}

nlohmann::ordered_json to_json(const EntityDoc& d) {
    nlohmann::ordered_json j;
    j["domain"] = to_string(d.domain);
    j["key"] = d.key;
    j["paragraph"] = d.paragraph;
    return j;
}

EntityDoc entity_doc_from_json(const nlohmann::json& j) {
    EntityDoc d;
    auto dom = parse_domain(j.at("domain").get<std::string>());
    if (!dom) throw std::runtime_error("unknown domain '" + j["domain"].get<std::string>() + "'");
    d.domain = *dom;
    d.key = text::normalize_key(j.at("key").get<std::string>());
    d.paragraph = j.at("paragraph").get<std::string>();
    if (d.paragraph.empty()) throw std::runtime_error("empty paragraph for key '" + d.key + "'");
    return d;
}

std::string serialize_entity(const Attributes& attributes) {
    if (attributes.empty()) throw std::invalid_argument("serialize_entity needs at least one attribute");
    std::vector<std::string> sentences;
    for (const auto& [name, value] : attributes) {
        if (const auto* list = std::get_if<std::vector<std::string>>(&value); list && list->size() != 1) {
            std::string joined = list->empty() ? "unknown" : text::join(*list, " and ");
            sentences.push_back("The " + name + (list->size() > 1 ? " are " : " is ") + joined + ".");
            continue;
        }
        const std::string& v = std::holds_alternative<std::string>(value)
                                   ? std::get<std::string>(value)
                                   : std::get<std::vector<std::string>>(value).front();
        if (text::to_lower(name) == "title") sentences.push_back("The " + name + " is \"" + v + ".\"");
        else sentences.push_back("The " + name + " is " + v + ".");
    }
    return text::join(sentences, " ");
}

void MatchPolicy::validate() const {
    if (level == MatchLevel::embedding && !(threshold > 0.0 && threshold <= 1.0))
        throw ConfigError("embedding threshold must be in (0, 1]");
}

MatchPolicy default_policy(Domain d) {
    switch (d) {
        case Domain::finance: return {MatchLevel::exact, 0.8};
        default: return {MatchLevel::substring, 0.8};
    }
}

bool has_index(Domain d) { return d == Domain::movie || d == Domain::finance || d == Domain::music; }

EntityIndex::EntityIndex(std::vector<EntityDoc> docs) : docs_(std::move(docs)) {}

EntityIndex EntityIndex::load(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open index " + path.string());
    std::vector<EntityDoc> docs;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (text::trim(line).empty()) continue;
        try {
            docs.push_back(entity_doc_from_json(nlohmann::json::parse(line)));
        } catch (const std::exception& e) {
            throw std::runtime_error(path.string() + ":" + std::to_string(lineno) + ": " + e.what());
        }
    }
    return EntityIndex(std::move(docs));
}

void EntityIndex::save(const std::filesystem::path& path) const {
    auto tmp = path;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw std::runtime_error("cannot write " + tmp.string());
        for (const auto& d : docs_) out << to_json(d).dump() << '\n';
        if (!out) throw std::runtime_error("write failed for " + tmp.string());
    }
    std::filesystem::rename(tmp, path);
}

void EntityIndex::merge(const EntityIndex& other) {
    docs_.insert(docs_.end(), other.docs_.begin(), other.docs_.end());
}

std::vector<std::string> lookup_paragraphs(std::span<const std::string> entities, const EntityIndex& index,
                                           Domain domain, const MatchPolicy& policy,
                                           const web::Embedder* embedder) {
    policy.validate();
    if (policy.level == MatchLevel::embedding && !embedder)
        throw ConfigError("embedding match level requires an embedder");
    std::vector<std::string> out;
    if (!has_index(domain)) return out;
    std::set<std::string> seen;
    for (const auto& raw : entities) {
        auto entity = text::normalize_key(raw);
        if (entity.empty()) continue;
        std::vector<float> vec;
        if (policy.level == MatchLevel::embedding) vec = embedder->embed(entity);
        for (const auto& doc : index.docs()) {
            if (doc.domain != domain || !matches(entity, doc, policy, embedder, &vec)) continue;
            if (seen.insert(doc.paragraph).second) out.push_back(doc.paragraph);
        }
    }
    return out;
}

}  // namespace crag::public_data
