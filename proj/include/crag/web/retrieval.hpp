// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <filesystem>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "crag/web/chunking.hpp"
#include "crag/web/scoring.hpp"

namespace crag::web {

struct WebPage {
    std::string page_id;
    std::string snippet;
    std::string html;

    friend bool operator==(const WebPage&, const WebPage&) = default;
};

WebPage page_from_json(const nlohmann::json& j);
nlohmann::json to_json(const WebPage& p);

/// JSONL, one {"page_id", "snippet", "html"} object per line. Blank lines
/// are skipped. Throws std::runtime_error naming the bad line.
std::vector<WebPage> load_pages(const std::filesystem::path& path);

class RetrievalError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct RetrievedParent {
    std::string parent_id;
    std::string text;
    double score = 0.0;  // best child similarity

    friend bool operator==(const RetrievedParent&, const RetrievedParent&) = default;
};

/// Ranks children by cosine similarity to the query (ties keep chunk order),
/// keeps the top recall_k children and returns their parents in rank order
/// with duplicates removed. At most recall_k parents come back.
/// Throws RetrievalError when the embedder fails.
std::vector<RetrievedParent> retrieve_children(std::string_view query, std::span<const ChunkPair> chunks,
                                               const Embedder& embedder, std::size_t recall_k);

struct ScoredChunk {
    std::string parent_text;
    double score = 0.0;

    friend bool operator==(const ScoredChunk&, const ScoredChunk&) = default;
};

struct RerankResult {
    std::vector<ScoredChunk> chunks;  // non-increasing scores unless degraded
    bool degraded = false;            // reranker failed; first k passed through unscored
};

RerankResult rerank(std::string_view query, std::span<const std::string> parents, const Reranker& reranker,
                    std::size_t reranker_k);

struct PreselectResult {
    std::vector<WebPage> pages;
    bool degraded = false;
};

/// Ranks pages by reranker score of their snippet and keeps the top `keep`
/// (five by default); ties keep input order.
PreselectResult preselect_pages(std::string_view query, std::span<const WebPage> pages, const Reranker& reranker,
                                std::size_t keep = 5);

}  // namespace crag::web
