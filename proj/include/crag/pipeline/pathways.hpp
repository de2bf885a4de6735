// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <chrono>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "crag/kg/store.hpp"
#include "crag/llm/context.hpp"
#include "crag/llm/profiles.hpp"
#include "crag/public_data/entity_index.hpp"
#include "crag/web/retrieval.hpp"

namespace crag::pipeline {

struct QueryCase {
    std::string query;
    std::string query_time;
    int task = 1;  // 1, 2 or 3
    std::optional<std::string> ground_truth;
    std::optional<std::string> domain;  // evaluation label only
    std::vector<web::WebPage> pages;
};

/// Validates task and page counts (at most 5 pages for tasks 1 and 2).
QueryCase case_from_json(const nlohmann::json& j);

class DeadlineExceeded : public std::runtime_error {
public:
    DeadlineExceeded() : std::runtime_error("deadline exceeded") {}
};

/// Cooperative per-case budget. Stages call check() between steps.
class Deadline {
public:
    using Clock = std::chrono::steady_clock;

    explicit Deadline(std::chrono::duration<double> budget)
        : end_(Clock::now() + std::chrono::duration_cast<Clock::duration>(budget)) {}

    bool expired() const { return Clock::now() >= end_; }
    void check() const {
        if (expired()) throw DeadlineExceeded();
    }

private:
    Clock::time_point end_;
};

struct PipelineDeps {
    const kg::KgDatabase* db = nullptr;
    const public_data::EntityIndex* index = nullptr;
    const web::Embedder* embedder = nullptr;
    const web::Reranker* reranker = nullptr;
    llm::ClientSet clients;
    web::RetrievalConfig retrieval;
    int token_limit = 75;
    std::size_t max_context_tokens = llm::kMaxContextTokens;
    std::size_t preselect_pages = 5;  // task 3
};

struct WebTrace {
    std::size_t pages_in = 0;
    std::size_t pages_chunked = 0;
    std::size_t chunks = 0;
    std::size_t parents_retrieved = 0;
    std::size_t parents_reranked = 0;
    std::size_t public_paragraphs = 0;
    std::size_t context_tokens = 0;
    std::size_t context_docs = 0;
    bool degraded = false;
};

struct WebAnswer {
    std::string answer;
    std::string context;
    WebTrace trace;
};

/// Task 3 keeps the top pages by snippet first. Public data is used for
/// task 1 only. Failures collapse to "i don't know"; DeadlineExceeded
/// propagates.
WebAnswer answer_web_pathway(const QueryCase& c, const PipelineDeps& deps, const Deadline& deadline,
                             public_data::Domain domain);

struct KgAnswer {
    std::string answer;
    std::string program;
    std::string kg_text;  // natural-language rendering fed to the answer prompt
};

/// Movie-domain queries only; everything else, and every parse or
/// execution failure, is "i don't know". DeadlineExceeded propagates.
KgAnswer answer_kg_pathway(const QueryCase& c, const PipelineDeps& deps, const Deadline& deadline,
                           public_data::Domain domain);

}  // namespace crag::pipeline
