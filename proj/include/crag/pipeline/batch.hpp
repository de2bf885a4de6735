// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "crag/pipeline/arbitration.hpp"
#include "crag/pipeline/pathways.hpp"

namespace crag::pipeline {

struct AnswerRecord {
    std::string query;
    int task = 1;
    std::optional<std::string> domain;  // label from the case file
    std::string routed_domain;
    std::optional<std::string> kg_answer;
    std::string web_answer;
    std::string final_answer;
    Pathway pathway = Pathway::web;
    std::optional<int> score;
    bool timed_out = false;
    double elapsed_ms = 0.0;
};

/// Field order is fixed. elapsed_ms is written only with `timings`, so the
/// default output is byte-identical across runs.
nlohmann::ordered_json to_json(const AnswerRecord& r, bool timings = false);
AnswerRecord record_from_json(const nlohmann::json& j);

struct BatchConfig {
    double deadline_secs = 30.0;
    std::size_t parallelism = 1;
    std::optional<int> task_override;
    bool judge_scoring = false;  // score with the judge client instead of exact match
    bool timings = false;
};

/// Reads every case before returning; a bad line throws std::runtime_error
/// naming it.
std::vector<QueryCase> load_cases(const std::filesystem::path& path);

AnswerRecord answer_case(const QueryCase& c, const PipelineDeps& deps, const BatchConfig& config);

/// Results keep input order. Parallelism drops to 1 unless every
/// configured client allows concurrent calls.
std::vector<AnswerRecord> run_batch(std::span<const QueryCase> cases, const PipelineDeps& deps,
                                    const BatchConfig& config);

/// {"cases", "scored", "total_score", "mean_score" (null when nothing is
/// scored), "pathways": {"kg", "web"}, "timeouts", "domains"?}
nlohmann::ordered_json summarize(std::span<const AnswerRecord> records);

std::string results_jsonl(std::span<const AnswerRecord> records, bool timings = false);
std::vector<AnswerRecord> load_results(const std::filesystem::path& path);

}  // namespace crag::pipeline
