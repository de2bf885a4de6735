// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "crag/llm/client.hpp"

namespace crag::sft {

struct TrainExample {
    std::string query_str;
    std::string query_time;
    std::string ground_truth;  // non-empty
    std::string rag_prediction;
    std::string context_str;
};

/// JSONL with the field names above. Throws std::runtime_error naming the
/// bad line, including blank ground truths.
std::vector<TrainExample> load_examples(const std::filesystem::path& path);
TrainExample example_from_json(const nlohmann::json& j);

enum class Branch { invalid, correct, idk, context_supported };
std::string_view to_string(Branch b);

struct SftLabel {
    std::string query_str;
    std::string label;
    Branch branch = Branch::idk;
    bool judge_failed = false;

    friend bool operator==(const SftLabel&, const SftLabel&) = default;
};

/// Invalid ground truth first, then the correctness judge, then the
/// context judge. A failing judge gives "i don't know" with judge_failed.
SftLabel label_query(const TrainExample& example, llm::GenerationClient& judge);

struct SftStats {
    std::size_t invalid = 0;
    std::size_t correct = 0;
    std::size_t idk = 0;
    std::size_t context_supported = 0;
    std::size_t judge_failures = 0;

    friend bool operator==(const SftStats&, const SftStats&) = default;
};

nlohmann::ordered_json to_json(const SftStats& s);

/// {"prompt": rendered basic prompt messages, "completion": label}; a
/// "judge_failed": true field is added only for flagged records.
nlohmann::ordered_json sft_record(const TrainExample& example, const SftLabel& label);

struct SftDataset {
    std::vector<SftLabel> labels;
    SftStats stats;
    std::string jsonl;  // exact bytes written to the dataset file
};

SftDataset label_dataset(std::span<const TrainExample> examples, llm::GenerationClient& judge);

/// Writes the dataset to `out` and stats to `<out>.stats.json`, each via a
/// temporary file renamed into place, so a failure leaves no partial file.
SftStats build_sft_dataset(std::span<const TrainExample> examples, llm::GenerationClient& judge,
                           const std::filesystem::path& out);

/// `<out>.stats.json`
std::filesystem::path stats_path(const std::filesystem::path& out);

}  // namespace crag::sft
