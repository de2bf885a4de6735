// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <optional>
#include <string>
#include <string_view>

#include "crag/llm/client.hpp"

namespace crag::pipeline {

enum class Pathway { kg, web };
std::string_view to_string(Pathway p);

struct Arbitration {
    std::string final_answer;
    Pathway pathway = Pathway::web;

    friend bool operator==(const Arbitration&, const Arbitration&) = default;
};

/// The KG answer wins unless it is absent or "i don't know" (compared
/// case-insensitively with punctuation stripped).
Arbitration arbitrate(const std::optional<std::string>& kg_answer, std::string_view web_answer);

/// 0 for "i don't know"; +1 when correct, -1 otherwise. Correctness is a
/// normalized exact match, or the p_check_gt judge when one is given.
int score_answer(std::string_view final_answer, std::string_view ground_truth,
                 llm::GenerationClient* judge = nullptr, std::string_view query = {});

}  // namespace crag::pipeline
