// SPDX-License-Identifier: Apache-2.0
#include "crag/pipeline/arbitration.hpp"

#include "crag/common/text.hpp"
#include "crag/llm/judgement.hpp"
#include "crag/llm/templates.hpp"

namespace crag::pipeline {

std::string_view to_string(Pathway p) { return p == Pathway::kg ? "kg" : "web"; }

Arbitration arbitrate(const std::optional<std::string>& kg_answer, std::string_view web_answer) {
    if (kg_answer && !text::is_idk(*kg_answer)) return {*kg_answer, Pathway::kg};
    return {std::string(web_answer), Pathway::web};
}

int score_answer(std::string_view final_answer, std::string_view ground_truth, llm::GenerationClient* judge,
                 std::string_view query) {
    if (text::is_idk(final_answer)) return 0;
    bool correct = false;
    if (judge) {
        try {
            auto msgs = llm::render_prompt(
                llm::TemplateId::p_check_gt,
                llm::check_gt_inputs(std::string(query), std::string(ground_truth), std::string(final_answer)));
            correct = llm::parse_judgement(judge->generate(msgs, {"p_check_gt"}));
        } catch (const llm::GenerationError&) {
            correct = false;
        }
    } else {
        correct = text::normalize_answer(final_answer) == text::normalize_answer(ground_truth);
    }
    return correct ? 1 : -1;
}

}  // namespace crag::pipeline
