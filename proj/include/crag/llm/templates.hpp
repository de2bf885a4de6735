// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <filesystem>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "crag/llm/client.hpp"

namespace crag::llm {

enum class TemplateId { p_basic, p_ctrl, p_domain, p_entity, p_api_gen, p_check_gt, p_context };

std::string_view to_string(TemplateId id);
std::optional<TemplateId> parse_template_id(std::string_view s);

class RenderError : public std::runtime_error {
public:
    explicit RenderError(std::string placeholder)
        : std::runtime_error("missing placeholder '" + placeholder + "'"), placeholder_(std::move(placeholder)) {}
    const std::string& placeholder() const { return placeholder_; }

private:
    std::string placeholder_;
};

struct PromptInputs {
    int token_limit = 75;
    std::optional<std::string> query_time;
    std::optional<std::string> context_str;
    std::optional<std::string> query_str;
    std::optional<std::string> gt_str;
    std::optional<std::string> our_str;
    std::optional<std::string> icl_examples;  // {ICL_examples}
    std::optional<std::string> schema_info;   // {Schema_info}
    std::optional<std::string> api_rules;     // {API_rules}
};

/// Placeholder names a template uses, in first-use order.
std::vector<std::string_view> placeholders(TemplateId id);

/// Messages with placeholders substituted in one pass; substituted text is
/// never rescanned. p_entity uses the movie wording.
/// Throws RenderError when a placeholder the template needs is unset, and
/// std::invalid_argument when token_limit <= 0.
std::vector<Message> render_prompt(TemplateId id, const PromptInputs& inputs);

/// Entity prompt for a domain (movie, finance, music).
std::vector<Message> render_entity_prompt(std::string_view domain, const PromptInputs& inputs);

/// Raw template messages, placeholders intact.
std::vector<Message> template_messages(TemplateId id);

/// $CRAG_ASSET_DIR when set, else the source tree's assets/.
std::filesystem::path asset_dir();

/// Reads assets/prompts/<domain>/<name>.txt. Throws std::runtime_error.
std::string load_prompt_asset(std::string_view domain, std::string_view name);

/// PromptInputs for p_api_gen with the domain's schema, rules and examples.
PromptInputs api_gen_inputs(std::string_view domain, std::string query_str);

/// PromptInputs for p_check_gt with the shared ICL examples.
PromptInputs check_gt_inputs(std::string query_str, std::string gt_str, std::string our_str);

}  // namespace crag::llm
