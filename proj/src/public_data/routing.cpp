// SPDX-License-Identifier: Apache-2.0
#include "crag/public_data/routing.hpp"

#include "crag/common/text.hpp"
#include "crag/llm/templates.hpp"

namespace crag::public_data {

Domain domain_from_reply(std::string_view reply) {
    auto words = text::split_whitespace(text::normalize_answer(reply));
    if (words.empty()) return Domain::other;
    auto d = parse_domain(words.front());
    return d ? *d : Domain::other;
}

Domain classify_domain(std::string_view query, llm::GenerationClient& client, bool* degraded) {
    llm::PromptInputs in;
    in.query_str = std::string(query);
    try {
        return domain_from_reply(client.generate(llm::render_prompt(llm::TemplateId::p_domain, in), {"p_domain"}));
    } catch (const llm::GenerationError&) {
        if (degraded) *degraded = true;
        return Domain::other;
    }
}

std::vector<std::string> entities_from_reply(std::string_view reply) {
    std::vector<std::string> out;
    if (text::is_idk(reply)) return out;
    for (const auto& piece : text::split(reply, "&&")) {
        auto e = text::to_lower(text::trim(piece));
        if (!e.empty()) out.push_back(std::move(e));
    }
    return out;
}

std::vector<std::string> extract_entities(std::string_view query, Domain domain, llm::GenerationClient& client,
                                          bool* degraded) {
    if (!has_index(domain)) return {};
    llm::PromptInputs in;
    in.query_str = std::string(query);
    try {
        auto msgs = llm::render_entity_prompt(to_string(domain), in);
        return entities_from_reply(client.generate(msgs, {"p_entity"}));
    } catch (const llm::GenerationError&) {
        if (degraded) *degraded = true;
        return {};
    }
}

}  // namespace crag::public_data
