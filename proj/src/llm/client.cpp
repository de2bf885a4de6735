// SPDX-License-Identifier: Apache-2.0
#include "crag/llm/client.hpp"

#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "crag/common/text.hpp"

namespace crag::llm {

std::vector<std::string> GenerationClient::batch_generate(const std::vector<GenerationRequest>& requests) {
    std::vector<std::string> out;
    out.reserve(requests.size());
    for (const auto& r : requests) out.push_back(generate(r.messages, r.params));
    return out;
}

std::string_view last_user_content(const std::vector<Message>& messages) {
    for (auto it = messages.rbegin(); it != messages.rend(); ++it)
        if (it->role == "user") return it->content;
    return {};
}

ScriptedClient::ScriptedClient(std::vector<ScriptEntry> entries) : entries_(std::move(entries)) {}

ScriptedClient ScriptedClient::from_jsonl(std::string_view text) {
    std::vector<ScriptEntry> entries;
    std::size_t lineno = 0;
    for (const auto& line : text::split(text, "\n")) {
        ++lineno;
        if (text::trim(line).empty()) continue;
        try {
            auto j = nlohmann::json::parse(line);
            ScriptEntry e;
            e.match = j.at("match").get<std::string>();
            e.reply = j.value("reply", std::string{});
            if (j.contains("template")) e.template_id = j["template"].get<std::string>();
            e.error = j.value("error", false);
            entries.push_back(std::move(e));
        } catch (const nlohmann::json::exception& e) {
            throw std::runtime_error("script line " + std::to_string(lineno) + ": " + e.what());
        }
    }
    return ScriptedClient(std::move(entries));
}

ScriptedClient ScriptedClient::from_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open script " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return from_jsonl(ss.str());
}

std::string ScriptedClient::generate(const std::vector<Message>& messages, const GenerationParams& params) {
    auto content = last_user_content(messages);
    for (const auto& e : entries_) {
        if (e.template_id && *e.template_id != params.template_id) continue;
        if (content.find(e.match) == std::string_view::npos) continue;
        if (e.error) throw GenerationError("scripted failure for '" + e.match + "'");
        return e.reply;
    }
    return std::string(text::kIdk);
}

}  // namespace crag::llm
