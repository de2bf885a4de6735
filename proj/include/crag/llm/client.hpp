// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace crag::llm {

struct Message {
    std::string role;  // "system" | "user" | "assistant"
    std::string content;

    friend bool operator==(const Message&, const Message&) = default;
};

struct GenerationParams {
    std::string template_id;  // which prompt produced the messages; scripted clients may filter on it
};

struct GenerationRequest {
    std::vector<Message> messages;
    GenerationParams params;
};

class GenerationError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class GenerationClient {
public:
    virtual ~GenerationClient() = default;

    /// Throws GenerationError when the backend fails.
    virtual std::string generate(const std::vector<Message>& messages, const GenerationParams& params) = 0;

    /// Default loops over generate(); backends with real batching override.
    virtual std::vector<std::string> batch_generate(const std::vector<GenerationRequest>& requests);

    /// Whether generate() may be called from several threads at once.
    virtual bool concurrent() const { return false; }
};

/// Content of the last user message, or "" when there is none.
std::string_view last_user_content(const std::vector<Message>& messages);

struct ScriptEntry {
    std::string match;                   // substring of the last user message
    std::string reply;
    std::optional<std::string> template_id;
    bool error = false;                  // throw GenerationError instead of replying
};

/// Replays a fixed query-to-reply table. The first entry whose `match`
/// occurs in the last user message (and whose template, when given, equals
/// the request's) wins. No match gives "i don't know". Immutable and safe
/// for concurrent use.
class ScriptedClient final : public GenerationClient {
public:
    explicit ScriptedClient(std::vector<ScriptEntry> entries);

    /// JSONL of {"match", "reply", "template"?, "error"?}.
    static ScriptedClient from_file(const std::filesystem::path& path);
    static ScriptedClient from_jsonl(std::string_view text);

    std::string generate(const std::vector<Message>& messages, const GenerationParams& params) override;
    bool concurrent() const override { return true; }

    const std::vector<ScriptEntry>& entries() const { return entries_; }

private:
    std::vector<ScriptEntry> entries_;
};

}  // namespace crag::llm
