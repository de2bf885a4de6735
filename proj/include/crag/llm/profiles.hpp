// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <array>
#include <filesystem>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "crag/llm/client.hpp"

namespace crag::llm {

/// Fine-tuning metadata for one adapter. Stored and written back verbatim;
/// nothing here loads weights.
struct LoraProfile {
    std::string profile_id;
    nlohmann::ordered_json metadata;

    friend bool operator==(const LoraProfile&, const LoraProfile&) = default;
};

/// {"profiles": [{"profile_id": ..., "metadata": {...}}, ...]}
std::vector<LoraProfile> lora_profiles_from_json(const nlohmann::ordered_json& doc);
nlohmann::ordered_json to_json(const std::vector<LoraProfile>& profiles);
std::vector<LoraProfile> load_lora_profiles(const std::filesystem::path& path);

enum class Role { router, api_gen, web_answer, kg_answer, judge };
inline constexpr std::array kRoles = {Role::router, Role::api_gen, Role::web_answer, Role::kg_answer, Role::judge};
std::string_view to_string(Role r);

/// Generation clients by role. Switching adapters is modeled as picking a
/// different client; `profile` names the adapter metadata it stands for.
struct ClientSet {
    struct Slot {
        std::shared_ptr<GenerationClient> client;
        std::optional<std::string> profile;
    };
    std::map<Role, Slot> slots;
    std::vector<LoraProfile> profiles;

    /// Client for a role; null when the role is not configured.
    GenerationClient* get(Role r) const;
    /// Every distinct client allows concurrent generate().
    bool concurrent() const;

    /// Same client for every role.
    static ClientSet uniform(std::shared_ptr<GenerationClient> client);
};

/// Config file:
///   {"lora_profiles": "<path>"?,
///    "roles": {"default": {"script": "<jsonl>", "profile": "<id>"?}, "judge": {...}, ...}}
/// Paths are relative to the config file. Roles without an entry use
/// "default". Scripts shared between roles load once. Unknown role names or
/// profile ids throw std::runtime_error.
ClientSet load_client_config(const std::filesystem::path& path);

}  // namespace crag::llm
