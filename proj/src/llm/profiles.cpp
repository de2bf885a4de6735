// SPDX-License-Identifier: Apache-2.0
#include "crag/llm/profiles.hpp"

#include <fstream>
#include <set>

namespace crag::llm {

std::vector<LoraProfile> lora_profiles_from_json(const nlohmann::ordered_json& doc) {
    std::vector<LoraProfile> out;
    for (const auto& p : doc.at("profiles")) out.push_back({p.at("profile_id").get<std::string>(), p.at("metadata")});
    return out;
}

nlohmann::ordered_json to_json(const std::vector<LoraProfile>& profiles) {
    auto arr = nlohmann::ordered_json::array();
    for (const auto& p : profiles) {
        nlohmann::ordered_json o;
        o["profile_id"] = p.profile_id;
        o["metadata"] = p.metadata;
        arr.push_back(std::move(o));
    }
    nlohmann::ordered_json doc;
    doc["profiles"] = std::move(arr);
    return doc;
}

std::vector<LoraProfile> load_lora_profiles(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path.string());
    return lora_profiles_from_json(nlohmann::ordered_json::parse(in));
}

std::string_view to_string(Role r) {
    switch (r) {
        case Role::router: return "router";
        case Role::api_gen: return "api_gen";
        case Role::web_answer: return "web_answer";
        case Role::kg_answer: return "kg_answer";
        case Role::judge: return "judge";
    }
    return "?";
}

GenerationClient* ClientSet::get(Role r) const {
    auto it = slots.find(r);
    return it == slots.end() ? nullptr : it->second.client.get();
}

bool ClientSet::concurrent() const {
    for (const auto& [role, slot] : slots)
        if (slot.client && !slot.client->concurrent()) return false;
    return true;
}

ClientSet ClientSet::uniform(std::shared_ptr<GenerationClient> client) {
    ClientSet cs;
    for (auto r : kRoles) cs.slots[r] = {client, std::nullopt};
    return cs;
}

ClientSet load_client_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open client config " + path.string());
    auto doc = nlohmann::json::parse(in);
    auto base = path.parent_path();

    ClientSet cs;
    if (doc.contains("lora_profiles")) cs.profiles = load_lora_profiles(base / doc["lora_profiles"].get<std::string>());
    std::set<std::string> known_profiles;
    for (const auto& p : cs.profiles) known_profiles.insert(p.profile_id);

    std::map<std::filesystem::path, std::shared_ptr<GenerationClient>> loaded;
    auto make_slot = [&](const nlohmann::json& spec) {
        ClientSet::Slot slot;
        auto script = base / spec.at("script").get<std::string>();
        auto& c = loaded[script];
        if (!c) c = std::make_shared<ScriptedClient>(ScriptedClient::from_file(script));
        slot.client = c;
        if (spec.contains("profile")) {
            auto id = spec["profile"].get<std::string>();
            if (!known_profiles.count(id)) throw std::runtime_error("unknown lora profile '" + id + "'");
            slot.profile = id;
        }
        return slot;
    };

    const auto& roles = doc.at("roles");
    for (const auto& [name, spec] : roles.items()) {
        if (name == "default") continue;
        bool ok = false;
        for (auto r : kRoles) ok = ok || to_string(r) == name;
        if (!ok) throw std::runtime_error("unknown role '" + name + "'");
    }
    for (auto r : kRoles) {
        auto name = std::string(to_string(r));
        if (roles.contains(name)) cs.slots[r] = make_slot(roles[name]);
        else if (roles.contains("default")) cs.slots[r] = make_slot(roles["default"]);
    }
    return cs;
}

}  // namespace crag::llm
