// SPDX-License-Identifier: Apache-2.0
#include <doctest.h>

#include <random>

#include "crag/common/text.hpp"
#include "crag/llm/client.hpp"
#include "crag/llm/context.hpp"
#include "crag/llm/judgement.hpp"
#include "crag/llm/profiles.hpp"
#include "crag/llm/templates.hpp"
#include "paths.hpp"

using namespace crag;
using namespace crag::llm;

namespace {

std::string replace_all(std::string s, const std::string& from, const std::string& to) {
    for (std::size_t p = s.find(from); p != std::string::npos; p = s.find(from, p + to.size())) s.replace(p, from.size(), to);
    return s;
}

const std::string kSystemLine =
    "You are a helpful and honest assistant. Please, respond concisely and truthfully in {token_limit} words or "
    "less. Now is {query_time}";
const std::string kPeriodLine =
    "Given the context information and using your prior knowledge, please provide your answer in concise style. "
    "End your answer with a period. Answer the question in one line only.";
const std::string kFalsePremiseLine =
    "If the question is based on false prepositions or assumptions, output \"invalid question\". For example, "
    "What's the name of Taylor Swift's rap album before she transitioned to pop? (Taylor Swift didn't release any "
    "rap album.)";
const std::string kYesNoLine =
    "Is the ground truth answer mentioned in the context information? Answer with yes or no.";

PromptInputs full_inputs() {
    PromptInputs in;
    in.query_time = "03/13/2024, 10:00:00 PT";
    in.context_str = "<doc>rain man is a 1988 film</doc>";
    in.query_str = "who directed rain man?";
    in.gt_str = "barry levinson";
    in.our_str = "barry levinson";
    in.icl_examples = "EXAMPLES";
    in.schema_info = "SCHEMA";
    in.api_rules = "RULES";
    return in;
}

std::string joined(const std::vector<Message>& ms) {
    std::string s;
    for (const auto& m : ms) s += m.content + "\n";
    return s;
}

std::size_t occurrences(const std::string& hay, const std::string& needle) {
    std::size_t n = 0;
    for (auto p = hay.find(needle); p != std::string::npos; p = hay.find(needle, p + 1)) ++n;
    return n;
}

struct Echo final : GenerationClient {
    std::string generate(const std::vector<Message>& m, const GenerationParams& p) override {
        return p.template_id + ":" + std::string(last_user_content(m)).substr(0, 10);
    }
};

}  // namespace

TEST_CASE("p_basic carries the honest-assistant system instruction") {
    auto ms = render_prompt(TemplateId::p_basic, full_inputs());
    REQUIRE(ms.size() == 2);
    CHECK(ms[0].role == "system");
    CHECK(ms[0].content.find("respond concisely and truthfully in 75 words or less") != std::string::npos);
    auto sys = replace_all(replace_all(kSystemLine, "{token_limit}", "75"), "{query_time}", *full_inputs().query_time);
    CHECK(ms[0].content == sys);
    CHECK(ms[1].content.find(kPeriodLine) != std::string::npos);
}

TEST_CASE("p_ctrl carries the false-premise instruction") {
    auto ms = render_prompt(TemplateId::p_ctrl, full_inputs());
    CHECK(joined(ms).find(kFalsePremiseLine) != std::string::npos);
}

TEST_CASE("p_context ends with the yes/no question") {
    auto ms = render_prompt(TemplateId::p_context, full_inputs());
    const auto& line = kYesNoLine;
    CHECK(ms.back().content.size() >= line.size());
    CHECK(ms.back().content.compare(ms.back().content.size() - line.size(), line.size(), line) == 0);
}

TEST_CASE("placeholder sets") {
    using V = std::vector<std::string_view>;
    auto sorted = [](V v) {
        std::sort(v.begin(), v.end());
        return v;
    };
    CHECK(sorted(placeholders(TemplateId::p_basic)) == sorted({"token_limit", "query_time", "context_str", "query_str"}));
    CHECK(sorted(placeholders(TemplateId::p_ctrl)) == sorted({"token_limit", "query_time", "context_str", "query_str"}));
    CHECK(sorted(placeholders(TemplateId::p_check_gt)) == sorted({"ICL_examples", "query_str", "gt_str", "our_str"}));
    CHECK(sorted(placeholders(TemplateId::p_context)) == sorted({"context_str", "query_str", "gt_str"}));
    CHECK(sorted(placeholders(TemplateId::p_api_gen)) ==
          sorted({"Schema_info", "API_rules", "ICL_examples", "query_str"}));
}

TEST_CASE("rendering leaves no placeholder and names the missing one") {
    for (auto id : {TemplateId::p_basic, TemplateId::p_ctrl, TemplateId::p_domain, TemplateId::p_entity,
                    TemplateId::p_api_gen, TemplateId::p_check_gt, TemplateId::p_context}) {
        auto text = joined(render_prompt(id, full_inputs()));
        for (auto ph : placeholders(id)) CHECK(text.find("{" + std::string(ph) + "}") == std::string::npos);
        for (auto ph : placeholders(id)) {
            if (ph == "token_limit") continue;
            auto in = full_inputs();
            if (ph == "query_time") in.query_time.reset();
            if (ph == "context_str") in.context_str.reset();
            if (ph == "query_str") in.query_str.reset();
            if (ph == "gt_str") in.gt_str.reset();
            if (ph == "our_str") in.our_str.reset();
            if (ph == "ICL_examples") in.icl_examples.reset();
            if (ph == "Schema_info") in.schema_info.reset();
            if (ph == "API_rules") in.api_rules.reset();
            try {
                render_prompt(id, in);
                FAIL("no error for " << ph);
            } catch (const RenderError& e) {
                CHECK(e.placeholder() == ph);
            }
        }
    }
    auto in = full_inputs();
    in.token_limit = 0;
    CHECK_THROWS_AS(render_prompt(TemplateId::p_basic, in), std::invalid_argument);
}

TEST_CASE("query_str appears exactly once and is not rescanned") {
    std::mt19937_64 rng(2);
    for (int i = 0; i < 200; ++i) {
        auto in = full_inputs();
        in.query_str = "Q" + std::to_string(rng()) + " {context_str} {query_str}";
        for (auto id : {TemplateId::p_basic, TemplateId::p_ctrl, TemplateId::p_domain, TemplateId::p_entity,
                        TemplateId::p_api_gen, TemplateId::p_check_gt, TemplateId::p_context})
            CHECK(occurrences(joined(render_prompt(id, in)), *in.query_str) == 1);
    }
}

TEST_CASE("api_gen and entity prompts use the shipped assets") {
    auto ms = render_prompt(TemplateId::p_api_gen, api_gen_inputs("movie", "who directed rain man?"));
    auto text = joined(ms);
    CHECK(text.find(load_prompt_asset("movie", "schema")) != std::string::npos);
    CHECK(text.find(load_prompt_asset("movie", "api_rules")) != std::string::npos);
    CHECK(text.find("Query:who directed rain man?") != std::string::npos);
    for (auto d : {"movie", "finance", "music"}) {
        auto e = joined(render_entity_prompt(d, full_inputs()));
        CHECK(e.find("&&") != std::string::npos);
    }
    CHECK_THROWS(load_prompt_asset("movie", "does_not_exist"));
}

TEST_CASE("count_tokens") {
    CHECK(count_tokens("") == 0);
    CHECK(count_tokens("rain man") == 2);
    CHECK(count_tokens("<doc>") == 3);
    CHECK(count_tokens("don't") == 3);
    CHECK(count_tokens("caf\xc3\xa9 ok") == 2);
    auto golden = testing::read_file(testing::data_path("pages/rain_man.txt"));
    auto frozen = std::stoul(testing::read_file(testing::data_path("pages/rain_man.tokens")));
    CHECK(count_tokens(golden) == frozen);
}

TEST_CASE("truncate_to_tokens") {
    CHECK(truncate_to_tokens("a b c d", 2) == "a b");
    CHECK(truncate_to_tokens("a b", 5) == "a b");
    CHECK(truncate_to_tokens("a, b", 2) == "a,");
    CHECK(truncate_to_tokens("", 3) == "");
    std::mt19937_64 rng(4);
    for (int i = 0; i < 300; ++i) {
        std::string s;
        for (int j = rng() % 40; j > 0; --j) s += std::string(1 + rng() % 4, "ab.,"[rng() % 4]) + " ";
        std::size_t lim = rng() % 20;
        auto t = truncate_to_tokens(s, lim);
        CHECK(count_tokens(t) <= lim);
        if (count_tokens(s) <= lim) CHECK(t == text::trim(s));
        CHECK(s.compare(0, t.size(), t) == 0);
    }
}

TEST_CASE("build_context small cases") {
    std::vector<std::string> pub{"paragraph one"};
    std::vector<web::ScoredChunk> web{{"low", 0.1}, {"high", 0.9}};
    CHECK(build_context(pub, web) == "<doc>paragraph one</doc>\n<doc>high</doc>\n<doc>low</doc>");
    CHECK(build_context({}, {}) == "");
    std::vector<std::string> two{"first", "second"};
    CHECK(build_context(two, {}) == "<doc>first</doc>\n<doc>second</doc>");
    CHECK(count_doc_tags(build_context(two, {})) == 2);
}

TEST_CASE("build_context respects the cap") {
    std::vector<std::string> big;
    for (int i = 0; i < 30; ++i) {
        std::string seg;
        for (int w = 0; w < 200; ++w) seg += "w" + std::to_string(i) + " ";
        big.push_back(seg);
    }
    auto ctx = build_context(big, {});
    CHECK(count_tokens(ctx) <= kMaxContextTokens);
    CHECK(count_doc_tags(ctx) < big.size());
    CHECK(ctx.rfind("<doc>", 0) == 0);
    CHECK(build_context(big, {}, 10).size() < 100);
}

TEST_CASE("parse_judgement") {
    CHECK(parse_judgement(R"({"Accuracy": "True"})"));
    CHECK(parse_judgement(R"({"accuracy": true})"));
    CHECK(parse_judgement(R"(sure: {"ACCURACY": "true"} done)"));
    CHECK_FALSE(parse_judgement("garbage"));
    CHECK_FALSE(parse_judgement(R"(text before {"Accuracy":"False"} after)"));
    CHECK_FALSE(parse_judgement(R"({"Accuracy": "False"} {"Accuracy": "True"})"));
    CHECK_FALSE(parse_judgement(R"({"Other": "True"})"));
    CHECK_FALSE(parse_judgement(""));
    CHECK(parse_yes_no("Yes, it is."));
    CHECK(parse_yes_no("  yes"));
    CHECK_FALSE(parse_yes_no("no"));
    CHECK_FALSE(parse_yes_no("yesterday"));
}

TEST_CASE("scripted client") {
    auto c = ScriptedClient::from_jsonl(
        "{\"match\": \"rain man\", \"reply\": \"barry levinson.\"}\n"
        "{\"match\": \"boom\", \"reply\": \"\", \"error\": true}\n"
        "{\"match\": \"only\", \"reply\": \"domain\", \"template\": \"p_domain\"}\n");
    std::vector<Message> ms{{"system", "s"}, {"user", "who directed rain man?"}};
    CHECK(c.generate(ms, {"p_basic"}) == "barry levinson.");
    CHECK(c.generate({{"user", "unknown query"}}, {}) == "i don't know");
    CHECK_THROWS_AS(c.generate({{"user", "boom"}}, {}), GenerationError);
    CHECK(c.generate({{"user", "only"}}, {"p_basic"}) == "i don't know");
    CHECK(c.generate({{"user", "only"}}, {"p_domain"}) == "domain");
    CHECK(last_user_content({}) == "");
}

TEST_CASE("batch_generate equals generate") {
    auto scripted = ScriptedClient::from_file(testing::data_path("llm/router.jsonl"));
    Echo echo;
    std::vector<GenerationRequest> reqs;
    for (const auto& e : scripted.entries())
        reqs.push_back({{{"user", e.match}}, {e.template_id.value_or("p_basic")}});
    reqs.push_back({{{"user", "nothing matches"}}, {"p_domain"}});
    for (GenerationClient* c : {static_cast<GenerationClient*>(&scripted), static_cast<GenerationClient*>(&echo)}) {
        auto out = c->batch_generate(reqs);
        REQUIRE(out.size() == reqs.size());
        for (std::size_t i = 0; i < reqs.size(); ++i) CHECK(out[i] == c->generate(reqs[i].messages, reqs[i].params));
    }
}

TEST_CASE("lora profiles keep the fine-tuning hyperparameters verbatim") {
    auto path = testing::data_path("../config/lora_profiles.json");
    auto profiles = load_lora_profiles(path);
    REQUIRE(profiles.size() == 2);
    const auto& m = profiles[0].metadata;
    CHECK(m["LoRA_alpha"] == 16);
    CHECK(m["LoRA_dropout"] == 0.1);
    CHECK(m["LoRA_r"] == 8);
    CHECK(m["bias"] == "none");
    CHECK(m["4-bit"] == true);
    CHECK(m["per_device_train_batch_size"] == 1);
    CHECK(m["gradient_accumulation_steps"] == 4);
    CHECK(m["optim"] == "adamw_hf");
    CHECK(m["learning_rate"] == 2e-4);
    CHECK(m["max_grad_norm"] == 0.3);
    CHECK(m["scheduler"] == "cosine");
    CHECK(m["target_modules"].size() == 6);
    auto doc = nlohmann::ordered_json::parse(testing::read_file(path));
    CHECK(to_json(profiles) == doc);
    CHECK(lora_profiles_from_json(to_json(profiles)) == profiles);
}

TEST_CASE("client config wires roles to profiles") {
    auto set = load_client_config(testing::data_path("llm/batch_clients.json"));
    for (auto r : kRoles) CHECK(set.get(r) != nullptr);
    CHECK(set.slots.at(Role::api_gen).profile == "api_gen");
    CHECK(set.slots.at(Role::web_answer).profile == "answer");
    CHECK(set.concurrent());
    CHECK(set.profiles.size() == 2);
    CHECK(ClientSet{}.get(Role::judge) == nullptr);
}
