// SPDX-License-Identifier: Apache-2.0
#include "crag/llm/templates.hpp"

#include <array>
#include <cstdlib>
#include <fstream>
#include <map>
#include <sstream>
#include <utility>

namespace crag::llm {
namespace {

constexpr std::string_view kHonestSystem =
    "You are a helpful and honest assistant. Please, respond concisely and truthfully in {token_limit} words or "
    "less. Now is {query_time}";

constexpr std::string_view kBasicUser =
    "Context information is below.\n"
    "{context_str}\n"
    "Given the context information and using your prior knowledge, please provide your answer in concise style. "
    "End your answer with a period. Answer the question in one line only.\n"
    "Question: {query_str}\n"
    "Answer:";

constexpr std::string_view kCtrlUser =
    "Context information is below.\n"
    "{context_str}\n"
    "Given the context information and using your prior knowledge, please provide your answer in concise style. "
    "Answer the question in one line only. \n"
    "If the question is based on false prepositions or assumptions, output \"invalid question\". For example, "
    "What's the name of Taylor Swift's rap album before she transitioned to pop? (Taylor Swift didn't release any "
    "rap album.)\n"
    "If you are not sure about the question, output \"i don't know\"\n"
    "Question: {query_str}\n"
    "Answer:";

constexpr std::string_view kDomainSystem = "You are an assistant expert in movie, sports, finance and music fields.";

constexpr std::string_view kDomainUser =
    "Please judge which category the query belongs to, without answering the query. You can only and must output "
    "one word in (movie, sports, finance, music). If the question doesn't belong to movie, sports, finance, music, "
    "please answer other. \n"
    "Question: {query_str}\n"
    "Answer:";

constexpr std::string_view kEntitySystem =
    "You are a helpful and honest assistant. Please, respond concisely and truthfully in {token_limit} words or "
    "less. If you are not sure about the query, answer I don't know. There is no need to explain the reasoning "
    "behind your answers. ";

constexpr std::string_view kMovieEntityUser =
    "Given a query about movies, return the title of each movie in below formats.  \n"
    "If multiple movie names are involved, connect with '&&'.\n"
    "#Examples:\n"
    "Question:  which movie was created first, a walk to remember or the notebook?\n"
    "Answer:    a walk to remember && the notebook\n"
    "#Query:\n"
    "Question: {query_str}\n"
    "Answer:";

constexpr std::string_view kFinanceEntityUser =
    "Given a query about finance, return the ticker symbol or company name of each stock in below formats.  \n"
    "If multiple stocks are involved, connect with '&&'.\n"
    "#Examples:\n"
    "Question:  which has the higher pe ratio, aapl or msft?\n"
    "Answer:    aapl && msft\n"
    "#Query:\n"
    "Question: {query_str}\n"
    "Answer:";

constexpr std::string_view kMusicEntityUser =
    "Given a query about music, return the name of each artist, album or song in below formats.  \n"
    "If multiple names are involved, connect with '&&'.\n"
    "#Examples:\n"
    "Question:  who has won more grammys, adele or billie eilish?\n"
    "Answer:    adele && billie eilish\n"
    "#Query:\n"
    "Question: {query_str}\n"
    "Answer:";

constexpr std::string_view kApiGenUser =
    "You are given a query about movies, and several APIs to get information from a database How to collect useful "
    "information from the database using the given APIs.\n"
    "The schema of entities is as follows:\n"
    "{Schema_info}\n"
    "The API rules are below:\n"
    "{API_rules}\n"
    "Here are some examples:\n"
    "{ICL_examples}\n"
    "Generate the answer only using the information from the query. Please strictly follow the format in the "
    "examples and APIs, you do not have to provide the code, only the use of API in the examples. The only allowed "
    "format is multiple lines of get_X,sort. (sort is optional) Please complete the answer only:\n"
    "Query:{query_str}\n"
    "Answer:\n";

constexpr std::string_view kCheckGtUser =
    "# Task: \n"
    "You are given a Question, a model Prediction, and a list of Ground Truth answers, judge whether the model "
    "Prediction matches any answer from the list of Ground Truth answers. Follow the instructions step by step to "
    "make a judgement.\n"
    "1. If the model prediction matches any provided answers from the Ground Truth Answer list, \"Accuracy\" should "
    "be \"True\"; otherwise, \"Accuracy\" should be \"False\".\n"
    "2. If the model prediction says that it couldn't answer the question or it doesn't have enough information, "
    "\"Accuracy\" should always be \"False\".\n"
    "3. If the Ground Truth is \"invalid question\", \"Accuracy\" is \"True\" only if the model prediction is "
    "exactly \"invalid question\".\n"
    "# Output:\n"
    "Respond with only a single JSON string with an \"Accuracy\" field which is \"True\" or \"False\".\n"
    "# Examples:\n"
    "{ICL_examples}\n"
    "# Query:\n"
    "Question: {query_str}\n"
    "Ground truth: {gt_str}\n"
    "Prediction: {our_str}\n"
    "Accuracy:";

constexpr std::string_view kContextUser =
    "We have the following context information:\n"
    "{context_str}\n"
    "We have a question:  {query_str}\n"
    "The ground truth answer is: {gt_str}\n"
    "Is the ground truth answer mentioned in the context information? Answer with yes or no.";

constexpr std::array<std::pair<TemplateId, std::string_view>, 7> kNames = {{
    {TemplateId::p_basic, "p_basic"},
    {TemplateId::p_ctrl, "p_ctrl"},
    {TemplateId::p_domain, "p_domain"},
    {TemplateId::p_entity, "p_entity"},
    {TemplateId::p_api_gen, "p_api_gen"},
    {TemplateId::p_check_gt, "p_check_gt"},
    {TemplateId::p_context, "p_context"},
}};

std::vector<Message> raw(TemplateId id) {
    switch (id) {
        case TemplateId::p_basic: return {{"system", std::string(kHonestSystem)}, {"user", std::string(kBasicUser)}};
        case TemplateId::p_ctrl: return {{"system", std::string(kHonestSystem)}, {"user", std::string(kCtrlUser)}};
        case TemplateId::p_domain: return {{"system", std::string(kDomainSystem)}, {"user", std::string(kDomainUser)}};
        case TemplateId::p_entity:
            return {{"system", std::string(kEntitySystem)}, {"user", std::string(kMovieEntityUser)}};
        case TemplateId::p_api_gen: return {{"user", std::string(kApiGenUser)}};
        case TemplateId::p_check_gt: return {{"user", std::string(kCheckGtUser)}};
        case TemplateId::p_context: return {{"user", std::string(kContextUser)}};
    }
    throw std::logic_error("unknown template");
}

std::map<std::string, std::string, std::less<>> bindings(const PromptInputs& in) {
    std::map<std::string, std::string, std::less<>> m;
    m["token_limit"] = std::to_string(in.token_limit);
    auto put = [&](const char* name, const std::optional<std::string>& v) {
        if (v) m[name] = *v;
    };
    put("query_time", in.query_time);
    put("context_str", in.context_str);
    put("query_str", in.query_str);
    put("gt_str", in.gt_str);
    put("our_str", in.our_str);
    put("ICL_examples", in.icl_examples);
    put("Schema_info", in.schema_info);
    put("API_rules", in.api_rules);
    return m;
}

bool is_placeholder_name(std::string_view name) {
    static constexpr std::string_view kAll[] = {"token_limit", "query_time", "context_str",  "query_str", "gt_str",
                                                "our_str",     "ICL_examples", "Schema_info", "API_rules"};
    for (auto n : kAll)
        if (n == name) return true;
    return false;
}

template <typename F>
void scan(std::string_view tmpl, F&& on_placeholder, std::string* out) {
    std::size_t i = 0;
    while (i < tmpl.size()) {
        if (tmpl[i] == '{') {
            auto close = tmpl.find('}', i + 1);
            if (close != std::string_view::npos) {
                auto name = tmpl.substr(i + 1, close - i - 1);
                if (is_placeholder_name(name)) {
                    on_placeholder(name, out);
                    i = close + 1;
                    continue;
                }
            }
        }
        if (out) out->push_back(tmpl[i]);
        ++i;
    }
}

std::vector<Message> substitute(std::vector<Message> msgs, const PromptInputs& inputs) {
    if (inputs.token_limit <= 0) throw std::invalid_argument("token_limit must be positive");
    auto b = bindings(inputs);
    for (auto& m : msgs) {
        std::string out;
        scan(
            m.content,
            [&](std::string_view name, std::string* o) {
                auto it = b.find(name);
                if (it == b.end()) throw RenderError(std::string(name));
                o->append(it->second);
            },
            &out);
        m.content = std::move(out);
    }
    return msgs;
}

}  // namespace

std::string_view to_string(TemplateId id) {
    for (const auto& [k, v] : kNames)
        if (k == id) return v;
    return "?";
}

std::optional<TemplateId> parse_template_id(std::string_view s) {
    for (const auto& [k, v] : kNames)
        if (v == s) return k;
    return std::nullopt;
}

std::vector<Message> template_messages(TemplateId id) { return raw(id); }

std::vector<std::string_view> placeholders(TemplateId id) {
    std::vector<std::string_view> names;
    static const auto kTemplates = [] {
        std::array<std::vector<Message>, 7> t;
        for (const auto& [k, v] : kNames) t[static_cast<std::size_t>(k)] = raw(k);
        return t;
    }();
    for (const auto& m : kTemplates[static_cast<std::size_t>(id)]) {
        scan(
            m.content,
            [&](std::string_view name, std::string*) {
                for (auto n : names)
                    if (n == name) return;
                names.push_back(name);
            },
            nullptr);
    }
    return names;
}

std::vector<Message> render_prompt(TemplateId id, const PromptInputs& inputs) { return substitute(raw(id), inputs); }

std::vector<Message> render_entity_prompt(std::string_view domain, const PromptInputs& inputs) {
    std::string_view user;
    if (domain == "movie") user = kMovieEntityUser;
    else if (domain == "finance") user = kFinanceEntityUser;
    else if (domain == "music") user = kMusicEntityUser;
    else throw std::invalid_argument("no entity prompt for domain '" + std::string(domain) + "'");
    return substitute({{"system", std::string(kEntitySystem)}, {"user", std::string(user)}}, inputs);
}

std::filesystem::path asset_dir() {
    if (const char* env = std::getenv("CRAG_ASSET_DIR"); env && *env) return env;
    return CRAG_ASSET_DIR;
}

std::string load_prompt_asset(std::string_view domain, std::string_view name) {
    auto path = asset_dir() / "prompts" / std::string(domain) / (std::string(name) + ".txt");
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open prompt asset " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    std::string s = ss.str();
    while (!s.empty() && (s.back() == '\n' || s.back() == '\r')) s.pop_back();
    return s;
}

PromptInputs api_gen_inputs(std::string_view domain, std::string query_str) {
    PromptInputs in;
    in.schema_info = load_prompt_asset(domain, "schema");
    in.api_rules = load_prompt_asset(domain, "api_rules");
    in.icl_examples = load_prompt_asset(domain, "icl_examples");
    in.query_str = std::move(query_str);
    return in;
}

PromptInputs check_gt_inputs(std::string query_str, std::string gt_str, std::string our_str) {
    PromptInputs in;
    in.icl_examples = load_prompt_asset("common", "check_gt_examples");
    in.query_str = std::move(query_str);
    in.gt_str = std::move(gt_str);
    in.our_str = std::move(our_str);
    return in;
}

}  // namespace crag::llm
