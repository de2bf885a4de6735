// SPDX-License-Identifier: Apache-2.0
#include "crag/sft/labeler.hpp"

#include <fstream>

#include "crag/common/text.hpp"
#include "crag/llm/judgement.hpp"
#include "crag/llm/templates.hpp"

namespace crag::sft {
namespace {

void write_atomically(const std::filesystem::path& path, std::string_view body) {
    auto tmp = path;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw std::runtime_error("cannot write " + tmp.string());
        out.write(body.data(), static_cast<std::streamsize>(body.size()));
        out.flush();
        if (!out) {
            out.close();
            std::filesystem::remove(tmp);
            throw std::runtime_error("write failed for " + tmp.string());
        }
    }
    std::filesystem::rename(tmp, path);
}

}  // namespace

TrainExample example_from_json(const nlohmann::json& j) {
    TrainExample e;
    e.query_str = j.at("query_str").get<std::string>();
    e.query_time = j.value("query_time", std::string{});
    e.ground_truth = j.at("ground_truth").get<std::string>();
    e.rag_prediction = j.value("rag_prediction", std::string{});
    e.context_str = j.value("context_str", std::string{});
    if (text::trim(e.ground_truth).empty()) throw std::runtime_error("ground_truth is empty");
    return e;
}

std::vector<TrainExample> load_examples(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open examples " + path.string());
    std::vector<TrainExample> out;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (text::trim(line).empty()) continue;
        try {
            out.push_back(example_from_json(nlohmann::json::parse(line)));
        } catch (const std::exception& e) {
            throw std::runtime_error(path.string() + ":" + std::to_string(lineno) + ": " + e.what());
        }
    }
    return out;
}

std::string_view to_string(Branch b) {
    switch (b) {
        case Branch::invalid: return "invalid";
        case Branch::correct: return "correct";
        case Branch::idk: return "idk";
        case Branch::context_supported: return "context_supported";
    }
    return "?";
}

SftLabel label_query(const TrainExample& example, llm::GenerationClient& judge) {
    SftLabel out{example.query_str, {}, Branch::idk, false};
    if (text::is_invalid_question(example.ground_truth)) {
        out.label = std::string(text::kInvalidQuestion);
        out.branch = Branch::invalid;
        return out;
    }
    try {
        auto check = llm::render_prompt(
            llm::TemplateId::p_check_gt,
            llm::check_gt_inputs(example.query_str, example.ground_truth, example.rag_prediction));
        if (llm::parse_judgement(judge.generate(check, {"p_check_gt"}))) {
            out.label = example.ground_truth;
            out.branch = Branch::correct;
            return out;
        }
        llm::PromptInputs in;
        in.context_str = example.context_str;
        in.query_str = example.query_str;
        in.gt_str = example.ground_truth;
        if (llm::parse_yes_no(judge.generate(llm::render_prompt(llm::TemplateId::p_context, in), {"p_context"}))) {
            out.label = example.ground_truth;
            out.branch = Branch::context_supported;
            return out;
        }
    } catch (const llm::GenerationError&) {
        out.judge_failed = true;
    }
    out.label = std::string(text::kIdk);
    out.branch = Branch::idk;
    return out;
}

nlohmann::ordered_json to_json(const SftStats& s) {
    nlohmann::ordered_json j;
    j["invalid"] = s.invalid;
    j["correct"] = s.correct;
    j["idk"] = s.idk;
    j["context_supported"] = s.context_supported;
    j["judge_failures"] = s.judge_failures;
    return j;
}

nlohmann::ordered_json sft_record(const TrainExample& example, const SftLabel& label) {
    llm::PromptInputs in;
    in.query_time = example.query_time;
    in.context_str = example.context_str;
    in.query_str = example.query_str;
    auto prompt = nlohmann::ordered_json::array();
    for (const auto& m : llm::render_prompt(llm::TemplateId::p_basic, in)) {
        nlohmann::ordered_json msg;
        msg["role"] = m.role;
        msg["content"] = m.content;
        prompt.push_back(std::move(msg));
    }
    nlohmann::ordered_json rec;
    rec["prompt"] = std::move(prompt);
    rec["completion"] = label.label;
    if (label.judge_failed) rec["judge_failed"] = true;
    return rec;
}

SftDataset label_dataset(std::span<const TrainExample> examples, llm::GenerationClient& judge) {
    SftDataset ds;
    for (const auto& ex : examples) {
        auto label = label_query(ex, judge);
        switch (label.branch) {
            case Branch::invalid: ++ds.stats.invalid; break;
            case Branch::correct: ++ds.stats.correct; break;
            case Branch::idk: ++ds.stats.idk; break;
            case Branch::context_supported: ++ds.stats.context_supported; break;
        }
        if (label.judge_failed) ++ds.stats.judge_failures;
        ds.jsonl += sft_record(ex, label).dump();
        ds.jsonl += '\n';
        ds.labels.push_back(std::move(label));
    }
    return ds;
}

std::filesystem::path stats_path(const std::filesystem::path& out) {
    auto p = out;
    p += ".stats.json";
    return p;
}

SftStats build_sft_dataset(std::span<const TrainExample> examples, llm::GenerationClient& judge,
                           const std::filesystem::path& out) {
    auto ds = label_dataset(examples, judge);
    write_atomically(out, ds.jsonl);
    write_atomically(stats_path(out), to_json(ds.stats).dump(2) + "\n");
    return ds.stats;
}

}  // namespace crag::sft
