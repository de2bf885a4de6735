// SPDX-License-Identifier: Apache-2.0
#include "crag/pipeline/batch.hpp"

#include <atomic>
#include <fstream>
#include <map>
#include <thread>

#include "crag/common/text.hpp"
#include "crag/public_data/routing.hpp"

namespace crag::pipeline {
namespace {

nlohmann::ordered_json opt(const std::optional<std::string>& s) {
    return s ? nlohmann::ordered_json(*s) : nlohmann::ordered_json(nullptr);
}

nlohmann::ordered_json mean_or_null(long total, std::size_t n) {
    if (n == 0) return nullptr;
    return static_cast<double>(total) / static_cast<double>(n);
}

}  // namespace

nlohmann::ordered_json to_json(const AnswerRecord& r, bool timings) {
    nlohmann::ordered_json j;
    j["query"] = r.query;
    j["task"] = r.task;
    j["domain"] = opt(r.domain);
    j["routed_domain"] = r.routed_domain;
    j["kg_answer"] = opt(r.kg_answer);
    j["web_answer"] = r.web_answer;
    j["final"] = r.final_answer;
    j["pathway_used"] = to_string(r.pathway);
    j["score"] = r.score ? nlohmann::ordered_json(*r.score) : nlohmann::ordered_json(nullptr);
    j["timed_out"] = r.timed_out;
    if (timings) j["elapsed_ms"] = r.elapsed_ms;
    return j;
}

AnswerRecord record_from_json(const nlohmann::json& j) {
    AnswerRecord r;
    r.query = j.at("query").get<std::string>();
    r.task = j.value("task", 1);
    if (j.contains("domain") && !j["domain"].is_null()) r.domain = j["domain"].get<std::string>();
    r.routed_domain = j.value("routed_domain", std::string{});
    if (j.contains("kg_answer") && !j["kg_answer"].is_null()) r.kg_answer = j["kg_answer"].get<std::string>();
    r.web_answer = j.value("web_answer", std::string{});
    r.final_answer = j.at("final").get<std::string>();
    r.pathway = j.value("pathway_used", std::string("web")) == "kg" ? Pathway::kg : Pathway::web;
    if (j.contains("score") && !j["score"].is_null()) r.score = j["score"].get<int>();
    r.timed_out = j.value("timed_out", false);
    r.elapsed_ms = j.value("elapsed_ms", 0.0);
    return r;
}

std::vector<QueryCase> load_cases(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open case file " + path.string());
    std::vector<QueryCase> out;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (text::trim(line).empty()) continue;
        try {
            out.push_back(case_from_json(nlohmann::json::parse(line)));
        } catch (const std::exception& e) {
            throw std::runtime_error(path.string() + ":" + std::to_string(lineno) + ": " + e.what());
        }
    }
    return out;
}

AnswerRecord answer_case(const QueryCase& input, const PipelineDeps& deps, const BatchConfig& config) {
    auto start = Deadline::Clock::now();
    QueryCase c = input;
    if (config.task_override) c.task = *config.task_override;
    Deadline deadline(std::chrono::duration<double>(config.deadline_secs));

    AnswerRecord r;
    r.query = c.query;
    r.task = c.task;
    r.domain = c.domain;
    r.web_answer = std::string(text::kIdk);
    try {
        deadline.check();
        auto domain = public_data::Domain::other;
        if (auto* router = deps.clients.get(llm::Role::router)) domain = public_data::classify_domain(c.query, *router);
        r.routed_domain = std::string(public_data::to_string(domain));
        if (c.task != 1) r.kg_answer = answer_kg_pathway(c, deps, deadline, domain).answer;
        r.web_answer = answer_web_pathway(c, deps, deadline, domain).answer;
    } catch (const DeadlineExceeded&) {
        r.timed_out = true;
        r.kg_answer.reset();
        r.web_answer = std::string(text::kIdk);
    }
    auto arb = arbitrate(r.kg_answer, r.web_answer);
    r.final_answer = arb.final_answer;
    r.pathway = arb.pathway;
    if (c.ground_truth) {
        auto* judge = config.judge_scoring ? deps.clients.get(llm::Role::judge) : nullptr;
        r.score = score_answer(r.final_answer, *c.ground_truth, judge, c.query);
    }
    r.elapsed_ms = std::chrono::duration<double, std::milli>(Deadline::Clock::now() - start).count();
    return r;
}

std::vector<AnswerRecord> run_batch(std::span<const QueryCase> cases, const PipelineDeps& deps,
                                    const BatchConfig& config) {
    std::vector<AnswerRecord> out(cases.size());
    std::size_t workers = deps.clients.concurrent() ? std::max<std::size_t>(1, config.parallelism) : 1;
    workers = std::min(workers, std::max<std::size_t>(1, cases.size()));
    if (workers == 1) {
        for (std::size_t i = 0; i < cases.size(); ++i) out[i] = answer_case(cases[i], deps, config);
        return out;
    }
    std::atomic<std::size_t> next{0};
    std::vector<std::jthread> pool;
    for (std::size_t w = 0; w < workers; ++w)
        pool.emplace_back([&] {
            for (std::size_t i = next++; i < cases.size(); i = next++) out[i] = answer_case(cases[i], deps, config);
        });
    pool.clear();
    return out;
}

nlohmann::ordered_json summarize(std::span<const AnswerRecord> records) {
    struct Tally {
        std::size_t cases = 0, scored = 0;
        long total = 0;
    };
    Tally all;
    std::size_t kg = 0, web = 0, timeouts = 0;
    std::map<std::string, Tally> domains;
    for (const auto& r : records) {
        ++all.cases;
        (r.pathway == Pathway::kg ? kg : web)++;
        if (r.timed_out) ++timeouts;
        Tally* d = r.domain ? &domains[*r.domain] : nullptr;
        if (d) ++d->cases;
        if (r.score) {
            ++all.scored;
            all.total += *r.score;
            if (d) {
                ++d->scored;
                d->total += *r.score;
            }
        }
    }
    nlohmann::ordered_json j;
    j["cases"] = all.cases;
    j["scored"] = all.scored;
    j["total_score"] = all.total;
    j["mean_score"] = mean_or_null(all.total, all.scored);
    j["pathways"] = {{"kg", kg}, {"web", web}};
    j["timeouts"] = timeouts;
    if (!domains.empty()) {
        nlohmann::ordered_json dj;
        for (const auto& [name, t] : domains) {
            nlohmann::ordered_json e;
            e["cases"] = t.cases;
            e["scored"] = t.scored;
            e["total_score"] = t.total;
            e["mean_score"] = mean_or_null(t.total, t.scored);
            dj[name] = std::move(e);
        }
        j["domains"] = std::move(dj);
    }
    return j;
}

std::string results_jsonl(std::span<const AnswerRecord> records, bool timings) {
    std::string s;
    for (const auto& r : records) {
        s += to_json(r, timings).dump();
        s += '\n';
    }
    return s;
}

std::vector<AnswerRecord> load_results(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open results " + path.string());
    std::vector<AnswerRecord> out;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (text::trim(line).empty()) continue;
        try {
            out.push_back(record_from_json(nlohmann::json::parse(line)));
        } catch (const std::exception& e) {
            throw std::runtime_error(path.string() + ":" + std::to_string(lineno) + ": " + e.what());
        }
    }
    return out;
}

}  // namespace crag::pipeline
