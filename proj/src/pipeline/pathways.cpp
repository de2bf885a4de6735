// SPDX-License-Identifier: Apache-2.0
#include "crag/pipeline/pathways.hpp"

#include "crag/common/text.hpp"
#include "crag/kgql/exec.hpp"
#include "crag/kgql/parser.hpp"
#include "crag/llm/templates.hpp"
#include "crag/public_data/routing.hpp"
#include "crag/web/html.hpp"

namespace crag::pipeline {
namespace {

llm::GenerationClient& client_for(const PipelineDeps& deps, llm::Role role) {
    auto* c = deps.clients.get(role);
    if (!c) throw std::runtime_error("no client configured for role " + std::string(llm::to_string(role)));
    return *c;
}

std::string answer_with_context(const QueryCase& c, const PipelineDeps& deps, llm::Role role,
                                const std::string& context) {
    llm::PromptInputs in;
    in.token_limit = deps.token_limit;
    in.query_time = c.query_time;
    in.context_str = context;
    in.query_str = c.query;
    auto reply = client_for(deps, role).generate(llm::render_prompt(llm::TemplateId::p_basic, in), {"p_basic"});
    return llm::truncate_to_tokens(reply, static_cast<std::size_t>(deps.token_limit));
}

}  // namespace

QueryCase case_from_json(const nlohmann::json& j) {
    QueryCase c;
    c.query = j.at("query").get<std::string>();
    c.query_time = j.value("query_time", std::string{});
    c.task = j.value("task", 1);
    if (c.task < 1 || c.task > 3) throw std::runtime_error("task must be 1, 2 or 3");
    if (j.contains("ground_truth") && !j["ground_truth"].is_null())
        c.ground_truth = j["ground_truth"].get<std::string>();
    if (j.contains("domain") && !j["domain"].is_null()) c.domain = j["domain"].get<std::string>();
    if (j.contains("pages"))
        for (const auto& p : j["pages"]) c.pages.push_back(web::page_from_json(p));
    if (c.task != 3 && c.pages.size() > 5)
        throw std::runtime_error("task " + std::to_string(c.task) + " allows at most 5 pages");
    return c;
}

WebAnswer answer_web_pathway(const QueryCase& c, const PipelineDeps& deps, const Deadline& deadline,
                             public_data::Domain domain) {
    WebAnswer out;
    out.trace.pages_in = c.pages.size();
    try {
        deadline.check();
        std::vector<web::WebPage> pages = c.pages;
        if (c.task == 3) {
            auto pre = web::preselect_pages(c.query, c.pages, *deps.reranker, deps.preselect_pages);
            out.trace.degraded = out.trace.degraded || pre.degraded;
            pages = std::move(pre.pages);
        }
        out.trace.pages_chunked = pages.size();

        std::vector<web::ChunkPair> chunks;
        for (const auto& p : pages) {
            auto text = p.html.empty() ? p.snippet : web::extract_text(p.html);
            auto cs = web::split_parent_child(text, deps.retrieval, p.page_id);
            chunks.insert(chunks.end(), std::make_move_iterator(cs.begin()), std::make_move_iterator(cs.end()));
        }
        out.trace.chunks = chunks.size();
        deadline.check();

        std::vector<std::string> parents;
        try {
            for (auto& rp : web::retrieve_children(c.query, chunks, *deps.embedder, deps.retrieval.recall_k))
                parents.push_back(std::move(rp.text));
        } catch (const web::RetrievalError&) {
            out.trace.degraded = true;
        }
        out.trace.parents_retrieved = parents.size();
        auto reranked = web::rerank(c.query, parents, *deps.reranker, deps.retrieval.reranker_k);
        out.trace.degraded = out.trace.degraded || reranked.degraded;
        out.trace.parents_reranked = reranked.chunks.size();
        deadline.check();

        std::vector<std::string> paragraphs;
        if (c.task == 1 && deps.index && public_data::has_index(domain)) {
            bool degraded = false;
            auto entities = public_data::extract_entities(c.query, domain, client_for(deps, llm::Role::router),
                                                          &degraded);
            out.trace.degraded = out.trace.degraded || degraded;
            paragraphs = public_data::lookup_paragraphs(entities, *deps.index, domain,
                                                        public_data::default_policy(domain));
        }
        out.trace.public_paragraphs = paragraphs.size();

        out.context = llm::build_context(paragraphs, reranked.chunks, deps.max_context_tokens);
        out.trace.context_tokens = llm::count_tokens(out.context);
        out.trace.context_docs = llm::count_doc_tags(out.context);
        deadline.check();

        out.answer = answer_with_context(c, deps, llm::Role::web_answer, out.context);
        if (text::trim(out.answer).empty()) out.answer = std::string(text::kIdk);
    } catch (const DeadlineExceeded&) {
        throw;
    } catch (const std::exception&) {
        out.trace.degraded = true;
        out.answer = std::string(text::kIdk);
    }
    return out;
}

KgAnswer answer_kg_pathway(const QueryCase& c, const PipelineDeps& deps, const Deadline& deadline,
                           public_data::Domain domain) {
    KgAnswer out;
    out.answer = std::string(text::kIdk);
    if (!deps.db || domain != public_data::Domain::movie) return out;
    try {
        deadline.check();
        auto prompt = llm::render_prompt(llm::TemplateId::p_api_gen, llm::api_gen_inputs("movie", c.query));
        out.program = client_for(deps, llm::Role::api_gen).generate(prompt, {"p_api_gen"});
        auto program = kgql::parse_program(out.program);
        auto results = kgql::execute_program(program, *deps.db);
        bool any = false;
        for (const auto& r : results) any = any || (!r.consumed && !r.empty());
        if (!any) return out;
        out.kg_text = kgql::to_natural_language(results, program);
        deadline.check();
        auto answer = answer_with_context(c, deps, llm::Role::kg_answer, out.kg_text);
        if (!text::trim(answer).empty()) out.answer = std::move(answer);
    } catch (const DeadlineExceeded&) {
        throw;
    } catch (const std::exception&) {
        out.answer = std::string(text::kIdk);
    }
    return out;
}

}  // namespace crag::pipeline
