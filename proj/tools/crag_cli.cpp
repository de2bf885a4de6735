// SPDX-License-Identifier: Apache-2.0
#include <CLI11.hpp>

#include <fstream>
#include <iostream>

#include "crag/kg/service.hpp"
#include "crag/kgql/exec.hpp"
#include "crag/kgql/parser.hpp"
#include "crag/pipeline/batch.hpp"
#include "crag/public_data/ingest.hpp"
#include "crag/sft/labeler.hpp"
#include "crag/web/html.hpp"

using namespace crag;

namespace {

std::pair<std::string, int> split_listen(const std::string& listen) {
    auto colon = listen.rfind(':');
    if (colon == std::string::npos) return {"127.0.0.1", std::stoi(listen)};
    return {listen.substr(0, colon), std::stoi(listen.substr(colon + 1))};
}

llm::ClientSet load_clients(const std::filesystem::path& path) {
    if (path.extension() == ".jsonl")
        return llm::ClientSet::uniform(std::make_shared<llm::ScriptedClient>(llm::ScriptedClient::from_file(path)));
    return llm::load_client_config(path);
}

void write_file(const std::filesystem::path& path, const std::string& body) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    out << body;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"crag: retrieval-augmented QA engine"};
    app.require_subcommand(1);

    std::string fixture, listen = "127.0.0.1:8080";
    auto* serve = app.add_subcommand("serve-kg", "Serve coarse KG lookups over HTTP");
    serve->add_option("--fixture", fixture, "KG fixture JSON")->required();
    serve->add_option("--listen", listen, "host:port");

    std::string query;
    auto* parse = app.add_subcommand("parse", "Print the canonical form of a KGQL program");
    parse->add_option("--query", query, "KGQL program text")->required();

    auto* exec = app.add_subcommand("exec", "Run a KGQL program against a fixture");
    exec->add_option("--fixture", fixture, "KG fixture JSON")->required();
    exec->add_option("--query", query, "KGQL program text")->required();

    std::string pages_path;
    web::RetrievalConfig rc;
    std::optional<std::size_t> rerank_k;
    auto* retrieve = app.add_subcommand("retrieve", "Chunk, retrieve and rerank pages for a query");
    retrieve->add_option("--query", query)->required();
    retrieve->add_option("--pages", pages_path, "pages JSONL")->required();
    retrieve->add_option("--parent-size", rc.parent_chunk_size);
    retrieve->add_option("--child-size", rc.child_chunk_size);
    retrieve->add_option("--recall-k", rc.recall_k);
    retrieve->add_option("--rerank-k", rerank_k);

    std::string domain_name, input, mapping, out;
    auto* ingest = app.add_subcommand("ingest", "Build an entity index from CSV or JSON");
    ingest->add_option("--domain", domain_name)->required();
    ingest->add_option("--input", input)->required();
    ingest->add_option("--mapping", mapping)->required();
    ingest->add_option("--out", out)->required();

    std::string examples, judge;
    auto* gen_sft = app.add_subcommand("gen-sft", "Label training queries and write an SFT dataset");
    gen_sft->add_option("--examples", examples)->required();
    gen_sft->add_option("--judge", judge, "client config JSON or scripted JSONL")->required();
    gen_sft->add_option("--out", out)->required();

    std::string cases, kg_path, llm_path, index_path, results_out = "results.jsonl";
    std::optional<int> task;
    pipeline::BatchConfig bc;
    auto* answer = app.add_subcommand("answer", "Answer a case file");
    answer->add_option("--cases", cases)->required();
    answer->add_option("--task", task)->check(CLI::Range(1, 3));
    answer->add_option("--kg", kg_path, "KG fixture JSON");
    answer->add_option("--llm", llm_path, "client config JSON or scripted JSONL")->required();
    answer->add_option("--index", index_path, "entity index JSONL");
    answer->add_option("--deadline-secs", bc.deadline_secs);
    answer->add_option("--parallel", bc.parallelism);
    answer->add_option("--out", results_out, "results JSONL");
    answer->add_flag("--timings", bc.timings, "include elapsed_ms in results");
    answer->add_flag("--judge-scoring", bc.judge_scoring, "score with the judge client");

    std::string results;
    auto* eval = app.add_subcommand("eval", "Summarize a results file");
    eval->add_option("--results", results)->required();

    CLI11_PARSE(app, argc, argv);

    try {
        if (*serve) {
            auto db = kg::load_kg(fixture);
            kg::KgService svc(db);
            auto [host, port] = split_listen(listen);
            std::cerr << "serving " << fixture << " on " << host << ":" << port << "\n";
            svc.serve_forever(host, port);
            return 0;
        }
        if (*parse) {
            try {
                std::cout << kgql::format_program(kgql::parse_program(query)) << "\n";
                return 0;
            } catch (const kgql::ParseError& e) {
                nlohmann::ordered_json j;
                j["offset"] = e.offset();
                j["message"] = e.what();
                std::cout << j.dump() << "\n";
                return 1;
            }
        }
        if (*exec) {
            auto db = kg::load_kg(fixture);
            auto program = kgql::parse_program(query);
            auto rs = kgql::execute_program(program, db);
            nlohmann::json j;
            j["results"] = nlohmann::json::array();
            for (const auto& r : rs) j["results"].push_back(kgql::to_json(r));
            j["text"] = kgql::to_natural_language(rs, program);
            std::cout << j.dump(2) << "\n";
            return 0;
        }
        if (*retrieve) {
            rc.reranker_k = rerank_k ? *rerank_k : web::RetrievalConfig::default_reranker_k(rc.parent_chunk_size);
            rc.validate();
            web::HashedTfEmbedder embedder;
            web::TermOverlapReranker reranker;
            std::vector<web::ChunkPair> chunks;
            for (const auto& p : web::load_pages(pages_path)) {
                auto cs = web::split_parent_child(web::extract_text(p.html), rc, p.page_id);
                chunks.insert(chunks.end(), cs.begin(), cs.end());
            }
            std::vector<std::string> parents;
            for (auto& rp : web::retrieve_children(query, chunks, embedder, rc.recall_k)) parents.push_back(rp.text);
            auto rr = web::rerank(query, parents, reranker, rc.reranker_k);
            nlohmann::ordered_json j;
            j["chunks"] = chunks.size();
            j["degraded"] = rr.degraded;
            j["results"] = nlohmann::ordered_json::array();
            for (const auto& c : rr.chunks) j["results"].push_back({{"score", c.score}, {"text", c.parent_text}});
            std::cout << j.dump(2) << "\n";
            return 0;
        }
        if (*ingest) {
            auto domain = public_data::parse_domain(domain_name);
            if (!domain) throw std::runtime_error("unknown domain '" + domain_name + "'");
            auto docs = public_data::ingest_rows(*domain, public_data::read_rows(input),
                                                 public_data::load_mapping(mapping));
            public_data::EntityIndex(docs).save(out);
            std::cout << docs.size() << " entities written to " << out << "\n";
            return 0;
        }
        if (*gen_sft) {
            auto clients = load_clients(judge);
            auto* client = clients.get(llm::Role::judge);
            if (!client) throw std::runtime_error("no judge client configured");
            auto stats = sft::build_sft_dataset(sft::load_examples(examples), *client, out);
            std::cout << sft::to_json(stats).dump(2) << "\n";
            return 0;
        }
        if (*answer) {
            auto case_list = pipeline::load_cases(cases);
            std::optional<kg::KgDatabase> db;
            if (!kg_path.empty()) db = kg::load_kg(kg_path);
            std::optional<public_data::EntityIndex> index;
            if (!index_path.empty()) index = public_data::EntityIndex::load(index_path);
            web::HashedTfEmbedder embedder;
            web::TermOverlapReranker reranker;
            pipeline::PipelineDeps deps;
            deps.db = db ? &*db : nullptr;
            deps.index = index ? &*index : nullptr;
            deps.embedder = &embedder;
            deps.reranker = &reranker;
            deps.clients = load_clients(llm_path);
            bc.task_override = task;
            auto records = pipeline::run_batch(case_list, deps, bc);
            write_file(results_out, pipeline::results_jsonl(records, bc.timings));
            std::cout << pipeline::summarize(records).dump(2) << "\n";
            return 0;
        }
        if (*eval) {
            std::cout << pipeline::summarize(pipeline::load_results(results)).dump(2) << "\n";
            return 0;
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 0;
}
