// SPDX-License-Identifier: Apache-2.0
#include "crag/web/retrieval.hpp"

#include <algorithm>
#include <fstream>
#include <numeric>
#include <set>

namespace crag::web {

WebPage page_from_json(const nlohmann::json& j) {
    WebPage p;
    p.page_id = j.at("page_id").get<std::string>();
    p.snippet = j.value("snippet", std::string{});
    p.html = j.value("html", std::string{});
    return p;
}

nlohmann::json to_json(const WebPage& p) {
    return {{"page_id", p.page_id}, {"snippet", p.snippet}, {"html", p.html}};
}

std::vector<WebPage> load_pages(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open pages file " + path.string());
    std::vector<WebPage> out;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        try {
            out.push_back(page_from_json(nlohmann::json::parse(line)));
        } catch (const nlohmann::json::exception& e) {
            throw std::runtime_error(path.string() + ":" + std::to_string(lineno) + ": " + e.what());
        }
    }
    return out;
}

std::vector<RetrievedParent> retrieve_children(std::string_view query, std::span<const ChunkPair> chunks,
                                               const Embedder& embedder, std::size_t recall_k) {
    std::vector<float> qv;
    std::vector<double> scores(chunks.size());
    try {
        qv = embedder.embed(query);
        for (std::size_t i = 0; i < chunks.size(); ++i) scores[i] = cosine(qv, embedder.embed(chunks[i].child_text));
    } catch (const std::exception& e) {
        throw RetrievalError(std::string("embedding failed: ") + e.what());
    }
    std::vector<std::size_t> order(chunks.size());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return scores[a] > scores[b]; });
    if (order.size() > recall_k) order.resize(recall_k);

    std::vector<RetrievedParent> out;
    std::set<std::string> seen;
    for (auto i : order) {
        if (!seen.insert(chunks[i].parent_id).second) continue;
        out.push_back({chunks[i].parent_id, chunks[i].parent_text, scores[i]});
    }
    return out;
}

RerankResult rerank(std::string_view query, std::span<const std::string> parents, const Reranker& reranker,
                    std::size_t reranker_k) {
    RerankResult res;
    std::vector<double> scores(parents.size());
    try {
        for (std::size_t i = 0; i < parents.size(); ++i) scores[i] = reranker.score(query, parents[i]);
    } catch (const std::exception&) {
        res.degraded = true;
        for (std::size_t i = 0; i < parents.size() && i < reranker_k; ++i) res.chunks.push_back({parents[i], 0.0});
        return res;
    }
    std::vector<std::size_t> order(parents.size());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return scores[a] > scores[b]; });
    if (order.size() > reranker_k) order.resize(reranker_k);
    for (auto i : order) res.chunks.push_back({parents[i], scores[i]});
    return res;
}

PreselectResult preselect_pages(std::string_view query, std::span<const WebPage> pages, const Reranker& reranker,
                                std::size_t keep) {
    PreselectResult res;
    std::vector<double> scores(pages.size());
    try {
        for (std::size_t i = 0; i < pages.size(); ++i) scores[i] = reranker.score(query, pages[i].snippet);
    } catch (const std::exception&) {
        res.degraded = true;
        res.pages.assign(pages.begin(), pages.begin() + std::min(keep, pages.size()));
        return res;
    }
    std::vector<std::size_t> order(pages.size());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return scores[a] > scores[b]; });
    if (order.size() > keep) order.resize(keep);
    for (auto i : order) res.pages.push_back(pages[i]);
    return res;
}

}  // namespace crag::web
