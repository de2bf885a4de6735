// SPDX-License-Identifier: Apache-2.0
#include "crag/web/scoring.hpp"

#include <cmath>
#include <set>
#include <string>

#include "crag/common/text.hpp"

namespace crag::web {

HashedTfEmbedder::HashedTfEmbedder(std::size_t dimension) : dim_(dimension) {
    if (dim_ == 0) throw std::invalid_argument("embedding dimension must be positive");
}

std::uint64_t HashedTfEmbedder::fnv1a(std::string_view s) {
    std::uint64_t h = 14695981039346656037ull;
    for (char c : s) {
        h ^= static_cast<unsigned char>(c);
        h *= 1099511628211ull;
    }
    return h;
}

std::vector<float> HashedTfEmbedder::embed(std::string_view text) const {
    std::vector<double> acc(dim_, 0.0);
    for (const auto& t : text::terms(text)) acc[fnv1a(t) % dim_] += 1.0;
    double norm = 0.0;
    for (double v : acc) norm += v * v;
    std::vector<float> out(dim_, 0.0f);
    if (norm == 0.0) return out;
    norm = std::sqrt(norm);
    for (std::size_t i = 0; i < dim_; ++i) out[i] = static_cast<float>(acc[i] / norm);
    return out;
}

double TermOverlapReranker::score(std::string_view query, std::string_view text) const {
    auto qv = text::terms(query);
    std::set<std::string> q(qv.begin(), qv.end());
    if (q.empty()) return 0.0;
    auto tv = text::terms(text);
    std::set<std::string> t(tv.begin(), tv.end());
    std::size_t hit = 0;
    for (const auto& term : q) hit += t.count(term);
    return static_cast<double>(hit) / static_cast<double>(q.size());
}

double cosine(std::span<const float> a, std::span<const float> b) {
    if (a.size() != b.size()) throw std::invalid_argument("embedding dimensions differ");
    double dot = 0.0, na = 0.0, nb = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        dot += static_cast<double>(a[i]) * b[i];
        na += static_cast<double>(a[i]) * a[i];
        nb += static_cast<double>(b[i]) * b[i];
    }
    if (na == 0.0 || nb == 0.0) return 0.0;
    return dot / (std::sqrt(na) * std::sqrt(nb));
}

}  // namespace crag::web
