// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <span>
#include <stdexcept>
#include <string_view>
#include <vector>

namespace crag::web {

/// Text embedding backend. Output length is constant per instance and equal
/// inputs give equal outputs. Implementations used from the batch runner
/// must tolerate concurrent calls.
class Embedder {
public:
    virtual ~Embedder() = default;
    virtual std::vector<float> embed(std::string_view text) const = 0;
    virtual std::size_t dimension() const = 0;
};

/// Query/passage relevance scorer (cross-encoder position in the pipeline).
class Reranker {
public:
    virtual ~Reranker() = default;
    virtual double score(std::string_view query, std::string_view text) const = 0;
};

/// Deterministic test embedder: L2-normalized hashed term-frequency vector.
/// Terms are lowercased alphanumeric runs hashed with 64-bit FNV-1a.
class HashedTfEmbedder final : public Embedder {
public:
    explicit HashedTfEmbedder(std::size_t dimension = 256);
    std::vector<float> embed(std::string_view text) const override;
    std::size_t dimension() const override { return dim_; }

    static std::uint64_t fnv1a(std::string_view s);

private:
    std::size_t dim_;
};

/// Deterministic test reranker: fraction of distinct query terms present in
/// the passage.
class TermOverlapReranker final : public Reranker {
public:
    double score(std::string_view query, std::string_view text) const override;
};

/// Cosine similarity accumulated in double; 0 when either vector is zero.
double cosine(std::span<const float> a, std::span<const float> b);

}  // namespace crag::web
