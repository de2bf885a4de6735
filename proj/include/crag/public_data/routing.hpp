// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "crag/llm/client.hpp"
#include "crag/public_data/entity_index.hpp"

namespace crag::public_data {

/// Maps the first word of a domain reply to a Domain; anything
/// unrecognized (including "open") is other.
Domain domain_from_reply(std::string_view reply);

/// Sends the domain prompt. Client failure gives other and sets *degraded.
Domain classify_domain(std::string_view query, llm::GenerationClient& client, bool* degraded = nullptr);

/// Splits an entity reply on "&&", trims and lowercases; "i don't know"
/// and blank pieces give nothing.
std::vector<std::string> entities_from_reply(std::string_view reply);

/// Sends the domain's entity prompt. Domains without one, and client
/// failures, give an empty list.
std::vector<std::string> extract_entities(std::string_view query, Domain domain, llm::GenerationClient& client,
                                          bool* degraded = nullptr);

}  // namespace crag::public_data
