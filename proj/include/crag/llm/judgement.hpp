// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <string_view>

namespace crag::llm {

/// Reads "Accuracy" from the first JSON object in a judge reply. Key and
/// value are case-insensitive; the value may be a bool or a string.
/// Anything unreadable is false.
bool parse_judgement(std::string_view reply);

/// True when the first word of a context-check reply is "yes".
bool parse_yes_no(std::string_view reply);

}  // namespace crag::llm
