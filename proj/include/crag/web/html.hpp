// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <string>
#include <string_view>

namespace crag::web {

/// Plain text from (possibly malformed) HTML. Drops script/style bodies and
/// comments, strips tags, puts block elements on their own lines, decodes
/// common entities and collapses whitespace within lines. Empty lines are
/// removed.
std::string extract_text(std::string_view html);

}  // namespace crag::web
