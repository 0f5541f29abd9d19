#pragma once

#include <string>
#include <string_view>

namespace chstory::text {

/// Simple (one-to-one) Unicode case folding of a UTF-8 string. Covers Basic
/// Latin, Latin-1, Latin Extended-A, Greek and Cyrillic; other code points
/// pass through unchanged. No diacritic folding: "Dürer" folds to "dürer",
/// never to "durer". Invalid UTF-8 bytes are copied verbatim.
std::string fold_case(std::string_view utf8);

/// True when `needle` occurs in `haystack` after folding both.
bool contains_folded(std::string_view haystack, std::string_view needle);

/// True when the string is empty or consists of ASCII whitespace only.
bool is_blank(std::string_view s) noexcept;

} // namespace chstory::text
