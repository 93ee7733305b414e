#pragma once

#include <string>
#include <string_view>

namespace koala::textprep {

// True when `bytes` is well-formed UTF-8 (no overlongs, surrogates, or code
// points past U+10FFFF).
bool is_valid_utf8(std::string_view bytes);

// Replaces every malformed UTF-8 sequence with U+FFFD. Valid input is
// returned unchanged.
std::string repair_utf8(std::string_view bytes);

// Canonical text form shared by corpus ingestion and queries:
//   - control (Cc, except \n and \t) and format (Cf) characters are dropped,
//   - typographic quotes, dashes and the ellipsis map to ASCII, and Unicode
//     space separators map to ' ',
//   - \t becomes ' ',
//   - runs of ' ' collapse to one.
// Case is never changed. normalize_text(normalize_text(x)) == normalize_text(x).
// Malformed UTF-8 is repaired first, so the function is total.
std::string normalize_text(std::string_view raw);

}  // namespace koala::textprep
