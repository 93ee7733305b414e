#include "koala/textprep/normalize.hpp"

#include <algorithm>
#include <array>
#include <cstdint>
#include <optional>

namespace koala::textprep {
namespace {

constexpr char32_t kReplacement = 0xFFFD;

struct Decoded {
  char32_t cp;
  std::size_t length;  // bytes consumed
  bool valid;
};

// Decodes one code point at `pos`. On malformed input consumes the maximal
// invalid prefix (at least one byte) and reports valid = false.
Decoded decode_one(std::string_view s, std::size_t pos) {
  const auto b0 = static_cast<unsigned char>(s[pos]);
  if (b0 < 0x80) return {b0, 1, true};

  std::size_t need = 0;
  char32_t cp = 0;
  char32_t min = 0;
  if (b0 >= 0xC2 && b0 <= 0xDF) {
    need = 1, cp = b0 & 0x1F, min = 0x80;
  } else if (b0 >= 0xE0 && b0 <= 0xEF) {
    need = 2, cp = b0 & 0x0F, min = 0x800;
  } else if (b0 >= 0xF0 && b0 <= 0xF4) {
    need = 3, cp = b0 & 0x07, min = 0x10000;
  } else {
    return {kReplacement, 1, false};
  }

  std::size_t i = 1;
  for (; i <= need; ++i) {
    if (pos + i >= s.size()) return {kReplacement, i, false};
    const auto b = static_cast<unsigned char>(s[pos + i]);
    if ((b & 0xC0) != 0x80) return {kReplacement, i, false};
    cp = (cp << 6) | (b & 0x3F);
  }
  if (cp < min || cp > 0x10FFFF || (cp >= 0xD800 && cp <= 0xDFFF)) {
    return {kReplacement, i, false};
  }
  return {cp, i, true};
}

void append_utf8(std::string& out, char32_t cp) {
  if (cp < 0x80) {
    out.push_back(static_cast<char>(cp));
  } else if (cp < 0x800) {
    out.push_back(static_cast<char>(0xC0 | (cp >> 6)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  } else if (cp < 0x10000) {
    out.push_back(static_cast<char>(0xE0 | (cp >> 12)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  } else {
    out.push_back(static_cast<char>(0xF0 | (cp >> 18)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 12) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  }
}

struct Range {
  char32_t lo, hi;  // inclusive
};

// Unicode general category Cf.
constexpr std::array kFormatRanges{
    Range{0x00AD, 0x00AD},   Range{0x0600, 0x0605},   Range{0x061C, 0x061C},
    Range{0x06DD, 0x06DD},   Range{0x070F, 0x070F},   Range{0x0890, 0x0891},
    Range{0x08E2, 0x08E2},   Range{0x180E, 0x180E},   Range{0x200B, 0x200F},
    Range{0x202A, 0x202E},   Range{0x2060, 0x2064},   Range{0x2066, 0x206F},
    Range{0xFEFF, 0xFEFF},   Range{0xFFF9, 0xFFFB},   Range{0x110BD, 0x110BD},
    Range{0x110CD, 0x110CD}, Range{0x13430, 0x1343F}, Range{0x1BCA0, 0x1BCA3},
    Range{0x1D173, 0x1D17A}, Range{0xE0001, 0xE0001}, Range{0xE0020, 0xE007F},
};

bool is_format(char32_t cp) {
  return std::any_of(kFormatRanges.begin(), kFormatRanges.end(),
                     [cp](Range r) { return cp >= r.lo && cp <= r.hi; });
}

bool is_dropped_control(char32_t cp) {
  const bool cc = cp <= 0x1F || (cp >= 0x7F && cp <= 0x9F);
  return (cc && cp != '\n' && cp != '\t') || is_format(cp);
}

// Space separators (Zs) other than U+0020.
bool is_space_separator(char32_t cp) {
  return cp == 0x00A0 || cp == 0x1680 || (cp >= 0x2000 && cp <= 0x200A) ||
         cp == 0x202F || cp == 0x205F || cp == 0x3000;
}

// Punctuation table. Returns the ASCII replacement, or nullopt when the code
// point is kept as is.
std::optional<std::string_view> ascii_punctuation(char32_t cp) {
  switch (cp) {
    case 0x2018:  // left single quotation mark
    case 0x2019:  // right single quotation mark
    case 0x201A:  // single low-9 quotation mark
    case 0x201B:  // single high-reversed-9 quotation mark
    case 0x2032:  // prime
    case 0x2039:  // single left-pointing angle quotation mark
    case 0x203A:  // single right-pointing angle quotation mark
      return "'";
    case 0x201C:  // left double quotation mark
    case 0x201D:  // right double quotation mark
    case 0x201E:  // double low-9 quotation mark
    case 0x201F:  // double high-reversed-9 quotation mark
    case 0x2033:  // double prime
    case 0x00AB:  // left-pointing double angle quotation mark
    case 0x00BB:  // right-pointing double angle quotation mark
      return "\"";
    case 0x2010:  // hyphen
    case 0x2011:  // non-breaking hyphen
    case 0x2012:  // figure dash
    case 0x2013:  // en dash
    case 0x2014:  // em dash
    case 0x2015:  // horizontal bar
    case 0x2212:  // minus sign
      return "-";
    case 0x2026:  // horizontal ellipsis
      return "...";
    default:
      return std::nullopt;
  }
}

}  // namespace

bool is_valid_utf8(std::string_view bytes) {
  for (std::size_t pos = 0; pos < bytes.size();) {
    const auto d = decode_one(bytes, pos);
    if (!d.valid) return false;
    pos += d.length;
  }
  return true;
}

std::string repair_utf8(std::string_view bytes) {
  std::string out;
  out.reserve(bytes.size());
  for (std::size_t pos = 0; pos < bytes.size();) {
    const auto d = decode_one(bytes, pos);
    if (d.valid) {
      out.append(bytes.substr(pos, d.length));
    } else {
      append_utf8(out, kReplacement);
    }
    pos += d.length;
  }
  return out;
}

std::string normalize_text(std::string_view raw) {
  std::string out;
  out.reserve(raw.size());
  auto push_space = [&out] {
    if (out.empty() || out.back() != ' ') out.push_back(' ');
  };

  for (std::size_t pos = 0; pos < raw.size();) {
    const auto d = decode_one(raw, pos);
    const char32_t cp = d.valid ? d.cp : kReplacement;
    pos += d.length;

    if (is_dropped_control(cp)) continue;
    if (cp == ' ' || cp == '\t' || is_space_separator(cp)) {
      push_space();
    } else if (auto ascii = ascii_punctuation(cp)) {
      out.append(*ascii);
    } else {
      append_utf8(out, cp);
    }
  }
  return out;
}

}  // namespace koala::textprep
