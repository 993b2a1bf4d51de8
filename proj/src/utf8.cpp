#include "bt/utf8.hpp"

#include <algorithm>
#include <array>

#include "bt/errors.hpp"

namespace bt::utf8 {

std::size_t decode_one(std::string_view s, std::size_t i, char32_t& cp) {
  if (i >= s.size()) return 0;
  const auto b0 = static_cast<unsigned char>(s[i]);
  if (b0 < 0x80) {
    cp = b0;
    return 1;
  }
  std::size_t len;
  char32_t acc;
  if ((b0 & 0xE0) == 0xC0) {
    len = 2;
    acc = b0 & 0x1F;
  } else if ((b0 & 0xF0) == 0xE0) {
    len = 3;
    acc = b0 & 0x0F;
  } else if ((b0 & 0xF8) == 0xF0) {
    len = 4;
    acc = b0 & 0x07;
  } else {
    return 0;
  }
  if (i + len > s.size()) return 0;
  for (std::size_t k = 1; k < len; ++k) {
    const auto b = static_cast<unsigned char>(s[i + k]);
    if ((b & 0xC0) != 0x80) return 0;
    acc = (acc << 6) | (b & 0x3F);
  }
  static constexpr char32_t kMin[5] = {0, 0, 0x80, 0x800, 0x10000};
  if (acc < kMin[len]) return 0;                  // overlong
  if (acc >= 0xD800 && acc <= 0xDFFF) return 0;   // surrogate
  if (acc > 0x10FFFF) return 0;
  cp = acc;
  return len;
}

bool valid(std::string_view s) {
  std::size_t i = 0;
  char32_t cp;
  while (i < s.size()) {
    const std::size_t n = decode_one(s, i, cp);
    if (n == 0) return false;
    i += n;
  }
  return true;
}

std::u32string decode(std::string_view s) {
  std::u32string out;
  out.reserve(s.size());
  std::size_t i = 0;
  char32_t cp;
  while (i < s.size()) {
    const std::size_t n = decode_one(s, i, cp);
    if (n == 0) throw FormatError("invalid UTF-8 at byte offset " + std::to_string(i));
    out.push_back(cp);
    i += n;
  }
  return out;
}

std::u32string decode_lossy(std::string_view s) {
  std::u32string out;
  out.reserve(s.size());
  std::size_t i = 0;
  char32_t cp;
  while (i < s.size()) {
    const std::size_t n = decode_one(s, i, cp);
    if (n == 0) {
      out.push_back(0xFFFD);
      ++i;
    } else {
      out.push_back(cp);
      i += n;
    }
  }
  return out;
}

void append(std::string& out, char32_t cp) {
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

std::string encode(std::u32string_view cps) {
  std::string out;
  out.reserve(cps.size() * 2);
  for (char32_t cp : cps) append(out, cp);
  return out;
}

bool is_space(char32_t cp) {
  switch (cp) {
    case U'\t':
    case U'\n':
    case U'\v':
    case U'\f':
    case U'\r':
    case U' ':
    case 0x85:
    case 0xA0:
    case 0x1680:
    case 0x2028:
    case 0x2029:
    case 0x202F:
    case 0x205F:
    case 0x3000:
      return true;
    default:
      return cp >= 0x2000 && cp <= 0x200A;
  }
}

namespace {

struct Range {
  char32_t lo, hi;
};

// Curated punctuation ranges, sorted.
constexpr std::array<Range, 22> kPunct = {{
    {0x21, 0x2F},      // !"#$%&'()*+,-./
    {0x3A, 0x40},      // :;<=>?@
    {0x5B, 0x60},      // [\]^_`
    {0x7B, 0x7E},      // {|}~
    {0xA1, 0xA1},      // inverted exclamation
    {0xA7, 0xA7},      // section sign
    {0xAB, 0xAB},      // left guillemet
    {0xB6, 0xB7},      // pilcrow, middle dot
    {0xBB, 0xBB},      // right guillemet
    {0xBF, 0xBF},      // inverted question
    {0x55A, 0x55F},    // Armenian punctuation
    {0x60C, 0x60D},    // Arabic comma
    {0x61B, 0x61B},    // Arabic semicolon
    {0x61F, 0x61F},    // Arabic question mark
    {0x6D4, 0x6D4},    // Arabic full stop
    {0x964, 0x965},    // Devanagari danda
    {0x1360, 0x1368},  // Ethiopic section mark .. paragraph separator
    {0x2010, 0x2027},  // hyphens, dashes, quotes, daggers, bullet, ellipsis
    {0x2030, 0x205E},  // per mille .. vertical four dots
    {0x2E00, 0x2E7F},  // supplemental punctuation
    {0x3001, 0x303F},  // CJK punctuation (minus ideographic space, handled as space)
    {0xFF01, 0xFF65},  // fullwidth/halfwidth forms
}};

}  // namespace

bool is_punct(char32_t cp) {
  auto it = std::upper_bound(kPunct.begin(), kPunct.end(), cp,
                             [](char32_t c, const Range& r) { return c < r.lo; });
  if (it == kPunct.begin()) return false;
  --it;
  return cp >= it->lo && cp <= it->hi;
}

}  // namespace bt::utf8
