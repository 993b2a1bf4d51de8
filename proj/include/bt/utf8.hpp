#pragma once

#include <cstddef>
#include <string>
#include <string_view>

namespace bt::utf8 {

// Decodes the codepoint starting at byte offset i. Returns the number of bytes
// consumed (1..4), or 0 if the input is malformed there (bad lead byte, overlong
// form, surrogate, out of range, truncated sequence).
std::size_t decode_one(std::string_view s, std::size_t i, char32_t& cp);

bool valid(std::string_view s);

// Throws FormatError on malformed input.
std::u32string decode(std::string_view s);

// Replaces malformed bytes with U+FFFD instead of throwing.
std::u32string decode_lossy(std::string_view s);

void append(std::string& out, char32_t cp);
std::string encode(std::u32string_view cps);

// Unicode-ish classifiers covering the scripts this toolkit deals with. Not a
// full property table: whitespace follows White_Space, punctuation is a curated
// range list (ASCII, Latin-1, general punctuation, Ethiopic U+1360-1368, CJK,
// Arabic marks, fullwidth forms).
bool is_space(char32_t cp);
bool is_punct(char32_t cp);

}  // namespace bt::utf8
