// SPDX-License-Identifier: Apache-2.0
//
// UTF-8 helpers backed by ICU character properties.

#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace cmhate::text {

// Splits on Unicode whitespace. Never yields empty pieces.
std::vector<std::string_view> split_whitespace(std::string_view s);

std::size_t whitespace_token_count(std::string_view s);

// Full Unicode lowercase mapping (root locale).
std::string to_lower(std::string_view s);

bool has_devanagari(std::string_view s);

// True when the token holds no letter of any script (digits, punctuation,
// symbols, emoji).
bool is_non_alphabetic(std::string_view s);

bool is_latin_word(std::string_view s);

// Removes leading and trailing punctuation codepoints. `keep_leading` names
// ASCII characters that survive on the left edge.
std::string_view strip_punctuation(std::string_view s, std::string_view keep_leading = {});

std::string trim(std::string_view s);

}  // namespace cmhate::text
