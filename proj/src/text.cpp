// SPDX-License-Identifier: Apache-2.0

#include "cmhate/text.hpp"

#include <unicode/uchar.h>
#include <unicode/uscript.h>
#include <unicode/utf8.h>
#include <unicode/ustring.h>

#include <stdexcept>

namespace cmhate::text {
namespace {

// Decodes the codepoint at `i` and advances it. Ill-formed bytes decode to
// U+FFFD so callers never stall.
UChar32 next_codepoint(std::string_view s, int32_t& i) {
  UChar32 c = 0;
  U8_NEXT_OR_FFFD(reinterpret_cast<const uint8_t*>(s.data()), i, static_cast<int32_t>(s.size()), c);
  return c;
}

bool is_space(UChar32 c) { return u_isUWhiteSpace(c) != 0; }

bool is_punct(UChar32 c) { return u_ispunct(c) != 0; }

}  // namespace

std::vector<std::string_view> split_whitespace(std::string_view s) {
  std::vector<std::string_view> out;
  int32_t i = 0;
  const auto n = static_cast<int32_t>(s.size());
  int32_t start = -1;
  while (i < n) {
    const int32_t at = i;
    const UChar32 c = next_codepoint(s, i);
    if (is_space(c)) {
      if (start >= 0) {
        out.push_back(s.substr(start, at - start));
        start = -1;
      }
    } else if (start < 0) {
      start = at;
    }
  }
  if (start >= 0) out.push_back(s.substr(start));
  return out;
}

std::size_t whitespace_token_count(std::string_view s) { return split_whitespace(s).size(); }

std::string to_lower(std::string_view s) {
  if (s.empty()) return {};
  UErrorCode status = U_ZERO_ERROR;
  std::u16string wide(s.size() + 1, u'\0');
  int32_t wide_len = 0;
  u_strFromUTF8WithSub(wide.data(), static_cast<int32_t>(wide.size()), &wide_len, s.data(),
                       static_cast<int32_t>(s.size()), 0xFFFD, nullptr, &status);
  if (U_FAILURE(status)) throw std::runtime_error("utf-8 decode failed");
  wide.resize(wide_len);

  std::u16string lower(wide.size() * 2 + 4, u'\0');
  status = U_ZERO_ERROR;
  int32_t lower_len = u_strToLower(lower.data(), static_cast<int32_t>(lower.size()), wide.data(),
                                   wide_len, "", &status);
  if (status == U_BUFFER_OVERFLOW_ERROR) {
    lower.assign(lower_len + 1, u'\0');
    status = U_ZERO_ERROR;
    lower_len = u_strToLower(lower.data(), static_cast<int32_t>(lower.size()), wide.data(), wide_len,
                             "", &status);
  }
  if (U_FAILURE(status)) throw std::runtime_error("lowercase mapping failed");

  std::string out(static_cast<std::size_t>(lower_len) * 3 + 1, '\0');
  int32_t out_len = 0;
  status = U_ZERO_ERROR;
  u_strToUTF8(out.data(), static_cast<int32_t>(out.size()), &out_len, lower.data(), lower_len,
              &status);
  if (U_FAILURE(status)) throw std::runtime_error("utf-8 encode failed");
  out.resize(out_len);
  return out;
}

bool has_devanagari(std::string_view s) {
  int32_t i = 0;
  while (i < static_cast<int32_t>(s.size())) {
    UErrorCode status = U_ZERO_ERROR;
    if (uscript_getScript(next_codepoint(s, i), &status) == USCRIPT_DEVANAGARI) return true;
  }
  return false;
}

bool is_non_alphabetic(std::string_view s) {
  int32_t i = 0;
  while (i < static_cast<int32_t>(s.size())) {
    if (u_isalpha(next_codepoint(s, i))) return false;
  }
  return true;
}

bool is_latin_word(std::string_view s) {
  bool any_latin = false;
  int32_t i = 0;
  while (i < static_cast<int32_t>(s.size())) {
    const UChar32 c = next_codepoint(s, i);
    if (!u_isalpha(c)) continue;
    UErrorCode status = U_ZERO_ERROR;
    if (uscript_getScript(c, &status) != USCRIPT_LATIN) return false;
    any_latin = true;
  }
  return any_latin;
}

std::string_view strip_punctuation(std::string_view s, std::string_view keep_leading) {
  const auto n = static_cast<int32_t>(s.size());
  int32_t begin = 0;
  while (begin < n) {
    int32_t next = begin;
    const UChar32 c = next_codepoint(s, next);
    if (!is_punct(c)) break;
    if (c < 0x80 && keep_leading.find(static_cast<char>(c)) != std::string_view::npos) break;
    begin = next;
  }
  int32_t end = n;
  while (end > begin) {
    int32_t prev = end;
    UChar32 c = 0;
    U8_PREV_OR_FFFD(reinterpret_cast<const uint8_t*>(s.data()), begin, prev, c);
    if (!is_punct(c)) break;
    end = prev;
  }
  return s.substr(begin, end - begin);
}

std::string trim(std::string_view s) {
  auto pieces = split_whitespace(s);
  if (pieces.empty()) return {};
  const char* first = pieces.front().data();
  const char* last = pieces.back().data() + pieces.back().size();
  return std::string(first, last);
}

}  // namespace cmhate::text
