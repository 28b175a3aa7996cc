// SPDX-License-Identifier: Apache-2.0
//
// Script-first heuristic word-level language tagger. A stand-in for manual
// annotation when author tags are unavailable; its output is approximate.

#pragma once

#include <filesystem>
#include <map>
#include <string>
#include <string_view>
#include <unordered_set>
#include <vector>

#include "cmhate/corpus.hpp"

namespace cmhate {

struct TaggerConfig {
  // language code -> lowercase word set. Lookup order follows the map order.
  std::map<std::string, std::unordered_set<std::string>> lexicons;
  std::string fallback = "hi";
  std::string devanagari_lang = "hi";
};

// One word per line, lowercased; blank lines and '#' comments are skipped.
std::unordered_set<std::string> load_lexicon(const std::filesystem::path& path);

// Tags each whitespace token:
//   Devanagari codepoint present  -> devanagari_lang
//   no letters (numbers, symbols) -> Independent
//   Latin word found in a lexicon -> that lexicon's language
//   otherwise                     -> fallback
// Throws EmptyLexiconSet when no lexicon is configured.
std::vector<LangTag> heuristic_tag(std::string_view text, const TaggerConfig& config);

// Returns a copy of the corpus where every sample without tags is tagged.
Corpus tag_corpus(const Corpus& corpus, const TaggerConfig& config);

}  // namespace cmhate
