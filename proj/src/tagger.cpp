// SPDX-License-Identifier: Apache-2.0

#include "cmhate/tagger.hpp"

#include <fstream>

#include "cmhate/errors.hpp"
#include "cmhate/text.hpp"

namespace cmhate {

std::unordered_set<std::string> load_lexicon(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open lexicon '" + path.string() + "'");
  std::unordered_set<std::string> words;
  std::string line;
  while (std::getline(in, line)) {
    const std::string w = text::trim(line);
    if (w.empty() || w.front() == '#') continue;
    words.insert(text::to_lower(w));
  }
  return words;
}

std::vector<LangTag> heuristic_tag(std::string_view input, const TaggerConfig& config) {
  if (config.lexicons.empty()) throw EmptyLexiconSet();
  std::vector<LangTag> tags;
  for (auto token : text::split_whitespace(input)) {
    if (text::has_devanagari(token)) {
      tags.push_back(LangTag::lang(config.devanagari_lang));
      continue;
    }
    if (text::is_non_alphabetic(token)) {
      tags.push_back(LangTag::independent());
      continue;
    }
    const std::string word = text::to_lower(text::strip_punctuation(token));
    std::optional<LangTag> found;
    if (text::is_latin_word(word)) {
      for (const auto& [lang, words] : config.lexicons) {
        if (words.contains(word)) {
          found = LangTag::lang(lang);
          break;
        }
      }
    }
    tags.push_back(found ? *found : LangTag::lang(config.fallback));
  }
  return tags;
}

Corpus tag_corpus(const Corpus& corpus, const TaggerConfig& config) {
  std::vector<Sample> samples(corpus.samples().begin(), corpus.samples().end());
  for (auto& s : samples) {
    if (!s.lang_tags) s.lang_tags = heuristic_tag(s.text, config);
  }
  return Corpus(corpus.name(), std::move(samples));
}

}  // namespace cmhate
