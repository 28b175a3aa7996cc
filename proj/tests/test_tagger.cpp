// SPDX-License-Identifier: Apache-2.0

#include "cmhate/errors.hpp"
#include "cmhate/tagger.hpp"
#include "doctest.h"
#include "support.hpp"

using namespace cmhate;

namespace {

TaggerConfig en_lexicon(std::initializer_list<const char*> words) {
  TaggerConfig c;
  for (const char* w : words) c.lexicons["en"].insert(w);
  return c;
}

}  // namespace

TEST_CASE("script, lexicon and independent rules") {
  const auto tags = heuristic_tag("दलित bad 42", en_lexicon({"bad"}));
  REQUIRE(tags.size() == 3);
  CHECK(tags[0] == LangTag::lang("hi"));
  CHECK(tags[1] == LangTag::lang("en"));
  CHECK(tags[2].is_independent());
}

TEST_CASE("empty text gives no tags") { CHECK(heuristic_tag("", en_lexicon({"bad"})).empty()); }

TEST_CASE("single-language text") {
  const auto tags = heuristic_tag("hello hello", en_lexicon({"hello"}));
  CHECK(tags == std::vector<LangTag>{LangTag::lang("en"), LangTag::lang("en")});
}

TEST_CASE("lookup ignores case and edge punctuation, unknown words fall back") {
  auto cfg = en_lexicon({"hello"});
  cfg.fallback = "hi";
  const auto tags = heuristic_tag("HELLO!! yaar ?!", cfg);
  CHECK(tags == std::vector<LangTag>{LangTag::lang("en"), LangTag::lang("hi"), LangTag::independent()});
}

TEST_CASE("no lexicon is an error") { CHECK_THROWS_AS(heuristic_tag("a b", TaggerConfig{}), EmptyLexiconSet); }

TEST_CASE("lexicon files and corpus tagging") {
  cmhate::testing::TempDir dir("tagger");
  cmhate::testing::write_file(dir / "en.txt", "# english\nGood\n\nday\n");
  TaggerConfig cfg;
  cfg.lexicons["en"] = load_lexicon(dir / "en.txt");
  CHECK(cfg.lexicons["en"].count("good") == 1);
  CHECK(cfg.lexicons["en"].size() == 2);

  Sample tagged{"a", "x y", Label::Hate, std::vector<LangTag>{LangTag::lang("xx"), LangTag::lang("xx")}, {}};
  Sample untagged{"b", "good din", Label::NonHate, std::nullopt, {}};
  const Corpus out = tag_corpus(Corpus("c", {tagged, untagged}), cfg);
  CHECK(out[0].lang_tags == tagged.lang_tags);
  CHECK(out[1].lang_tags == std::vector<LangTag>{LangTag::lang("en"), LangTag::lang("hi")});
}
