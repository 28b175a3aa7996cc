// SPDX-License-Identifier: Apache-2.0
//
// Shared fixtures for the test binaries.

#pragma once

#include <algorithm>
#include <cctype>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "cmhate/corpus.hpp"

namespace cmhate::testing {

// Corpus with `hate` Hate samples followed by `non_hate` NonHate samples.
inline Corpus make_corpus(const std::string& name, std::size_t hate, std::size_t non_hate,
                          Source source = {}) {
  std::vector<Sample> samples;
  samples.reserve(hate + non_hate);
  for (std::size_t i = 0; i < hate + non_hate; ++i) {
    Sample s;
    s.id = name + "-" + std::to_string(i);
    s.text = "text " + std::to_string(i);
    s.label = i < hate ? Label::Hate : Label::NonHate;
    s.source = source;
    samples.push_back(std::move(s));
  }
  return Corpus(name, std::move(samples));
}

class TempDir {
 public:
  explicit TempDir(const std::string& tag) {
    static std::uint64_t counter = 0;
    std::random_device rd;
    path_ = std::filesystem::temp_directory_path() /
            ("cmhate-" + tag + "-" + std::to_string(rd()) + "-" + std::to_string(counter++));
    std::filesystem::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;
  const std::filesystem::path& path() const noexcept { return path_; }
  std::filesystem::path operator/(const std::string& rel) const { return path_ / rel; }

 private:
  std::filesystem::path path_;
};

inline void write_file(const std::filesystem::path& p, const std::string& content) {
  std::filesystem::create_directories(p.parent_path());
  std::ofstream out(p, std::ios::binary);
  out << content;
}

inline std::string read_file(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// Synthetic tweets in two pseudo-languages. Hate samples carry cue words
// from a small hateful vocabulary; all samples mix filler words of both
// languages, with gold language tags.
struct SyntheticSpec {
  std::string name;
  std::size_t hate = 0;
  std::size_t non_hate = 0;
  double mix = 0.5;          // share of the second pseudo-language
  std::uint64_t seed = 1;
  std::string id_prefix;     // defaults to name
};

inline Corpus synthetic_corpus(const SyntheticSpec& spec) {
  static const std::vector<std::string> la{"kal", "mori", "tesa", "buno", "rafi", "dosu", "pelo", "vani"};
  static const std::vector<std::string> lb{"the", "with", "from", "about", "today", "really", "people", "going"};
  static const std::vector<std::string> hate_a{"ghrina", "kutil"};
  static const std::vector<std::string> hate_b{"vile", "scum"};
  static const std::vector<std::string> kind_a{"pyara", "sukh"};
  static const std::vector<std::string> kind_b{"lovely", "kind"};
  std::mt19937_64 rng(spec.seed);
  auto pick = [&](const std::vector<std::string>& v) { return v[rng() % v.size()]; };
  std::vector<Sample> samples;
  const std::string prefix = spec.id_prefix.empty() ? spec.name : spec.id_prefix;
  std::vector<Label> labels;
  for (std::size_t i = 0; i < spec.hate; ++i) labels.push_back(Label::Hate);
  for (std::size_t i = 0; i < spec.non_hate; ++i) labels.push_back(Label::NonHate);
  std::shuffle(labels.begin(), labels.end(), rng);
  for (std::size_t i = 0; i < labels.size(); ++i) {
    const bool hate = labels[i] == Label::Hate;
    const std::size_t len = 5 + rng() % 6;
    const std::size_t cue_at = rng() % len;
    std::string text;
    std::vector<LangTag> tags;
    for (std::size_t k = 0; k < len; ++k) {
      const bool second = std::uniform_real_distribution<double>(0, 1)(rng) < spec.mix;
      std::string w;
      if (k == cue_at && rng() % 10 < 8) {
        w = hate ? pick(second ? hate_b : hate_a) : pick(second ? kind_b : kind_a);
      } else if (rng() % 12 == 0) {
        w = std::to_string(rng() % 100);
      } else {
        w = pick(second ? lb : la);
      }
      const bool numeric = !w.empty() && std::isdigit(static_cast<unsigned char>(w[0]));
      tags.push_back(numeric ? LangTag::independent() : LangTag::lang(second ? "en" : "hi"));
      if (!text.empty()) text += ' ';
      text += w;
    }
    Sample s;
    s.id = prefix + "-" + std::to_string(i);
    s.text = std::move(text);
    s.label = labels[i];
    s.lang_tags = std::move(tags);
    samples.push_back(std::move(s));
  }
  return Corpus(spec.name, std::move(samples));
}

}  // namespace cmhate::testing
