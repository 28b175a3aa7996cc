// SPDX-License-Identifier: Apache-2.0
//
// Labeled corpora: the sample model, record ingestion (JSONL/CSV), canonical
// JSONL emission and label distributions.

#pragma once

#include <array>
#include <compare>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace cmhate {

enum class Label : std::uint8_t { Hate = 0, NonHate = 1 };

inline constexpr std::array<Label, 2> kLabels{Label::Hate, Label::NonHate};

constexpr std::size_t label_index(Label l) noexcept { return static_cast<std::size_t>(l); }

// Canonical spelling: "hate" / "non-hate".
std::string_view to_string(Label l) noexcept;

// Per-label counts, indexable by Label.
struct LabelCounts {
  std::size_t hate = 0;
  std::size_t non_hate = 0;

  std::size_t& operator[](Label l) noexcept { return l == Label::Hate ? hate : non_hate; }
  std::size_t operator[](Label l) const noexcept { return l == Label::Hate ? hate : non_hate; }
  std::size_t total() const noexcept { return hate + non_hate; }
  LabelCounts& operator+=(const LabelCounts& o) noexcept {
    hate += o.hate;
    non_hate += o.non_hate;
    return *this;
  }
  friend bool operator==(const LabelCounts&, const LabelCounts&) = default;
};

// Maps raw label strings to Labels, case-insensitively. The default table
// accepts hate / non-hate / non_hate / nonhate / 1 / 0.
class LabelParser {
 public:
  LabelParser();
  explicit LabelParser(std::map<std::string, Label> table);

  Label parse(std::string_view raw) const;  // throws UnknownLabel
  const std::map<std::string, Label>& table() const noexcept { return table_; }

 private:
  std::map<std::string, Label> table_;
};

// Word-level language tag: a lowercase language code or "independent"
// (symbols, numerals, named entities the annotator left unassigned).
class LangTag {
 public:
  static LangTag independent() { return LangTag{}; }
  static LangTag lang(std::string_view code);  // lowercases; throws on empty code

  // Accepts a language code or one of "independent", "univ", "ind".
  static LangTag parse(std::string_view s);

  bool is_independent() const noexcept { return code_.empty(); }
  const std::string& code() const noexcept { return code_; }
  std::string to_string() const { return is_independent() ? "independent" : code_; }

  friend bool operator==(const LangTag&, const LangTag&) = default;

 private:
  std::string code_;
};

enum class SourceKind : std::uint8_t { CodeMixed, Hindi, English, Other };

struct Source {
  SourceKind kind = SourceKind::CodeMixed;
  std::string other;  // only meaningful for Other

  static Source parse(std::string_view s);
  std::string to_string() const;
  friend bool operator==(const Source&, const Source&) = default;
};

struct Sample {
  std::string id;
  std::string text;
  Label label = Label::NonHate;
  std::optional<std::vector<LangTag>> lang_tags;
  Source source;

  friend bool operator==(const Sample&, const Sample&) = default;
};

// Immutable ordered collection of validated samples.
class Corpus {
 public:
  Corpus() = default;
  // Throws InvalidSample (empty text, tag/token length mismatch) or DuplicateId.
  Corpus(std::string name, std::vector<Sample> samples);

  const std::string& name() const noexcept { return name_; }
  std::span<const Sample> samples() const noexcept { return samples_; }
  const Sample& operator[](std::size_t i) const { return samples_[i]; }
  std::size_t size() const noexcept { return samples_.size(); }
  bool empty() const noexcept { return samples_.empty(); }
  const LabelCounts& counts() const noexcept { return counts_; }

  Corpus renamed(std::string name) const;

  friend bool operator==(const Corpus&, const Corpus&) = default;

 private:
  std::string name_;
  std::vector<Sample> samples_;
  LabelCounts counts_;
};

enum class RecordFormat { Jsonl, Csv };

RecordFormat parse_record_format(std::string_view s);
// Picks CSV for *.csv and JSONL otherwise.
RecordFormat format_from_extension(const std::filesystem::path& path);

struct LoadOptions {
  Source source;
  LabelParser labels;
  // Corpus name; defaults to the file stem.
  std::optional<std::string> name;
};

// Reads one record per line (JSONL) or per CSV row. Records lacking an id get
// "<corpus-name>-<ordinal>". A record-level "source" field overrides
// options.source. Throws MalformedRecord, DuplicateId, UnknownLabel.
Corpus load_corpus(const std::filesystem::path& path, RecordFormat format, const LoadOptions& options);
Corpus load_corpus(const std::filesystem::path& path, RecordFormat format, Source source);

Corpus parse_corpus(std::istream& in, RecordFormat format, const std::string& name,
                    const LoadOptions& options);

// Canonical JSONL: {"id","text","label","source","lang_tags"?} per line.
void write_jsonl(std::ostream& out, const Corpus& corpus);
void save_jsonl(const std::filesystem::path& path, const Corpus& corpus);
std::string to_jsonl(const Corpus& corpus);

struct LabelShare {
  std::size_t count = 0;
  double fraction = 0.0;
};

std::map<Label, LabelShare> label_distribution(const Corpus& corpus);

}  // namespace cmhate
