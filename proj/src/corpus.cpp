// SPDX-License-Identifier: Apache-2.0

#include "cmhate/corpus.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <istream>
#include <sstream>
#include <stdexcept>
#include <unordered_set>

#include "cmhate/errors.hpp"
#include "cmhate/text.hpp"
#include "json.hpp"

namespace cmhate {
namespace {

std::string ascii_lower(std::string_view s) {
  std::string out(s);
  std::transform(out.begin(), out.end(), out.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return out;
}

struct RawRecord {
  std::size_t line = 0;
  std::optional<std::string> id;
  std::string text;
  std::string label;
  std::optional<std::vector<std::string>> lang_tags;
  std::optional<std::string> source;
};

std::string json_scalar_to_string(const nlohmann::json& v, std::size_t line, const char* field) {
  if (v.is_string()) return v.get<std::string>();
  if (v.is_number_integer()) return std::to_string(v.get<long long>());
  if (v.is_number_unsigned()) return std::to_string(v.get<unsigned long long>());
  throw MalformedRecord(line, std::string("field '") + field + "' must be a string or integer");
}

std::vector<RawRecord> read_jsonl(std::istream& in) {
  std::vector<RawRecord> records;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (text::trim(line).empty()) continue;
    nlohmann::json obj;
    try {
      obj = nlohmann::json::parse(line);
    } catch (const nlohmann::json::parse_error& e) {
      throw MalformedRecord(line_no, std::string("invalid JSON: ") + e.what());
    }
    if (!obj.is_object()) throw MalformedRecord(line_no, "record is not a JSON object");
    RawRecord r;
    r.line = line_no;
    if (!obj.contains("text")) throw MalformedRecord(line_no, "missing field 'text'");
    if (!obj["text"].is_string()) throw MalformedRecord(line_no, "field 'text' must be a string");
    r.text = obj["text"].get<std::string>();
    if (!obj.contains("label")) throw MalformedRecord(line_no, "missing field 'label'");
    r.label = json_scalar_to_string(obj["label"], line_no, "label");
    if (auto it = obj.find("id"); it != obj.end() && !it->is_null())
      r.id = json_scalar_to_string(*it, line_no, "id");
    if (auto it = obj.find("source"); it != obj.end() && !it->is_null()) {
      if (!it->is_string()) throw MalformedRecord(line_no, "field 'source' must be a string");
      r.source = it->get<std::string>();
    }
    if (auto it = obj.find("lang_tags"); it != obj.end() && !it->is_null()) {
      if (!it->is_array()) throw MalformedRecord(line_no, "field 'lang_tags' must be an array");
      std::vector<std::string> tags;
      for (const auto& t : *it) {
        if (!t.is_string()) throw MalformedRecord(line_no, "lang_tags entries must be strings");
        tags.push_back(t.get<std::string>());
      }
      r.lang_tags = std::move(tags);
    }
    records.push_back(std::move(r));
  }
  return records;
}

// RFC 4180 rows; quoted fields may span lines. Returns (first line, fields).
std::vector<std::pair<std::size_t, std::vector<std::string>>> read_csv_rows(std::istream& in) {
  std::vector<std::pair<std::size_t, std::vector<std::string>>> rows;
  std::string content((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  std::size_t line = 1;
  std::size_t i = 0;
  while (i < content.size()) {
    const std::size_t row_line = line;
    std::vector<std::string> fields;
    std::string field;
    bool row_done = false;
    while (!row_done) {
      if (i < content.size() && content[i] == '"') {
        ++i;
        for (;;) {
          if (i >= content.size()) throw MalformedRecord(row_line, "unterminated quoted field");
          const char c = content[i++];
          if (c == '"') {
            if (i < content.size() && content[i] == '"') {
              field.push_back('"');
              ++i;
            } else {
              break;
            }
          } else {
            if (c == '\n') ++line;
            field.push_back(c);
          }
        }
      }
      while (i < content.size() && content[i] != ',' && content[i] != '\n' && content[i] != '\r') {
        field.push_back(content[i++]);
      }
      fields.push_back(std::move(field));
      field.clear();
      if (i >= content.size()) {
        row_done = true;
      } else if (content[i] == ',') {
        ++i;
      } else {
        if (content[i] == '\r') ++i;
        if (i < content.size() && content[i] == '\n') ++i;
        ++line;
        row_done = true;
      }
    }
    const bool blank = fields.size() == 1 && text::trim(fields[0]).empty();
    if (!blank) rows.emplace_back(row_line, std::move(fields));
  }
  return rows;
}

std::vector<RawRecord> read_csv(std::istream& in) {
  auto rows = read_csv_rows(in);
  std::vector<RawRecord> records;
  if (rows.empty()) return records;

  std::map<std::string, std::size_t> columns;
  for (std::size_t c = 0; c < rows[0].second.size(); ++c) {
    columns[ascii_lower(text::trim(rows[0].second[c]))] = c;
  }
  auto column = [&](const char* name) -> std::optional<std::size_t> {
    auto it = columns.find(name);
    if (it == columns.end()) return std::nullopt;
    return it->second;
  };
  const auto text_col = column("text");
  const auto label_col = column("label");
  if (!text_col || !label_col) throw MalformedRecord(rows[0].first, "CSV header needs 'text' and 'label'");
  const auto id_col = column("id");
  const auto tags_col = column("lang_tags");
  const auto source_col = column("source");
  const std::size_t width = rows[0].second.size();

  for (std::size_t r = 1; r < rows.size(); ++r) {
    auto& [line, fields] = rows[r];
    if (fields.size() != width) {
      throw MalformedRecord(line, "expected " + std::to_string(width) + " fields, found " +
                                      std::to_string(fields.size()));
    }
    RawRecord rec;
    rec.line = line;
    rec.text = fields[*text_col];
    rec.label = text::trim(fields[*label_col]);
    if (id_col && !text::trim(fields[*id_col]).empty()) rec.id = text::trim(fields[*id_col]);
    if (source_col && !text::trim(fields[*source_col]).empty()) rec.source = text::trim(fields[*source_col]);
    if (tags_col && !text::trim(fields[*tags_col]).empty()) {
      std::vector<std::string> tags;
      for (auto t : text::split_whitespace(fields[*tags_col])) tags.emplace_back(t);
      rec.lang_tags = std::move(tags);
    }
    records.push_back(std::move(rec));
  }
  return records;
}

}  // namespace

std::string_view to_string(Label l) noexcept { return l == Label::Hate ? "hate" : "non-hate"; }

LabelParser::LabelParser()
    : table_{{"hate", Label::Hate},         {"1", Label::Hate},
             {"non-hate", Label::NonHate},  {"non_hate", Label::NonHate},
             {"nonhate", Label::NonHate},   {"0", Label::NonHate}} {}

LabelParser::LabelParser(std::map<std::string, Label> table) {
  for (auto& [k, v] : table) table_[ascii_lower(k)] = v;
}

Label LabelParser::parse(std::string_view raw) const {
  const std::string key = ascii_lower(text::trim(raw));
  auto it = table_.find(key);
  if (it == table_.end()) throw UnknownLabel(std::string(raw));
  return it->second;
}

LangTag LangTag::lang(std::string_view code) {
  std::string lowered = text::to_lower(text::trim(code));
  if (lowered.empty()) throw std::invalid_argument("language code must be non-empty");
  LangTag t;
  t.code_ = std::move(lowered);
  return t;
}

LangTag LangTag::parse(std::string_view s) {
  const std::string lowered = text::to_lower(text::trim(s));
  if (lowered == "independent" || lowered == "univ" || lowered == "ind") return independent();
  return lang(lowered);
}

Source Source::parse(std::string_view s) {
  const std::string key = ascii_lower(text::trim(s));
  if (key == "code-mixed" || key == "codemixed" || key == "code_mixed" || key == "cm")
    return {SourceKind::CodeMixed, {}};
  if (key == "hindi" || key == "hi") return {SourceKind::Hindi, {}};
  if (key == "english" || key == "en") return {SourceKind::English, {}};
  if (key.empty()) throw std::invalid_argument("empty source name");
  return {SourceKind::Other, std::string(text::trim(s))};
}

std::string Source::to_string() const {
  switch (kind) {
    case SourceKind::CodeMixed: return "code-mixed";
    case SourceKind::Hindi: return "hindi";
    case SourceKind::English: return "english";
    case SourceKind::Other: return other;
  }
  return other;
}

Corpus::Corpus(std::string name, std::vector<Sample> samples)
    : name_(std::move(name)), samples_(std::move(samples)) {
  std::unordered_set<std::string> seen;
  seen.reserve(samples_.size());
  for (const auto& s : samples_) {
    if (text::trim(s.text).empty()) throw InvalidSample(s.id, "empty text");
    if (s.lang_tags && s.lang_tags->size() != text::whitespace_token_count(s.text)) {
      throw InvalidSample(s.id, "lang_tags length differs from token count");
    }
    if (!seen.insert(s.id).second) throw DuplicateId(s.id);
    ++counts_[s.label];
  }
}

Corpus Corpus::renamed(std::string name) const {
  Corpus c = *this;
  c.name_ = std::move(name);
  return c;
}

RecordFormat parse_record_format(std::string_view s) {
  const std::string key = ascii_lower(s);
  if (key == "jsonl" || key == "json") return RecordFormat::Jsonl;
  if (key == "csv") return RecordFormat::Csv;
  throw std::invalid_argument("unknown record format '" + std::string(s) + "'");
}

RecordFormat format_from_extension(const std::filesystem::path& path) {
  return ascii_lower(path.extension().string()) == ".csv" ? RecordFormat::Csv : RecordFormat::Jsonl;
}

Corpus parse_corpus(std::istream& in, RecordFormat format, const std::string& name,
                    const LoadOptions& options) {
  const auto records = format == RecordFormat::Jsonl ? read_jsonl(in) : read_csv(in);
  std::vector<Sample> samples;
  samples.reserve(records.size());
  std::unordered_set<std::string> seen;
  std::size_t ordinal = 0;
  for (const auto& r : records) {
    ++ordinal;
    Sample s;
    s.id = r.id ? *r.id : name + "-" + std::to_string(ordinal);
    if (!seen.insert(s.id).second) throw DuplicateId(s.id);
    if (text::trim(r.text).empty()) throw MalformedRecord(r.line, "empty text");
    s.text = r.text;
    s.label = options.labels.parse(r.label);
    s.source = r.source ? Source::parse(*r.source) : options.source;
    if (r.lang_tags) {
      std::vector<LangTag> tags;
      tags.reserve(r.lang_tags->size());
      try {
        for (const auto& t : *r.lang_tags) tags.push_back(LangTag::parse(t));
      } catch (const std::invalid_argument& e) {
        throw MalformedRecord(r.line, e.what());
      }
      if (tags.size() != text::whitespace_token_count(s.text)) {
        throw MalformedRecord(r.line, "lang_tags has " + std::to_string(tags.size()) +
                                          " entries for " +
                                          std::to_string(text::whitespace_token_count(s.text)) +
                                          " tokens");
      }
      s.lang_tags = std::move(tags);
    }
    samples.push_back(std::move(s));
  }
  return Corpus(name, std::move(samples));
}

Corpus load_corpus(const std::filesystem::path& path, RecordFormat format, const LoadOptions& options) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open corpus file '" + path.string() + "'");
  const std::string name = options.name ? *options.name : path.stem().string();
  return parse_corpus(in, format, name, options);
}

Corpus load_corpus(const std::filesystem::path& path, RecordFormat format, Source source) {
  LoadOptions options;
  options.source = std::move(source);
  return load_corpus(path, format, options);
}

void write_jsonl(std::ostream& out, const Corpus& corpus) {
  for (const auto& s : corpus.samples()) {
    nlohmann::ordered_json obj;
    obj["id"] = s.id;
    obj["text"] = s.text;
    obj["label"] = std::string(to_string(s.label));
    obj["source"] = s.source.to_string();
    if (s.lang_tags) {
      auto tags = nlohmann::ordered_json::array();
      for (const auto& t : *s.lang_tags) tags.push_back(t.to_string());
      obj["lang_tags"] = std::move(tags);
    }
    out << obj.dump() << '\n';
  }
}

std::string to_jsonl(const Corpus& corpus) {
  std::ostringstream out;
  write_jsonl(out, corpus);
  return out.str();
}

void save_jsonl(const std::filesystem::path& path, const Corpus& corpus) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error("cannot write '" + path.string() + "'");
  write_jsonl(out, corpus);
}

std::map<Label, LabelShare> label_distribution(const Corpus& corpus) {
  std::map<Label, LabelShare> out;
  const auto total = corpus.size();
  for (Label l : kLabels) {
    const auto n = corpus.counts()[l];
    out[l] = {n, total == 0 ? 0.0 : static_cast<double>(n) / static_cast<double>(total)};
  }
  return out;
}

}  // namespace cmhate
