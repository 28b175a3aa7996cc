// SPDX-License-Identifier: Apache-2.0
//
// Error types shared by every module. Domain failures derive from
// cmhate::Error; violated preconditions throw std::invalid_argument.

#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace cmhate {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Configuration or command-line validation failure (CLI exit code 1).
class ConfigError : public Error {
 public:
  using Error::Error;
};

class MalformedRecord : public Error {
 public:
  MalformedRecord(std::size_t line, std::string reason)
      : Error("malformed record at line " + std::to_string(line) + ": " + reason),
        line_(line),
        reason_(std::move(reason)) {}
  std::size_t line() const noexcept { return line_; }
  const std::string& reason() const noexcept { return reason_; }

 private:
  std::size_t line_;
  std::string reason_;
};

class DuplicateId : public Error {
 public:
  explicit DuplicateId(std::string id) : Error("duplicate sample id '" + id + "'"), id_(std::move(id)) {}
  const std::string& id() const noexcept { return id_; }

 private:
  std::string id_;
};

class UnknownLabel : public Error {
 public:
  explicit UnknownLabel(std::string label)
      : Error("unknown label '" + label + "'"), label_(std::move(label)) {}
  const std::string& label() const noexcept { return label_; }

 private:
  std::string label_;
};

class InvalidSample : public Error {
 public:
  InvalidSample(const std::string& id, const std::string& reason)
      : Error("invalid sample '" + id + "': " + reason) {}
};

class EmptyLexiconSet : public Error {
 public:
  EmptyLexiconSet() : Error("heuristic tagger needs at least one lexicon") {}
};

class EmptyStratum : public Error {
 public:
  explicit EmptyStratum(std::string label)
      : Error("no samples with label '" + label + "'"), label_(std::move(label)) {}
  const std::string& label() const noexcept { return label_; }

 private:
  std::string label_;
};

class InsufficientSamples : public Error {
 public:
  InsufficientSamples(std::string corpus, std::string label, std::size_t wanted, std::size_t available)
      : Error("corpus '" + corpus + "' has " + std::to_string(available) + " '" + label +
              "' samples available, " + std::to_string(wanted) + " requested"),
        corpus_(std::move(corpus)),
        label_(std::move(label)),
        wanted_(wanted),
        available_(available) {}
  const std::string& corpus() const noexcept { return corpus_; }
  const std::string& label() const noexcept { return label_; }
  std::size_t wanted() const noexcept { return wanted_; }
  std::size_t available() const noexcept { return available_; }

 private:
  std::string corpus_;
  std::string label_;
  std::size_t wanted_;
  std::size_t available_;
};

class EmptyTagSequence : public Error {
 public:
  EmptyTagSequence() : Error("empty language tag sequence") {}
};

class NoSpans : public Error {
 public:
  NoSpans() : Error("profile has no language spans") {}
};

class NoTaggedSamples : public Error {
 public:
  NoTaggedSamples() : Error("no sample carries usable language tags") {}
};

class EmptyTrainingSet : public Error {
 public:
  EmptyTrainingSet() : Error("training set has no non-empty document") {}
};

class SingleClassTrainingSet : public Error {
 public:
  SingleClassTrainingSet() : Error("training set must contain both labels") {}
};

class LengthMismatch : public Error {
 public:
  LengthMismatch(std::size_t gold, std::size_t pred)
      : Error("gold has " + std::to_string(gold) + " labels, predictions have " + std::to_string(pred)) {}
};

class DegenerateVariance : public Error {
 public:
  DegenerateVariance() : Error("both samples have zero variance") {}
};

class MixedCell : public Error {
 public:
  MixedCell() : Error("run reports belong to different (model, training set) cells") {}
};

}  // namespace cmhate
