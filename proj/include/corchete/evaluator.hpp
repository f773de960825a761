#pragma once

#include <cstddef>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "corchete/tree.hpp"

namespace corchete::eval {

enum class Aggregation { Micro, Macro };

struct EvalConfig {
  bool include_preterminals = false;
  std::set<std::string, std::less<>> ignore_labels{"Punct"};
  Aggregation aggregation = Aggregation::Micro;
};

struct SentenceScore {
  std::size_t matched = 0;
  std::size_t gold_count = 0;
  std::size_t pred_count = 0;
  bool failed = false;
  bool yield_mismatch = false;

  double precision() const noexcept;
  double recall() const noexcept;
  double f1() const noexcept;

  friend bool operator==(const SentenceScore&, const SentenceScore&) = default;
};

struct EvalReport {
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
  std::size_t matched = 0;
  std::size_t gold_count = 0;
  std::size_t pred_count = 0;
  std::size_t failure_count = 0;
  std::size_t yield_mismatch_count = 0;
  std::vector<SentenceScore> sentences;
  EvalConfig config;
};

class EmptyInputError : public std::invalid_argument {
 public:
  EmptyInputError() : std::invalid_argument("EmptyInput: no sentence pairs to score") {}
};

/// Harmonic mean with 0/0 taken as 0.
double f_measure(double precision, double recall) noexcept;

/// Size of the multiset intersection of two sorted span lists.
std::size_t count_matches(const std::vector<LabeledSpan>& gold, const std::vector<LabeledSpan>& pred);

/// `pred` is empty when the prediction could not be parsed.
SentenceScore score_pair(const SyntaxTree& gold, const std::optional<SyntaxTree>& pred, const EvalConfig& config = {});

struct ScoredPair {
  SyntaxTree gold;
  std::optional<SyntaxTree> pred;
};

EvalReport score_corpus(const std::vector<ScoredPair>& pairs, const EvalConfig& config = {});

/// Builds the report from already scored sentences.
EvalReport aggregate(std::vector<SentenceScore> sentences, const EvalConfig& config);

std::string report_to_json(const EvalReport& report, const std::string& model_name = {});

struct TableRow {
  std::string model;
  std::optional<double> mean_latency_s;
  EvalReport report;
};

/// Aligned text table: Model, Memory, Time, Precision, Recall, F1.
std::string report_table(const std::vector<TableRow>& rows);

/// Four-decimal rendering used everywhere F1 is printed.
std::string format_score(double value);

}  // namespace corchete::eval
