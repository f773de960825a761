#include "corchete/evaluator.hpp"

#include <algorithm>
#include <cstdio>
#include <sstream>

#include <json.hpp>

namespace corchete::eval {

namespace {

double ratio(std::size_t num, std::size_t den) noexcept {
  return den == 0 ? 0.0 : static_cast<double>(num) / static_cast<double>(den);
}

std::string pad(const std::string& s, std::size_t width, bool right_align) {
  if (s.size() >= width) return s;
  const std::string fill(width - s.size(), ' ');
  return right_align ? fill + s : s + fill;
}

}  // namespace

double SentenceScore::precision() const noexcept { return ratio(matched, pred_count); }
double SentenceScore::recall() const noexcept { return ratio(matched, gold_count); }
double SentenceScore::f1() const noexcept { return f_measure(precision(), recall()); }

double f_measure(double precision, double recall) noexcept {
  const double sum = precision + recall;
  return sum == 0.0 ? 0.0 : 2.0 * precision * recall / sum;
}

std::size_t count_matches(const std::vector<LabeledSpan>& gold, const std::vector<LabeledSpan>& pred) {
  std::size_t matched = 0;
  auto g = gold.begin();
  auto p = pred.begin();
  while (g != gold.end() && p != pred.end()) {
    if (*g < *p) {
      ++g;
    } else if (*p < *g) {
      ++p;
    } else {
      ++matched;
      ++g;
      ++p;
    }
  }
  return matched;
}

SentenceScore score_pair(const SyntaxTree& gold, const std::optional<SyntaxTree>& pred, const EvalConfig& config) {
  const auto gold_spans = extract_spans(gold, config.include_preterminals, config.ignore_labels);
  SentenceScore score;
  score.gold_count = gold_spans.size();
  if (!pred) {
    score.failed = true;
    return score;
  }
  const auto pred_spans = extract_spans(*pred, config.include_preterminals, config.ignore_labels);
  score.pred_count = pred_spans.size();
  score.matched = count_matches(gold_spans, pred_spans);
  score.yield_mismatch = gold.leaf_count() != pred->leaf_count();
  return score;
}

EvalReport aggregate(std::vector<SentenceScore> sentences, const EvalConfig& config) {
  if (sentences.empty()) throw EmptyInputError();
  EvalReport report;
  report.config = config;
  double p_sum = 0.0, r_sum = 0.0, f_sum = 0.0;
  for (const auto& s : sentences) {
    report.matched += s.matched;
    report.gold_count += s.gold_count;
    report.pred_count += s.pred_count;
    report.failure_count += s.failed ? 1 : 0;
    report.yield_mismatch_count += s.yield_mismatch ? 1 : 0;
    p_sum += s.precision();
    r_sum += s.recall();
    f_sum += s.f1();
  }
  if (config.aggregation == Aggregation::Micro) {
    report.precision = ratio(report.matched, report.pred_count);
    report.recall = ratio(report.matched, report.gold_count);
    report.f1 = f_measure(report.precision, report.recall);
  } else {
    const auto n = static_cast<double>(sentences.size());
    report.precision = p_sum / n;
    report.recall = r_sum / n;
    report.f1 = f_sum / n;
  }
  report.sentences = std::move(sentences);
  return report;
}

EvalReport score_corpus(const std::vector<ScoredPair>& pairs, const EvalConfig& config) {
  std::vector<SentenceScore> scores;
  scores.reserve(pairs.size());
  for (const auto& p : pairs) scores.push_back(score_pair(p.gold, p.pred, config));
  return aggregate(std::move(scores), config);
}

std::string format_score(double value) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.4f", value);
  return buf;
}

std::string report_to_json(const EvalReport& report, const std::string& model_name) {
  nlohmann::ordered_json j;
  if (!model_name.empty()) j["model"] = model_name;
  j["precision"] = report.precision;
  j["recall"] = report.recall;
  j["f1"] = report.f1;
  j["f1_display"] = format_score(report.f1);
  j["matched"] = report.matched;
  j["gold_count"] = report.gold_count;
  j["pred_count"] = report.pred_count;
  j["sentence_count"] = report.sentences.size();
  j["failure_count"] = report.failure_count;
  j["yield_mismatch_count"] = report.yield_mismatch_count;
  auto& cfg = j["config"];
  cfg["include_preterminals"] = report.config.include_preterminals;
  cfg["ignore_labels"] = std::vector<std::string>(report.config.ignore_labels.begin(), report.config.ignore_labels.end());
  cfg["aggregation"] = report.config.aggregation == Aggregation::Micro ? "micro" : "macro";
  auto& per = j["sentences"] = nlohmann::ordered_json::array();
  for (const auto& s : report.sentences) {
    nlohmann::ordered_json row;
    row["matched"] = s.matched;
    row["gold"] = s.gold_count;
    row["pred"] = s.pred_count;
    row["failed"] = s.failed;
    row["yield_mismatch"] = s.yield_mismatch;
    per.push_back(std::move(row));
  }
  return j.dump(2);
}

std::string report_table(const std::vector<TableRow>& rows) {
  const std::vector<std::string> header{"Model", "Memory", "Time", "Precision", "Recall", "F1"};
  std::vector<std::vector<std::string>> cells;
  for (const auto& row : rows) {
    std::string time = "-";
    if (row.mean_latency_s) {
      char buf[32];
      std::snprintf(buf, sizeof buf, "%.4f s.", *row.mean_latency_s);
      time = buf;
    }
    cells.push_back({row.model.empty() ? "-" : row.model, "-", time, format_score(row.report.precision),
                     format_score(row.report.recall), format_score(row.report.f1)});
  }
  std::vector<std::size_t> width(header.size());
  for (std::size_t c = 0; c < header.size(); ++c) {
    width[c] = header[c].size();
    for (const auto& r : cells) width[c] = std::max(width[c], r[c].size());
  }
  std::ostringstream out;
  auto emit = [&](const std::vector<std::string>& r) {
    for (std::size_t c = 0; c < r.size(); ++c) {
      if (c) out << "  ";
      out << pad(r[c], width[c], c > 0);
    }
    out << '\n';
  };
  emit(header);
  std::size_t total = 0;
  for (auto w : width) total += w;
  out << std::string(total + 2 * (width.size() - 1), '-') << '\n';
  for (const auto& r : cells) emit(r);
  return out.str();
}

}  // namespace corchete::eval
