#pragma once

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace corchete::client {

class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

struct EndpointConfig {
  std::string base_url = "http://127.0.0.1:8080";
  double timeout_s = 120.0;
  std::size_t max_in_flight = 4;
  std::size_t max_new_tokens = 1024;
  std::string stop = "</s>";
  double temperature = 0.0;
  std::string prompt_template = "<s>{sentence}</s>\n<s>";

  /// Throws ConfigError when an invariant does not hold.
  void validate() const;
  std::string render_prompt(std::string_view sentence) const;
};

enum class ErrorKind { Timeout, Transport, NonSuccessStatus, MalformedResponse };

std::string_view to_string(ErrorKind kind);

struct PredictionError {
  ErrorKind kind;
  std::string message;
};

struct PredictionRecord {
  std::string id;
  std::optional<std::string> raw;
  std::optional<PredictionError> error;
  double latency_s = 0.0;  // wall clock, retries included
  unsigned attempts = 0;

  bool ok() const noexcept { return raw.has_value(); }
};

/// JSON body sent to `{base}/generate`.
std::string request_body(std::string_view sentence, const EndpointConfig& cfg);

/// One request. Transport failures are retried once; nothing is thrown.
PredictionRecord predict(std::string_view sentence, const EndpointConfig& cfg, std::string id = {});

struct LatencySummary {
  std::size_t successes = 0;
  std::size_t failures = 0;
  double mean_s = 0.0;
  double p50_s = 0.0;
  double p95_s = 0.0;
};

/// Linear-interpolated percentile of `values` (q in [0, 1]).
double percentile(std::vector<double> values, double q);

LatencySummary summarize(const std::vector<PredictionRecord>& records);

struct SentenceInput {
  std::string id;
  std::string sentence;
};

struct BatchResult {
  std::vector<PredictionRecord> records;  // input order
  LatencySummary summary;
};

class EmptyInputError : public std::invalid_argument {
 public:
  EmptyInputError() : std::invalid_argument("EmptyInput: no sentences to send") {}
};

/// Sends every sentence with at most `cfg.max_in_flight` requests in flight.
BatchResult predict_corpus(const std::vector<SentenceInput>& inputs, const EndpointConfig& cfg);

/// One JSON object per line: id, raw, error, latency_s.
std::string record_to_jsonl(const PredictionRecord& record);
PredictionRecord record_from_jsonl(std::string_view line);
std::string summary_to_json(const LatencySummary& summary);

}  // namespace corchete::client
