#include "corchete/client.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <thread>

#include <httplib.h>
#include <json.hpp>

namespace corchete::client {

namespace {

constexpr std::string_view kSlot = "{sentence}";

struct Target {
  std::string origin;  // scheme://host[:port]
  std::string path;    // request path
};

Target resolve_target(const std::string& base_url) {
  Target t;
  const auto scheme_end = base_url.find("://");
  const auto path_start = base_url.find('/', scheme_end == std::string::npos ? 0 : scheme_end + 3);
  t.origin = base_url.substr(0, path_start);
  std::string prefix = path_start == std::string::npos ? std::string() : base_url.substr(path_start);
  while (!prefix.empty() && prefix.back() == '/') prefix.pop_back();
  t.path = prefix + "/generate";
  return t;
}

void set_timeouts(httplib::Client& cli, double seconds) {
  const auto whole = static_cast<time_t>(seconds);
  const auto micros = static_cast<time_t>(std::llround((seconds - static_cast<double>(whole)) * 1e6));
  cli.set_connection_timeout(whole, micros);
  cli.set_read_timeout(whole, micros);
  cli.set_write_timeout(whole, micros);
}

}  // namespace

void EndpointConfig::validate() const {
  if (!(timeout_s > 0.0)) throw ConfigError("timeout must be positive");
  if (max_in_flight < 1) throw ConfigError("max in-flight requests must be at least 1");
  const auto first = prompt_template.find(kSlot);
  if (first == std::string::npos || prompt_template.find(kSlot, first + 1) != std::string::npos)
    throw ConfigError("prompt template must contain exactly one {sentence} slot");
  if (base_url.empty()) throw ConfigError("endpoint URL is empty");
}

std::string EndpointConfig::render_prompt(std::string_view sentence) const {
  std::string out = prompt_template;
  const auto pos = out.find(kSlot);
  out.replace(pos, kSlot.size(), sentence);
  return out;
}

std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::Timeout: return "Timeout";
    case ErrorKind::Transport: return "Transport";
    case ErrorKind::NonSuccessStatus: return "NonSuccessStatus";
    case ErrorKind::MalformedResponse: return "MalformedResponse";
  }
  return "Unknown";
}

std::string request_body(std::string_view sentence, const EndpointConfig& cfg) {
  nlohmann::ordered_json j;
  j["prompt"] = cfg.render_prompt(sentence);
  j["max_new_tokens"] = cfg.max_new_tokens;
  j["stop"] = nlohmann::json::array({cfg.stop});
  j["temperature"] = cfg.temperature;
  return j.dump();
}

PredictionRecord predict(std::string_view sentence, const EndpointConfig& cfg, std::string id) {
  cfg.validate();
  PredictionRecord record;
  record.id = std::move(id);
  const Target target = resolve_target(cfg.base_url);
  const std::string body = request_body(sentence, cfg);

  using clock = std::chrono::steady_clock;
  const auto start = clock::now();
  auto elapsed = [&] { return std::chrono::duration<double>(clock::now() - start).count(); };

  for (unsigned attempt = 1; attempt <= 2; ++attempt) {
    record.attempts = attempt;
    const auto attempt_start = clock::now();
    httplib::Client cli(target.origin);
    if (!cli.is_valid()) {
      record.error = PredictionError{ErrorKind::Transport, "unsupported endpoint URL '" + cfg.base_url + "'"};
      break;
    }
    set_timeouts(cli, cfg.timeout_s);
    auto res = cli.Post(target.path, body, "application/json");
    if (!res) {
      const auto err = res.error();
      const double attempt_s = std::chrono::duration<double>(clock::now() - attempt_start).count();
      const bool timed_out = err == httplib::Error::ConnectionTimeout ||
                             ((err == httplib::Error::Read || err == httplib::Error::Write) &&
                              attempt_s >= 0.9 * cfg.timeout_s);
      if (timed_out) {
        record.error = PredictionError{ErrorKind::Timeout, "no response within " + std::to_string(cfg.timeout_s) + " s"};
        break;
      }
      record.error = PredictionError{ErrorKind::Transport, httplib::to_string(err)};
      continue;
    }
    if (res->status < 200 || res->status >= 300) {
      record.error = PredictionError{ErrorKind::NonSuccessStatus, "HTTP " + std::to_string(res->status)};
      break;
    }
    try {
      const auto j = nlohmann::json::parse(res->body);
      if (!j.is_object() || !j.contains("text") || !j["text"].is_string()) {
        record.error = PredictionError{ErrorKind::MalformedResponse, "response lacks a string 'text' field"};
      } else {
        record.raw = j["text"].get<std::string>();
        record.error.reset();
      }
    } catch (const nlohmann::json::exception& e) {
      record.error = PredictionError{ErrorKind::MalformedResponse, e.what()};
    }
    break;
  }
  record.latency_s = elapsed();
  return record;
}

double percentile(std::vector<double> values, double q) {
  if (values.empty()) return 0.0;
  std::sort(values.begin(), values.end());
  const double pos = std::clamp(q, 0.0, 1.0) * static_cast<double>(values.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const std::size_t hi = std::min(lo + 1, values.size() - 1);
  const double frac = pos - static_cast<double>(lo);
  return values[lo] + (values[hi] - values[lo]) * frac;
}

LatencySummary summarize(const std::vector<PredictionRecord>& records) {
  LatencySummary s;
  std::vector<double> ok;
  for (const auto& r : records) {
    if (r.ok())
      ok.push_back(r.latency_s);
    else
      ++s.failures;
  }
  s.successes = ok.size();
  if (!ok.empty()) {
    double sum = 0.0;
    for (double v : ok) sum += v;
    s.mean_s = sum / static_cast<double>(ok.size());
    s.p50_s = percentile(ok, 0.50);
    s.p95_s = percentile(ok, 0.95);
  }
  return s;
}

BatchResult predict_corpus(const std::vector<SentenceInput>& inputs, const EndpointConfig& cfg) {
  if (inputs.empty()) throw EmptyInputError();
  cfg.validate();
  BatchResult result;
  result.records.resize(inputs.size());

  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < inputs.size(); i = next++)
      result.records[i] = predict(inputs[i].sentence, cfg, inputs[i].id);
  };
  const std::size_t workers = std::min(cfg.max_in_flight, inputs.size());
  std::vector<std::jthread> pool;
  pool.reserve(workers);
  for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(worker);
  pool.clear();

  result.summary = summarize(result.records);
  return result;
}

std::string record_to_jsonl(const PredictionRecord& r) {
  nlohmann::ordered_json j;
  j["id"] = r.id;
  j["raw"] = r.raw ? nlohmann::ordered_json(*r.raw) : nlohmann::ordered_json(nullptr);
  if (r.error)
    j["error"] = {{"kind", std::string(to_string(r.error->kind))}, {"message", r.error->message}};
  else
    j["error"] = nullptr;
  j["latency_s"] = r.latency_s;
  j["attempts"] = r.attempts;
  return j.dump();
}

PredictionRecord record_from_jsonl(std::string_view line) {
  const auto j = nlohmann::json::parse(line);
  PredictionRecord r;
  r.id = j.value("id", "");
  if (j.contains("raw") && j["raw"].is_string()) r.raw = j["raw"].get<std::string>();
  if (j.contains("error") && j["error"].is_object()) {
    const std::string kind = j["error"].value("kind", "Transport");
    ErrorKind k = ErrorKind::Transport;
    for (auto candidate : {ErrorKind::Timeout, ErrorKind::Transport, ErrorKind::NonSuccessStatus, ErrorKind::MalformedResponse})
      if (to_string(candidate) == kind) k = candidate;
    r.error = PredictionError{k, j["error"].value("message", "")};
  }
  r.latency_s = j.value("latency_s", 0.0);
  r.attempts = j.value("attempts", 0u);
  return r;
}

std::string summary_to_json(const LatencySummary& s) {
  nlohmann::ordered_json j;
  j["successes"] = s.successes;
  j["failures"] = s.failures;
  j["mean_s"] = s.mean_s;
  j["p50_s"] = s.p50_s;
  j["p95_s"] = s.p95_s;
  return j.dump(2);
}

}  // namespace corchete::client
