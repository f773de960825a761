#include <gtest/gtest.h>

#include <cmath>

#include "corchete/client.hpp"
#include "stub_server.hpp"

using namespace corchete::client;
using testsupport::StubServer;
using namespace std::chrono_literals;

namespace {

EndpointConfig config_for(const StubServer& s, double timeout_s = 10.0) {
  EndpointConfig c;
  c.base_url = s.url();
  c.timeout_s = timeout_s;
  return c;
}

// a port with nothing listening on it
int closed_port() {
  StubServer s(StubServer::flat("X"));
  return s.port();
}

std::vector<SentenceInput> numbered(std::size_t n) {
  std::vector<SentenceInput> out;
  for (std::size_t i = 0; i < n; ++i) out.push_back({"id" + std::to_string(i), "w" + std::to_string(i) + " x"});
  return out;
}

}  // namespace

TEST(Client, EchoStubRoundTrip) {
  StubServer s(StubServer::echo({{"el gato", "[S [NP el gato]]"}}));
  const auto r = predict("el gato", config_for(s), "a#1");
  ASSERT_TRUE(r.ok()) << (r.error ? r.error->message : "");
  EXPECT_EQ(*r.raw, "[S [NP el gato]]");
  EXPECT_EQ(r.id, "a#1");
  EXPECT_EQ(r.attempts, 1u);
  EXPECT_GT(r.latency_s, 0.0);
}

TEST(Client, RequestBodyFields) {
  StubServer s(StubServer::flat("X"));
  auto cfg = config_for(s);
  cfg.max_new_tokens = 77;
  cfg.temperature = 0.5;
  ASSERT_TRUE(predict("hola", cfg).ok());
  const auto body = s.last_body();
  EXPECT_EQ(body["prompt"], "<s>hola</s>\n<s>");
  EXPECT_EQ(body["max_new_tokens"], 77);
  EXPECT_EQ(body["stop"], (nlohmann::json{"</s>"}));
  EXPECT_EQ(body["temperature"], 0.5);
  EXPECT_EQ(nlohmann::json::parse(request_body("hola", cfg)), body);
}

TEST(Client, BaseUrlPathPrefix) {
  StubServer s(StubServer::flat("X"));
  auto cfg = config_for(s);
  cfg.base_url = s.url() + "/v1/";
  ASSERT_TRUE(predict("hola", cfg).ok());
  cfg.base_url = s.url() + "/nope";
  const auto r = predict("hola", cfg);
  ASSERT_FALSE(r.ok());
  EXPECT_EQ(r.error->kind, ErrorKind::NonSuccessStatus);
}

TEST(Client, UnreachableHostIsTransportAndRetriedOnce) {
  EndpointConfig cfg;
  cfg.base_url = "http://127.0.0.1:" + std::to_string(closed_port());
  cfg.timeout_s = 2.0;
  const auto r = predict("hola", cfg);
  ASSERT_FALSE(r.ok());
  EXPECT_EQ(r.error->kind, ErrorKind::Transport);
  EXPECT_EQ(r.attempts, 2u);
}

TEST(Client, SlowServerIsTimeout) {
  StubServer s(StubServer::flat("X"), 1500ms);
  const auto r = predict("hola", config_for(s, 0.3));
  ASSERT_FALSE(r.ok());
  EXPECT_EQ(r.error->kind, ErrorKind::Timeout);
  EXPECT_EQ(r.attempts, 1u);
  EXPECT_LT(r.latency_s, 1.4);
}

TEST(Client, ServerErrorAndMalformedBody) {
  StubServer failing([](const std::string&, std::size_t) -> std::optional<std::string> { return std::nullopt; });
  auto r = predict("hola", config_for(failing));
  ASSERT_FALSE(r.ok());
  EXPECT_EQ(r.error->kind, ErrorKind::NonSuccessStatus);
  EXPECT_EQ(r.error->message, "HTTP 500");

  httplib::Server raw;
  raw.Post("/generate", [](const httplib::Request&, httplib::Response& res) {
    res.set_content(R"({"generated": "[X a]"})", "application/json");
  });
  const int port = raw.bind_to_any_port("127.0.0.1");
  std::thread t([&] { raw.listen_after_bind(); });
  raw.wait_until_ready();
  EndpointConfig cfg;
  cfg.base_url = "http://127.0.0.1:" + std::to_string(port);
  r = predict("hola", cfg);
  raw.stop();
  t.join();
  ASSERT_FALSE(r.ok());
  EXPECT_EQ(r.error->kind, ErrorKind::MalformedResponse);
}

TEST(Batch, EverySecondRequestFails) {
  StubServer s([](const std::string& sentence, std::size_t n) -> std::optional<std::string> {
    if (n % 2 == 1) return std::nullopt;
    return "[X " + sentence + "]";
  });
  auto cfg = config_for(s);
  cfg.max_in_flight = 1;  // request numbers follow input order
  const auto inputs = numbered(10);
  const auto batch = predict_corpus(inputs, cfg);
  ASSERT_EQ(batch.records.size(), 10u);
  for (std::size_t i = 0; i < 10; ++i) {
    EXPECT_EQ(batch.records[i].id, inputs[i].id);
    EXPECT_EQ(batch.records[i].ok(), i % 2 == 0);
    if (batch.records[i].ok()) EXPECT_EQ(*batch.records[i].raw, "[X " + inputs[i].sentence + "]");
  }
  EXPECT_EQ(batch.summary.successes, 5u);
  EXPECT_EQ(batch.summary.failures, 5u);
}

TEST(Batch, ConcurrencyIsBoundedAndOrderKept) {
  StubServer s(StubServer::flat("X"), 20ms);
  auto cfg = config_for(s);
  cfg.max_in_flight = 4;
  const auto inputs = numbered(100);
  const auto batch = predict_corpus(inputs, cfg);
  EXPECT_EQ(s.requests(), 100u);
  EXPECT_LE(s.peak_in_flight(), 4u);
  EXPECT_GE(s.peak_in_flight(), 2u);
  for (std::size_t i = 0; i < inputs.size(); ++i) {
    ASSERT_TRUE(batch.records[i].ok());
    EXPECT_EQ(batch.records[i].id, inputs[i].id);
    EXPECT_EQ(*batch.records[i].raw, "[X " + inputs[i].sentence + "]");
  }
}

TEST(Batch, EmptyInput) {
  EXPECT_THROW(predict_corpus({}, EndpointConfig{}), EmptyInputError);
}

TEST(Summary, RecomputedFromRecords) {
  std::vector<PredictionRecord> rs(5);
  const double lat[] = {0.4, 0.1, 0.3, 9.0, 0.2};
  for (std::size_t i = 0; i < 5; ++i) {
    rs[i].latency_s = lat[i];
    if (i != 3) rs[i].raw = "[X a]";
  }
  const auto s = summarize(rs);
  EXPECT_EQ(s.successes, 4u);
  EXPECT_EQ(s.failures, 1u);
  EXPECT_NEAR(s.mean_s, (0.4 + 0.1 + 0.3 + 0.2) / 4, 1e-12);
  EXPECT_NEAR(s.p50_s, 0.25, 1e-12);
  EXPECT_NEAR(s.p95_s, 0.3 + 0.1 * 0.85, 1e-12);
}

TEST(Summary, Percentile) {
  EXPECT_EQ(percentile({}, 0.5), 0.0);
  EXPECT_EQ(percentile({7.0}, 0.95), 7.0);
  EXPECT_DOUBLE_EQ(percentile({1, 2, 3, 4}, 0.5), 2.5);
  EXPECT_DOUBLE_EQ(percentile({4, 3, 2, 1}, 1.0), 4.0);
  EXPECT_DOUBLE_EQ(percentile({1, 2, 3, 4, 5, 6, 7, 8, 9, 10, 11}, 0.95), 10.5);
}

TEST(Jsonl, RoundTrip) {
  PredictionRecord ok;
  ok.id = "a.xml#3";
  ok.raw = "[S \"x\" ñ]\n";
  ok.latency_s = 0.125;
  ok.attempts = 1;
  PredictionRecord bad;
  bad.id = "b";
  bad.error = PredictionError{ErrorKind::Timeout, "slow"};
  bad.attempts = 1;
  for (const auto& r : {ok, bad}) {
    const auto line = record_to_jsonl(r);
    EXPECT_EQ(line.find('\n'), std::string::npos);
    const auto back = record_from_jsonl(line);
    EXPECT_EQ(back.id, r.id);
    EXPECT_EQ(back.raw, r.raw);
    EXPECT_EQ(back.error.has_value(), r.error.has_value());
    if (r.error) EXPECT_EQ(back.error->kind, r.error->kind);
    EXPECT_EQ(back.latency_s, r.latency_s);
    EXPECT_EQ(record_to_jsonl(back), line);
  }
}

TEST(Config, Validation) {
  EndpointConfig c;
  EXPECT_NO_THROW(c.validate());
  c.timeout_s = 0;
  EXPECT_THROW(c.validate(), ConfigError);
  c = {};
  c.max_in_flight = 0;
  EXPECT_THROW(c.validate(), ConfigError);
  c = {};
  c.prompt_template = "no slot";
  EXPECT_THROW(c.validate(), ConfigError);
  c.prompt_template = "{sentence} {sentence}";
  EXPECT_THROW(c.validate(), ConfigError);
  c = {};
  c.prompt_template = "Parse: {sentence}\n";
  EXPECT_EQ(c.render_prompt("a b"), "Parse: a b\n");
}
