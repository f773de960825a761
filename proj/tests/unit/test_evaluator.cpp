#include <gtest/gtest.h>

#include <random>

#include <json.hpp>

#include "corchete/evaluator.hpp"
#include "corchete/tree.hpp"
#include "oracles.hpp"
#include "random_trees.hpp"

using namespace corchete;
using namespace corchete::eval;

namespace {

SyntaxTree T(std::string_view s) { return parse_bracketed(s); }

EvalConfig all_spans() {
  EvalConfig c;
  c.include_preterminals = true;
  c.ignore_labels.clear();
  return c;
}

const std::vector<std::string> kLabels = {"A", "B", "C", "Punct"};

std::pair<SyntaxTree, SyntaxTree> random_pair(std::mt19937_64& rng, std::size_t max_leaves = 8) {
  const std::size_t n = 1 + testsupport::pick(rng, max_leaves);
  const auto words = testsupport::random_words(rng, n);
  return {testsupport::random_bracketing(rng, words, kLabels), testsupport::random_bracketing(rng, words, kLabels)};
}

}  // namespace

TEST(ScorePair, IdentityMatchesEverything) {
  const auto t = T("[A [B x] [C y z]]");
  const auto s = score_pair(t, t, all_spans());
  EXPECT_EQ(s.matched, 3u);
  EXPECT_EQ(s.gold_count, 3u);
  EXPECT_EQ(s.pred_count, 3u);
  EXPECT_DOUBLE_EQ(s.f1(), 1.0);
}

TEST(ScorePair, RelabeledPreterminal) {
  const auto s = score_pair(T("[A [B x] y]"), T("[A [C x] y]"), all_spans());
  EXPECT_EQ(s.matched, 1u);
  EXPECT_EQ(s.gold_count, 2u);
  EXPECT_EQ(s.pred_count, 2u);
  EXPECT_DOUBLE_EQ(s.precision(), 0.5);
  EXPECT_DOUBLE_EQ(s.recall(), 0.5);
  EXPECT_DOUBLE_EQ(s.f1(), 0.5);
}

TEST(ScorePair, FailedPrediction) {
  const auto s = score_pair(T("[A [B x] [C y z]]"), std::nullopt, all_spans());
  EXPECT_TRUE(s.failed);
  EXPECT_EQ(s.matched, 0u);
  EXPECT_EQ(s.gold_count, 3u);
  EXPECT_EQ(s.pred_count, 0u);
  EXPECT_DOUBLE_EQ(s.f1(), 0.0);
}

TEST(ScorePair, DefaultConfigDropsPreterminalsAndPunct) {
  const auto s = score_pair(T("[S [NP [N a] [N b]] [Punct .]]"), T("[S [NP [N a] [N b]] [Punct .]]"));
  EXPECT_EQ(s.gold_count, 2u);  // S and NP
  EXPECT_EQ(s.matched, 2u);
}

TEST(ScorePair, YieldMismatchIsFlaggedNotFatal) {
  const auto s = score_pair(T("[A [B x] y]"), T("[A [B x] y z]"), all_spans());
  EXPECT_TRUE(s.yield_mismatch);
  EXPECT_EQ(s.matched, 1u);
}

TEST(FMeasure, ZeroOverZero) {
  EXPECT_EQ(f_measure(0.0, 0.0), 0.0);
  EXPECT_DOUBLE_EQ(f_measure(1.0, 0.5), 2.0 / 3.0);
}

TEST(Corpus, IdenticalAndFailed) {
  std::vector<ScoredPair> same, failed;
  for (const char* s : {"[A [B x] y]", "[S [NP a b] [VP c]]", "[X w]"}) {
    same.push_back({T(s), T(s)});
    failed.push_back({T(s), std::nullopt});
  }
  EXPECT_DOUBLE_EQ(score_corpus(same, all_spans()).f1, 1.0);
  const auto r = score_corpus(failed, all_spans());
  EXPECT_EQ(r.f1, 0.0);
  EXPECT_EQ(r.failure_count, 3u);
}

TEST(Corpus, EmptyInputThrows) { EXPECT_THROW(score_corpus({}), EmptyInputError); }

TEST(Corpus, MicroMatchesNaiveAggregator) {
  std::mt19937_64 rng(99);
  std::vector<ScoredPair> pairs;
  std::size_t m = 0, g = 0, p = 0;
  for (int i = 0; i < 20; ++i) {
    auto [gold, pred] = random_pair(rng);
    const bool fail = i % 7 == 3;
    const auto c = testsupport::naive_compare(gold, fail ? std::nullopt : std::optional(pred), false, {"Punct"});
    m += c.matched;
    g += c.gold;
    p += c.pred;
    pairs.push_back({gold, fail ? std::nullopt : std::optional(pred)});
  }
  const auto r = score_corpus(pairs);
  EXPECT_EQ(r.matched, m);
  EXPECT_EQ(r.gold_count, g);
  EXPECT_EQ(r.pred_count, p);
  EXPECT_DOUBLE_EQ(r.f1, testsupport::naive_f1(m, g, p));
}

TEST(Corpus, MacroIsMeanOfSentenceScores) {
  EvalConfig c = all_spans();
  c.aggregation = Aggregation::Macro;
  const std::vector<ScoredPair> pairs = {{T("[A [B x] y]"), T("[A [C x] y]")}, {T("[X w]"), T("[X w]")}};
  const auto r = score_corpus(pairs, c);
  EXPECT_DOUBLE_EQ(r.f1, (0.5 + 1.0) / 2);
  EXPECT_DOUBLE_EQ(r.precision, (0.5 + 1.0) / 2);
}

TEST(Properties, OracleEquivalenceSmallTrees) {
  std::mt19937_64 rng(1234);
  for (int i = 0; i < 500; ++i) {
    auto [gold, pred] = random_pair(rng);
    for (bool pre : {false, true}) {
      EvalConfig c;
      c.include_preterminals = pre;
      const auto s = score_pair(gold, pred, c);
      const auto o = testsupport::naive_compare(gold, pred, pre, {"Punct"});
      ASSERT_EQ(s.matched, o.matched) << serialize(gold) << " vs " << serialize(pred);
      ASSERT_EQ(s.gold_count, o.gold);
      ASSERT_EQ(s.pred_count, o.pred);
    }
  }
}

TEST(Properties, SwapSymmetryAndBounds) {
  std::mt19937_64 rng(77);
  for (int i = 0; i < 200; ++i) {
    auto [a, b] = random_pair(rng);
    const auto ab = score_pair(a, b, all_spans());
    const auto ba = score_pair(b, a, all_spans());
    EXPECT_DOUBLE_EQ(ab.precision(), ba.recall());
    EXPECT_DOUBLE_EQ(ab.recall(), ba.precision());
    EXPECT_DOUBLE_EQ(ab.f1(), ba.f1());
    for (double v : {ab.precision(), ab.recall(), ab.f1()}) {
      EXPECT_GE(v, 0.0);
      EXPECT_LE(v, 1.0);
    }
    EXPECT_LE(ab.matched, std::min(ab.gold_count, ab.pred_count));
  }
}

TEST(Properties, AddingACorrectSpanRaisesRecall) {
  // pred misses the B span; wrapping x in B adds one correct span
  const auto gold = T("[A [B x y] z]");
  const auto before = score_pair(gold, T("[A x y z]"), all_spans());
  const auto after = score_pair(gold, T("[A [B x y] z]"), all_spans());
  EXPECT_EQ(after.matched, before.matched + 1);
  EXPECT_EQ(after.pred_count, before.pred_count + 1);
  EXPECT_GT(after.recall(), before.recall());
  EXPECT_GE(after.f1(), before.f1());
}

TEST(Report, JsonEchoesConfig) {
  EvalConfig c;
  c.ignore_labels = {"Punct", "X"};
  const auto r = score_corpus({{T("[A [B x] y]"), T("[A [B x] y]")}}, c);
  const auto j = nlohmann::json::parse(report_to_json(r, "m"));
  EXPECT_EQ(j["model"], "m");
  EXPECT_EQ(j["f1"], 1.0);
  EXPECT_EQ(j["config"]["include_preterminals"], false);
  EXPECT_EQ(j["config"]["ignore_labels"], (nlohmann::json{"Punct", "X"}));
  EXPECT_EQ(j["config"]["aggregation"], "micro");
}

TEST(Report, TableUsesFourDecimals) {
  EXPECT_EQ(format_score(0.81414), "0.8141");
  EXPECT_EQ(format_score(1.0), "1.0000");
  const auto r = score_corpus({{T("[A [B x] y]"), T("[A [C x] y]")}}, all_spans());
  const auto table = report_table({{"gpt2-large", 0.25, r}});
  EXPECT_NE(table.find("gpt2-large"), std::string::npos);
  EXPECT_NE(table.find("0.5000"), std::string::npos);
  EXPECT_NE(table.find("F1"), std::string::npos);
}
