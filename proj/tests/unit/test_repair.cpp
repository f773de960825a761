#include <gtest/gtest.h>

#include <random>

#include "corchete/repair.hpp"
#include "random_trees.hpp"

using namespace corchete;
using repair::check_alignment;
using repair::RepairAction;
using repair::RepairOutcome;
using repair::WordRule;
using repair::to_string;

namespace {

using A = RepairAction;

RepairOutcome fix(std::string_view raw) { return repair::repair(raw); }

bool is_prefix(const std::vector<std::string>& p, const std::vector<std::string>& full) {
  return p.size() <= full.size() && std::equal(p.begin(), p.end(), full.begin());
}

}  // namespace

TEST(Repair, StripsMarkersAndTrailingText) {
  const auto r = fix("<s>[X hola]</s> extra text");
  ASSERT_TRUE(r.repaired);
  EXPECT_EQ(*r.repaired, "[X hola]");
  EXPECT_EQ(r.actions, (std::vector<A>{A::MarkerStrip, A::Truncate}));
  EXPECT_FALSE(r.fatal);
}

TEST(Repair, ClosesOpenBrackets) {
  const auto r = fix("[A [B x");
  ASSERT_TRUE(r.repaired);
  EXPECT_EQ(*r.repaired, "[A [B x]]");
  EXPECT_EQ(r.actions, (std::vector<A>{A::BracketClosure}));
}

TEST(Repair, NoBracketsIsFatal) {
  const auto r = fix("no brackets here");
  EXPECT_TRUE(r.fatal);
  EXPECT_FALSE(r.repaired);
  EXPECT_FALSE(r.reason.empty());
}

TEST(Repair, DeletesEmptyConstituents) {
  auto r = fix("[A [B] x [C []]]");
  ASSERT_TRUE(r.repaired);
  EXPECT_EQ(*r.repaired, "[A x]");
  EXPECT_EQ(r.actions, (std::vector<A>{A::EmptyDelete}));

  r = fix("[A [B]]");
  EXPECT_TRUE(r.fatal);
}

TEST(Repair, LeadingProseIsStripped) {
  const auto r = fix("Here is the tree: [S [NP el gato] [VP come]]");
  ASSERT_TRUE(r.repaired);
  EXPECT_EQ(*r.repaired, "[S [NP el gato] [VP come]]");
  EXPECT_EQ(r.actions, (std::vector<A>{A::MarkerStrip}));
}

TEST(Repair, EchoedPromptKeepsFirstTree) {
  // a model echoing the sentence before the tree
  const auto r = fix("<s>el gato</s>\n<s>[S [NP el gato]]</s>\n<s>[S otra]</s>");
  ASSERT_TRUE(r.repaired);
  EXPECT_EQ(*r.repaired, "[S [NP el gato]]");
  EXPECT_EQ(r.actions, (std::vector<A>{A::MarkerStrip, A::Truncate}));
}

TEST(Repair, UnparseableRemainderIsFatal) {
  EXPECT_TRUE(fix("[[A x]]").fatal);
  EXPECT_TRUE(fix("").fatal);
  EXPECT_TRUE(fix("]]]").fatal);
}

TEST(Repair, ActionNames) {
  EXPECT_EQ(to_string(A::MarkerStrip), "marker-strip");
  EXPECT_EQ(to_string(A::Truncate), "truncate");
  EXPECT_EQ(to_string(A::BracketClosure), "bracket-closure");
  EXPECT_EQ(to_string(A::EmptyDelete), "empty-delete");
}

TEST(RepairProperties, ConservativeOnValidTrees) {
  std::mt19937_64 rng(5);
  for (int i = 0; i < 500; ++i) {
    const auto s = serialize(testsupport::random_tree(rng));
    const auto r = fix(s);
    ASSERT_TRUE(r.repaired) << s;
    EXPECT_EQ(*r.repaired, s);
    EXPECT_TRUE(r.actions.empty()) << s;
  }
}

TEST(RepairProperties, Idempotent) {
  std::mt19937_64 rng(6);
  const std::vector<std::string> noise = {"<s>", "</s>", "[", "]", "x", " ", "\n", "[A", "hola", "]]"};
  for (int i = 0; i < 2000; ++i) {
    std::string raw;
    const std::size_t n = testsupport::pick(rng, 16);
    for (std::size_t k = 0; k < n; ++k) raw += noise[testsupport::pick(rng, noise.size())];
    const auto once = fix(raw);
    if (!once.repaired) continue;
    const auto twice = fix(*once.repaired);
    ASSERT_TRUE(twice.repaired) << raw;
    EXPECT_EQ(*twice.repaired, *once.repaired) << raw;
    EXPECT_TRUE(twice.actions.empty()) << raw;
  }
}

TEST(RepairProperties, TotalOnArbitraryBytes) {
  std::mt19937_64 rng(7);
  for (int i = 0; i < 3000; ++i) {
    std::string raw(testsupport::pick(rng, 64), '\0');
    for (auto& c : raw) c = static_cast<char>(testsupport::pick(rng, 256));
    RepairOutcome r;
    ASSERT_NO_THROW(r = fix(raw));
    EXPECT_NE(r.fatal, r.repaired.has_value());
    if (r.repaired) EXPECT_NO_THROW(parse_bracketed(*r.repaired));
  }
}

TEST(RepairProperties, TruncatedGenerationKeepsAPrefix) {
  std::mt19937_64 rng(8);
  int recovered = 0;
  for (int i = 0; i < 500; ++i) {
    const auto tree = testsupport::random_tree(rng);
    const auto s = serialize(tree);
    // cut at a space so no atom is split
    std::vector<std::size_t> spaces;
    for (std::size_t k = 0; k < s.size(); ++k)
      if (s[k] == ' ') spaces.push_back(k);
    if (spaces.empty()) continue;
    const auto cut = spaces[testsupport::pick(rng, spaces.size())];
    const auto r = fix("<s>" + s.substr(0, cut));
    if (!r.repaired) continue;
    ++recovered;
    EXPECT_TRUE(is_prefix(yield_tokens(parse_bracketed(*r.repaired)), yield_tokens(tree))) << s.substr(0, cut);
  }
  EXPECT_GT(recovered, 100);
}

TEST(RepairProperties, SuffixNoiseIsRemovedExactly) {
  std::mt19937_64 rng(9);
  for (int i = 0; i < 300; ++i) {
    const auto s = serialize(testsupport::random_tree(rng));
    const auto r = fix("<s>" + s + "</s> [extra [tree]] trailing");
    ASSERT_TRUE(r.repaired);
    EXPECT_EQ(*r.repaired, s);
  }
}

TEST(Alignment, CleanWhenYieldMatches) {
  const auto t = parse_bracketed("[S [NP el gato] [VP come]]");
  EXPECT_TRUE(check_alignment(t, "el gato come").clean());
  EXPECT_TRUE(check_alignment(t, "  el\tgato  come\n").clean());
}

TEST(Alignment, MissingExtraReordered) {
  const auto t = parse_bracketed("[S [NP el perro] [VP come]]");
  auto d = check_alignment(t, "el gato come");
  EXPECT_EQ(d.missing, (std::vector<std::string>{"gato"}));
  EXPECT_EQ(d.extra, (std::vector<std::string>{"perro"}));
  EXPECT_FALSE(d.reordered);

  d = check_alignment(t, "come el perro");
  EXPECT_TRUE(d.missing.empty());
  EXPECT_TRUE(d.extra.empty());
  EXPECT_TRUE(d.reordered);

  d = check_alignment(t, "el perro come come");
  EXPECT_EQ(d.missing, (std::vector<std::string>{"come"}));
}

TEST(Alignment, SanitizedWordRule) {
  const auto t = parse_bracketed("[S -LSB-sic-RSB- x]");
  EXPECT_TRUE(check_alignment(t, "[sic] x").clean());
  EXPECT_FALSE(check_alignment(t, "[sic] x", WordRule::Whitespace).clean());
}
