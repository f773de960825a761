#include <gtest/gtest.h>

#include <fstream>
#include <random>
#include <sstream>

#include "corchete/tree.hpp"
#include "oracles.hpp"
#include "random_trees.hpp"

using namespace corchete;

namespace {

std::string fixture(const std::string& name) {
  std::ifstream in(std::string(CORCHETE_FIXTURES) + "/" + name);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::vector<LabeledSpan> spans(std::string_view text, bool pre, std::set<std::string, std::less<>> ignore = {}) {
  return extract_spans(parse_bracketed(text), pre, ignore);
}

ParseErrorKind error_of(std::string_view text) {
  try {
    parse_bracketed(text);
  } catch (const ParseError& e) {
    return e.kind();
  }
  ADD_FAILURE() << "no error for '" << text << "'";
  return ParseErrorKind::EmptyInput;
}

}  // namespace

TEST(Parse, SinglePreterminal) {
  const auto t = parse_bracketed("[N cup]");
  EXPECT_EQ(t.label(), "N");
  ASSERT_EQ(t.children().size(), 1u);
  EXPECT_TRUE(t.children()[0].is_leaf());
  EXPECT_EQ(t.children()[0].token(), "cup");
  EXPECT_EQ(serialize(t), "[N cup]");
}

TEST(Parse, MinimalTree) { EXPECT_EQ(yield_tokens(parse_bracketed("[X a]")), std::vector<std::string>{"a"}); }

TEST(Parse, MixedChildren) {
  const auto t = parse_bracketed("[A [B x] y]");
  ASSERT_EQ(t.children().size(), 2u);
  EXPECT_EQ(t.children()[0].label(), "B");
  EXPECT_TRUE(t.children()[1].is_leaf());
  EXPECT_EQ(yield_tokens(t), (std::vector<std::string>{"x", "y"}));
}

TEST(Parse, WhitespaceIsNormalized) {
  EXPECT_EQ(serialize(parse_bracketed("[A   [B  x]   y ]")), "[A [B x] y]");
  EXPECT_EQ(serialize(parse_bracketed("\n\t[A\n[B\tx]\ry]  \n")), "[A [B x] y]");
}

TEST(Parse, ErrorKinds) {
  EXPECT_EQ(error_of("[A [B ]"), ParseErrorKind::EmptyConstituent);
  EXPECT_EQ(error_of("[]"), ParseErrorKind::EmptyConstituent);
  EXPECT_EQ(error_of("[A x"), ParseErrorKind::UnbalancedBrackets);
  EXPECT_EQ(error_of("[A x]]"), ParseErrorKind::UnbalancedBrackets);
  EXPECT_EQ(error_of("]"), ParseErrorKind::UnbalancedBrackets);
  EXPECT_EQ(error_of("x [A y]"), ParseErrorKind::StrayToken);
  EXPECT_EQ(error_of("[A x] y"), ParseErrorKind::StrayToken);
  EXPECT_EQ(error_of("[[A x]]"), ParseErrorKind::MissingLabel);
  EXPECT_EQ(error_of(""), ParseErrorKind::EmptyInput);
  EXPECT_EQ(error_of("  \n"), ParseErrorKind::EmptyInput);
}

TEST(Parse, ErrorPositionIsFirstViolation) {
  try {
    parse_bracketed("[A x]]");
    FAIL();
  } catch (const ParseError& e) {
    EXPECT_EQ(e.position(), 5u);
  }
  try {
    parse_bracketed("[A [B ] [C y]]");
    FAIL();
  } catch (const ParseError& e) {
    EXPECT_EQ(e.position(), 3u);
  }
}

TEST(Parse, Utf8LabelsAndTokens) {
  const auto t = parse_bracketed("[Oración [N año] ¿qué?]");
  EXPECT_EQ(t.label(), "Oración");
  EXPECT_EQ(yield_tokens(t), (std::vector<std::string>{"año", "¿qué?"}));
}

TEST(Construct, RejectsInvalidAtoms) {
  EXPECT_THROW(SyntaxTree::leaf("a b"), InvalidTreeError);
  EXPECT_THROW(SyntaxTree::leaf("x]"), InvalidTreeError);
  EXPECT_THROW(SyntaxTree::leaf(""), InvalidTreeError);
  EXPECT_THROW(SyntaxTree::node("", {SyntaxTree::leaf("x")}), InvalidTreeError);
  EXPECT_THROW(SyntaxTree::node("[A", {SyntaxTree::leaf("x")}), InvalidTreeError);
  EXPECT_THROW(SyntaxTree::node("A", {}), InvalidTreeError);
}

TEST(Equality, IsCaseSensitiveAndOrdered) {
  EXPECT_NE(parse_bracketed("[np x]"), parse_bracketed("[NP x]"));
  EXPECT_NE(parse_bracketed("[A x y]"), parse_bracketed("[A y x]"));
  EXPECT_EQ(parse_bracketed("[A x y]"), parse_bracketed(" [A  x y] "));
}

TEST(Spans, Examples) {
  EXPECT_EQ(spans("[A [B x] y]", true), (std::vector<LabeledSpan>{{"A", 0, 2}, {"B", 0, 1}}));
  EXPECT_EQ(spans("[A [B x] y]", false), (std::vector<LabeledSpan>{{"A", 0, 2}}));
  EXPECT_EQ(spans("[A [B x] [Punct .]]", true, {"Punct"}), (std::vector<LabeledSpan>{{"A", 0, 2}, {"B", 0, 1}}));
}

TEST(Spans, DuplicatesAreKept) {
  // unary chain with equal labels yields the same triple twice
  EXPECT_EQ(spans("[A [A x y]]", true), (std::vector<LabeledSpan>{{"A", 0, 2}, {"A", 0, 2}}));
}

TEST(Spans, MatchNaiveWalkerOnRandomTrees) {
  std::mt19937_64 rng(11);
  int checked = 0;
  while (checked < 200) {
    const auto t = testsupport::random_tree(rng, 5, 4);
    // the first hundred cases are exactly 15-node trees
    if (checked < 100 && t.internal_count() + t.leaf_count() != 15) continue;
    for (bool pre : {false, true}) {
      for (const std::set<std::string>& ignore : {std::set<std::string>{}, std::set<std::string>{"Punct", "N"}}) {
        auto expected = testsupport::naive_spans(t, pre, ignore);
        std::vector<LabeledSpan> want;
        for (const auto& s : expected) want.push_back({s.label, s.start, s.end});
        std::sort(want.begin(), want.end());
        auto got = extract_spans(t, pre, std::set<std::string, std::less<>>(ignore.begin(), ignore.end()));
        std::sort(got.begin(), got.end());
        ASSERT_EQ(got, want) << serialize(t);
      }
    }
    ++checked;
  }
}

TEST(Properties, RoundTripRandomTrees) {
  std::mt19937_64 rng(2024);
  for (int i = 0; i < 1000; ++i) {
    const auto t = testsupport::random_tree(rng);
    ASSERT_LE(t.depth(), 8u);
    const auto text = serialize(t);
    ASSERT_EQ(parse_bracketed(text), t) << text;
    ASSERT_EQ(serialize(parse_bracketed(text)), text);
  }
}

TEST(Properties, SpanAndYieldCounts) {
  std::mt19937_64 rng(5);
  for (int i = 0; i < 300; ++i) {
    const auto t = testsupport::random_tree(rng, 6, 4);
    const auto all = extract_spans(t, true, {});
    EXPECT_EQ(all.size(), t.internal_count());
    std::size_t max_end = 0;
    for (const auto& s : all) max_end = std::max(max_end, s.end);
    EXPECT_EQ(yield_tokens(t).size(), max_end);
    EXPECT_EQ(yield_tokens(t).size(), t.leaf_count());
  }
}

TEST(Listing, CompoundSentenceFixture) {
  std::string text = normalize_whitespace(fixture("compound_sentence.txt"));
  const auto open = text.find("<s>[");
  ASSERT_NE(open, std::string::npos);
  std::string analysis = text.substr(open + 3);
  analysis = analysis.substr(0, analysis.rfind("</s>"));

  const auto tree = parse_bracketed(analysis);
  const auto canonical = serialize(tree);
  EXPECT_EQ(canonical, normalize_whitespace(analysis));
  EXPECT_EQ(serialize(parse_bracketed(canonical)), canonical);

  const auto words = yield_tokens(tree);
  ASSERT_EQ(words.size(), 19u);
  EXPECT_EQ(words[0], "The");
  EXPECT_EQ(words[1], "final");
  EXPECT_EQ(words[3], "cup");
  EXPECT_EQ(words.back(), ".");

  const auto s = extract_spans(tree, true, {});
  auto has = [&](const char* label, std::size_t a, std::size_t b) {
    return std::find(s.begin(), s.end(), LabeledSpan{label, a, b}) != s.end();
  };
  EXPECT_TRUE(has("Compound.Sentence", 0, 19));
  EXPECT_TRUE(has("NP/S", 0, 8));
  EXPECT_TRUE(has("NP/T", 3, 4));
  EXPECT_TRUE(has("N", 5, 8));  // England and Germany
  EXPECT_TRUE(has("VP/PV", 8, 18));
  EXPECT_TRUE(has("NP/CD", 9, 12));
  EXPECT_TRUE(has("AdvP/AP", 12, 18));
  EXPECT_TRUE(has("AdjP/PVO", 16, 18));
  EXPECT_TRUE(has("Punct", 18, 19));
}
