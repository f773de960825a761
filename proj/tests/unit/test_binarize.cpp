#include <gtest/gtest.h>

#include <random>

#include "corchete/binarize.hpp"
#include "random_trees.hpp"

using namespace corchete;
using namespace corchete::pcfg;

namespace {

SyntaxTree T(std::string_view s) { return parse_bracketed(s); }

bool is_cnf(const SyntaxTree& t) {
  if (t.is_leaf()) return false;
  const auto& k = t.children();
  if (k.size() == 1) return k[0].is_leaf();
  if (k.size() != 2) return false;
  return is_cnf(k[0]) && is_cnf(k[1]);
}

}  // namespace

TEST(Binarize, OrderOneFactoring) {
  const auto b = binarize(T("[A [B x] [C y] [D z] [E w]]"), 1);
  EXPECT_EQ(serialize(b), "[A [B x] [A|<C> [C y] [A|<D> [D z] [E w]]]]");
}

TEST(Binarize, OrderTwoFactoring) {
  const auto b = binarize(T("[A [B x] [C y] [D z] [E w]]"), 2);
  EXPECT_EQ(serialize(b), "[A [B x] [A|<C-D> [C y] [A|<D-E> [D z] [E w]]]]");
}

TEST(Binarize, UnaryChainsCollapse) {
  EXPECT_EQ(serialize(binarize(T("[S [NP [N gato]]]"))), "[S+NP+N gato]");
  EXPECT_EQ(serialize(binarize(T("[S [VP [V a] [N b]]]"))), "[S+VP [V a] [N b]]");
}

TEST(Binarize, BareTokensAreWrapped) {
  EXPECT_EQ(serialize(binarize(T("[A x [B y]]"))), "[A [@A x] [B y]]");
  EXPECT_EQ(serialize(binarize(T("[A x y z]"))), "[A [@A x] [A|<@A-@A> [@A y] [@A z]]]");
}

TEST(Binarize, ExistingBinaryTreeUnchanged) {
  const auto t = T("[S [NP [Det el] [N gato]] [VP come]]");
  EXPECT_EQ(binarize(t), t);
}

TEST(Debinarize, RoundTripExamples) {
  for (const char* s : {"[A [B x] [C y] [D z] [E w]]", "[S [NP [N gato]]]", "[A x y z]", "[X a]",
                        "[S [S [NP a] [VP b c]] [conj y] [S [NP d] [VP [V e]]] [Punct .]]"})
    for (std::size_t order : {1u, 2u, 3u}) EXPECT_EQ(debinarize(binarize(T(s), order)), T(s)) << s;
}

TEST(Debinarize, RejectsStrayIntermediateLabels) {
  EXPECT_THROW(debinarize(T("[A|<B> x]")), MalformedIntermediateLabel);
  EXPECT_THROW(debinarize(T("[A [B x] [A|<C [C y] [D z]]]")), MalformedIntermediateLabel);
  EXPECT_THROW(debinarize(T("[@A x]")), MalformedIntermediateLabel);
  EXPECT_THROW(debinarize(T("[A [@A x y] [B z]]")), MalformedIntermediateLabel);
  EXPECT_THROW(debinarize(T("[A++B x]")), MalformedIntermediateLabel);
}

TEST(Binarize, IntermediateLabelRecognition) {
  EXPECT_TRUE(is_intermediate_label("A|<B-C>"));
  EXPECT_FALSE(is_intermediate_label("A|<B"));
  EXPECT_FALSE(is_intermediate_label("|<B>"));
  EXPECT_FALSE(is_intermediate_label("NP/S"));
}

TEST(BinarizeProperties, RoundTripAndShapeOnRandomTrees) {
  std::mt19937_64 rng(2024);
  for (int i = 0; i < 500; ++i) {
    const auto t = testsupport::random_tree(rng);
    for (std::size_t order : {1u, 2u}) {
      const auto b = binarize(t, order);
      ASSERT_TRUE(is_cnf(b)) << serialize(t);
      ASSERT_EQ(yield_tokens(b), yield_tokens(t));
      ASSERT_EQ(debinarize(b), t) << serialize(t) << "\n" << serialize(b);
    }
  }
}
