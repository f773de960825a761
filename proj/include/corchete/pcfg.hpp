#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "corchete/tree.hpp"

namespace corchete::pcfg {

using SymbolId = std::uint32_t;

class GrammarError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class EmptyTreebank : public GrammarError {
 public:
  EmptyTreebank() : GrammarError("EmptyTreebank: no trees to induce a grammar from") {}
};

struct BinaryRule {
  SymbolId lhs;
  SymbolId left;
  SymbolId right;
  double log_prob;
};

/// A -> token. Signature rules stand in for rare or unseen words.
struct LexicalRule {
  SymbolId lhs;
  std::string token;
  bool signature;
  double log_prob;
};

/// Start-symbol rules, ROOT -> A.
struct UnaryRule {
  SymbolId lhs;
  SymbolId child;
  double log_prob;
};

/// Coarse word-shape class used for rare tokens, e.g. `UNK-C-o`.
std::string unknown_signature(std::string_view token);

/// A probabilistic grammar in Chomsky normal form.
///
/// Symbols are numbered in lexicographic order of their names and rules are
/// stored sorted, so rule indices follow lexicographic rule order. The start
/// symbol only rewrites through unary rules to the observed root labels.
class Pcfg {
 public:
  static constexpr std::string_view kStartSymbol = "ROOT";

  struct LexicalEntry {
    SymbolId lhs;
    double log_prob;
    std::uint32_t rule;
  };

  std::size_t symbol_count() const noexcept { return names_.size(); }
  const std::string& name(SymbolId id) const { return names_.at(id); }
  std::optional<SymbolId> find(std::string_view name) const;
  SymbolId start() const noexcept { return start_; }

  const std::vector<BinaryRule>& binary_rules() const noexcept { return binary_; }
  const std::vector<LexicalRule>& lexical_rules() const noexcept { return lexical_; }
  const std::vector<UnaryRule>& unary_rules() const noexcept { return unary_; }

  /// Indices of binary rules whose left child is `left`, ascending.
  std::span<const std::uint32_t> rules_with_left(SymbolId left) const;

  /// Lexical entries that can cover `token`: its own rules when the word is
  /// known, otherwise its signature's rules when signatures are enabled.
  std::span<const LexicalEntry> lexicon(std::string_view token) const;
  bool knows(std::string_view token) const { return words_.contains(std::string(token)); }

  std::size_t markov_order() const noexcept { return order_; }
  std::size_t unk_threshold() const noexcept { return unk_threshold_; }
  bool signatures_enabled() const noexcept { return !signatures_.empty(); }

  /// Summed probability mass per left-hand side.
  std::map<std::string, double> lhs_mass() const;
  /// Largest |1 - mass| over all left-hand sides.
  double max_normalization_error() const;

 private:
  friend class PcfgBuilder;

  std::vector<std::string> names_;
  std::unordered_map<std::string, SymbolId> ids_;
  SymbolId start_ = 0;
  std::vector<BinaryRule> binary_;
  std::vector<LexicalRule> lexical_;
  std::vector<UnaryRule> unary_;
  std::vector<std::vector<std::uint32_t>> by_left_;
  std::unordered_map<std::string, std::vector<LexicalEntry>> words_;
  std::unordered_map<std::string, std::vector<LexicalEntry>> signatures_;
  std::size_t order_ = 2;
  std::size_t unk_threshold_ = 0;
};

/// Collects rules by symbol name and produces a Pcfg.
class PcfgBuilder {
 public:
  PcfgBuilder& binary(std::string lhs, std::string left, std::string right, double log_prob);
  PcfgBuilder& lexical(std::string lhs, std::string token, double log_prob, bool signature = false);
  /// Start-symbol rule ROOT -> child.
  PcfgBuilder& root(std::string child, double log_prob);
  PcfgBuilder& markov_order(std::size_t order);
  PcfgBuilder& unk_threshold(std::size_t threshold);

  /// With `require_normalized`, rejects grammars whose per-LHS mass differs
  /// from 1 by more than `tolerance` or that carry a positive log-probability.
  Pcfg build(bool require_normalized = true, double tolerance = 1e-9) const;

 private:
  struct RawBinary {
    std::string lhs, left, right;
    double log_prob;
  };
  struct RawLexical {
    std::string lhs, token;
    bool signature;
    double log_prob;
  };
  std::vector<RawBinary> binary_;
  std::vector<RawLexical> lexical_;
  std::vector<std::pair<std::string, double>> root_;
  std::size_t order_ = 2;
  std::size_t unk_threshold_ = 0;
};

/// Maximum-likelihood grammar from binarized trees. Tokens seen fewer than
/// `unk_threshold` times train signature rules instead; 0 disables them.
Pcfg induce_grammar(const std::vector<SyntaxTree>& trees, std::size_t order = 2, std::size_t unk_threshold = 2);

/// Line format: `A -> B C # logprob`, `A -> 'token' # logprob`,
/// `A -> <SIG> # logprob` for signatures, `ROOT -> A # logprob`, plus
/// `%start`, `%order` and `%unk_threshold` headers.
std::string write_grammar(const Pcfg& grammar);
Pcfg read_grammar(std::string_view text);

}  // namespace corchete::pcfg
