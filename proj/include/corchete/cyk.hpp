#pragma once

#include <cstddef>
#include <cstdint>
#include <limits>
#include <optional>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "corchete/pcfg.hpp"
#include "corchete/tree.hpp"

namespace corchete::pcfg {

struct ChartEntry {
  double score = -std::numeric_limits<double>::infinity();
  std::uint32_t rule = 0;   // binary rule index, or lexical rule index when lexical
  std::uint32_t split = 0;  // split point k for binary entries
  bool lexical = false;
};

/// Viterbi chart over spans (i, j), 0 <= i < j <= n.
class Chart {
 public:
  explicit Chart(std::size_t n) : n_(n), cells_(n * (n + 1) / 2 + n + 1) {}

  std::size_t size() const noexcept { return n_; }
  const ChartEntry* best(std::size_t i, std::size_t j, SymbolId symbol) const;
  /// (symbol, best log-prob) pairs of one cell, ordered by symbol id.
  std::vector<std::pair<SymbolId, double>> cell_scores(std::size_t i, std::size_t j) const;

  std::unordered_map<SymbolId, ChartEntry>& cell(std::size_t i, std::size_t j) { return cells_[index(i, j)]; }
  const std::unordered_map<SymbolId, ChartEntry>& cell(std::size_t i, std::size_t j) const {
    return cells_[index(i, j)];
  }

 private:
  std::size_t index(std::size_t i, std::size_t j) const noexcept { return j * (j + 1) / 2 + i; }

  std::size_t n_;
  std::vector<std::unordered_map<SymbolId, ChartEntry>> cells_;
};

/// Fills the chart. Ties keep the lowest split point, then the lowest rule
/// index (lexicographic rule order).
Chart cyk_chart(const std::vector<std::string>& tokens, const Pcfg& grammar);

struct ParseResult {
  SyntaxTree tree;       // debinarized
  SyntaxTree binarized;  // as derived by the grammar
  double log_prob;       // includes the start rule
};

/// Most probable parse, or nothing when no derivation covers the tokens.
std::optional<ParseResult> cyk_parse(const std::vector<std::string>& tokens, const Pcfg& grammar);

}  // namespace corchete::pcfg
