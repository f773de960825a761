#include "corchete/cyk.hpp"

#include <algorithm>

#include "corchete/binarize.hpp"

namespace corchete::pcfg {

namespace {

bool improves(const ChartEntry& current, double score, std::uint32_t split, std::uint32_t rule) {
  if (score > current.score) return true;
  if (score < current.score) return false;
  return split < current.split || (split == current.split && rule < current.rule);
}

SyntaxTree rebuild(const Chart& chart, const Pcfg& g, const std::vector<std::string>& tokens, std::size_t i,
                   std::size_t j, SymbolId symbol) {
  const ChartEntry* e = chart.best(i, j, symbol);
  if (e->lexical) return SyntaxTree::node(g.name(symbol), {SyntaxTree::leaf(tokens[i])});
  const BinaryRule& r = g.binary_rules()[e->rule];
  return SyntaxTree::node(g.name(symbol), {rebuild(chart, g, tokens, i, e->split, r.left),
                                           rebuild(chart, g, tokens, e->split, j, r.right)});
}

}  // namespace

const ChartEntry* Chart::best(std::size_t i, std::size_t j, SymbolId symbol) const {
  if (i >= j || j > n_) return nullptr;
  const auto& c = cells_[index(i, j)];
  const auto it = c.find(symbol);
  return it == c.end() ? nullptr : &it->second;
}

std::vector<std::pair<SymbolId, double>> Chart::cell_scores(std::size_t i, std::size_t j) const {
  std::vector<std::pair<SymbolId, double>> out;
  if (i >= j || j > n_) return out;
  for (const auto& [s, e] : cells_[index(i, j)]) out.emplace_back(s, e.score);
  std::sort(out.begin(), out.end());
  return out;
}

Chart cyk_chart(const std::vector<std::string>& tokens, const Pcfg& g) {
  const std::size_t n = tokens.size();
  Chart chart(n);
  for (std::size_t i = 0; i < n; ++i) {
    auto& cell = chart.cell(i, i + 1);
    for (const auto& entry : g.lexicon(tokens[i])) {
      auto& e = cell[entry.lhs];
      if (improves(e, entry.log_prob, 0, entry.rule)) e = {entry.log_prob, entry.rule, 0, true};
    }
  }

  const auto& rules = g.binary_rules();
  for (std::size_t len = 2; len <= n; ++len) {
    for (std::size_t i = 0; i + len <= n; ++i) {
      const std::size_t j = i + len;
      auto& target = chart.cell(i, j);
      for (std::size_t k = i + 1; k < j; ++k) {
        const auto& left_cell = chart.cell(i, k);
        const auto& right_cell = chart.cell(k, j);
        if (left_cell.empty() || right_cell.empty()) continue;
        for (const auto& [left, le] : left_cell) {
          for (const std::uint32_t idx : g.rules_with_left(left)) {
            const BinaryRule& r = rules[idx];
            const auto rit = right_cell.find(r.right);
            if (rit == right_cell.end()) continue;
            const double score = le.score + rit->second.score + r.log_prob;
            auto [it, inserted] = target.try_emplace(r.lhs);
            if (inserted || improves(it->second, score, static_cast<std::uint32_t>(k), idx))
              it->second = {score, idx, static_cast<std::uint32_t>(k), false};
          }
        }
      }
    }
  }
  return chart;
}

std::optional<ParseResult> cyk_parse(const std::vector<std::string>& tokens, const Pcfg& g) {
  if (tokens.empty()) return std::nullopt;
  const Chart chart = cyk_chart(tokens, g);
  const std::size_t n = tokens.size();

  std::optional<SymbolId> best_symbol;
  double best_score = -std::numeric_limits<double>::infinity();
  for (const auto& r : g.unary_rules()) {
    const ChartEntry* e = chart.best(0, n, r.child);
    if (!e) continue;
    const double score = e->score + r.log_prob;
    if (!best_symbol || score > best_score) {
      best_symbol = r.child;
      best_score = score;
    }
  }
  if (!best_symbol) return std::nullopt;

  SyntaxTree binarized = rebuild(chart, g, tokens, 0, n, *best_symbol);
  SyntaxTree tree = debinarize(binarized);
  return ParseResult{std::move(tree), std::move(binarized), best_score};
}

}  // namespace corchete::pcfg
