#include "corchete/pcfg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <set>
#include <sstream>
#include <tuple>

#include "corchete/binarize.hpp"

namespace corchete::pcfg {

namespace {

bool is_upper_initial(std::string_view token) {
  const auto b0 = static_cast<unsigned char>(token[0]);
  if (b0 >= 'A' && b0 <= 'Z') return true;
  // Latin-1 capitals encoded as C3 80..9E, except the multiplication sign.
  if (b0 == 0xC3 && token.size() > 1) {
    const auto b1 = static_cast<unsigned char>(token[1]);
    return b1 >= 0x80 && b1 <= 0x9E && b1 != 0x97;
  }
  return false;
}

std::string last_letter_lowercase(std::string_view token) {
  const auto last = static_cast<unsigned char>(token.back());
  if (last < 0x80) {
    if (last >= 'A' && last <= 'Z') return std::string(1, static_cast<char>(last - 'A' + 'a'));
    if (last >= 'a' && last <= 'z') return std::string(1, static_cast<char>(last));
    return {};
  }
  if (token.size() >= 2 && static_cast<unsigned char>(token[token.size() - 2]) == 0xC3 && last >= 0x80 && last <= 0xBF &&
      last != 0x97 && last != 0xB7) {
    const char lower = static_cast<char>(last <= 0x9E ? last + 0x20 : last);
    return std::string{static_cast<char>(0xC3), lower};
  }
  return {};
}

std::string quote(std::string_view token) {
  std::string out = "'";
  for (char c : token) {
    if (c == '\'' || c == '\\') out += '\\';
    out += c;
  }
  out += '\'';
  return out;
}

std::string unquote(std::string_view quoted, int line) {
  if (quoted.size() < 2 || quoted.front() != '\'' || quoted.back() != '\'')
    throw GrammarError("grammar line " + std::to_string(line) + ": malformed token " + std::string(quoted));
  std::string out;
  for (std::size_t i = 1; i + 1 < quoted.size(); ++i) {
    if (quoted[i] == '\\' && i + 2 < quoted.size()) ++i;
    out += quoted[i];
  }
  return out;
}

std::string format_log_prob(double lp) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", lp);
  return buf;
}

}  // namespace

std::string unknown_signature(std::string_view token) {
  std::string sig = "UNK";
  if (token.empty()) return sig;
  if (is_upper_initial(token)) sig += "-C";
  if (std::any_of(token.begin(), token.end(), [](char c) { return c >= '0' && c <= '9'; })) sig += "-D";
  if (token.find('-') != std::string_view::npos) sig += "-H";
  if (const auto suffix = last_letter_lowercase(token); !suffix.empty()) sig += "-" + suffix;
  return sig;
}

std::optional<SymbolId> Pcfg::find(std::string_view name) const {
  const auto it = ids_.find(std::string(name));
  if (it == ids_.end()) return std::nullopt;
  return it->second;
}

std::span<const std::uint32_t> Pcfg::rules_with_left(SymbolId left) const {
  if (left >= by_left_.size()) return {};
  return by_left_[left];
}

std::span<const Pcfg::LexicalEntry> Pcfg::lexicon(std::string_view token) const {
  if (const auto it = words_.find(std::string(token)); it != words_.end()) return it->second;
  if (signatures_.empty()) return {};
  if (const auto it = signatures_.find(unknown_signature(token)); it != signatures_.end()) return it->second;
  return {};
}

std::map<std::string, double> Pcfg::lhs_mass() const {
  std::map<std::string, double> mass;
  for (const auto& r : binary_) mass[names_[r.lhs]] += std::exp(r.log_prob);
  for (const auto& r : lexical_) mass[names_[r.lhs]] += std::exp(r.log_prob);
  for (const auto& r : unary_) mass[names_[r.lhs]] += std::exp(r.log_prob);
  return mass;
}

double Pcfg::max_normalization_error() const {
  double worst = 0.0;
  for (const auto& [_, m] : lhs_mass()) worst = std::max(worst, std::abs(1.0 - m));
  return worst;
}

PcfgBuilder& PcfgBuilder::binary(std::string lhs, std::string left, std::string right, double log_prob) {
  binary_.push_back({std::move(lhs), std::move(left), std::move(right), log_prob});
  return *this;
}

PcfgBuilder& PcfgBuilder::lexical(std::string lhs, std::string token, double log_prob, bool signature) {
  lexical_.push_back({std::move(lhs), std::move(token), signature, log_prob});
  return *this;
}

PcfgBuilder& PcfgBuilder::root(std::string child, double log_prob) {
  root_.emplace_back(std::move(child), log_prob);
  return *this;
}

PcfgBuilder& PcfgBuilder::markov_order(std::size_t order) {
  order_ = order;
  return *this;
}

PcfgBuilder& PcfgBuilder::unk_threshold(std::size_t threshold) {
  unk_threshold_ = threshold;
  return *this;
}

Pcfg PcfgBuilder::build(bool require_normalized, double tolerance) const {
  std::set<std::string> names{std::string(Pcfg::kStartSymbol)};
  for (const auto& r : binary_) names.insert({r.lhs, r.left, r.right});
  for (const auto& r : lexical_) names.insert(r.lhs);
  for (const auto& [child, _] : root_) names.insert(child);
  for (const auto& n : names)
    if (!is_valid_atom(n)) throw GrammarError("invalid symbol name '" + n + "'");

  Pcfg g;
  g.order_ = order_;
  g.unk_threshold_ = unk_threshold_;
  g.names_.assign(names.begin(), names.end());
  for (SymbolId id = 0; id < g.names_.size(); ++id) g.ids_.emplace(g.names_[id], id);
  g.start_ = g.ids_.at(std::string(Pcfg::kStartSymbol));
  auto id = [&](const std::string& n) { return g.ids_.at(n); };

  for (const auto& r : binary_) {
    if (id(r.lhs) == g.start_) throw GrammarError("start symbol may only rewrite through unary rules");
    g.binary_.push_back({id(r.lhs), id(r.left), id(r.right), r.log_prob});
  }
  for (const auto& r : lexical_) g.lexical_.push_back({id(r.lhs), r.token, r.signature, r.log_prob});
  for (const auto& [child, lp] : root_) g.unary_.push_back({g.start_, id(child), lp});

  std::sort(g.binary_.begin(), g.binary_.end(), [](const BinaryRule& a, const BinaryRule& b) {
    return std::tie(a.lhs, a.left, a.right) < std::tie(b.lhs, b.left, b.right);
  });
  std::sort(g.lexical_.begin(), g.lexical_.end(), [](const LexicalRule& a, const LexicalRule& b) {
    return std::tie(a.lhs, a.signature, a.token) < std::tie(b.lhs, b.signature, b.token);
  });
  std::sort(g.unary_.begin(), g.unary_.end(), [](const UnaryRule& a, const UnaryRule& b) { return a.child < b.child; });

  for (std::size_t i = 1; i < g.binary_.size(); ++i) {
    const auto& a = g.binary_[i - 1];
    const auto& b = g.binary_[i];
    if (a.lhs == b.lhs && a.left == b.left && a.right == b.right)
      throw GrammarError("duplicate rule " + g.names_[a.lhs] + " -> " + g.names_[a.left] + " " + g.names_[a.right]);
  }
  for (std::size_t i = 1; i < g.lexical_.size(); ++i) {
    const auto& a = g.lexical_[i - 1];
    const auto& b = g.lexical_[i];
    if (a.lhs == b.lhs && a.signature == b.signature && a.token == b.token)
      throw GrammarError("duplicate rule " + g.names_[a.lhs] + " -> " + quote(a.token));
  }
  for (std::size_t i = 1; i < g.unary_.size(); ++i)
    if (g.unary_[i - 1].child == g.unary_[i].child)
      throw GrammarError("duplicate start rule for " + g.names_[g.unary_[i].child]);

  g.by_left_.resize(g.names_.size());
  for (std::uint32_t i = 0; i < g.binary_.size(); ++i) g.by_left_[g.binary_[i].left].push_back(i);
  for (std::uint32_t i = 0; i < g.lexical_.size(); ++i) {
    const auto& r = g.lexical_[i];
    (r.signature ? g.signatures_ : g.words_)[r.token].push_back({r.lhs, r.log_prob, i});
  }

  if (require_normalized) {
    auto positive = [](double lp) { return lp > 0.0; };
    if (std::any_of(g.binary_.begin(), g.binary_.end(), [&](auto& r) { return positive(r.log_prob); }) ||
        std::any_of(g.lexical_.begin(), g.lexical_.end(), [&](auto& r) { return positive(r.log_prob); }) ||
        std::any_of(g.unary_.begin(), g.unary_.end(), [&](auto& r) { return positive(r.log_prob); }))
      throw GrammarError("rule with positive log-probability");
    for (const auto& [lhs, mass] : g.lhs_mass())
      if (std::abs(1.0 - mass) > tolerance)
        throw GrammarError("rules for " + lhs + " sum to " + format_log_prob(mass) + ", not 1");
  }
  return g;
}

Pcfg induce_grammar(const std::vector<SyntaxTree>& trees, std::size_t order, std::size_t unk_threshold) {
  if (trees.empty()) throw EmptyTreebank();

  std::map<std::string, std::size_t> frequency;
  for (const auto& t : trees)
    for (const auto& w : yield_tokens(t)) ++frequency[w];

  std::map<std::tuple<std::string, std::string, std::string>, std::size_t> binary_counts;
  std::map<std::tuple<std::string, std::string, bool>, std::size_t> lexical_counts;
  std::map<std::string, std::size_t> root_counts;
  std::map<std::string, std::size_t> lhs_counts;

  struct Walker {
    decltype(binary_counts)& binary;
    decltype(lexical_counts)& lexical;
    decltype(lhs_counts)& lhs;
    const decltype(frequency)& freq;
    std::size_t threshold;

    void operator()(const SyntaxTree& node) {
      if (node.is_leaf()) return;
      ++lhs[node.label()];
      const auto& kids = node.children();
      if (kids.size() == 1) {
        const std::string& token = kids.front().token();
        const bool rare = threshold > 0 && freq.at(token) < threshold;
        ++lexical[{node.label(), rare ? unknown_signature(token) : token, rare}];
        return;
      }
      ++binary[{node.label(), kids[0].label(), kids[1].label()}];
      (*this)(kids[0]);
      (*this)(kids[1]);
    }
  } walk{binary_counts, lexical_counts, lhs_counts, frequency, unk_threshold};

  for (const auto& t : trees) {
    if (t.is_leaf()) continue;
    const SyntaxTree b = binarize(t, order);
    ++root_counts[b.label()];
    walk(b);
  }
  if (root_counts.empty()) throw EmptyTreebank();

  std::size_t root_total = 0;
  for (const auto& [_, c] : root_counts) root_total += c;

  auto log_ratio = [](std::size_t num, std::size_t den) {
    return std::log(static_cast<double>(num)) - std::log(static_cast<double>(den));
  };

  PcfgBuilder builder;
  builder.markov_order(order).unk_threshold(unk_threshold);
  for (const auto& [rule, c] : binary_counts)
    builder.binary(std::get<0>(rule), std::get<1>(rule), std::get<2>(rule), log_ratio(c, lhs_counts.at(std::get<0>(rule))));
  for (const auto& [rule, c] : lexical_counts)
    builder.lexical(std::get<0>(rule), std::get<1>(rule), log_ratio(c, lhs_counts.at(std::get<0>(rule))), std::get<2>(rule));
  for (const auto& [label, c] : root_counts) builder.root(label, log_ratio(c, root_total));
  return builder.build();
}

std::string write_grammar(const Pcfg& g) {
  std::ostringstream out;
  out << "%start " << g.name(g.start()) << '\n';
  out << "%order " << g.markov_order() << '\n';
  out << "%unk_threshold " << g.unk_threshold() << '\n';
  for (const auto& r : g.unary_rules())
    out << g.name(r.lhs) << " -> " << g.name(r.child) << " # " << format_log_prob(r.log_prob) << '\n';
  for (const auto& r : g.binary_rules())
    out << g.name(r.lhs) << " -> " << g.name(r.left) << ' ' << g.name(r.right) << " # " << format_log_prob(r.log_prob)
        << '\n';
  for (const auto& r : g.lexical_rules())
    out << g.name(r.lhs) << " -> " << (r.signature ? "<" + r.token + ">" : quote(r.token)) << " # "
        << format_log_prob(r.log_prob) << '\n';
  return out.str();
}

Pcfg read_grammar(std::string_view text) {
  PcfgBuilder builder;
  std::istringstream in{std::string(text)};
  std::string line;
  int line_no = 0;
  auto fail = [&](const std::string& what) -> GrammarError {
    return GrammarError("grammar line " + std::to_string(line_no) + ": " + what);
  };
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    std::istringstream fields(line);
    std::vector<std::string> f;
    for (std::string w; fields >> w;) f.push_back(w);
    if (f.empty()) continue;
    if (f[0].starts_with("%")) {
      if (f.size() != 2) throw fail("malformed header");
      if (f[0] == "%start") {
        if (f[1] != Pcfg::kStartSymbol) throw fail("unsupported start symbol '" + f[1] + "'");
      } else if (f[0] == "%order") {
        builder.markov_order(std::stoul(f[1]));
      } else if (f[0] == "%unk_threshold") {
        builder.unk_threshold(std::stoul(f[1]));
      } else {
        throw fail("unknown header " + f[0]);
      }
      continue;
    }
    if (f.size() < 5 || f[1] != "->" || f[f.size() - 2] != "#") throw fail("expected 'A -> rhs # logprob'");
    double lp = 0.0;
    try {
      lp = std::stod(f.back());
    } catch (const std::exception&) {
      throw fail("bad log-probability '" + f.back() + "'");
    }
    const std::size_t rhs = f.size() - 4;
    if (rhs == 2) {
      builder.binary(f[0], f[2], f[3], lp);
    } else if (rhs == 1 && f[2].front() == '\'') {
      builder.lexical(f[0], unquote(f[2], line_no), lp);
    } else if (rhs == 1 && f[2].front() == '<' && f[2].back() == '>' && f[2].size() > 2) {
      builder.lexical(f[0], f[2].substr(1, f[2].size() - 2), lp, true);
    } else if (rhs == 1) {
      if (f[0] != Pcfg::kStartSymbol) throw fail("unary rules must rewrite the start symbol");
      builder.root(f[2], lp);
    } else {
      throw fail("unsupported right-hand side");
    }
  }
  return builder.build();
}

}  // namespace corchete::pcfg
