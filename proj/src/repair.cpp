#include "corchete/repair.hpp"

#include <map>
#include <sstream>

#include "corchete/ingest.hpp"

namespace corchete::repair {

namespace {

struct Piece {
  enum Kind { Open, Close, Atom } kind;
  std::string text;
};

bool is_space(char c) { return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' || c == '\v'; }

bool has_content(std::string_view s) {
  for (char c : s)
    if (!is_space(c)) return true;
  return false;
}

std::string remove_markers(std::string_view raw, bool& removed) {
  std::string out;
  out.reserve(raw.size());
  std::size_t i = 0;
  while (i < raw.size()) {
    if (raw.substr(i, 3) == "<s>") {
      removed = true;
      out += ' ';
      i += 3;
    } else if (raw.substr(i, 4) == "</s>") {
      removed = true;
      out += ' ';
      i += 4;
    } else {
      out += raw[i++];
    }
  }
  return out;
}

RepairOutcome give_up(RepairOutcome outcome, std::string reason) {
  outcome.repaired.reset();
  outcome.fatal = true;
  outcome.reason = std::move(reason);
  return outcome;
}

RepairOutcome run(std::string_view raw) {
  RepairOutcome outcome;

  bool markers = false;
  const std::string text = remove_markers(raw, markers);
  const auto first = text.find('[');
  if (first == std::string::npos) return give_up(std::move(outcome), "no opening bracket");
  if (markers || has_content(std::string_view(text).substr(0, first)))
    outcome.actions.push_back(RepairAction::MarkerStrip);

  std::vector<Piece> pieces;
  int depth = 0;
  std::size_t i = first;
  while (i < text.size()) {
    const char c = text[i];
    if (is_space(c)) {
      ++i;
    } else if (c == '[') {
      pieces.push_back({Piece::Open, "["});
      ++depth;
      ++i;
    } else if (c == ']') {
      pieces.push_back({Piece::Close, "]"});
      --depth;
      ++i;
      if (depth == 0) break;
    } else {
      const std::size_t begin = i;
      while (i < text.size() && !is_space(text[i]) && text[i] != '[' && text[i] != ']') ++i;
      pieces.push_back({Piece::Atom, text.substr(begin, i - begin)});
    }
  }
  if (depth == 0 && has_content(std::string_view(text).substr(i)))
    outcome.actions.push_back(RepairAction::Truncate);
  if (depth > 0) {
    for (; depth > 0; --depth) pieces.push_back({Piece::Close, "]"});
    outcome.actions.push_back(RepairAction::BracketClosure);
  }

  bool deleted = false;
  for (bool changed = true; changed;) {
    changed = false;
    for (std::size_t k = 0; k < pieces.size(); ++k) {
      if (pieces[k].kind != Piece::Open) continue;
      std::size_t end = k + 1;
      if (end < pieces.size() && pieces[end].kind == Piece::Atom) ++end;
      if (end < pieces.size() && pieces[end].kind == Piece::Close) {
        pieces.erase(pieces.begin() + static_cast<std::ptrdiff_t>(k),
                     pieces.begin() + static_cast<std::ptrdiff_t>(end + 1));
        changed = deleted = true;
        break;
      }
    }
  }
  if (deleted) outcome.actions.push_back(RepairAction::EmptyDelete);
  if (pieces.empty()) return give_up(std::move(outcome), "nothing left after deleting empty constituents");

  std::string candidate;
  for (const auto& p : pieces) {
    if (!candidate.empty() && p.kind != Piece::Close && candidate.back() != '[') candidate += ' ';
    candidate += p.text;
  }
  try {
    outcome.repaired = serialize(parse_bracketed(candidate));
  } catch (const std::exception& e) {
    return give_up(std::move(outcome), e.what());
  }
  return outcome;
}

std::vector<std::string> split_words(std::string_view sentence, WordRule rule) {
  std::vector<std::string> out;
  std::istringstream in{std::string(sentence)};
  std::string w;
  while (in >> w) out.push_back(rule == WordRule::WhitespaceSanitized ? ingest::sanitize_token(w) : w);
  return out;
}

std::vector<std::string> multiset_difference(const std::vector<std::string>& a, const std::vector<std::string>& b) {
  std::map<std::string, long> available;
  for (const auto& w : b) ++available[w];
  std::vector<std::string> out;
  for (const auto& w : a) {
    if (auto it = available.find(w); it != available.end() && it->second > 0)
      --it->second;
    else
      out.push_back(w);
  }
  return out;
}

}  // namespace

std::string_view to_string(RepairAction action) {
  switch (action) {
    case RepairAction::MarkerStrip: return "marker-strip";
    case RepairAction::Truncate: return "truncate";
    case RepairAction::BracketClosure: return "bracket-closure";
    case RepairAction::EmptyDelete: return "empty-delete";
  }
  return "unknown";
}

RepairOutcome repair(std::string_view raw) noexcept {
  try {
    return run(raw);
  } catch (...) {
    RepairOutcome outcome;
    outcome.fatal = true;
    outcome.reason = "internal failure";
    return outcome;
  }
}

AlignmentDiagnostics check_alignment(const SyntaxTree& tree, std::string_view sentence, WordRule rule) {
  const auto words = split_words(sentence, rule);
  const auto yield = yield_tokens(tree);
  AlignmentDiagnostics d;
  d.missing = multiset_difference(words, yield);
  d.extra = multiset_difference(yield, words);
  d.reordered = d.missing.empty() && d.extra.empty() && words != yield;
  return d;
}

}  // namespace corchete::repair
