#include "corchete/tree.hpp"

#include <algorithm>

namespace corchete {

namespace {

bool is_space(char c) noexcept {
  return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' || c == '\v';
}

bool is_delimiter(char c) noexcept { return is_space(c) || c == '[' || c == ']'; }

void serialize_into(const SyntaxTree& tree, std::string& out) {
  if (tree.is_leaf()) {
    out += tree.token();
    return;
  }
  out += '[';
  out += tree.label();
  for (const auto& child : tree.children()) {
    out += ' ';
    serialize_into(child, out);
  }
  out += ']';
}

void collect_yield(const SyntaxTree& tree, std::vector<std::string>& out) {
  if (tree.is_leaf()) {
    out.push_back(tree.token());
    return;
  }
  for (const auto& child : tree.children()) collect_yield(child, out);
}

std::size_t collect_spans(const SyntaxTree& tree, std::size_t start, bool include_preterminals,
                          const std::set<std::string, std::less<>>& ignore,
                          std::vector<LabeledSpan>& out) {
  if (tree.is_leaf()) return start + 1;
  std::size_t end = start;
  for (const auto& child : tree.children()) end = collect_spans(child, end, include_preterminals, ignore, out);
  if ((include_preterminals || !tree.is_preterminal()) && !ignore.contains(tree.label()))
    out.push_back({tree.label(), start, end});
  return end;
}

}  // namespace

std::string_view to_string(ParseErrorKind kind) {
  switch (kind) {
    case ParseErrorKind::UnbalancedBrackets: return "UnbalancedBrackets";
    case ParseErrorKind::EmptyConstituent: return "EmptyConstituent";
    case ParseErrorKind::StrayToken: return "StrayToken";
    case ParseErrorKind::MissingLabel: return "MissingLabel";
    case ParseErrorKind::EmptyInput: return "EmptyInput";
  }
  return "Unknown";
}

ParseError::ParseError(ParseErrorKind kind, std::size_t position, const std::string& detail)
    : std::runtime_error(std::string(to_string(kind)) + " at offset " + std::to_string(position) +
                         (detail.empty() ? "" : ": " + detail)),
      kind_(kind),
      position_(position) {}

const std::string SyntaxTree::empty_;

bool is_valid_atom(std::string_view text) noexcept {
  return !text.empty() && std::none_of(text.begin(), text.end(), is_delimiter);
}

SyntaxTree SyntaxTree::leaf(std::string token) {
  if (!is_valid_atom(token)) throw InvalidTreeError("invalid token '" + token + "'");
  return SyntaxTree(true, std::move(token), {});
}

SyntaxTree SyntaxTree::node(std::string label, std::vector<SyntaxTree> children) {
  if (!is_valid_atom(label)) throw InvalidTreeError("invalid label '" + label + "'");
  if (children.empty()) throw InvalidTreeError("node '" + label + "' has no children");
  return SyntaxTree(false, std::move(label), std::move(children));
}

bool SyntaxTree::is_preterminal() const noexcept {
  return !leaf_ && std::all_of(children_.begin(), children_.end(), [](const SyntaxTree& c) { return c.is_leaf(); });
}

std::size_t SyntaxTree::leaf_count() const noexcept {
  if (leaf_) return 1;
  std::size_t n = 0;
  for (const auto& c : children_) n += c.leaf_count();
  return n;
}

std::size_t SyntaxTree::internal_count() const noexcept {
  if (leaf_) return 0;
  std::size_t n = 1;
  for (const auto& c : children_) n += c.internal_count();
  return n;
}

std::size_t SyntaxTree::depth() const noexcept {
  std::size_t d = 0;
  for (const auto& c : children_) d = std::max(d, c.depth());
  return d + 1;
}

SyntaxTree parse_bracketed(std::string_view text) {
  struct Frame {
    std::string label;
    std::vector<SyntaxTree> children;
    std::size_t open;
  };
  std::vector<Frame> stack;
  std::vector<SyntaxTree> roots;

  std::size_t i = 0;
  const std::size_t n = text.size();
  while (i < n) {
    const char c = text[i];
    if (is_space(c)) {
      ++i;
    } else if (c == '[') {
      if (!roots.empty()) throw ParseError(ParseErrorKind::StrayToken, i, "content after the root constituent");
      const std::size_t open = i++;
      while (i < n && is_space(text[i])) ++i;
      const std::size_t begin = i;
      while (i < n && !is_delimiter(text[i])) ++i;
      if (i == begin) {
        if (i < n && text[i] == ']') throw ParseError(ParseErrorKind::EmptyConstituent, open, "'[]'");
        if (i >= n) throw ParseError(ParseErrorKind::UnbalancedBrackets, n, "input ends inside a constituent");
        throw ParseError(ParseErrorKind::MissingLabel, begin, "constituent without a label");
      }
      stack.push_back({std::string(text.substr(begin, i - begin)), {}, open});
    } else if (c == ']') {
      if (stack.empty()) throw ParseError(ParseErrorKind::UnbalancedBrackets, i, "unmatched ']'");
      Frame frame = std::move(stack.back());
      stack.pop_back();
      if (frame.children.empty())
        throw ParseError(ParseErrorKind::EmptyConstituent, frame.open, "'[" + frame.label + "]'");
      SyntaxTree node = SyntaxTree::node(std::move(frame.label), std::move(frame.children));
      if (stack.empty())
        roots.push_back(std::move(node));
      else
        stack.back().children.push_back(std::move(node));
      ++i;
    } else {
      const std::size_t begin = i;
      while (i < n && !is_delimiter(text[i])) ++i;
      if (stack.empty())
        throw ParseError(ParseErrorKind::StrayToken, begin,
                         "token '" + std::string(text.substr(begin, i - begin)) + "' outside any bracket");
      stack.back().children.push_back(SyntaxTree::leaf(std::string(text.substr(begin, i - begin))));
    }
  }
  if (!stack.empty())
    throw ParseError(ParseErrorKind::UnbalancedBrackets, n,
                     std::to_string(stack.size()) + " constituent(s) left open");
  if (roots.empty()) throw ParseError(ParseErrorKind::EmptyInput, 0, "no bracketed expression");
  return std::move(roots.front());
}

std::string serialize(const SyntaxTree& tree) {
  std::string out;
  serialize_into(tree, out);
  return out;
}

std::vector<std::string> yield_tokens(const SyntaxTree& tree) {
  std::vector<std::string> out;
  collect_yield(tree, out);
  return out;
}

std::vector<LabeledSpan> extract_spans(const SyntaxTree& tree, bool include_preterminals,
                                       const std::set<std::string, std::less<>>& ignore_labels) {
  std::vector<LabeledSpan> out;
  collect_spans(tree, 0, include_preterminals, ignore_labels, out);
  std::sort(out.begin(), out.end());
  return out;
}

std::string normalize_whitespace(std::string_view text) {
  std::string out;
  out.reserve(text.size());
  bool pending_space = false;
  for (char c : text) {
    if (is_space(c)) {
      pending_space = !out.empty();
    } else {
      if (pending_space) out += ' ';
      pending_space = false;
      out += c;
    }
  }
  return out;
}

}  // namespace corchete
