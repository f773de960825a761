#pragma once

#include <cstddef>
#include <set>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace corchete {

/// Failure categories reported by parse_bracketed.
enum class ParseErrorKind {
  UnbalancedBrackets,
  EmptyConstituent,
  StrayToken,
  MissingLabel,
  EmptyInput,
};

std::string_view to_string(ParseErrorKind kind);

class ParseError : public std::runtime_error {
 public:
  ParseError(ParseErrorKind kind, std::size_t position, const std::string& detail);

  ParseErrorKind kind() const noexcept { return kind_; }
  /// Byte offset of the first violation in the input text.
  std::size_t position() const noexcept { return position_; }

 private:
  ParseErrorKind kind_;
  std::size_t position_;
};

/// Raised when a label or token violates the notation's character rules.
class InvalidTreeError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// True for a nonempty string without whitespace, `[` or `]`.
bool is_valid_atom(std::string_view text) noexcept;

/// A labeled ordered tree whose leaves carry surface tokens.
///
/// Every node is either a leaf (a single token, no label) or an internal
/// node (a label and at least one child). Values are immutable once built.
class SyntaxTree {
 public:
  static SyntaxTree leaf(std::string token);
  static SyntaxTree node(std::string label, std::vector<SyntaxTree> children);

  bool is_leaf() const noexcept { return leaf_; }
  /// Internal node whose children are all leaves.
  bool is_preterminal() const noexcept;

  /// Constituent tag; empty for leaves.
  const std::string& label() const noexcept { return leaf_ ? empty_ : text_; }
  /// Surface token; empty for internal nodes.
  const std::string& token() const noexcept { return leaf_ ? text_ : empty_; }
  const std::vector<SyntaxTree>& children() const noexcept { return children_; }

  std::size_t leaf_count() const noexcept;
  std::size_t internal_count() const noexcept;
  /// Number of levels, the leaf level included: `[X a]` has depth 2.
  std::size_t depth() const noexcept;

  friend bool operator==(const SyntaxTree&, const SyntaxTree&) = default;

 private:
  SyntaxTree(bool leaf, std::string text, std::vector<SyntaxTree> children)
      : leaf_(leaf), text_(std::move(text)), children_(std::move(children)) {}

  static const std::string empty_;

  bool leaf_ = true;
  std::string text_;
  std::vector<SyntaxTree> children_;
};

struct LabeledSpan {
  std::string label;
  std::size_t start = 0;  // inclusive token index
  std::size_t end = 0;    // exclusive token index

  friend auto operator<=>(const LabeledSpan&, const LabeledSpan&) = default;
};

/// Reads one square-bracket expression, `[label child...]`, where each child
/// is a nested expression or a bare token. Surrounding whitespace is ignored.
SyntaxTree parse_bracketed(std::string_view text);

/// Canonical single-space form, e.g. `[A [B x] y]`.
std::string serialize(const SyntaxTree& tree);

std::vector<std::string> yield_tokens(const SyntaxTree& tree);

/// One span per internal node whose label is not ignored, sorted, duplicates
/// kept. Preterminals are included only when `include_preterminals` is set.
std::vector<LabeledSpan> extract_spans(const SyntaxTree& tree, bool include_preterminals,
                                       const std::set<std::string, std::less<>>& ignore_labels = {});

/// Collapses every run of whitespace to one space and trims both ends.
std::string normalize_whitespace(std::string_view text);

}  // namespace corchete
