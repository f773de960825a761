#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <string_view>

#include "corchete/tree.hpp"

namespace corchete::pcfg {

class MalformedIntermediateLabel : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Label encodings introduced by binarize. Source labels containing '+' or
// '|<', or starting with '@', are reserved.
inline constexpr char kUnarySeparator = '+';
inline constexpr std::string_view kIntermediateMarker = "|<";
inline constexpr char kTokenWrapper = '@';

/// Converts a tree into Chomsky-normal shape.
///
/// Unary chains collapse into `A+B` labels. A node with more than two
/// children is right-factored: `[A B C D]` becomes `[A B [A|<C-D> C D]]`,
/// with at most `order` sibling labels recorded in each intermediate label.
/// A bare token sharing a parent `A` with other children is wrapped in a
/// preterminal labeled `@A`.
SyntaxTree binarize(const SyntaxTree& tree, std::size_t order = 2);

/// Exact inverse of binarize on its image.
SyntaxTree debinarize(const SyntaxTree& tree);

bool is_intermediate_label(std::string_view label) noexcept;

}  // namespace corchete::pcfg
