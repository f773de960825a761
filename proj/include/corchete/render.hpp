#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "corchete/tree.hpp"

namespace corchete::render {

/// Grid placement of one node: text centered on `anchor`, in row `row`.
struct PlacedNode {
  std::string text;
  std::size_t left = 0;    // first column of the text
  std::size_t anchor = 0;  // column that edges attach to
  std::size_t row = 0;
  bool leaf = false;
  std::vector<std::size_t> children;  // indices into Layout::nodes
};

/// Top-down layout on a character grid. Below each label comes a `|` row,
/// then a `+--+` row when the node branches; siblings are one column apart.
struct Layout {
  std::vector<PlacedNode> nodes;  // nodes[0] is the root
  std::size_t width = 0;
  std::size_t rows = 0;
};

Layout layout(const SyntaxTree& tree);

/// Plain ASCII drawing, trailing spaces trimmed, one `\n` per row.
std::string render_ascii(const SyntaxTree& tree);

/// Standalone SVG document of the same layout.
std::string render_svg(const SyntaxTree& tree);

}  // namespace corchete::render
