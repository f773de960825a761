#include "corchete/render.hpp"

#include <algorithm>
#include <cstdio>
#include <sstream>

namespace corchete::render {

namespace {

constexpr std::size_t kSiblingGap = 2;

std::size_t display_width(const std::string& s) {
  return static_cast<std::size_t>(
      std::count_if(s.begin(), s.end(), [](char c) { return (static_cast<unsigned char>(c) & 0xC0) != 0x80; }));
}

struct Block {
  std::vector<PlacedNode> nodes;  // nodes[0] is the block's root
  std::size_t width = 0;
  std::size_t height = 0;
};

void shift(Block& b, std::size_t columns, std::size_t rows) {
  for (auto& n : b.nodes) {
    n.left += columns;
    n.anchor += columns;
    n.row += rows;
  }
}

Block place(const SyntaxTree& t) {
  Block block;
  if (t.is_leaf()) {
    const std::size_t w = display_width(t.token());
    block.nodes.push_back({t.token(), 0, (w - 1) / 2, 0, true, {}});
    block.width = w;
    block.height = 1;
    return block;
  }

  std::vector<Block> kids;
  for (const auto& c : t.children()) kids.push_back(place(c));
  const std::size_t below = kids.size() == 1 ? 2 : 3;  // label, '|', optional '-' row

  std::size_t offset = 0;
  std::vector<std::size_t> offsets;
  for (const auto& k : kids) {
    offsets.push_back(offset);
    offset += k.width + kSiblingGap;
  }
  const std::size_t first_anchor = offsets.front() + kids.front().nodes.front().anchor;
  const std::size_t last_anchor = offsets.back() + kids.back().nodes.front().anchor;
  std::size_t anchor = (first_anchor + last_anchor) / 2;

  const std::size_t label_width = display_width(t.label());
  const std::size_t half = (label_width - 1) / 2;
  std::size_t extra = 0;
  if (anchor < half) {
    extra = half - anchor;
    anchor += extra;
  }

  block.nodes.push_back({t.label(), anchor - half, anchor, 0, false, {}});
  std::size_t width = anchor - half + label_width;
  std::size_t height = 0;
  for (std::size_t i = 0; i < kids.size(); ++i) {
    Block& k = kids[i];
    shift(k, offsets[i] + extra, below);
    width = std::max(width, offsets[i] + extra + k.width);
    height = std::max(height, k.height);
    const std::size_t base = block.nodes.size();
    block.nodes.front().children.push_back(base);
    for (auto& n : k.nodes) {
      for (auto& c : n.children) c += base;
      block.nodes.push_back(std::move(n));
    }
  }
  block.width = width;
  block.height = below + height;
  return block;
}

using Grid = std::vector<std::vector<std::string>>;  // one code point per cell

void put_text(Grid& grid, std::size_t row, std::size_t col, const std::string& text) {
  std::size_t i = 0;
  while (i < text.size()) {
    std::size_t len = 1;
    while (i + len < text.size() && (static_cast<unsigned char>(text[i + len]) & 0xC0) == 0x80) ++len;
    grid[row][col++] = text.substr(i, len);
    i += len;
  }
}

std::string escape_xml(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

}  // namespace

Layout layout(const SyntaxTree& tree) {
  Block b = place(tree);
  return Layout{std::move(b.nodes), b.width, b.height};
}

std::string render_ascii(const SyntaxTree& tree) {
  const Layout l = layout(tree);
  Grid grid(l.rows, std::vector<std::string>(l.width, " "));

  for (const auto& n : l.nodes) {
    put_text(grid, n.row, n.left, n.text);
    if (n.leaf || n.children.empty()) continue;
    grid[n.row + 1][n.anchor] = "|";
    if (n.children.size() == 1) continue;
    const std::size_t from = l.nodes[n.children.front()].anchor;
    const std::size_t to = l.nodes[n.children.back()].anchor;
    for (std::size_t c = from; c <= to; ++c) grid[n.row + 2][c] = "-";
    for (const auto idx : n.children) grid[n.row + 2][l.nodes[idx].anchor] = "+";
  }

  std::string out;
  for (const auto& cells : grid) {
    std::string line;
    for (const auto& cell : cells) line += cell;
    line.erase(line.find_last_not_of(' ') + 1);
    out += line;
    out += '\n';
  }
  return out;
}

std::string render_svg(const SyntaxTree& tree) {
  constexpr double cell_w = 9.0;
  constexpr double row_h = 16.0;
  constexpr double margin = 10.0;
  const Layout l = layout(tree);

  auto x_of = [&](std::size_t col) { return margin + (static_cast<double>(col) + 0.5) * cell_w; };
  auto y_of = [&](std::size_t row) { return margin + (static_cast<double>(row) + 0.75) * row_h; };
  char buf[256];

  std::ostringstream out;
  std::snprintf(buf, sizeof buf,
                "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"%.0f\" height=\"%.0f\" "
                "font-family=\"monospace\" font-size=\"14\">\n",
                2 * margin + static_cast<double>(l.width) * cell_w, 2 * margin + static_cast<double>(l.rows) * row_h);
  out << buf;
  for (const auto& n : l.nodes) {
    for (const auto idx : n.children) {
      const auto& c = l.nodes[idx];
      std::snprintf(buf, sizeof buf, "  <line x1=\"%.1f\" y1=\"%.1f\" x2=\"%.1f\" y2=\"%.1f\" stroke=\"black\"/>\n",
                    x_of(n.anchor), y_of(n.row) + 0.3 * row_h, x_of(c.anchor), y_of(c.row) - 0.8 * row_h);
      out << buf;
    }
  }
  for (const auto& n : l.nodes) {
    const double center = margin + (static_cast<double>(n.left) + static_cast<double>(display_width(n.text)) / 2.0) * cell_w;
    std::snprintf(buf, sizeof buf, "  <text x=\"%.1f\" y=\"%.1f\" text-anchor=\"middle\"%s>", center, y_of(n.row),
                  n.leaf ? " font-style=\"italic\"" : " font-weight=\"bold\"");
    out << buf << escape_xml(n.text) << "</text>\n";
  }
  out << "</svg>\n";
  return out.str();
}

}  // namespace corchete::render
