#include "corchete/binarize.hpp"

#include <vector>

namespace corchete::pcfg {

namespace {

std::string intermediate_label(const std::string& parent, const std::vector<SyntaxTree>& items, std::size_t from,
                               std::size_t order) {
  std::string label = parent;
  label += kIntermediateMarker;
  for (std::size_t k = from; k < items.size() && k < from + order; ++k) {
    if (k > from) label += '-';
    label += items[k].label();
  }
  label += '>';
  return label;
}

SyntaxTree factor(const std::string& label, std::vector<SyntaxTree>& items, std::size_t from, std::size_t order,
                  const std::string& parent) {
  if (items.size() - from == 2)
    return SyntaxTree::node(label, {std::move(items[from]), std::move(items[from + 1])});
  SyntaxTree rest = factor(intermediate_label(parent, items, from + 1, order), items, from + 1, order, parent);
  return SyntaxTree::node(label, {std::move(items[from]), std::move(rest)});
}

std::vector<std::string> split_composite(const std::string& label) {
  std::vector<std::string> parts;
  std::size_t start = 0;
  while (true) {
    const auto plus = label.find(kUnarySeparator, start);
    parts.push_back(label.substr(start, plus == std::string::npos ? std::string::npos : plus - start));
    if (plus == std::string::npos) break;
    start = plus + 1;
  }
  for (const auto& p : parts)
    if (p.empty()) throw MalformedIntermediateLabel("empty component in composite label '" + label + "'");
  return parts;
}

void flatten_into(const SyntaxTree& node, std::vector<SyntaxTree>& out);

SyntaxTree restore(const SyntaxTree& node) {
  if (node.is_leaf()) return node;
  const std::string& label = node.label();
  if (is_intermediate_label(label))
    throw MalformedIntermediateLabel("intermediate label '" + label + "' outside a factored node");
  if (label.front() == kTokenWrapper)
    throw MalformedIntermediateLabel("token wrapper '" + label + "' outside a factored node");

  std::vector<SyntaxTree> children;
  for (const auto& c : node.children()) flatten_into(c, children);

  const auto parts = split_composite(label);
  SyntaxTree result = SyntaxTree::node(parts.back(), std::move(children));
  for (auto it = parts.rbegin() + 1; it != parts.rend(); ++it) result = SyntaxTree::node(*it, {std::move(result)});
  return result;
}

void flatten_into(const SyntaxTree& node, std::vector<SyntaxTree>& out) {
  if (node.is_leaf()) {
    out.push_back(node);
    return;
  }
  const std::string& label = node.label();
  if (label.find(kIntermediateMarker) != std::string::npos) {
    if (!is_intermediate_label(label)) throw MalformedIntermediateLabel("malformed intermediate label '" + label + "'");
    for (const auto& c : node.children()) flatten_into(c, out);
    return;
  }
  if (label.front() == kTokenWrapper) {
    if (node.children().size() != 1 || !node.children().front().is_leaf())
      throw MalformedIntermediateLabel("token wrapper '" + label + "' must hold exactly one token");
    out.push_back(node.children().front());
    return;
  }
  out.push_back(restore(node));
}

}  // namespace

bool is_intermediate_label(std::string_view label) noexcept {
  const auto pos = label.find(kIntermediateMarker);
  return pos != std::string_view::npos && pos > 0 && label.back() == '>';
}

SyntaxTree binarize(const SyntaxTree& tree, std::size_t order) {
  if (tree.is_leaf()) return tree;

  const SyntaxTree* node = &tree;
  std::string label = tree.label();
  while (node->children().size() == 1 && !node->children().front().is_leaf()) {
    node = &node->children().front();
    label += kUnarySeparator;
    label += node->label();
  }
  if (node->children().size() == 1) return SyntaxTree::node(label, {node->children().front()});

  std::vector<SyntaxTree> items;
  items.reserve(node->children().size());
  for (const auto& c : node->children()) {
    if (c.is_leaf())
      items.push_back(SyntaxTree::node(kTokenWrapper + label, {c}));
    else
      items.push_back(binarize(c, order));
  }
  return factor(label, items, 0, order, label);
}

SyntaxTree debinarize(const SyntaxTree& tree) { return restore(tree); }

}  // namespace corchete::pcfg
