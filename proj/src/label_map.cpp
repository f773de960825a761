#include "corchete/label_map.hpp"

#include <fstream>
#include <sstream>

#include "corchete/tree.hpp"

namespace corchete::ingest {

namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

[[noreturn]] void fail(int line, const std::string& what) {
  throw LabelMapError("label map line " + std::to_string(line) + ": " + what);
}

}  // namespace

bool LabelMap::Rule::matches(std::string_view name, const Attributes& attrs) const {
  if (tag != "*" && tag != name) return false;
  if (!attribute) return true;
  const auto it = attrs.find(attribute->first);
  return it != attrs.end() && it->second == attribute->second;
}

LabelMap LabelMap::parse(std::string_view text) {
  LabelMap map;
  std::istringstream in{std::string(text)};
  std::string raw;
  int line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    std::string_view line = raw;
    if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;

    const auto arrow = line.find("->");
    if (arrow == std::string_view::npos) fail(line_no, "missing '->'");
    const std::string_view source = trim(line.substr(0, arrow));
    const std::string_view target = trim(line.substr(arrow + 2));
    if (source.empty()) fail(line_no, "missing source tag");
    if (target.empty()) fail(line_no, "missing target label");

    Rule rule;
    rule.line = line_no;
    if (const auto colon = source.find(':'); colon != std::string_view::npos) {
      rule.tag = std::string(trim(source.substr(0, colon)));
      const std::string_view cond = trim(source.substr(colon + 1));
      const auto eq = cond.find('=');
      if (eq == std::string_view::npos || eq == 0) fail(line_no, "attribute condition must be attr=value");
      rule.attribute.emplace(std::string(trim(cond.substr(0, eq))), std::string(trim(cond.substr(eq + 1))));
    } else {
      rule.tag = std::string(source);
    }
    if (rule.tag.empty()) fail(line_no, "missing source tag");
    rule.target = std::string(target);

    if (rule.target == "SPLICE") {
      map.base_.push_back(std::move(rule));
    } else if (rule.target.front() == '/') {
      if (!is_valid_atom(rule.target) || rule.target.size() < 2) fail(line_no, "invalid suffix '" + rule.target + "'");
      map.suffix_.push_back(std::move(rule));
    } else {
      if (!is_valid_atom(rule.target)) fail(line_no, "invalid target label '" + rule.target + "'");
      map.base_.push_back(std::move(rule));
    }
  }
  return map;
}

LabelMap LabelMap::load(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw LabelMapError("cannot open label map " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse(buf.str());
}

std::optional<LabelMap::Decision> LabelMap::map(std::string_view name, const Attributes& attrs) const {
  for (const auto& rule : base_) {
    if (!rule.matches(name, attrs)) continue;
    if (rule.target == "SPLICE") return Decision{true, {}};
    Decision decision{false, rule.target};
    if (decision.label.find('/') == std::string::npos) {
      for (const auto& suffix : suffix_) {
        if (suffix.matches(name, attrs)) {
          decision.label += suffix.target;
          break;
        }
      }
    }
    return decision;
  }
  return std::nullopt;
}

}  // namespace corchete::ingest
