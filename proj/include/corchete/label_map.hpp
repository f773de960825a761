#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace corchete::ingest {

class LabelMapError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Attributes of one XML element, by name.
using Attributes = std::map<std::string, std::string, std::less<>>;

/// Rewrites corpus element names into school-grammar labels.
///
/// Rules are read from a line-oriented file:
///
///     # comment
///     sn -> NP                 base label
///     sn:elliptic=yes -> SPLICE
///     grup.nom -> SPLICE       node removed, children promoted
///     *:func=suj -> /S         suffix rule, yields NP/S
///
/// Base rules are tried in file order and the first match wins; a rule with
/// an attribute condition only matches elements carrying that value. Suffix
/// rules (target starting with `/`) are applied after a base label is found,
/// first match only, and never to a label that already holds a `/`.
class LabelMap {
 public:
  struct Rule {
    std::string tag;  // "*" matches any element name
    std::optional<std::pair<std::string, std::string>> attribute;
    std::string target;  // label, "SPLICE", or "/Suffix"
    int line = 0;

    bool matches(std::string_view name, const Attributes& attrs) const;
  };

  /// Result of mapping one element: a label, or nothing when spliced.
  struct Decision {
    bool splice = false;
    std::string label;
  };

  LabelMap() = default;

  static LabelMap parse(std::string_view text);
  static LabelMap load(const std::filesystem::path& path);

  /// Empty optional when no base rule covers the element.
  std::optional<Decision> map(std::string_view name, const Attributes& attrs) const;

  const std::vector<Rule>& base_rules() const noexcept { return base_; }
  const std::vector<Rule>& suffix_rules() const noexcept { return suffix_; }
  bool empty() const noexcept { return base_.empty(); }

 private:
  std::vector<Rule> base_;
  std::vector<Rule> suffix_;
};

}  // namespace corchete::ingest
