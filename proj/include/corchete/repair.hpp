#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "corchete/tree.hpp"

namespace corchete::repair {

enum class RepairAction { MarkerStrip, Truncate, BracketClosure, EmptyDelete };

std::string_view to_string(RepairAction action);

struct RepairOutcome {
  std::optional<std::string> repaired;  // canonical bracket string
  std::vector<RepairAction> actions;    // in the order applied
  bool fatal = false;
  std::string reason;                   // why repair gave up, when fatal
};

/// Turns raw model output into a parseable bracket string.
///
/// Steps, in order: strip `<s>`/`</s>` markers and anything before the
/// first `[`; cut everything after the bracket depth first returns to zero;
/// close brackets left open; delete empty constituents. Never throws.
RepairOutcome repair(std::string_view raw) noexcept;

struct AlignmentDiagnostics {
  std::vector<std::string> missing;  // in the sentence, absent from the yield
  std::vector<std::string> extra;    // in the yield, absent from the sentence
  bool reordered = false;            // same multiset, different order

  bool clean() const noexcept { return missing.empty() && extra.empty() && !reordered; }
};

/// How a raw sentence is split into words before comparison.
enum class WordRule { Whitespace, WhitespaceSanitized };

AlignmentDiagnostics check_alignment(const SyntaxTree& tree, std::string_view sentence,
                                     WordRule rule = WordRule::WhitespaceSanitized);

}  // namespace corchete::repair
