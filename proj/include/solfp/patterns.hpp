// SPDX-License-Identifier: Apache-2.0
//
// False-positive anti-patterns. Each candidate is checked against every
// pattern of its class; any match turns it into a flagged false positive,
// and the verdict records the evidence for each check.

#pragma once

#include <optional>
#include <set>
#include <string>
#include <vector>

#include "solfp/detectors.hpp"

namespace solfp {

enum class PatternId {
  URV1_Unreachable,
  URV2_RestrictiveModifier,
  URV3_GuardCondition,
  URV4_RecipientIsCaller,
  URV5_TerminalCall,
  REE1_Unreachable,
  REE2_RestrictiveModifier,
  REE3_GuardCondition,
  REE4_HardcodedTarget,
  REE5_NoStateChangeAfter,
  REE6_ValueWithinMsgValue,
  TD1_IntervalCheck,
};

/// Short identifier such as "URV3".
const char* to_string(PatternId p);
/// Full identifier such as "URV3_GuardCondition".
const char* long_name(PatternId p);
VulnClass family(PatternId p);

enum class Outcome { LikelyTP, FlaggedFP, NotAnalyzed };

const char* to_string(Outcome o);

struct PatternCheck {
  PatternId id;
  bool matched = false;
  std::string evidence;
};

struct Verdict {
  Candidate candidate;
  Outcome outcome = Outcome::LikelyTP;
  /// Non-empty exactly when outcome is FlaggedFP.
  std::vector<PatternId> matched;
  std::vector<PatternCheck> checks;
  std::string justification;
  /// NotAnalyzed only.
  std::string reason;

  bool has(PatternId p) const;
};

struct ClassifyOptions {
  /// Interval widths at or below this many seconds are manipulable.
  double interval_threshold = 20;
};

Verdict classify_urv(const Candidate& c);
Verdict classify_ree(const Candidate& c);
Verdict classify_td(const Candidate& c, const ClassifyOptions& opts = {});
Verdict classify(const Candidate& c, const ClassifyOptions& opts = {});

/// Verdicts for every candidate of the selected classes, ordered by
/// (file, line, class, column).
std::vector<Verdict> classify_all(const UnitModel& um, const ClassifyOptions& opts = {},
                                  const std::set<VulnClass>& classes = {VulnClass::URV, VulnClass::REE,
                                                                        VulnClass::TD});

/// Orders verdicts by (file, line, class, column).
void sort_verdicts(std::vector<Verdict>& vs);

/// Width in seconds of the interval a timestamp comparison checks, when it
/// can be read off the comparison; nullopt when it is compared against
/// other variables only.
std::optional<double> interval_width(const Expr& comparison, const ContractModel& m, const FunctionModel& f);

/// `msg.value`, `msg.value / k`, `msg.value - k` and locals assigned only
/// such forms.
bool bounded_by_msg_value(const Expr& amount, const FunctionModel& f);

}  // namespace solfp
