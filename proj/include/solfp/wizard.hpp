// SPDX-License-Identifier: Apache-2.0
//
// Semi-automatic review: walks the candidates one by one, shows the code
// and each pattern check, and lets the user accept, override or skip every
// check before the verdict is recomputed.

#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "solfp/report.hpp"

namespace solfp {

enum class CheckDecision { Accept, Override, Skip };

struct WizardDecision {
  std::string file;
  std::uint32_t line = 0;
  VulnClass vuln = VulnClass::URV;
  Outcome automatic = Outcome::LikelyTP;
  Outcome final = Outcome::LikelyTP;
  /// One per pattern check, in check order.
  std::vector<CheckDecision> decisions;
  /// "auto", "user-confirmed-TP", "user-flagged-FP" or "user-adjusted".
  std::string mark;
  /// True when the answers ran out before this candidate was done.
  bool resolved_automatically = false;
};

struct WizardResult {
  std::vector<FileReport> reports;
  std::vector<WizardDecision> trail;
};

/// Reads one answer line per prompt from `answers` ("a", "o", "s"; empty
/// means accept). On end of input the remaining checks keep their automatic
/// results. With `echo`, each answer read is written after its prompt so a
/// scripted session leaves a readable transcript.
WizardResult run_wizard(std::vector<FileReport> reports, std::istream& answers, std::ostream& prompts, bool echo);

/// The analyze rendering of the final verdicts followed by the decision
/// trail.
std::string render_wizard_text(const WizardResult& r, const RenderOptions& opts = {});

}  // namespace solfp
