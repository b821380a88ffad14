// SPDX-License-Identifier: Apache-2.0
//
// Triage of findings reported by other scanners: each finding is matched to
// the verdict on the same file and line and judged accordingly.

#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "solfp/analysis.hpp"

namespace solfp {

struct ExternalFinding {
  std::string tool;
  std::string contract_file;
  std::uint32_t line = 1;
  /// Empty for classes this tool does not judge; `vuln_label` keeps the text.
  std::optional<VulnClass> vuln;
  std::string vuln_label;
  std::optional<std::string> raw_message;
};

struct FindingsFile {
  std::string tool;
  std::vector<ExternalFinding> findings;
  /// One entry per dropped record, e.g. "finding 3: line must be >= 1".
  std::vector<std::string> diagnostics;
};

struct FindingsError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Parses the JSON findings format:
/// `{"tool": s, "findings": [{"file": s, "line": n, "vuln": s, "message": s?}]}`.
/// Throws FindingsError when the document as a whole is unusable.
FindingsFile parse_findings(std::string_view json_text);

/// Reads and parses a findings file. Only the "json" format exists.
FindingsFile ingest_report(const std::string& path, const std::string& format = "json");

enum class TriageJudgement { ConfirmedSuspicious, ProbableFalseAlarm, NoCandidateHere, Unjudged };

const char* to_string(TriageJudgement j);

struct TriageResult {
  ExternalFinding finding;
  TriageJudgement judgement = TriageJudgement::Unjudged;
  /// ProbableFalseAlarm only; never empty then.
  std::vector<PatternId> patterns;
  std::string justification;
};

/// Matches each finding to the report whose `file` equals its
/// `contract_file`. Results follow input order, one per finding.
std::vector<TriageResult> triage(const std::vector<ExternalFinding>& findings,
                                 const std::vector<FileReport>& reports);

std::string render_triage_text(const std::vector<TriageResult>& results);
std::string render_triage_json(const std::vector<TriageResult>& results);

/// Path of a finding's contract: relative to the findings file's directory
/// when it exists there, otherwise as given (relative to the working
/// directory).
std::string resolve_contract_path(const std::string& contract_file, const std::string& report_path);

/// Analyzes every contract file the findings of a judged class refer to,
/// each reported under the name the findings use.
std::vector<FileReport> analyze_referenced(const FindingsFile& findings, const std::string& report_path,
                                           const AnalysisOptions& opts = {}, unsigned threads = 0);

}  // namespace solfp
