// SPDX-License-Identifier: Apache-2.0
//
// End-to-end analysis of source files: parse, model, detect, classify.

#pragma once

#include <memory>
#include <set>
#include <string>
#include <vector>

#include "solfp/patterns.hpp"

namespace solfp {

struct AnalysisOptions {
  std::set<VulnClass> classes{VulnClass::URV, VulnClass::REE, VulnClass::TD};
  ClassifyOptions classify;
};

struct FileReport {
  /// Name the file is reported under.
  std::string file;
  bool readable = true;
  std::string error;
  /// Keeps the syntax tree alive for the candidates in `verdicts`.
  std::shared_ptr<const UnitModel> model;
  std::shared_ptr<const std::string> text;
  std::vector<Verdict> verdicts;
  std::vector<NotAnalyzedScope> not_analyzed;
  std::vector<Diagnostic> diagnostics;
  /// Wall-clock seconds spent in parse, model, detect and classify.
  double seconds = 0;

  bool has_likely_tp() const;
  std::size_t count(Outcome o) const;
};

FileReport analyze_source(std::string_view text, const std::string& file, const AnalysisOptions& opts = {});

/// Reads `path` and reports it as `display_name` (defaults to `path`). An
/// unreadable file yields `readable = false` rather than an exception.
FileReport analyze_file(const std::string& path, const AnalysisOptions& opts = {},
                        const std::string& display_name = {});

/// Analyzes files on up to `threads` workers (0: default_thread_count()).
/// Reports come back in input order whatever the scheduling.
std::vector<FileReport> analyze_files(const std::vector<std::string>& paths, const AnalysisOptions& opts = {},
                                      unsigned threads = 0, const std::vector<std::string>& display_names = {});

/// Hardware concurrency, capped by the DETECT_THREADS environment variable.
unsigned default_thread_count();

}  // namespace solfp
