// SPDX-License-Identifier: Apache-2.0
//
// Scoring verdicts against per-line ground truth.

#pragma once

#include <cstdint>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "solfp/analysis.hpp"

namespace solfp {

enum class Label { TP, FP };

const char* to_string(Label l);

struct GroundTruthLabel {
  std::string file;
  std::uint32_t line = 1;
  VulnClass vuln = VulnClass::URV;
  Label label = Label::TP;
};

struct LabelError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// CSV with header `file,line,vuln,label`. Throws LabelError naming the row
/// (1-based, header included) on a malformed row or a duplicate key.
std::vector<GroundTruthLabel> parse_labels(std::string_view csv);
std::vector<GroundTruthLabel> load_labels(const std::string& path);

/// One verdict reduced to what scoring needs.
struct ScoredLine {
  std::string file;
  std::uint32_t line = 1;
  VulnClass vuln = VulnClass::URV;
  Outcome outcome = Outcome::LikelyTP;
};

struct UnanalyzedRange {
  std::string file;
  std::uint32_t line_start = 1;
  std::uint32_t line_end = 1;
};

struct EvaluationInput {
  std::vector<ScoredLine> lines;
  std::vector<UnanalyzedRange> not_analyzed;
  /// Files that were analyzed; labels on other files count as missed.
  std::set<std::string> files;
};

EvaluationInput evaluation_input(const std::vector<FileReport>& reports);

/// Counts over the labels of one class. `tp + fp + tn + fn + missed()`
/// equals the number of labels of that class; missed lines are kept out of
/// the four cells here and folded in by metrics().
struct ConfusionMatrix {
  std::size_t tp = 0, fp = 0, tn = 0, fn = 0;
  std::size_t missed_tp = 0, missed_fp = 0;

  std::size_t missed() const { return missed_tp + missed_fp; }
  std::size_t total() const { return tp + fp + tn + fn + missed(); }
  bool operator==(const ConfusionMatrix&) const = default;
};

/// A label's line is positive when some verdict of its class there is
/// LikelyTP, missed when one is NotAnalyzed or the line lies in an
/// unanalyzed scope or file, and negative otherwise.
ConfusionMatrix evaluate(const EvaluationInput& in, const std::vector<GroundTruthLabel>& labels, VulnClass vuln,
                         std::vector<std::string>* diagnostics = nullptr);

struct Metrics {
  std::optional<double> precision;
  std::optional<double> specificity;
  std::optional<double> sensitivity;
  double runtime_seconds = 0;
};

/// Ratios over the matrix with missed TP lines counted as false negatives
/// and missed FP lines as true negatives. Undefined ratios stay empty.
Metrics metrics(const ConfusionMatrix& cm, double runtime_seconds = 0);

struct ClassResult {
  VulnClass vuln = VulnClass::URV;
  ConfusionMatrix matrix;
  Metrics metrics;
};

struct BenchResult {
  std::size_t files = 0;
  std::vector<ClassResult> classes;
  std::vector<std::string> diagnostics;
};

/// Analyzes every `.sol` file under `corpus_dir` once per class, timing
/// each pass, and scores it against `labels` (paths relative to
/// `corpus_dir`).
BenchResult run_benchmark(const std::string& corpus_dir, const std::vector<GroundTruthLabel>& labels,
                          const AnalysisOptions& opts = {}, unsigned threads = 0);

/// `.sol` files under `dir`, as sorted paths relative to it.
std::vector<std::string> list_sources(const std::string& dir);

std::string render_bench_text(const BenchResult& r);
std::string render_bench_json(const BenchResult& r);

}  // namespace solfp
