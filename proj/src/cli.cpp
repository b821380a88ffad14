// SPDX-License-Identifier: Apache-2.0

#include "solfp/cli.hpp"

#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>

#include "CLI11.hpp"
#include "solfp/benchmark.hpp"
#include "solfp/report.hpp"
#include "solfp/triage.hpp"
#include "solfp/wizard.hpp"

namespace solfp {

namespace {

constexpr int kClean = 0;
constexpr int kSuspicious = 1;
constexpr int kError = 2;

struct CommonFlags {
  std::string vuln = "urv,ree,td";
  long long threshold = 20;
  std::string format = "text";
  bool verbose = false;
};

void add_common(CLI::App* cmd, CommonFlags& f) {
  cmd->add_option("--vuln", f.vuln, "Classes to analyze, comma separated (urv,ree,td)");
  cmd->add_option("--interval-threshold", f.threshold, "Seconds a timestamp interval must exceed to be safe")
      ->check(CLI::Range(1LL, 1LL << 40));
  cmd->add_option("--format", f.format, "Output format")->check(CLI::IsMember({"text", "json"}));
  cmd->add_flag("--verbose", f.verbose, "Show every pattern check with its evidence");
}

/// Nullopt (after printing why) when the class list is unusable.
std::optional<AnalysisOptions> options_from(const CommonFlags& f, std::ostream& err) {
  AnalysisOptions o;
  o.classes.clear();
  std::stringstream ss(f.vuln);
  std::string item;
  while (std::getline(ss, item, ',')) {
    auto v = parse_vuln(item);
    if (!v) {
      err << "error: unknown vulnerability class `" << item << "` (expected urv, ree or td)\n";
      return std::nullopt;
    }
    o.classes.insert(*v);
  }
  if (o.classes.empty()) {
    err << "error: --vuln selects no class\n";
    return std::nullopt;
  }
  o.classify.interval_threshold = static_cast<double>(f.threshold);
  return o;
}

int analyze_exit(const std::vector<FileReport>& reports) {
  bool any_readable = false;
  bool suspicious = false;
  for (const FileReport& r : reports) {
    any_readable = any_readable || r.readable;
    suspicious = suspicious || r.has_likely_tp();
  }
  if (!any_readable) return kError;
  return suspicious ? kSuspicious : kClean;
}

void report_unreadable(const std::vector<FileReport>& reports, std::ostream& err) {
  for (const FileReport& r : reports)
    if (!r.readable) err << "error: " << r.error << "\n";
}

int cmd_analyze(const std::vector<std::string>& files, const CommonFlags& f, std::ostream& out, std::ostream& err) {
  auto opts = options_from(f, err);
  if (!opts) return kError;
  std::vector<FileReport> reports = analyze_files(files, *opts);
  if (f.format == "json") report_unreadable(reports, err);
  out << (f.format == "json" ? render_json(reports) : render_text(reports, {f.verbose}));
  return analyze_exit(reports);
}

int cmd_triage(const std::string& report, const CommonFlags& f, std::ostream& out, std::ostream& err) {
  auto opts = options_from(f, err);
  if (!opts) return kError;
  FindingsFile findings;
  try {
    findings = ingest_report(report);
  } catch (const FindingsError& e) {
    err << "error: " << e.what() << "\n";
    return kError;
  }
  for (const std::string& d : findings.diagnostics) err << "warning: " << d << "\n";

  std::vector<FileReport> reports = analyze_referenced(findings, report, *opts);
  report_unreadable(reports, err);

  std::vector<TriageResult> results = triage(findings.findings, reports);
  out << (f.format == "json" ? render_triage_json(results) : render_triage_text(results));
  for (const TriageResult& t : results)
    if (t.judgement == TriageJudgement::ConfirmedSuspicious) return kSuspicious;
  return kClean;
}

int cmd_bench(const std::string& corpus, const std::string& labels_path, const CommonFlags& f, std::ostream& out,
              std::ostream& err) {
  auto opts = options_from(f, err);
  if (!opts) return kError;
  std::error_code ec;
  if (!std::filesystem::is_directory(corpus, ec)) {
    err << "error: corpus directory " << corpus << " does not exist\n";
    return kError;
  }
  std::vector<GroundTruthLabel> labels;
  try {
    labels = load_labels(labels_path);
  } catch (const LabelError& e) {
    err << "error: " << e.what() << "\n";
    return kError;
  }
  BenchResult r = run_benchmark(corpus, labels, *opts);
  out << (f.format == "json" ? render_bench_json(r) : render_bench_text(r));
  return kClean;
}

int cmd_wizard(const std::vector<std::string>& files, const std::string& answers_path, const CommonFlags& f,
               std::istream& in, std::ostream& out, std::ostream& err, bool interactive) {
  if (answers_path.empty() && !interactive) {
    err << "warning: wizard needs a terminal or --answers; falling back to analyze\n";
    return cmd_analyze(files, f, out, err);
  }
  auto opts = options_from(f, err);
  if (!opts) return kError;
  std::ifstream answers_file;
  if (!answers_path.empty()) {
    answers_file.open(answers_path);
    if (!answers_file) {
      err << "error: cannot read answers file " << answers_path << "\n";
      return kError;
    }
  }
  std::vector<FileReport> reports = analyze_files(files, *opts);
  if (f.format == "json") report_unreadable(reports, err);
  int status = analyze_exit(reports);
  if (status == kError) return kError;
  std::istream& answers = answers_path.empty() ? in : answers_file;
  WizardResult w = run_wizard(std::move(reports), answers, out, !answers_path.empty());
  out << "\n" << (f.format == "json" ? render_json(w.reports) : render_wizard_text(w, {f.verbose}));
  return analyze_exit(w.reports);
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::istream& in, std::ostream& out, std::ostream& err,
            bool interactive) {
  CLI::App app{"Static checks that separate real URV, REE and TD findings from false alarms", "solfp"};
  app.require_subcommand(1);

  CommonFlags analyze_flags, triage_flags, bench_flags, wizard_flags;
  std::vector<std::string> analyze_files_arg, wizard_files;
  std::string report, corpus, labels, answers;

  CLI::App* analyze = app.add_subcommand("analyze", "Classify every candidate in the given files");
  analyze->add_option("files", analyze_files_arg, "Solidity source files")->required();
  add_common(analyze, analyze_flags);

  CLI::App* tri = app.add_subcommand("triage", "Judge findings reported by another scanner");
  tri->add_option("--report", report, "Findings file (JSON)")->required();
  add_common(tri, triage_flags);

  CLI::App* bench = app.add_subcommand("bench", "Score verdicts against ground-truth labels");
  bench->add_option("corpus", corpus, "Directory of .sol files")->required();
  bench->add_option("--labels", labels, "Labels CSV (file,line,vuln,label)")->required();
  add_common(bench, bench_flags);

  CLI::App* wiz = app.add_subcommand("wizard", "Review candidates check by check");
  wiz->add_option("files", wizard_files, "Solidity source files")->required();
  wiz->add_option("--answers", answers, "Read answers from this file instead of the terminal");
  add_common(wiz, wizard_flags);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kClean;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kClean;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    return kError;
  }

  if (analyze->parsed()) return cmd_analyze(analyze_files_arg, analyze_flags, out, err);
  if (tri->parsed()) return cmd_triage(report, triage_flags, out, err);
  if (bench->parsed()) return cmd_bench(corpus, labels, bench_flags, out, err);
  return cmd_wizard(wizard_files, answers, wizard_flags, in, out, err, interactive);
}

}  // namespace solfp
