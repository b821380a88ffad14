// SPDX-License-Identifier: Apache-2.0

#include "solfp/wizard.hpp"

#include <algorithm>
#include <cctype>
#include <iomanip>
#include <istream>
#include <optional>
#include <ostream>
#include <sstream>

namespace solfp {

namespace {

const char* to_string(CheckDecision d) {
  switch (d) {
    case CheckDecision::Accept: return "accept";
    case CheckDecision::Override: return "override";
    case CheckDecision::Skip: return "skip";
  }
  return "?";
}

void excerpt(std::ostream& out, const FileReport& r, const SourceSpan& span) {
  if (!r.text) return;
  auto lines = static_cast<std::uint32_t>(std::count(r.text->begin(), r.text->end(), '\n')) + 1;
  std::uint32_t first = span.line_start > 2 ? span.line_start - 2 : 1;
  std::uint32_t last = std::min(span.line_end + 2, lines);
  auto width = static_cast<int>(std::to_string(last).size());
  for (std::uint32_t l = first; l <= last; ++l)
    out << (span.contains_line(l) ? "  > " : "    ") << std::setw(width) << l << " | " << line_text(*r.text, l) << "\n";
}

class Prompter {
 public:
  Prompter(std::istream& in, std::ostream& out, bool echo) : in_(in), out_(out), echo_(echo) {}

  bool exhausted() const { return eof_; }

  /// Nullopt once the input has ended.
  std::optional<CheckDecision> ask(const std::string& question) {
    while (!eof_) {
      out_ << question << " [a]ccept/[o]verride/[s]kip: ";
      std::string line;
      if (!std::getline(in_, line)) {
        eof_ = true;
        out_ << "\n(no more answers; remaining checks keep their automatic results)\n";
        break;
      }
      if (!line.empty() && line.back() == '\r') line.pop_back();
      if (echo_) out_ << line;
      out_ << "\n";
      std::string a;
      for (char c : line)
        if (c != ' ' && c != '\t') a.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
      if (a.empty() || a == "a" || a == "accept") return CheckDecision::Accept;
      if (a == "o" || a == "override") return CheckDecision::Override;
      if (a == "s" || a == "skip") return CheckDecision::Skip;
      out_ << "please answer a, o or s\n";
    }
    return std::nullopt;
  }

 private:
  std::istream& in_;
  std::ostream& out_;
  bool echo_;
  bool eof_ = false;
};

void apply_decisions(Verdict& v, const std::vector<CheckDecision>& ds) {
  bool touched = std::any_of(ds.begin(), ds.end(), [](CheckDecision d) { return d != CheckDecision::Accept; });
  if (!touched) return;
  std::vector<PatternCheck> kept;
  std::string trail;
  for (std::size_t i = 0; i < v.checks.size(); ++i) {
    PatternCheck pc = v.checks[i];
    if (ds[i] == CheckDecision::Skip) {
      trail += std::string(trail.empty() ? "" : ", ") + to_string(pc.id) + " skipped";
      continue;
    }
    if (ds[i] == CheckDecision::Override) {
      pc.matched = !pc.matched;
      pc.evidence += pc.matched ? " (user: holds)" : " (user: does not hold)";
      trail += std::string(trail.empty() ? "" : ", ") + to_string(pc.id) + (pc.matched ? " set" : " cleared");
    }
    kept.push_back(pc);
  }
  v.checks = kept;
  v.matched.clear();
  std::string evidence;
  for (const PatternCheck& pc : v.checks)
    if (pc.matched) {
      v.matched.push_back(pc.id);
      evidence += (evidence.empty() ? "" : " | ") + std::string(to_string(pc.id)) + ": " + pc.evidence;
    }
  v.outcome = v.matched.empty() ? Outcome::LikelyTP : Outcome::FlaggedFP;
  v.reason.clear();
  v.justification = "user review (" + trail + ")" + (evidence.empty() ? "" : "; " + evidence);
}

}  // namespace

WizardResult run_wizard(std::vector<FileReport> reports, std::istream& answers, std::ostream& out, bool echo) {
  WizardResult res;
  Prompter ask(answers, out, echo);
  std::size_t total = 0;
  for (const FileReport& r : reports)
    total += static_cast<std::size_t>(std::count_if(r.verdicts.begin(), r.verdicts.end(),
                                                    [](const Verdict& v) { return v.outcome != Outcome::NotAnalyzed; }));
  std::size_t n = 0;
  for (FileReport& r : reports) {
    for (Verdict& v : r.verdicts) {
      if (v.outcome == Outcome::NotAnalyzed) continue;
      const Candidate& c = v.candidate;
      ++n;
      out << "[" << n << "/" << total << "] " << verdict_headline(v) << "\n";
      excerpt(out, r, c.span);
      out << "  automatic verdict: " << to_string(v.outcome) << "\n";
      WizardDecision d;
      d.file = c.file;
      d.line = c.span.line_start;
      d.vuln = c.vuln;
      d.automatic = v.outcome;
      for (const PatternCheck& pc : v.checks) {
        out << "  " << long_name(pc.id) << ": " << (pc.matched ? "holds" : "does not hold") << " - " << pc.evidence
            << "\n";
        std::optional<CheckDecision> a;
        if (!ask.exhausted()) a = ask.ask("  " + std::string(to_string(pc.id)) + "?");
        if (!a) d.resolved_automatically = true;
        d.decisions.push_back(a.value_or(CheckDecision::Accept));
      }
      apply_decisions(v, d.decisions);
      d.final = v.outcome;
      if (d.final == d.automatic) {
        bool touched = std::any_of(d.decisions.begin(), d.decisions.end(),
                                   [](CheckDecision x) { return x != CheckDecision::Accept; });
        d.mark = touched ? "user-adjusted" : "auto";
      } else {
        d.mark = d.final == Outcome::LikelyTP ? "user-confirmed-TP" : "user-flagged-FP";
      }
      out << "  final verdict: " << to_string(d.final) << " (" << d.mark << ")\n";
      res.trail.push_back(std::move(d));
    }
  }
  res.reports = std::move(reports);
  return res;
}

std::string render_wizard_text(const WizardResult& r, const RenderOptions& opts) {
  std::ostringstream out;
  out << render_text(r.reports, opts);
  out << "decisions:\n";
  for (const WizardDecision& d : r.trail) {
    out << "  " << d.file << ":" << d.line << " " << solfp::to_string(d.vuln) << " " << solfp::to_string(d.automatic)
        << " -> " << solfp::to_string(d.final) << " " << d.mark << " [";
    for (std::size_t i = 0; i < d.decisions.size(); ++i) out << (i ? "," : "") << to_string(d.decisions[i]);
    out << "]" << (d.resolved_automatically ? " (answers ran out)" : "") << "\n";
  }
  return out.str();
}

}  // namespace solfp
