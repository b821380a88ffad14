// SPDX-License-Identifier: Apache-2.0

#include "solfp/report.hpp"

#include <sstream>

#include "json.hpp"

namespace solfp {

namespace {

using nlohmann::ordered_json;

ordered_json span_json(const SourceSpan& s) {
  return {{"line", s.line_start}, {"column", s.col_start}, {"line_end", s.line_end}, {"column_end", s.col_end}};
}

ordered_json verdict_json(const Verdict& v) {
  const Candidate& c = v.candidate;
  ordered_json j;
  j["vuln"] = to_string(c.vuln);
  j["span"] = span_json(c.span);
  j["contract"] = c.contract;
  j["function"] = c.function;
  j["call_kind"] = to_string(c.call_kind);
  if (c.receiver) j["receiver"] = c.receiver_text;
  if (c.value_arg) j["value"] = c.value_text;
  j["outcome"] = to_string(v.outcome);
  ordered_json pats = ordered_json::array();
  for (PatternId p : v.matched) pats.push_back(to_string(p));
  j["patterns"] = pats;
  ordered_json checks = ordered_json::array();
  for (const PatternCheck& pc : v.checks)
    checks.push_back({{"pattern", long_name(pc.id)}, {"matched", pc.matched}, {"evidence", pc.evidence}});
  j["checks"] = checks;
  j["justification"] = v.justification;
  if (v.outcome == Outcome::NotAnalyzed) j["reason"] = v.reason;
  return j;
}

}  // namespace

std::string verdict_headline(const Verdict& v) {
  const Candidate& c = v.candidate;
  std::ostringstream out;
  out << c.file << ":" << c.span.line_start << ":" << c.span.col_start << " " << to_string(c.vuln) << " "
      << to_string(v.outcome);
  if (!v.matched.empty()) {
    out << " [";
    for (std::size_t i = 0; i < v.matched.size(); ++i) out << (i ? "," : "") << to_string(v.matched[i]);
    out << "]";
  }
  if (v.outcome == Outcome::NotAnalyzed) out << " (" << v.reason << ")";
  out << " " << c.contract << "." << c.function;
  return out.str();
}

std::string render_text(const std::vector<FileReport>& reports, const RenderOptions& opts) {
  std::ostringstream out;
  std::size_t tp = 0, fp = 0, na = 0;
  for (const FileReport& r : reports) {
    if (!r.readable) {
      out << r.file << ": error: " << r.error << "\n";
      continue;
    }
    for (const Diagnostic& d : r.diagnostics)
      out << r.file << ":" << d.span.line_start << ":" << d.span.col_start << ": " << to_string(d.severity) << ": "
          << d.message << "\n";
    for (const Verdict& v : r.verdicts) {
      out << verdict_headline(v) << "\n";
      if (!v.candidate.receiver_text.empty()) {
        out << "    call: " << v.candidate.receiver_text << "." << to_string(v.candidate.call_kind);
        if (!v.candidate.value_text.empty()) out << " value " << v.candidate.value_text;
        out << "\n";
      }
      out << "    " << v.justification << "\n";
      if (opts.verbose)
        for (const PatternCheck& pc : v.checks)
          out << "    " << (pc.matched ? "+ " : "- ") << long_name(pc.id) << ": " << pc.evidence << "\n";
    }
    for (const NotAnalyzedScope& s : r.not_analyzed)
      out << r.file << ":" << s.span.line_start << " NotAnalyzed (" << s.reason << ") " << s.contract
          << (s.function.empty() ? "" : "." + s.function) << "\n";
    tp += r.count(Outcome::LikelyTP);
    fp += r.count(Outcome::FlaggedFP);
    na += r.count(Outcome::NotAnalyzed);
  }
  out << "summary: " << tp << " LikelyTP, " << fp << " FlaggedFP, " << na << " NotAnalyzed\n";
  return out.str();
}

std::string render_json(const std::vector<FileReport>& reports) {
  ordered_json files = ordered_json::array();
  std::size_t tp = 0, fp = 0, na = 0;
  for (const FileReport& r : reports) {
    ordered_json f;
    f["file"] = r.file;
    f["readable"] = r.readable;
    if (!r.readable) {
      f["error"] = r.error;
      files.push_back(f);
      continue;
    }
    ordered_json diags = ordered_json::array();
    for (const Diagnostic& d : r.diagnostics)
      diags.push_back({{"severity", to_string(d.severity)}, {"span", span_json(d.span)}, {"message", d.message}});
    f["diagnostics"] = diags;
    ordered_json vs = ordered_json::array();
    for (const Verdict& v : r.verdicts) vs.push_back(verdict_json(v));
    f["verdicts"] = vs;
    ordered_json scopes = ordered_json::array();
    for (const NotAnalyzedScope& s : r.not_analyzed)
      scopes.push_back({{"contract", s.contract}, {"function", s.function}, {"span", span_json(s.span)},
                        {"reason", s.reason}});
    f["not_analyzed"] = scopes;
    files.push_back(f);
    tp += r.count(Outcome::LikelyTP);
    fp += r.count(Outcome::FlaggedFP);
    na += r.count(Outcome::NotAnalyzed);
  }
  ordered_json root;
  root["files"] = files;
  root["summary"] = {{"likely_tp", tp}, {"flagged_fp", fp}, {"not_analyzed", na}};
  return root.dump(2) + "\n";
}

}  // namespace solfp
