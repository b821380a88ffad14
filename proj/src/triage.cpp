// SPDX-License-Identifier: Apache-2.0

#include "solfp/triage.hpp"

#include <filesystem>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include "json.hpp"

namespace solfp {

namespace fs = std::filesystem;
using nlohmann::json;
using nlohmann::ordered_json;

const char* to_string(TriageJudgement j) {
  switch (j) {
    case TriageJudgement::ConfirmedSuspicious: return "ConfirmedSuspicious";
    case TriageJudgement::ProbableFalseAlarm: return "ProbableFalseAlarm";
    case TriageJudgement::NoCandidateHere: return "NoCandidateHere";
    case TriageJudgement::Unjudged: return "Unjudged";
  }
  return "?";
}

FindingsFile parse_findings(std::string_view text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw FindingsError(std::string("findings file is not valid JSON: ") + e.what());
  }
  if (!doc.is_object()) throw FindingsError("findings file must be a JSON object");
  auto list = doc.find("findings");
  if (list == doc.end() || !list->is_array()) throw FindingsError("findings file has no \"findings\" array");
  FindingsFile out;
  if (auto t = doc.find("tool"); t != doc.end() && t->is_string()) out.tool = t->get<std::string>();

  std::size_t index = 0;
  for (const json& rec : *list) {
    ++index;
    auto drop = [&](const std::string& why) {
      out.diagnostics.push_back("finding " + std::to_string(index) + ": " + why);
    };
    if (!rec.is_object()) {
      drop("not an object");
      continue;
    }
    auto file = rec.find("file");
    if (file == rec.end() || !file->is_string() || file->get<std::string>().empty()) {
      drop("missing \"file\"");
      continue;
    }
    auto line = rec.find("line");
    if (line == rec.end() || !line->is_number_integer()) {
      drop("missing integer \"line\"");
      continue;
    }
    long long n = line->get<long long>();
    if (n < 1 || n > UINT32_MAX) {
      drop("line must be >= 1");
      continue;
    }
    ExternalFinding f;
    f.tool = out.tool;
    f.contract_file = file->get<std::string>();
    f.line = static_cast<std::uint32_t>(n);
    if (auto v = rec.find("vuln"); v != rec.end() && v->is_string()) {
      f.vuln_label = v->get<std::string>();
      f.vuln = parse_vuln(f.vuln_label);
    }
    if (auto m = rec.find("message"); m != rec.end() && m->is_string()) f.raw_message = m->get<std::string>();
    out.findings.push_back(std::move(f));
  }
  return out;
}

FindingsFile ingest_report(const std::string& path, const std::string& format) {
  if (format != "json") throw FindingsError("unsupported findings format: " + format);
  std::ifstream in(path, std::ios::binary);
  if (!in) throw FindingsError("cannot read findings file " + path);
  std::ostringstream text;
  text << in.rdbuf();
  return parse_findings(text.str());
}

std::string resolve_contract_path(const std::string& contract_file, const std::string& report_path) {
  fs::path p(contract_file);
  if (p.is_absolute()) return contract_file;
  fs::path beside = fs::path(report_path).parent_path() / p;
  std::error_code ec;
  if (fs::exists(beside, ec)) return beside.lexically_normal().generic_string();
  return contract_file;
}

namespace {

TriageResult judge(const ExternalFinding& f, const FileReport* r) {
  TriageResult t;
  t.finding = f;
  if (!f.vuln) {
    t.judgement = TriageJudgement::Unjudged;
    t.justification = "class `" + f.vuln_label + "` is not judged by this tool";
    return t;
  }
  if (!r || !r->readable) {
    t.judgement = TriageJudgement::Unjudged;
    t.justification = "file was not analyzed" + (r ? ": " + r->error : std::string());
    return t;
  }
  std::vector<const Verdict*> here;
  for (const Verdict& v : r->verdicts)
    if (v.candidate.vuln == *f.vuln && v.candidate.span.line_start == f.line) here.push_back(&v);

  for (const Verdict* v : here)
    if (v->outcome == Outcome::LikelyTP) {
      t.judgement = TriageJudgement::ConfirmedSuspicious;
      t.justification = "candidate in " + v->candidate.contract + "." + v->candidate.function + ": " +
                        v->justification;
      return t;
    }
  for (const Verdict* v : here)
    if (v->outcome == Outcome::NotAnalyzed) {
      t.judgement = TriageJudgement::Unjudged;
      t.justification = "not analyzed (" + v->reason + "): " + v->justification;
      return t;
    }
  if (!here.empty()) {
    std::set<PatternId> pats;
    for (const Verdict* v : here) {
      pats.insert(v->matched.begin(), v->matched.end());
      t.justification += (t.justification.empty() ? "" : " || ") + v->justification;
    }
    t.judgement = TriageJudgement::ProbableFalseAlarm;
    t.patterns.assign(pats.begin(), pats.end());
    return t;
  }
  for (const NotAnalyzedScope& s : r->not_analyzed)
    if (s.span.contains_line(f.line)) {
      t.judgement = TriageJudgement::Unjudged;
      t.justification = "line lies in a scope that was not analyzed (" + s.reason + ")";
      return t;
    }
  t.judgement = TriageJudgement::NoCandidateHere;
  t.justification = std::string("no ") + to_string(*f.vuln) + " candidate on this line";
  return t;
}

}  // namespace

std::vector<TriageResult> triage(const std::vector<ExternalFinding>& findings,
                                 const std::vector<FileReport>& reports) {
  std::map<std::string, const FileReport*> by_file;
  for (const FileReport& r : reports) by_file.emplace(r.file, &r);
  std::vector<TriageResult> out;
  out.reserve(findings.size());
  for (const ExternalFinding& f : findings) {
    auto it = by_file.find(f.contract_file);
    out.push_back(judge(f, it == by_file.end() ? nullptr : it->second));
  }
  return out;
}

std::string render_triage_text(const std::vector<TriageResult>& results) {
  std::ostringstream out;
  std::map<TriageJudgement, std::size_t> counts;
  for (const TriageResult& t : results) {
    ++counts[t.judgement];
    const ExternalFinding& f = t.finding;
    out << f.contract_file << ":" << f.line << " " << (f.vuln ? to_string(*f.vuln) : f.vuln_label) << " "
        << to_string(t.judgement);
    if (!t.patterns.empty()) {
      out << " [";
      for (std::size_t i = 0; i < t.patterns.size(); ++i) out << (i ? "," : "") << to_string(t.patterns[i]);
      out << "]";
    }
    if (!f.tool.empty()) out << " (" << f.tool << ")";
    out << "\n    " << t.justification << "\n";
  }
  out << "summary: " << results.size() << " findings, " << counts[TriageJudgement::ConfirmedSuspicious]
      << " ConfirmedSuspicious, " << counts[TriageJudgement::ProbableFalseAlarm] << " ProbableFalseAlarm, "
      << counts[TriageJudgement::NoCandidateHere] << " NoCandidateHere, " << counts[TriageJudgement::Unjudged]
      << " Unjudged\n";
  return out.str();
}

std::string render_triage_json(const std::vector<TriageResult>& results) {
  ordered_json arr = ordered_json::array();
  for (const TriageResult& t : results) {
    ordered_json j;
    j["tool"] = t.finding.tool;
    j["file"] = t.finding.contract_file;
    j["line"] = t.finding.line;
    j["vuln"] = t.finding.vuln ? std::string(to_string(*t.finding.vuln)) : t.finding.vuln_label;
    if (t.finding.raw_message) j["message"] = *t.finding.raw_message;
    j["judgement"] = to_string(t.judgement);
    ordered_json pats = ordered_json::array();
    for (PatternId p : t.patterns) pats.push_back(to_string(p));
    j["patterns"] = pats;
    j["justification"] = t.justification;
    arr.push_back(j);
  }
  return arr.dump(2) + "\n";
}

std::vector<FileReport> analyze_referenced(const FindingsFile& findings, const std::string& report_path,
                                           const AnalysisOptions& opts, unsigned threads) {
  std::vector<std::string> names;
  std::vector<std::string> paths;
  std::set<std::string> seen;
  for (const ExternalFinding& x : findings.findings)
    if (x.vuln && seen.insert(x.contract_file).second) {
      names.push_back(x.contract_file);
      paths.push_back(resolve_contract_path(x.contract_file, report_path));
    }
  return analyze_files(paths, opts, threads, names);
}

}  // namespace solfp
