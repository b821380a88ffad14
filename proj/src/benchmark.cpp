// SPDX-License-Identifier: Apache-2.0

#include "solfp/benchmark.hpp"

#include <algorithm>
#include <cctype>
#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>
#include <tuple>

#include "json.hpp"

namespace solfp {

namespace fs = std::filesystem;

const char* to_string(Label l) { return l == Label::TP ? "TP" : "FP"; }

namespace {

std::string trim(std::string_view s) {
  auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

std::string upper(std::string s) {
  for (char& c : s) c = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
  return s;
}

std::vector<std::string> split(std::string_view line) {
  std::vector<std::string> out;
  std::size_t start = 0;
  for (;;) {
    auto comma = line.find(',', start);
    out.push_back(trim(line.substr(start, comma == std::string_view::npos ? std::string_view::npos : comma - start)));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return out;
}

std::string fmt_ratio(const std::optional<double>& r) {
  if (!r) return "n/a";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", *r);
  return buf;
}

}  // namespace

std::vector<GroundTruthLabel> parse_labels(std::string_view csv) {
  std::vector<GroundTruthLabel> out;
  std::set<std::tuple<std::string, std::uint32_t, VulnClass>> seen;
  std::size_t row = 0;
  bool header = false;
  std::size_t pos = 0;
  while (pos < csv.size()) {
    auto nl = csv.find('\n', pos);
    std::string_view raw = csv.substr(pos, nl == std::string_view::npos ? std::string_view::npos : nl - pos);
    pos = nl == std::string_view::npos ? csv.size() : nl + 1;
    ++row;
    std::string line = trim(raw);
    if (line.empty()) continue;
    auto fail = [&](const std::string& why) { throw LabelError("labels row " + std::to_string(row) + ": " + why); };
    auto cells = split(line);
    if (!header) {
      if (cells.size() != 4 || cells[0] != "file" || cells[1] != "line" || cells[2] != "vuln" || cells[3] != "label")
        fail("expected header `file,line,vuln,label`");
      header = true;
      continue;
    }
    if (cells.size() != 4) fail("expected 4 fields, got " + std::to_string(cells.size()));
    GroundTruthLabel l;
    l.file = cells[0];
    if (l.file.empty()) fail("empty file");
    const std::string& num = cells[1];
    if (num.empty() || num.size() > 9 || !std::all_of(num.begin(), num.end(), [](char c) { return c >= '0' && c <= '9'; }))
      fail("line `" + num + "` is not a positive integer");
    l.line = static_cast<std::uint32_t>(std::stoul(num));
    if (l.line == 0) fail("line must be >= 1");
    auto v = parse_vuln(cells[2]);
    if (!v) fail("unknown vuln `" + cells[2] + "`");
    l.vuln = *v;
    std::string lab = upper(cells[3]);
    if (lab == "TP") l.label = Label::TP;
    else if (lab == "FP") l.label = Label::FP;
    else fail("label `" + cells[3] + "` is neither TP nor FP");
    if (!seen.emplace(l.file, l.line, l.vuln).second)
      fail("duplicate label for " + l.file + ":" + std::to_string(l.line) + " " + to_string(l.vuln));
    out.push_back(std::move(l));
  }
  return out;
}

std::vector<GroundTruthLabel> load_labels(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw LabelError("cannot read labels file " + path);
  std::ostringstream text;
  text << in.rdbuf();
  return parse_labels(text.str());
}

EvaluationInput evaluation_input(const std::vector<FileReport>& reports) {
  EvaluationInput in;
  for (const FileReport& r : reports) {
    if (!r.readable) continue;
    in.files.insert(r.file);
    for (const Verdict& v : r.verdicts)
      in.lines.push_back({r.file, v.candidate.span.line_start, v.candidate.vuln, v.outcome});
    for (const NotAnalyzedScope& s : r.not_analyzed) in.not_analyzed.push_back({r.file, s.span.line_start, s.span.line_end});
  }
  return in;
}

ConfusionMatrix evaluate(const EvaluationInput& in, const std::vector<GroundTruthLabel>& labels, VulnClass vuln,
                         std::vector<std::string>* diagnostics) {
  std::map<std::tuple<std::string, std::uint32_t>, std::set<Outcome>> at;
  for (const ScoredLine& s : in.lines)
    if (s.vuln == vuln) at[{s.file, s.line}].insert(s.outcome);

  ConfusionMatrix cm;
  for (const GroundTruthLabel& l : labels) {
    if (l.vuln != vuln) continue;
    enum { Positive, Negative, Missed } seen = Negative;
    auto it = at.find({l.file, l.line});
    if (it != at.end()) {
      if (it->second.count(Outcome::LikelyTP)) seen = Positive;
      else if (it->second.count(Outcome::NotAnalyzed)) seen = Missed;
    } else if (!in.files.count(l.file)) {
      seen = Missed;
      if (diagnostics)
        diagnostics->push_back("label " + l.file + ":" + std::to_string(l.line) + " " + to_string(vuln) +
                               " refers to a file that was not analyzed");
    } else {
      for (const UnanalyzedRange& r : in.not_analyzed)
        if (r.file == l.file && l.line >= r.line_start && l.line <= r.line_end) seen = Missed;
    }
    bool tp = l.label == Label::TP;
    switch (seen) {
      case Positive: ++(tp ? cm.tp : cm.fp); break;
      case Negative: ++(tp ? cm.fn : cm.tn); break;
      case Missed: ++(tp ? cm.missed_tp : cm.missed_fp); break;
    }
  }
  return cm;
}

Metrics metrics(const ConfusionMatrix& cm, double runtime_seconds) {
  auto ratio = [](std::size_t num, std::size_t den) -> std::optional<double> {
    if (den == 0) return std::nullopt;
    return static_cast<double>(num) / static_cast<double>(den);
  };
  std::size_t fn = cm.fn + cm.missed_tp;
  std::size_t tn = cm.tn + cm.missed_fp;
  Metrics m;
  m.precision = ratio(cm.tp, cm.tp + cm.fp);
  m.specificity = ratio(tn, tn + cm.fp);
  m.sensitivity = ratio(cm.tp, cm.tp + fn);
  m.runtime_seconds = runtime_seconds;
  return m;
}

std::vector<std::string> list_sources(const std::string& dir) {
  std::vector<std::string> out;
  std::error_code ec;
  if (!fs::is_directory(dir, ec)) return out;
  for (auto it = fs::recursive_directory_iterator(dir, ec); !ec && it != fs::recursive_directory_iterator();
       it.increment(ec)) {
    if (it->is_regular_file(ec) && it->path().extension() == ".sol")
      out.push_back(fs::relative(it->path(), dir, ec).generic_string());
  }
  std::sort(out.begin(), out.end());
  return out;
}

BenchResult run_benchmark(const std::string& corpus_dir, const std::vector<GroundTruthLabel>& labels,
                          const AnalysisOptions& opts, unsigned threads) {
  BenchResult res;
  std::vector<std::string> names = list_sources(corpus_dir);
  std::vector<std::string> paths;
  for (const std::string& n : names) paths.push_back((fs::path(corpus_dir) / n).string());
  res.files = names.size();
  for (VulnClass v : opts.classes) {
    AnalysisOptions one = opts;
    one.classes = {v};
    auto start = std::chrono::steady_clock::now();
    std::vector<FileReport> reports = analyze_files(paths, one, threads, names);
    double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (v == *opts.classes.begin())
      for (const FileReport& r : reports)
        if (!r.readable) res.diagnostics.push_back(r.error);
    ClassResult cr;
    cr.vuln = v;
    cr.matrix = evaluate(evaluation_input(reports), labels, v, &res.diagnostics);
    cr.metrics = metrics(cr.matrix, secs);
    res.classes.push_back(cr);
  }
  return res;
}

std::string render_bench_text(const BenchResult& r) {
  std::ostringstream out;
  char buf[160];
  std::snprintf(buf, sizeof buf, "%-6s %6s %6s %6s %5s %5s %5s %5s %7s %11s\n", "Vuln.", "Pr", "Sp", "Se", "TP", "FP",
                "TN", "FN", "missed", "runtime(s)");
  out << buf;
  for (const ClassResult& c : r.classes) {
    const ConfusionMatrix& m = c.matrix;
    std::snprintf(buf, sizeof buf, "%-6s %6s %6s %6s %5zu %5zu %5zu %5zu %7zu %11.3f\n", to_string(c.vuln),
                  fmt_ratio(c.metrics.precision).c_str(), fmt_ratio(c.metrics.specificity).c_str(),
                  fmt_ratio(c.metrics.sensitivity).c_str(), m.tp, m.fp, m.tn, m.fn, m.missed(),
                  c.metrics.runtime_seconds);
    out << buf;
  }
  out << r.files << " files analyzed; ratios count missed TP lines as FN and missed FP lines as TN\n";
  for (const std::string& d : r.diagnostics) out << "note: " << d << "\n";
  return out.str();
}

std::string render_bench_json(const BenchResult& r) {
  using nlohmann::ordered_json;
  auto opt = [](const std::optional<double>& v) { return v ? ordered_json(*v) : ordered_json(nullptr); };
  ordered_json arr = ordered_json::array();
  for (const ClassResult& c : r.classes) {
    const ConfusionMatrix& m = c.matrix;
    arr.push_back({{"vuln", to_string(c.vuln)},
                   {"tp", m.tp},
                   {"fp", m.fp},
                   {"tn", m.tn},
                   {"fn", m.fn},
                   {"missed", m.missed()},
                   {"missed_tp", m.missed_tp},
                   {"missed_fp", m.missed_fp},
                   {"precision", opt(c.metrics.precision)},
                   {"specificity", opt(c.metrics.specificity)},
                   {"sensitivity", opt(c.metrics.sensitivity)},
                   {"runtime_seconds", c.metrics.runtime_seconds}});
  }
  ordered_json root;
  root["files"] = r.files;
  root["classes"] = arr;
  root["diagnostics"] = r.diagnostics;
  return root.dump(2) + "\n";
}

}  // namespace solfp
