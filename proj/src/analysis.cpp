// SPDX-License-Identifier: Apache-2.0

#include "solfp/analysis.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <thread>

#include "solfp/parser.hpp"

namespace solfp {

bool FileReport::has_likely_tp() const { return count(Outcome::LikelyTP) > 0; }

std::size_t FileReport::count(Outcome o) const {
  return static_cast<std::size_t>(
      std::count_if(verdicts.begin(), verdicts.end(), [o](const Verdict& v) { return v.outcome == o; }));
}

FileReport analyze_source(std::string_view text, const std::string& file, const AnalysisOptions& opts) {
  auto start = std::chrono::steady_clock::now();
  FileReport r;
  r.file = file;
  r.text = std::make_shared<const std::string>(text);
  auto unit = std::make_shared<const SourceUnit>(parse(text, file));
  auto um = std::make_shared<const UnitModel>(build_model(unit));
  r.diagnostics = unit->diagnostics;
  r.diagnostics.insert(r.diagnostics.end(), um->diagnostics.begin(), um->diagnostics.end());
  for (VulnClass v : opts.classes) {
    Detection d = detect(*um, v);
    for (const Candidate& c : d.candidates) r.verdicts.push_back(classify(c, opts.classify));
    // Scopes are the same for every class; keep one copy.
    if (r.not_analyzed.empty()) r.not_analyzed = std::move(d.not_analyzed);
  }
  sort_verdicts(r.verdicts);
  r.model = std::move(um);
  r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return r;
}

FileReport analyze_file(const std::string& path, const AnalysisOptions& opts, const std::string& display_name) {
  std::string name = display_name.empty() ? path : display_name;
  std::ifstream in(path, std::ios::binary);
  std::ostringstream text;
  if (in) text << in.rdbuf();
  if (!in || in.bad()) {
    FileReport r;
    r.file = name;
    r.readable = false;
    r.error = "cannot read " + path;
    return r;
  }
  return analyze_source(text.str(), name, opts);
}

unsigned default_thread_count() {
  unsigned n = std::max(1u, std::thread::hardware_concurrency());
  if (const char* env = std::getenv("DETECT_THREADS")) {
    char* end = nullptr;
    long cap = std::strtol(env, &end, 10);
    if (end != env && *end == '\0' && cap >= 1) n = std::min(n, static_cast<unsigned>(cap));
  }
  return n;
}

std::vector<FileReport> analyze_files(const std::vector<std::string>& paths, const AnalysisOptions& opts,
                                      unsigned threads, const std::vector<std::string>& display_names) {
  std::vector<FileReport> out(paths.size());
  if (threads == 0) threads = default_thread_count();
  threads = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(paths.size())));
  std::atomic<std::size_t> next{0};
  auto work = [&] {
    for (std::size_t i = next++; i < paths.size(); i = next++)
      out[i] = analyze_file(paths[i], opts, i < display_names.size() ? display_names[i] : std::string());
  };
  if (threads <= 1) {
    work();
    return out;
  }
  std::vector<std::thread> pool;
  for (unsigned t = 0; t < threads; ++t) pool.emplace_back(work);
  for (std::thread& t : pool) t.join();
  return out;
}

}  // namespace solfp
