// SPDX-License-Identifier: Apache-2.0

#include "support/properties.hpp"

#include <algorithm>
#include <map>
#include <random>
#include <set>
#include <sstream>
#include <tuple>

#include "solfp/analysis.hpp"
#include "solfp/ast_util.hpp"
#include "solfp/parser.hpp"
#include "support/corpus.hpp"
#include "support/generators.hpp"
#include "support/oracles.hpp"

namespace solfp::testing {

namespace {

std::set<PatternId> held(const Verdict& v) {
  std::set<PatternId> out;
  for (const PatternCheck& c : v.checks)
    if (c.matched) out.insert(c.id);
  return out;
}

std::string ids(const std::set<PatternId>& s) {
  std::string out = "{";
  for (PatternId p : s) out += std::string(out.size() > 1 ? "," : "") + to_string(p);
  return out + "}";
}

/// (function, class, ordinal within that function and class) -> verdict.
using Keyed = std::map<std::tuple<std::string, VulnClass, int>, const Verdict*>;

Keyed keyed(const FileReport& r, const std::map<std::string, std::string>& unrename = {}) {
  Keyed out;
  std::map<std::pair<std::string, VulnClass>, int> seen;
  for (const Verdict& v : r.verdicts) {
    std::string fn = v.candidate.function;
    if (auto it = unrename.find(fn); it != unrename.end()) fn = it->second;
    int n = seen[{fn, v.candidate.vuln}]++;
    out[{fn, v.candidate.vuln, n}] = &v;
  }
  return out;
}

bool parsed_cleanly(const FileReport& r) {
  for (const Diagnostic& d : r.diagnostics)
    if (d.severity == Severity::Error) return false;
  return true;
}

}  // namespace

PropertyResult check_guard_removal(std::size_t mutations, unsigned seed) {
  PropertyResult res;
  std::mt19937 rng(seed);
  static const std::set<PatternId> guard_patterns = {
      PatternId::URV1_Unreachable, PatternId::URV2_RestrictiveModifier, PatternId::URV3_GuardCondition,
      PatternId::REE1_Unreachable, PatternId::REE2_RestrictiveModifier, PatternId::REE3_GuardCondition};
  std::size_t candidates = 0, cleared = 0;
  for (std::size_t i = 0; i < mutations && res.ok; ++i) {
    ContractSpec spec = random_contract(rng);
    RenderMode stripped_mode;
    stripped_mode.strip_guards = true;
    std::string guarded_src = render(spec);
    std::string stripped_src = render(spec, stripped_mode);
    FileReport guarded = analyze_source(guarded_src, "Gen.sol");
    FileReport stripped = analyze_source(stripped_src, "Gen.sol");
    ++res.cases;
    if (!parsed_cleanly(guarded) || !parsed_cleanly(stripped)) {
      res.fail("generated contract does not parse:\n" + guarded_src);
      break;
    }
    Keyed a = keyed(guarded), b = keyed(stripped);
    if (a.size() != b.size()) {
      res.fail("candidate count changed from " + std::to_string(a.size()) + " to " + std::to_string(b.size()) +
               ":\n" + guarded_src);
      break;
    }
    for (const auto& [key, va] : a) {
      auto it = b.find(key);
      if (it == b.end()) {
        res.fail("candidate vanished in " + std::get<0>(key) + ":\n" + guarded_src);
        break;
      }
      std::set<PatternId> before = held(*va), after = held(*it->second);
      ++candidates;
      for (PatternId p : before) cleared += guard_patterns.count(p);
      if (!std::includes(before.begin(), before.end(), after.begin(), after.end())) {
        res.fail("guard removal added patterns in " + std::get<0>(key) + ": " + ids(before) + " -> " + ids(after) +
                 "\n" + guarded_src);
        break;
      }
      for (PatternId p : after)
        if (guard_patterns.count(p)) {
          res.fail(std::string(to_string(p)) + " still holds without guards in " + std::get<0>(key) + "\n" +
                   stripped_src);
          break;
        }
    }
  }
  if (res.ok)
    res.detail = std::to_string(res.cases) + " generated contracts, " + std::to_string(candidates) +
                 " candidates, " + std::to_string(cleared) + " guard matches removed";
  return res;
}

PropertyResult check_alpha_invariance(std::size_t mutations, unsigned seed) {
  PropertyResult res;
  std::mt19937 rng(seed);
  using Summary = std::multiset<std::tuple<VulnClass, Outcome, std::set<PatternId>>>;
  auto summary = [](const FileReport& r) {
    Summary s;
    for (const Verdict& v : r.verdicts) s.insert({v.candidate.vuln, v.outcome, held(v)});
    return s;
  };
  for (std::size_t i = 0; i < mutations && res.ok; ++i) {
    ContractSpec spec = random_contract(rng);
    RenderMode renamed;
    renamed.rename = random_renaming(spec, rng);
    std::string src = render(spec);
    FileReport a = analyze_source(src, "Gen.sol");
    FileReport b = analyze_source(render(spec, renamed), "Gen.sol");
    ++res.cases;
    if (summary(a) != summary(b)) {
      res.fail("verdicts changed under renaming:\n" + src);
      break;
    }
    std::map<std::string, std::string> back;
    for (const auto& [from, to] : renamed.rename) back[to] = from;
    Keyed ka = keyed(a), kb = keyed(b, back);
    for (const auto& [key, va] : ka) {
      auto it = kb.find(key);
      if (it == kb.end() || held(*va) != held(*it->second) || va->outcome != it->second->outcome) {
        res.fail("verdict of " + std::get<0>(key) + " changed under renaming:\n" + src);
        break;
      }
    }
  }
  if (res.ok) res.detail = std::to_string(res.cases) + " renamed contracts";
  return res;
}

PropertyResult check_terminal_oracle(const std::vector<std::filesystem::path>& files, std::size_t max_statements) {
  PropertyResult res;
  std::size_t functions = 0, sites = 0;
  for (const auto& path : files) {
    AnalysisOptions opts;
    opts.classes = {VulnClass::URV, VulnClass::REE};
    FileReport r = analyze_source(read_file(path), path.filename().string(), opts);
    for (const ContractModel& m : r.model->contracts) {
      for (std::size_t i = 0; i < m.own_count; ++i) {
        const FunctionModel& f = m.functions[i];
        if (!f.has_body() || f.has_parse_error) continue;
        if (count_simple_statements(*f.def->body) > max_statements) continue;
        ++functions;
        for_each_stmt(*f.def->body, [&](const Stmt& s) {
          if (!res.ok || !is_simple_stmt(s)) return;
          ++res.cases;
          Effects fast = statements_after(f.cfg, s);
          Effects slow = brute_force_after(f, s);
          if (!(fast == slow))
            res.fail(path.filename().string() + ":" + std::to_string(s.span.line_start) + " in " + m.def->name + "." +
                     f.name() + ": statements_after " + to_string(fast) + " but paths give " + to_string(slow));
        });
      }
    }
    for (const Verdict& v : r.verdicts) {
      if (!res.ok) break;
      const Candidate& c = v.candidate;
      const FunctionModel& f = c.fn();
      if (count_simple_statements(*f.def->body) > max_statements) continue;
      ++sites;
      Effects after = brute_force_after(f, *c.stmt);
      const Effects& own = f.cfg.nodes()[*f.cfg.node_of(c.stmt)].effects;
      after.state_writes.insert(own.state_writes.begin(), own.state_writes.end());
      bool expect = c.vuln == VulnClass::URV ? !after.has_state_write() && !after.external_call
                                             : !after.has_state_write();
      PatternId p = c.vuln == VulnClass::URV ? PatternId::URV5_TerminalCall : PatternId::REE5_NoStateChangeAfter;
      if (held(v).count(p) != static_cast<std::size_t>(expect))
        res.fail(c.file + ":" + std::to_string(c.span.line_start) + ": " + to_string(p) + " disagrees with paths");
    }
  }
  if (res.ok)
    res.detail = std::to_string(functions) + " functions, " + std::to_string(res.cases) + " statements, " +
                 std::to_string(sites) + " call sites";
  return res;
}

PropertyResult check_taint_closure(std::size_t graphs, unsigned seed) {
  PropertyResult res;
  std::mt19937 rng(seed);
  for (std::size_t i = 0; i < graphs && res.ok; ++i) {
    AssignmentGraph g = random_assignment_graph(rng);
    std::string src = render(g);
    ++res.cases;

    std::size_t n = static_cast<std::size_t>(g.node_count());
    std::vector<std::vector<bool>> adj(n, std::vector<bool>(n, false));
    for (const auto& list : g.assignments)
      for (const Assignment& a : list)
        for (int s : a.sources) adj[static_cast<std::size_t>(s)][static_cast<std::size_t>(a.target)] = true;
    std::vector<bool> tainted = transitive_closure(adj)[0];

    FileReport r = analyze_source(src, "Flow.sol");
    if (r.model->contracts.size() != 1) {
      res.fail("assignment graph does not parse:\n" + src);
      break;
    }
    const ContractModel& m = r.model->contracts[0];
    for (int s = 0; s < g.state_vars && res.ok; ++s) {
      const StateVarInfo* info = m.find_state_var(g.name(g.state_node(s)));
      if (!info || info->tainted != tainted[static_cast<std::size_t>(g.state_node(s))])
        res.fail("state variable " + g.name(g.state_node(s)) + " taint differs from closure:\n" + src);
    }
    for (std::size_t fn = 0; fn < g.assignments.size() && res.ok; ++fn) {
      const FunctionModel* f = m.find_function("g" + std::to_string(fn));
      if (!f) {
        res.fail("function g" + std::to_string(fn) + " missing");
        break;
      }
      for (int l = 0; l < g.locals_per_function[fn]; ++l) {
        int node = g.local_node(static_cast<int>(fn), l);
        if (f->taint.contains(g.name(node)) != tainted[static_cast<std::size_t>(node)]) {
          res.fail("local " + g.name(node) + " of g" + std::to_string(fn) + " taint differs from closure:\n" + src);
          break;
        }
      }
      if (res.ok && propagate_taint_once(*f->def->body, f->taint.members) != f->taint.members)
        res.fail("taint of g" + std::to_string(fn) + " is not a fixpoint:\n" + src);
    }
  }
  if (res.ok) res.detail = std::to_string(res.cases) + " assignment graphs";
  return res;
}

PropertyResult check_parser_fuzz(std::size_t inputs, unsigned seed, const std::vector<std::filesystem::path>& seeds) {
  PropertyResult res;
  std::mt19937 rng(seed);
  std::vector<std::string> texts;
  for (const auto& p : seeds) texts.push_back(read_file(p));
  if (texts.empty()) {
    res.fail("no seed inputs");
    return res;
  }
  std::size_t diagnostics = 0;
  for (std::size_t i = 0; i < inputs && res.ok; ++i) {
    std::string text = fuzz_mutate(texts[i % texts.size()], rng);
    ++res.cases;
    try {
      FileReport r = analyze_source(text, "fuzz.sol");
      LineIndex index(text);
      auto check = [&](const SourceSpan& s, const std::string& what) {
        if (!span_is_valid(s, text.size()) || !(index.span(s.byte_offset, s.byte_end()) == s))
          res.fail(what + " span " + std::to_string(s.byte_offset) + "+" + std::to_string(s.byte_length) +
                   " is invalid for input of " + std::to_string(text.size()) + " bytes");
      };
      for (const Diagnostic& d : r.diagnostics) {
        ++diagnostics;
        check(d.span, "diagnostic '" + d.message + "'");
      }
      for (const Verdict& v : r.verdicts) check(v.candidate.span, "candidate");
      if (!res.ok) {
        std::ostringstream msg;
        msg << res.detail << "\ninput:\n" << text;
        res.detail = msg.str();
      }
    } catch (const std::exception& e) {
      res.fail(std::string("exception: ") + e.what() + "\ninput:\n" + text);
    }
  }
  if (res.ok) res.detail = std::to_string(res.cases) + " inputs, " + std::to_string(diagnostics) + " diagnostics";
  return res;
}

PropertyResult check_metrics_oracle(std::size_t sets, unsigned seed) {
  PropertyResult res;
  std::mt19937 rng(seed);
  auto pick = [&](int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); };
  static const char* files[] = {"A.sol", "B.sol", "C.sol"};
  static const VulnClass classes[] = {VulnClass::URV, VulnClass::REE, VulnClass::TD};
  static const Outcome outcomes[] = {Outcome::LikelyTP, Outcome::FlaggedFP, Outcome::NotAnalyzed};
  auto close = [](std::optional<double> a, std::optional<double> b) {
    return a.has_value() == b.has_value() && (!a || *a == *b);
  };
  auto ratio = [](std::size_t num, std::size_t den) -> std::optional<double> {
    if (den == 0) return std::nullopt;
    return static_cast<double>(num) / static_cast<double>(den);
  };
  for (std::size_t i = 0; i < sets && res.ok; ++i) {
    EvaluationInput in;
    int nfiles = pick(0, 3);
    for (int k = 0; k < nfiles; ++k) in.files.insert(files[pick(0, 2)]);
    int nlines = pick(0, 20);
    for (int k = 0; k < nlines; ++k)
      in.lines.push_back({files[pick(0, 2)], static_cast<std::uint32_t>(pick(1, 12)), classes[pick(0, 2)],
                          outcomes[pick(0, 2)]});
    int nranges = pick(0, 2);
    for (int k = 0; k < nranges; ++k) {
      std::uint32_t a = static_cast<std::uint32_t>(pick(1, 12));
      in.not_analyzed.push_back({files[pick(0, 2)], a, a + static_cast<std::uint32_t>(pick(0, 4))});
    }
    std::vector<GroundTruthLabel> labels;
    std::set<std::tuple<std::string, std::uint32_t, VulnClass>> keys;
    int nlabels = pick(0, 20);
    for (int k = 0; k < nlabels; ++k) {
      GroundTruthLabel l{files[pick(0, 2)], static_cast<std::uint32_t>(pick(1, 12)), classes[pick(0, 2)],
                         pick(0, 1) ? Label::TP : Label::FP};
      if (keys.insert({l.file, l.line, l.vuln}).second) labels.push_back(l);
    }
    ++res.cases;
    for (VulnClass v : classes) {
      ConfusionMatrix fast = evaluate(in, labels, v);
      ConfusionMatrix slow = brute_force_evaluate(in, labels, v);
      if (!(fast == slow)) {
        res.fail("set " + std::to_string(i) + " class " + to_string(v) + ": matrices differ");
        break;
      }
      Metrics m = metrics(fast);
      if (!close(m.precision, ratio(slow.tp, slow.tp + slow.fp)) ||
          !close(m.specificity, ratio(slow.tn + slow.missed_fp, slow.tn + slow.missed_fp + slow.fp)) ||
          !close(m.sensitivity, ratio(slow.tp, slow.tp + slow.fn + slow.missed_tp))) {
        res.fail("set " + std::to_string(i) + " class " + to_string(v) + ": ratios differ");
        break;
      }
    }
  }
  if (res.ok) res.detail = std::to_string(res.cases) + " random sets";
  return res;
}

std::vector<std::filesystem::path> corpus_sources() {
  std::vector<std::filesystem::path> out;
  for (const char* sub : {"curated", "extra"})
    for (const auto& e : std::filesystem::directory_iterator(corpus_dir() / sub))
      if (e.path().extension() == ".sol") out.push_back(e.path());
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace solfp::testing
