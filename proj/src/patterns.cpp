// SPDX-License-Identifier: Apache-2.0

#include "solfp/patterns.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <sstream>
#include <tuple>

#include "solfp/ast_util.hpp"

namespace solfp {

const char* to_string(PatternId p) {
  switch (p) {
    case PatternId::URV1_Unreachable: return "URV1";
    case PatternId::URV2_RestrictiveModifier: return "URV2";
    case PatternId::URV3_GuardCondition: return "URV3";
    case PatternId::URV4_RecipientIsCaller: return "URV4";
    case PatternId::URV5_TerminalCall: return "URV5";
    case PatternId::REE1_Unreachable: return "REE1";
    case PatternId::REE2_RestrictiveModifier: return "REE2";
    case PatternId::REE3_GuardCondition: return "REE3";
    case PatternId::REE4_HardcodedTarget: return "REE4";
    case PatternId::REE5_NoStateChangeAfter: return "REE5";
    case PatternId::REE6_ValueWithinMsgValue: return "REE6";
    case PatternId::TD1_IntervalCheck: return "TD1";
  }
  return "?";
}

const char* long_name(PatternId p) {
  switch (p) {
    case PatternId::URV1_Unreachable: return "URV1_Unreachable";
    case PatternId::URV2_RestrictiveModifier: return "URV2_RestrictiveModifier";
    case PatternId::URV3_GuardCondition: return "URV3_GuardCondition";
    case PatternId::URV4_RecipientIsCaller: return "URV4_RecipientIsCaller";
    case PatternId::URV5_TerminalCall: return "URV5_TerminalCall";
    case PatternId::REE1_Unreachable: return "REE1_Unreachable";
    case PatternId::REE2_RestrictiveModifier: return "REE2_RestrictiveModifier";
    case PatternId::REE3_GuardCondition: return "REE3_GuardCondition";
    case PatternId::REE4_HardcodedTarget: return "REE4_HardcodedTarget";
    case PatternId::REE5_NoStateChangeAfter: return "REE5_NoStateChangeAfter";
    case PatternId::REE6_ValueWithinMsgValue: return "REE6_ValueWithinMsgValue";
    case PatternId::TD1_IntervalCheck: return "TD1_IntervalCheck";
  }
  return "?";
}

VulnClass family(PatternId p) {
  if (p <= PatternId::URV5_TerminalCall) return VulnClass::URV;
  if (p <= PatternId::REE6_ValueWithinMsgValue) return VulnClass::REE;
  return VulnClass::TD;
}

const char* to_string(Outcome o) {
  switch (o) {
    case Outcome::LikelyTP: return "LikelyTP";
    case Outcome::FlaggedFP: return "FlaggedFP";
    case Outcome::NotAnalyzed: return "NotAnalyzed";
  }
  return "?";
}

bool Verdict::has(PatternId p) const { return std::find(matched.begin(), matched.end(), p) != matched.end(); }

void sort_verdicts(std::vector<Verdict>& vs) {
  std::stable_sort(vs.begin(), vs.end(), [](const Verdict& a, const Verdict& b) {
    const Candidate& x = a.candidate;
    const Candidate& y = b.candidate;
    return std::make_tuple(x.file, x.span.line_start, static_cast<int>(x.vuln), x.span.col_start) <
           std::make_tuple(y.file, y.span.line_start, static_cast<int>(y.vuln), y.span.col_start);
  });
}

namespace {

std::string class_list(const std::set<AddressClass>& cs) {
  std::string out;
  for (AddressClass c : cs) out += (out.empty() ? "" : ", ") + std::string(to_string(c));
  return out;
}

bool only_attacker_external(const std::set<AddressClass>& cs) {
  return !cs.empty() && std::all_of(cs.begin(), cs.end(), [](AddressClass c) {
    return c == AddressClass::LiteralHardcoded || c == AddressClass::DeployerAtConstruction;
  });
}

std::string fmt_seconds(double v) {
  std::ostringstream out;
  if (v == std::floor(v) && std::fabs(v) < 1e15) out << static_cast<long long>(v);
  else out << v;
  return out.str();
}

PatternCheck check_unreachable(PatternId id, const Candidate& c) {
  const FunctionModel& f = c.fn();
  const ContractModel& m = *c.model;
  PatternCheck pc{id, false, {}};
  bool hidden = f.visibility == Visibility::Private || f.visibility == Visibility::Internal;
  if (!hidden) {
    pc.evidence = std::string("function is ") + to_string(f.visibility);
    return pc;
  }
  if (reachable_from_unrestricted(m, f)) {
    pc.evidence = "reachable from an unrestricted public or external function";
    return pc;
  }
  pc.matched = true;
  std::string callers;
  for (std::size_t i : f.callers) callers += (callers.empty() ? "" : ", ") + m.functions[i].name();
  pc.evidence = std::string(to_string(f.visibility)) + " function, callers: " + (callers.empty() ? "none" : callers) +
                "; none is an unrestricted entry point";
  return pc;
}

PatternCheck check_modifier(PatternId id, const Candidate& c) {
  PatternCheck pc{id, false, {}};
  const RestrictionInfo& r = c.fn().restriction;
  for (const GuardReason& g : r.reasons) {
    if (g.kind != GuardKind::ModifierGuard) continue;
    pc.matched = true;
    if (!pc.evidence.empty()) pc.evidence += "; ";
    pc.evidence += "modifier " + g.modifier + " checks `" + g.text + "` (caller confined to " + class_list(g.classes) + ")";
  }
  if (!pc.matched) {
    pc.evidence = "no restricting modifier";
    if (!r.unresolved_modifiers.empty()) {
      pc.evidence += "; unresolved:";
      for (const std::string& n : r.unresolved_modifiers) pc.evidence += " " + n;
    }
  }
  return pc;
}

PatternCheck check_guard(PatternId id, const Candidate& c) {
  PatternCheck pc{id, false, {}};
  auto guards = c.model->site_guards(c.fn(), *c.stmt);
  for (const GuardReason& g : guards) {
    pc.matched = true;
    if (!pc.evidence.empty()) pc.evidence += "; ";
    pc.evidence += "line " + std::to_string(g.span.line_start) + ": `" + g.text + "` restricts the caller";
    pc.evidence += only_attacker_external(g.classes) ? " to hardcoded or deployer addresses (" + class_list(g.classes) + ")"
                                                     : " (" + class_list(g.classes) + ")";
  }
  if (!pc.matched) pc.evidence = "no caller guard encloses the call";
  return pc;
}

/// Effects after the site, plus state writes the site statement itself
/// performs once the call returns.
Effects effects_after(const Candidate& c) {
  const FunctionModel& f = c.fn();
  Effects e = statements_after(f.cfg, *c.stmt);
  if (auto n = f.cfg.node_of(c.stmt)) {
    const Effects& own = f.cfg.nodes()[*n].effects;
    e.state_writes.insert(own.state_writes.begin(), own.state_writes.end());
  }
  return e;
}

Verdict finish(const Candidate& c, std::vector<PatternCheck> checks) {
  Verdict v;
  v.candidate = c;
  v.checks = std::move(checks);
  for (const PatternCheck& pc : v.checks)
    if (pc.matched) {
      v.matched.push_back(pc.id);
      v.justification += (v.justification.empty() ? "" : " | ") + std::string(to_string(pc.id)) + ": " + pc.evidence;
    }
  v.outcome = v.matched.empty() ? Outcome::LikelyTP : Outcome::FlaggedFP;
  if (v.matched.empty()) {
    v.justification = "no anti-pattern matched";
  }
  return v;
}

// --- TD ----------------------------------------------------------------------

struct Linear {
  double k = 0;
  int tainted = 0;
  int vars = 0;
};

void linearize(const Expr& e, double sign, const ContractModel& m, const FunctionModel& f, Linear& out) {
  auto lookup = [&](const std::string& name) -> const Expr* {
    if (f.locals.count(name)) return nullptr;
    const StateVarInfo* sv = m.find_state_var(name);
    if (sv && sv->decl->is_constant && sv->decl->initializer) return &*sv->decl->initializer;
    return nullptr;
  };
  if (auto v = constant_value(e, lookup)) {
    out.k += sign * *v;
    return;
  }
  if (e.kind == ExprKind::Binary && (e.name == "+" || e.name == "-")) {
    linearize(e.operands[0], sign, m, f, out);
    linearize(e.operands[1], e.name == "+" ? sign : -sign, m, f, out);
    return;
  }
  if (e.kind == ExprKind::Call && e.callee().kind == ExprKind::Member && e.arg_count() == 1 &&
      (e.callee().name == "add" || e.callee().name == "sub")) {
    linearize(e.callee().base(), sign, m, f, out);
    linearize(e.arg(0), e.callee().name == "add" ? sign : -sign, m, f, out);
    return;
  }
  bool tainted = false;
  for_each_expr(e, [&](const Expr& x) {
    if (is_block_timestamp(x)) tainted = true;
    if (x.kind == ExprKind::Ident && f.taint.contains(x.name)) tainted = true;
  });
  (tainted ? out.tainted : out.vars) += 1;
}

enum class Judgement { Accept, Internal, Reject };

Judgement worse(Judgement a, Judgement b) { return static_cast<int>(a) > static_cast<int>(b) ? a : b; }

class TdJudge {
 public:
  TdJudge(const ContractModel& m, const ClassifyOptions& opts) : m_(m), opts_(opts) {}

  Judgement use(const TaintUse& u, const FunctionModel& f, std::vector<std::string>& notes) {
    switch (u.kind) {
      case UseKind::ComparisonOperand: {
        auto w = interval_width(*u.comparison, m_, f);
        std::string where = "line " + std::to_string(u.span.line_start) + " `" + to_source(*u.comparison) + "`";
        if (!w) {
          notes.push_back(where + " compares against other variables");
          return Judgement::Accept;
        }
        bool ok = *w > opts_.interval_threshold;
        notes.push_back(where + " checks an interval of " + fmt_seconds(*w) + " s" +
                        (ok ? " > " : " <= ") + fmt_seconds(opts_.interval_threshold) + " s");
        return ok ? Judgement::Accept : Judgement::Reject;
      }
      case UseKind::ArithmeticIntoValueFlow:
        notes.push_back("line " + std::to_string(u.span.line_start) + ": `" + to_source(*u.expr) +
                        "` feeds arithmetic");
        return Judgement::Reject;
      case UseKind::Other:
        if (u.into_internal_call) {
          notes.push_back("line " + std::to_string(u.span.line_start) + ": `" + to_source(*u.expr) +
                          "` flows into an internal call");
          return Judgement::Internal;
        }
        notes.push_back("line " + std::to_string(u.span.line_start) + ": `" + to_source(*u.expr) +
                        "` is used outside a comparison");
        return Judgement::Reject;
      case UseKind::AssignmentSource: {
        Judgement j = Judgement::Accept;
        for (const std::string& t : u.targets) j = worse(j, follow(t, f, notes));
        return j;
      }
    }
    return Judgement::Reject;
  }

 private:
  Judgement follow(const std::string& var, const FunctionModel& f, std::vector<std::string>& notes) {
    bool local = f.locals.count(var) != 0;
    if (!local && !m_.is_state_var(var, &f)) {
      notes.push_back("`" + var + "` is not a tracked variable");
      return Judgement::Reject;
    }
    std::string key = local ? std::to_string(reinterpret_cast<std::uintptr_t>(&f)) + ":" + var : var;
    if (!visited_.insert(key).second) return Judgement::Accept;
    Judgement j = Judgement::Accept;
    std::size_t count = 0;
    auto scan = [&](const FunctionModel& g) {
      for (const TaintUse& u : g.taint.uses)
        if (u.root == var) {
          ++count;
          j = worse(j, use(u, g, notes));
        }
    };
    if (local) {
      scan(f);
    } else {
      for (const FunctionModel& g : m_.functions)
        if (g.has_body() && !g.locals.count(var)) scan(g);
    }
    if (count == 0) notes.push_back("`" + var + "` is never read");
    return j;
  }

  const ContractModel& m_;
  const ClassifyOptions& opts_;
  std::set<std::string> visited_;
};

bool bounded_impl(const Expr& amount, const FunctionModel& f, int depth) {
  if (depth > 6) return false;
  const Expr& e = strip_conversions(amount);
  if (is_msg_value(e)) return true;
  if (e.kind == ExprKind::NumberLit) return e.number && *e.number == 0;
  auto literal_at_least = [](const Expr& x, double lo) {
    auto v = constant_value(x);
    return v && *v >= lo && *v == std::floor(*v);
  };
  if (e.kind == ExprKind::Binary) {
    if (e.name == "/") return bounded_impl(e.operands[0], f, depth + 1) && literal_at_least(e.operands[1], 1);
    if (e.name == "-") return bounded_impl(e.operands[0], f, depth + 1) && literal_at_least(e.operands[1], 0);
    return false;
  }
  if (e.kind == ExprKind::Call && e.callee().kind == ExprKind::Member && e.arg_count() == 1) {
    const std::string& n = e.callee().name;
    if (n == "div") return bounded_impl(e.callee().base(), f, depth + 1) && literal_at_least(e.arg(0), 1);
    if (n == "sub") return bounded_impl(e.callee().base(), f, depth + 1) && literal_at_least(e.arg(0), 0);
    return false;
  }
  if (e.kind == ExprKind::Ident && f.locals.count(e.name) && !f.params.count(e.name) && f.has_body()) {
    bool any = false;
    bool all = true;
    for_each_stmt(*f.def->body, [&](const Stmt& s) {
      if (s.kind != StmtKind::VarDecl) return;
      for (const VarBinding& v : s.vars)
        if (v.name == e.name) {
          any = true;
          all = all && s.vars.size() == 1 && !s.exprs.empty() && bounded_impl(s.exprs[0], f, depth + 1);
        }
    });
    for_each_write(*f.def->body, [&](const Expr& lhs, std::string_view op, const Expr* rhs, const Stmt&) {
      if (root_identifier(lhs) != e.name) return;
      any = true;
      all = all && lhs.kind == ExprKind::Ident && op == "=" && rhs && bounded_impl(*rhs, f, depth + 1);
    });
    return any && all;
  }
  return false;
}

}  // namespace

std::optional<double> interval_width(const Expr& cmp, const ContractModel& m, const FunctionModel& f) {
  if (cmp.kind != ExprKind::Binary || cmp.operands.size() != 2) return std::nullopt;
  Linear lin;
  linearize(cmp.operands[0], 1, m, f, lin);
  linearize(cmp.operands[1], -1, m, f, lin);
  if (lin.k == 0) return std::nullopt;
  // An exact match on a timestamp has no slack at all.
  if (cmp.name == "==" || cmp.name == "!=") return 0.0;
  return std::fabs(lin.k);
}

bool bounded_by_msg_value(const Expr& amount, const FunctionModel& f) { return bounded_impl(amount, f, 0); }

Verdict classify_urv(const Candidate& c) {
  std::vector<PatternCheck> checks;
  checks.push_back(check_unreachable(PatternId::URV1_Unreachable, c));
  checks.push_back(check_modifier(PatternId::URV2_RestrictiveModifier, c));
  checks.push_back(check_guard(PatternId::URV3_GuardCondition, c));

  PatternCheck p4{PatternId::URV4_RecipientIsCaller, false, {}};
  AddressClass rc = classify_address(*c.receiver, *c.model, &c.fn());
  p4.matched = rc == AddressClass::CallerControlled;
  p4.evidence = "`" + c.receiver_text + "` is " + to_string(rc);
  checks.push_back(p4);

  PatternCheck p5{PatternId::URV5_TerminalCall, false, {}};
  Effects after = effects_after(c);
  p5.matched = !after.has_state_write() && !after.external_call;
  p5.evidence = p5.matched ? "no state write or external call follows (after: " + to_string(after) + ")"
                           : "followed by " + to_string(after);
  checks.push_back(p5);
  return finish(c, std::move(checks));
}

Verdict classify_ree(const Candidate& c) {
  std::vector<PatternCheck> checks;
  checks.push_back(check_unreachable(PatternId::REE1_Unreachable, c));
  checks.push_back(check_modifier(PatternId::REE2_RestrictiveModifier, c));
  checks.push_back(check_guard(PatternId::REE3_GuardCondition, c));

  PatternCheck p4{PatternId::REE4_HardcodedTarget, false, {}};
  AddressClass tc = classify_address(*c.receiver, *c.model, &c.fn());
  p4.matched = tc == AddressClass::LiteralHardcoded;
  p4.evidence = "target `" + c.receiver_text + "` is " + to_string(tc);
  checks.push_back(p4);

  PatternCheck p5{PatternId::REE5_NoStateChangeAfter, false, {}};
  Effects after = effects_after(c);
  p5.matched = !after.has_state_write();
  p5.evidence = p5.matched ? "no state variable is written after the call" : "followed by " + to_string(after);
  checks.push_back(p5);

  PatternCheck p6{PatternId::REE6_ValueWithinMsgValue, false, {}};
  if (!c.value_arg) {
    p6.evidence = "no value is sent";
  } else {
    p6.matched = bounded_by_msg_value(*c.value_arg, c.fn());
    p6.evidence = "value `" + c.value_text + (p6.matched ? "` is at most msg.value" : "` is not bounded by msg.value");
  }
  checks.push_back(p6);

  Verdict v = finish(c, std::move(checks));
  // A state change after the call may live in the caller; that flow is
  // outside a single function's view.
  if (v.matched.size() == 1 && v.matched[0] == PatternId::REE5_NoStateChangeAfter && !c.fn().callers.empty()) {
    v.outcome = Outcome::NotAnalyzed;
    v.reason = "function-local-scope";
    v.matched.clear();
    v.justification = "REE5 holds locally, but the function is called from elsewhere in the contract";
  }
  return v;
}

Verdict classify_td(const Candidate& c, const ClassifyOptions& opts) {
  const FunctionModel& f = c.fn();
  TdJudge judge(*c.model, opts);
  std::vector<std::string> notes;
  Judgement j = Judgement::Accept;
  std::size_t uses = 0;
  for (const TaintUse& u : f.taint.uses)
    if (u.stmt == c.stmt) {
      ++uses;
      j = worse(j, judge.use(u, f, notes));
    }
  PatternCheck p1{PatternId::TD1_IntervalCheck, uses > 0 && j == Judgement::Accept, {}};
  std::set<std::string> seen;
  for (const std::string& n : notes)
    if (seen.insert(n).second) p1.evidence += (p1.evidence.empty() ? "" : "; ") + n;
  Verdict v = finish(c, {p1});
  if (j == Judgement::Internal) {
    v.outcome = Outcome::NotAnalyzed;
    v.reason = "function-local-scope";
    v.justification = "timestamp flows into another function: " + p1.evidence;
  } else if (v.outcome == Outcome::LikelyTP) {
    v.justification = p1.evidence;
  }
  return v;
}

Verdict classify(const Candidate& c, const ClassifyOptions& opts) {
  switch (c.vuln) {
    case VulnClass::URV: return classify_urv(c);
    case VulnClass::REE: return classify_ree(c);
    case VulnClass::TD: return classify_td(c, opts);
  }
  return {};
}

std::vector<Verdict> classify_all(const UnitModel& um, const ClassifyOptions& opts,
                                  const std::set<VulnClass>& classes) {
  std::vector<Verdict> out;
  for (VulnClass v : classes)
    for (const Candidate& c : detect(um, v).candidates) out.push_back(classify(c, opts));
  sort_verdicts(out);
  return out;
}

}  // namespace solfp
