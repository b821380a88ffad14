// SPDX-License-Identifier: Apache-2.0

#include "solfp/detectors.hpp"

#include <algorithm>
#include <cctype>
#include <functional>
#include <map>
#include <tuple>

#include "solfp/ast_util.hpp"

namespace solfp {

const char* to_string(VulnClass v) {
  switch (v) {
    case VulnClass::URV: return "URV";
    case VulnClass::REE: return "REE";
    case VulnClass::TD: return "TD";
  }
  return "?";
}

std::optional<VulnClass> parse_vuln(std::string_view text) {
  std::string up;
  for (char c : text) up.push_back(static_cast<char>(std::toupper(static_cast<unsigned char>(c))));
  if (up == "URV") return VulnClass::URV;
  if (up == "REE") return VulnClass::REE;
  if (up == "TD") return VulnClass::TD;
  return std::nullopt;
}

const char* to_string(CallKind k) {
  switch (k) {
    case CallKind::Send: return "send";
    case CallKind::Call: return "call";
    case CallKind::CallCode: return "callcode";
    case CallKind::DelegateCall: return "delegatecall";
    case CallKind::Transfer: return "transfer";
    case CallKind::ExternalMemberCall: return "external_member_call";
    case CallKind::TimestampUse: return "timestamp_use";
  }
  return "?";
}

void sort_candidates(std::vector<Candidate>& cs) {
  std::stable_sort(cs.begin(), cs.end(), [](const Candidate& a, const Candidate& b) {
    return std::make_tuple(a.file, a.span.line_start, a.span.col_start, static_cast<int>(a.vuln)) <
           std::make_tuple(b.file, b.span.line_start, b.span.col_start, static_cast<int>(b.vuln));
  });
}

namespace {

std::optional<CallKind> urv_kind(std::string_view member) {
  if (member == "send") return CallKind::Send;
  if (member == "call") return CallKind::Call;
  if (member == "callcode") return CallKind::CallCode;
  if (member == "delegatecall") return CallKind::DelegateCall;
  return std::nullopt;
}

const Expr* value_option(const Expr& call) {
  for (const CallOption& o : call.options)
    if (o.name == "value") return &o.value;
  return nullptr;
}

Candidate make_call_candidate(VulnClass v, CallKind kind, const Expr& call, const Stmt& stmt,
                              const ContractModel& m, std::size_t fi) {
  Candidate c;
  c.vuln = v;
  c.file = m.unit->file;
  c.span = call.span;
  c.contract = m.def->name;
  c.function = m.functions[fi].name();
  c.call_kind = kind;
  c.model = &m;
  c.function_index = fi;
  c.stmt = &stmt;
  c.call = &call;
  c.receiver = &call.callee().base();
  c.receiver_text = to_source(*c.receiver);
  if (kind == CallKind::Send && call.arg_count() == 1) c.value_arg = &call.arg(0);
  else c.value_arg = value_option(call);
  if (c.value_arg) c.value_text = to_source(*c.value_arg);
  return c;
}

template <typename Fn>
void for_each_analyzable(const UnitModel& um, Detection& out, Fn&& fn) {
  for (const ContractModel& m : um.contracts) {
    if (m.def->unparsed) {
      out.not_analyzed.push_back({um.unit->file, m.def->name, {}, m.def->span, "unparsed-contract"});
      continue;
    }
    for (const SourceSpan& skipped : m.def->skipped_members)
      out.not_analyzed.push_back({um.unit->file, m.def->name, {}, skipped, "parse-error"});
    for (std::size_t i = 0; i < m.own_count; ++i) {
      const FunctionModel& f = m.functions[i];
      if (!f.has_body()) continue;
      if (f.has_parse_error) {
        out.not_analyzed.push_back({um.unit->file, m.def->name, f.name(), f.def->span, "parse-error"});
        continue;
      }
      for_each_stmt(*f.def->body, [&](const Stmt& s) {
        if (s.kind == StmtKind::Opaque)
          out.not_analyzed.push_back({um.unit->file, m.def->name, f.name(), s.span, "opaque-statement"});
      });
      fn(m, i, f);
    }
  }
}

// Calls whose value is thrown away: the whole expression statement, a
// branch of a discarded conditional, or an element of a discarded tuple.
void discarded_calls(const Expr& e, std::vector<const Expr*>& out) {
  switch (e.kind) {
    case ExprKind::Call:
      out.push_back(&e);
      break;
    case ExprKind::Conditional:
      discarded_calls(e.operands[1], out);
      discarded_calls(e.operands[2], out);
      break;
    case ExprKind::Tuple:
      for (const Expr& op : e.operands) discarded_calls(op, out);
      break;
    default:
      break;
  }
}

}  // namespace

Detection detect_urv(const UnitModel& um) {
  Detection out;
  for_each_analyzable(um, out, [&](const ContractModel& m, std::size_t fi, const FunctionModel& f) {
    for_each_stmt(*f.def->body, [&](const Stmt& s) {
      std::vector<const Expr*> dropped;
      if (s.kind == StmtKind::Expression && !s.exprs.empty()) discarded_calls(s.exprs[0], dropped);
      for (const Expr& post : s.post) discarded_calls(post, dropped);
      for (const Expr* call : dropped) {
        if (call->callee().kind != ExprKind::Member) continue;
        auto kind = urv_kind(call->callee().name);
        if (!kind) continue;
        out.candidates.push_back(make_call_candidate(VulnClass::URV, *kind, *call, s, m, fi));
      }
    });
  });
  sort_candidates(out.candidates);
  return out;
}

Detection detect_ree(const UnitModel& um) {
  Detection out;
  for_each_analyzable(um, out, [&](const ContractModel& m, std::size_t fi, const FunctionModel& f) {
    for_each_stmt(*f.def->body, [&](const Stmt& s) {
      if (!is_simple_stmt(s)) return;
      for (const Expr* root : own_exprs(s)) {
        for_each_expr(*root, [&](const Expr& x) {
          if (x.kind != ExprKind::Call || x.callee().kind != ExprKind::Member) return;
          const Expr& callee = x.callee();
          const Expr& base = callee.base();
          if (base.kind == ExprKind::Ident && (base.name == "this" || base.name == "super")) return;
          if (callee.name == "call") {
            out.candidates.push_back(make_call_candidate(VulnClass::REE, CallKind::Call, x, s, m, fi));
            return;
          }
          if (m.is_contract_type(m.type_of(base, &f)))
            out.candidates.push_back(make_call_candidate(VulnClass::REE, CallKind::ExternalMemberCall, x, s, m, fi));
        });
      }
    });
  });
  sort_candidates(out.candidates);
  return out;
}

Detection detect_td(const UnitModel& um) {
  Detection out;
  for_each_analyzable(um, out, [&](const ContractModel& m, std::size_t fi, const FunctionModel& f) {
    std::vector<const Stmt*> order;
    std::map<const Stmt*, const TaintUse*> first;
    for (const TaintUse& u : f.taint.uses) {
      auto it = first.find(u.stmt);
      if (it == first.end()) {
        first[u.stmt] = &u;
        order.push_back(u.stmt);
      } else if (u.span.byte_offset < it->second->span.byte_offset) {
        it->second = &u;
      }
    }
    for (const Stmt* s : order) {
      Candidate c;
      c.vuln = VulnClass::TD;
      c.file = um.unit->file;
      c.span = first[s]->span;
      c.contract = m.def->name;
      c.function = f.name();
      c.call_kind = CallKind::TimestampUse;
      c.model = &m;
      c.function_index = fi;
      c.stmt = s;
      out.candidates.push_back(std::move(c));
    }
  });
  sort_candidates(out.candidates);
  return out;
}

Detection detect(const UnitModel& um, VulnClass v) {
  switch (v) {
    case VulnClass::URV: return detect_urv(um);
    case VulnClass::REE: return detect_ree(um);
    case VulnClass::TD: return detect_td(um);
  }
  return {};
}

}  // namespace solfp
