// SPDX-License-Identifier: Apache-2.0

#include "solfp/model.hpp"

#include <algorithm>
#include <cctype>
#include <cstdint>
#include <deque>

#include "solfp/ast_util.hpp"
#include "solfp/parser.hpp"

namespace solfp {

const char* to_string(AddressClass c) {
  switch (c) {
    case AddressClass::LiteralHardcoded: return "LiteralHardcoded";
    case AddressClass::DeployerAtConstruction: return "DeployerAtConstruction";
    case AddressClass::CallerControlled: return "CallerControlled";
    case AddressClass::Unknown: return "Unknown";
  }
  return "?";
}

const char* to_string(GuardKind k) {
  switch (k) {
    case GuardKind::ModifierGuard: return "ModifierGuard";
    case GuardKind::InlineRequireGuard: return "InlineRequireGuard";
    case GuardKind::InlineIfGuard: return "InlineIfGuard";
  }
  return "?";
}

bool RestrictionInfo::has_modifier_guard() const {
  return std::any_of(reasons.begin(), reasons.end(),
                     [](const GuardReason& r) { return r.kind == GuardKind::ModifierGuard; });
}

bool RestrictionInfo::has_inline_guard() const {
  return std::any_of(reasons.begin(), reasons.end(),
                     [](const GuardReason& r) { return r.kind != GuardKind::ModifierGuard; });
}

namespace {

constexpr int kMaxDepth = 8;

std::string normalize_type(std::string_view raw) {
  std::string out;
  bool pending_space = false;
  auto word = [](char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '$'; };
  for (char c : raw) {
    if (std::isspace(static_cast<unsigned char>(c))) {
      pending_space = true;
      continue;
    }
    if (pending_space && !out.empty() && word(out.back()) && word(c)) out.push_back(' ');
    pending_space = false;
    out.push_back(c);
  }
  return out;
}

/// Element type of a mapping or array type, or empty.
std::string element_type(const std::string& type) {
  if (type.rfind("mapping(", 0) == 0) {
    int depth = 0;
    for (std::size_t i = 0; i + 1 < type.size(); ++i) {
      char c = type[i];
      if (c == '(') ++depth;
      if (c == ')') --depth;
      if (depth == 1 && c == '=' && type[i + 1] == '>') {
        std::string rest = type.substr(i + 2);
        if (!rest.empty() && rest.back() == ')') rest.pop_back();
        return rest;
      }
    }
    return {};
  }
  if (!type.empty() && type.back() == ']') {
    std::size_t open = type.rfind('[');
    if (open != std::string::npos) return type.substr(0, open);
  }
  return {};
}

bool is_struct_or_enum(const SourceUnit& unit, std::string_view name) {
  for (const ContractDef& c : unit.contracts) {
    if (c.find_struct(name)) return true;
    for (const std::string& e : c.enums)
      if (e == name) return true;
  }
  return false;
}

const std::set<std::string, std::less<>>& builtin_functions() {
  static const std::set<std::string, std::less<>> names = {
      "require", "assert",  "revert",    "keccak256", "sha3",    "sha256",   "ripemd160", "ecrecover",
      "addmod",  "mulmod",  "blockhash", "gasleft",   "type",    "abi",      "bytes",     "string",
      "payable", "address", "bool",      "uint",      "int",     "byte",     "bytes32",   "block",
  };
  return names;
}

bool is_terminating(const Stmt& s) {
  switch (s.kind) {
    case StmtKind::Revert:
    case StmtKind::Throw:
    case StmtKind::Return:
      return true;
    case StmtKind::Block:
      return std::any_of(s.body.begin(), s.body.end(), [](const Stmt& c) { return is_terminating(c); });
    default:
      return false;
  }
}

bool contains_placeholder(const Stmt& s) {
  bool found = false;
  for_each_stmt(s, [&](const Stmt& c) { found = found || c.kind == StmtKind::Placeholder; });
  return found;
}

std::vector<const Expr*> return_exprs(const FunctionModel& f) {
  std::vector<const Expr*> out;
  if (!f.has_body()) return out;
  for_each_stmt(*f.def->body, [&](const Stmt& s) {
    if (s.kind == StmtKind::Return && !s.exprs.empty()) out.push_back(&s.exprs[0]);
  });
  return out;
}

std::vector<std::string> write_roots(const Expr& lhs) {
  std::vector<std::string> out;
  if (lhs.kind == ExprKind::Tuple) {
    for (const Expr& op : lhs.operands)
      for (std::string& r : write_roots(op)) out.push_back(std::move(r));
    return out;
  }
  std::string root = root_identifier(lhs);
  if (!root.empty()) out.push_back(std::move(root));
  return out;
}

// --- address classification ---------------------------------------------

class Classifier {
 public:
  Classifier(const ContractModel& m, std::map<std::string, AddressClass>* memo) : m_(m), memo_(memo) {}

  AddressClass classify(const Expr& e, const FunctionModel* f, bool in_ctor, int depth) {
    if (depth > kMaxDepth) return AddressClass::Unknown;
    const Expr& x = m_.strip_all_conversions(e);
    if (m_.is_caller(x, f)) return in_ctor ? AddressClass::DeployerAtConstruction : AddressClass::CallerControlled;
    switch (x.kind) {
      case ExprKind::AddressLit:
      case ExprKind::NumberLit:
        return AddressClass::LiteralHardcoded;
      case ExprKind::Ident:
        return classify_name(x.name, f, in_ctor, depth);
      case ExprKind::Call: {
        if (x.arg_count() != 0) return AddressClass::Unknown;
        auto idx = m_.resolve_internal_call(x, f);
        if (!idx) return AddressClass::Unknown;
        const FunctionModel& g = m_.functions[*idx];
        std::vector<AddressClass> classes;
        for (const Expr* r : return_exprs(g)) classes.push_back(classify(*r, &g, false, depth + 1));
        return agree(classes);
      }
      case ExprKind::Conditional: {
        AddressClass a = classify(x.operands[1], f, in_ctor, depth + 1);
        AddressClass b = classify(x.operands[2], f, in_ctor, depth + 1);
        return a == b ? a : AddressClass::Unknown;
      }
      default:
        return AddressClass::Unknown;
    }
  }

  AddressClass state_class(const std::string& name, int depth) {
    const StateVarInfo* sv = m_.find_state_var(name);
    if (!sv) return AddressClass::Unknown;
    if (!memo_) return sv->provenance;
    if (auto it = memo_->find(name); it != memo_->end()) return it->second;
    if (!visiting_.insert("state:" + name).second) return AddressClass::Unknown;

    std::vector<AddressClass> classes;
    if (sv->decl->initializer) classes.push_back(classify(*sv->decl->initializer, nullptr, true, depth + 1));
    for (const FunctionModel& fm : m_.functions) {
      if (!fm.has_body() || fm.locals.count(name)) continue;
      for_each_write(*fm.def->body, [&](const Expr& lhs, std::string_view op, const Expr* rhs, const Stmt&) {
        bool direct = lhs.kind == ExprKind::Ident && lhs.name == name;
        bool in_tuple = false;
        if (lhs.kind == ExprKind::Tuple)
          for (const Expr& t : lhs.operands) in_tuple = in_tuple || (t.kind == ExprKind::Ident && t.name == name);
        if (in_tuple) classes.push_back(AddressClass::Unknown);
        if (!direct) return;
        if (op != "=" || !rhs) {
          classes.push_back(AddressClass::Unknown);
          return;
        }
        AddressClass c = classify(*rhs, &fm, fm.is_constructor(), depth + 1);
        // A caller stored outside the constructor is some past caller.
        if (c == AddressClass::CallerControlled) c = AddressClass::Unknown;
        classes.push_back(c);
      });
    }
    AddressClass result = agree(classes);
    if (result == AddressClass::CallerControlled) result = AddressClass::Unknown;
    visiting_.erase("state:" + name);
    (*memo_)[name] = result;
    return result;
  }

 private:
  static AddressClass agree(const std::vector<AddressClass>& classes) {
    if (classes.empty()) return AddressClass::Unknown;
    for (AddressClass c : classes)
      if (c != classes.front()) return AddressClass::Unknown;
    return classes.front();
  }

  AddressClass classify_name(const std::string& name, const FunctionModel* f, bool in_ctor, int depth) {
    if (name == "this") return AddressClass::Unknown;
    if (f && f->locals.count(name)) {
      if (f->params.count(name) || !f->has_body()) return AddressClass::Unknown;
      std::string key = "local:" + std::to_string(reinterpret_cast<std::uintptr_t>(f)) + ":" + name;
      if (!visiting_.insert(key).second) return AddressClass::Unknown;
      std::vector<AddressClass> classes;
      for_each_stmt(*f->def->body, [&](const Stmt& s) {
        if (s.kind != StmtKind::VarDecl || s.exprs.empty()) return;
        for (const VarBinding& v : s.vars)
          if (v.name == name)
            classes.push_back(s.vars.size() == 1 ? classify(s.exprs[0], f, in_ctor, depth + 1) : AddressClass::Unknown);
      });
      for_each_write(*f->def->body, [&](const Expr& lhs, std::string_view op, const Expr* rhs, const Stmt&) {
        for (const std::string& r : write_roots(lhs)) {
          if (r != name) continue;
          bool simple = lhs.kind == ExprKind::Ident && op == "=" && rhs;
          classes.push_back(simple ? classify(*rhs, f, in_ctor, depth + 1) : AddressClass::Unknown);
        }
      });
      visiting_.erase(key);
      return agree(classes);
    }
    return state_class(name, depth);
  }

  const ContractModel& m_;
  std::map<std::string, AddressClass>* memo_;
  std::set<std::string> visiting_;
};

// --- guards ------------------------------------------------------------------

std::optional<std::set<AddressClass>> guard_impl(const ContractModel& m, const Expr& cond, const FunctionModel* f,
                                                 int depth);

std::optional<std::set<AddressClass>> exclusion_impl(const ContractModel& m, const Expr& cond,
                                                     const FunctionModel* f, int depth) {
  if (depth > kMaxDepth) return std::nullopt;
  if (cond.kind == ExprKind::Binary) {
    const Expr& a = cond.operands[0];
    const Expr& b = cond.operands[1];
    if (cond.name == "!=") {
      if (m.is_caller(a, f)) return std::set<AddressClass>{classify_address(b, m, f)};
      if (m.is_caller(b, f)) return std::set<AddressClass>{classify_address(a, m, f)};
      return std::nullopt;
    }
    if (cond.name == "&&" || cond.name == "||") {
      auto x = exclusion_impl(m, a, f, depth + 1);
      auto y = exclusion_impl(m, b, f, depth + 1);
      if (cond.name == "&&" && !(x && y)) return std::nullopt;
      if (!x && !y) return std::nullopt;
      std::set<AddressClass> out;
      if (x) out.insert(x->begin(), x->end());
      if (y) out.insert(y->begin(), y->end());
      return out;
    }
  }
  if (cond.kind == ExprKind::Unary && cond.name == "!") return guard_impl(m, cond.operands[0], f, depth + 1);
  return std::nullopt;
}

std::optional<std::set<AddressClass>> guard_impl(const ContractModel& m, const Expr& cond, const FunctionModel* f,
                                                 int depth) {
  if (depth > kMaxDepth) return std::nullopt;
  switch (cond.kind) {
    case ExprKind::Binary: {
      const Expr& a = cond.operands[0];
      const Expr& b = cond.operands[1];
      if (cond.name == "==") {
        if (m.is_caller(a, f)) return std::set<AddressClass>{classify_address(b, m, f)};
        if (m.is_caller(b, f)) return std::set<AddressClass>{classify_address(a, m, f)};
        return std::nullopt;
      }
      if (cond.name == "||" || cond.name == "&&") {
        auto x = guard_impl(m, a, f, depth + 1);
        auto y = guard_impl(m, b, f, depth + 1);
        if (cond.name == "||" && !(x && y)) return std::nullopt;
        if (!x && !y) return std::nullopt;
        std::set<AddressClass> out;
        if (x) out.insert(x->begin(), x->end());
        if (y) out.insert(y->begin(), y->end());
        return out;
      }
      return std::nullopt;
    }
    case ExprKind::Unary:
      if (cond.name == "!") return exclusion_impl(m, cond.operands[0], f, depth + 1);
      return std::nullopt;
    case ExprKind::Call: {
      if (cond.arg_count() != 0) return std::nullopt;
      auto idx = m.resolve_internal_call(cond, f);
      if (!idx) return std::nullopt;
      const FunctionModel& g = m.functions[*idx];
      auto rets = return_exprs(g);
      if (rets.size() != 1) return std::nullopt;
      return guard_impl(m, *rets[0], &g, depth + 1);
    }
    default:
      return std::nullopt;
  }
}

void scan_guards(const ContractModel& m, const std::vector<Stmt>& list, const FunctionModel* f, int depth,
                 std::vector<GuardReason>& out) {
  if (depth > 3) return;
  for (const Stmt& s : list) {
    switch (s.kind) {
      case StmtKind::Require:
      case StmtKind::Assert:
        if (!s.exprs.empty())
          if (auto g = m.guard_classes(s.exprs[0], f))
            out.push_back({GuardKind::InlineRequireGuard, {}, s.exprs[0].span, *g, to_source(s.exprs[0])});
        break;
      case StmtKind::If: {
        const Expr& cond = s.exprs[0];
        if (!s.body.empty() && is_terminating(s.body[0])) {
          if (auto g = exclusion_impl(m, cond, f, 0)) {
            out.push_back({GuardKind::InlineIfGuard, {}, cond.span, *g, to_source(cond)});
            break;
          }
        }
        if (!s.body.empty() && contains_placeholder(s.body[0]))
          if (auto g = m.guard_classes(cond, f))
            out.push_back({GuardKind::InlineIfGuard, {}, cond.span, *g, to_source(cond)});
        break;
      }
      case StmtKind::Block:
        scan_guards(m, s.body, f, depth, out);
        break;
      case StmtKind::Expression: {
        const Expr& e = s.exprs[0];
        if (e.kind != ExprKind::Call || e.arg_count() != 0) break;
        auto idx = m.resolve_internal_call(e, f);
        if (!idx) break;
        const FunctionModel& g = m.functions[*idx];
        if (&g == f || !g.has_body()) break;
        std::vector<GuardReason> inner;
        scan_guards(m, g.def->body->body, &g, depth + 1, inner);
        for (GuardReason& r : inner) {
          r.span = e.span;
          r.text = to_source(e) + ": " + r.text;
          out.push_back(std::move(r));
        }
        break;
      }
      default:
        break;
    }
  }
}

// --- effects -------------------------------------------------------------

bool is_lowlevel_member(std::string_view name) {
  return name == "send" || name == "transfer" || name == "call" || name == "callcode" || name == "delegatecall" ||
         name == "staticcall";
}

class EffectAnalyzer {
 public:
  EffectAnalyzer(const ContractModel& m, const std::vector<Effects>& summaries) : m_(m), summaries_(summaries) {}

  Effects of(const Stmt& s, const FunctionModel& f) const {
    Effects e;
    if (s.kind == StmtKind::Emit) e.event_emit = true;
    if (s.kind == StmtKind::Opaque) {
      e.state_writes.insert("<opaque>");
      e.external_call = true;
    }
    if (s.kind == StmtKind::Assign && s.exprs.size() == 2) record_write(s.exprs[0], f, e);
    for (const Expr* root : own_exprs(s)) {
      for_each_expr(*root, [&](const Expr& x) {
        if (x.kind == ExprKind::Binary && is_assignment_op(x.name)) record_write(x.operands[0], f, e);
        if (x.kind == ExprKind::Unary && (x.name == "delete" || x.name == "++" || x.name == "--" ||
                                          x.name == "x++" || x.name == "x--"))
          record_write(x.operands[0], f, e);
        if (x.kind == ExprKind::Call) call_effects(x, f, e);
        if (x.kind == ExprKind::New) e.external_call = true;
      });
    }
    return e;
  }

 private:
  void record_write(const Expr& lhs, const FunctionModel& f, Effects& e) const {
    for (const std::string& root : write_roots(lhs)) {
      if (m_.is_state_var(root, &f)) {
        e.state_writes.insert(root);
      } else if (auto it = storage_refs_.find(&f); it != storage_refs_.end()) {
        auto jt = it->second.find(root);
        if (jt != it->second.end()) e.state_writes.insert(jt->second);
      }
    }
  }

  void call_effects(const Expr& call, const FunctionModel& f, Effects& e) const {
    const Expr& callee = call.callee();
    if (callee.kind == ExprKind::New) return;  // counted at the New node
    if (auto idx = m_.resolve_internal_call(call, &f)) {
      e.merge(summaries_[*idx]);
      if (callee.kind == ExprKind::Member && callee.base().kind == ExprKind::Ident && callee.base().name == "this")
        e.external_call = true;
      return;
    }
    if (callee.kind == ExprKind::Ident) {
      const std::string& n = callee.name;
      if (n == "selfdestruct" || n == "suicide") {
        e.external_call = true;
        return;
      }
      if (builtin_functions().count(n) || is_elementary_type_name(n) || m_.unit->find_contract(n) ||
          is_struct_or_enum(*m_.unit, n) || (!n.empty() && std::isupper(static_cast<unsigned char>(n[0]))))
        return;
      for (const ContractDef* c : m_.lineage)
        for (const std::string& ev : c->events)
          if (ev == n) return;
      // An undeclared function, e.g. one inherited from outside the unit.
      e.state_writes.insert("<unresolved>");
      e.external_call = true;
      return;
    }
    if (callee.kind == ExprKind::TypeName) return;
    if (callee.kind != ExprKind::Member) return;
    const Expr& base = callee.base();
    if (callee.name == "push" || callee.name == "pop") {
      record_write(base, f, e);
      return;
    }
    if (base.kind == ExprKind::Ident && (base.name == "super" || base.name == "abi" || base.name == "msg" ||
                                         base.name == "block" || base.name == "tx"))
      return;
    if (base.kind == ExprKind::Ident && m_.unit->find_contract(base.name) &&
        m_.unit->find_contract(base.name)->kind == ContractKind::Library)
      return;
    if (is_lowlevel_member(callee.name)) {
      std::string t = m_.type_of(base, &f);
      // `x.transfer(a)` on a uint through a using-for library is not a call.
      if (t.empty() || t.rfind("address", 0) == 0 || m_.is_contract_type(t)) e.external_call = true;
      return;
    }
    if (m_.is_contract_type(m_.type_of(base, &f))) e.external_call = true;
  }

 public:
  std::map<const FunctionModel*, std::map<std::string, std::string>> storage_refs_;

 private:
  const ContractModel& m_;
  const std::vector<Effects>& summaries_;
};

}  // namespace

// --- ContractModel queries --------------------------------------------------

const FunctionModel* ContractModel::find_function(std::string_view name) const {
  for (const FunctionModel& f : functions)
    if (f.def->kind == FunctionKind::Regular && f.def->name == name) return &f;
  return nullptr;
}

const ModifierDef* ContractModel::find_modifier(std::string_view name) const {
  for (const ContractDef* c : lineage)
    if (const ModifierDef* md = c->find_modifier(name)) return md;
  return nullptr;
}

const StateVarInfo* ContractModel::find_state_var(std::string_view name) const {
  auto it = state_vars.find(std::string(name));
  return it == state_vars.end() ? nullptr : &it->second;
}

bool ContractModel::is_state_var(const std::string& name, const FunctionModel* f) const {
  if (f && f->locals.count(name)) return false;
  return state_vars.count(name) != 0;
}

std::optional<std::size_t> ContractModel::resolve_internal_call(const Expr& call, const FunctionModel* ctx) const {
  if (call.kind != ExprKind::Call) return std::nullopt;
  const Expr& callee = call.callee();
  std::string name;
  bool skip_own = false;
  if (callee.kind == ExprKind::Ident) {
    if (ctx && ctx->locals.count(callee.name)) return std::nullopt;
    name = callee.name;
  } else if (callee.kind == ExprKind::Member && callee.base().kind == ExprKind::Ident &&
             (callee.base().name == "this" || callee.base().name == "super")) {
    name = callee.name;
    skip_own = callee.base().name == "super";
  } else {
    return std::nullopt;
  }
  for (std::size_t i = 0; i < functions.size(); ++i) {
    const FunctionModel& f = functions[i];
    if (skip_own && f.declared_in == def) continue;
    if (f.def->kind == FunctionKind::Regular && f.def->name == name) return i;
  }
  return std::nullopt;
}

bool ContractModel::is_contract_type(std::string_view raw) const {
  std::string type = normalize_type(raw);
  if (type.empty() || type.find('(') != std::string::npos || type.back() == ']') return false;
  std::string last = type.substr(type.rfind('.') == std::string::npos ? 0 : type.rfind('.') + 1);
  if (is_elementary_type_name(last) || last.rfind("address", 0) == 0) return false;
  if (const ContractDef* c = unit->find_contract(last)) return c->kind != ContractKind::Library;
  if (is_struct_or_enum(*unit, last)) return false;
  return std::isupper(static_cast<unsigned char>(last[0])) != 0;
}

std::string ContractModel::type_of(const Expr& e, const FunctionModel* f) const {
  switch (e.kind) {
    case ExprKind::Ident: {
      if (e.name == "this") return def->name;
      if (f) {
        auto it = f->locals.find(e.name);
        if (it != f->locals.end()) return normalize_type(it->second);
      }
      if (const StateVarInfo* sv = find_state_var(e.name)) return normalize_type(sv->decl->type);
      return {};
    }
    case ExprKind::Member: {
      if (is_msg_sender(e) || is_tx_origin(e)) return "address";
      if (e.name == "balance") return "uint256";
      std::string bt = type_of(e.base(), f);
      if (bt.empty()) return {};
      for (const ContractDef& c : unit->contracts)
        if (const StructDef* sd = c.find_struct(bt))
          for (const Param& field : sd->fields)
            if (field.name == e.name) return normalize_type(field.type);
      return {};
    }
    case ExprKind::Index:
      if (e.operands.size() < 2) return {};
      return element_type(type_of(e.base(), f));
    case ExprKind::Call: {
      const Expr& callee = e.callee();
      if (callee.kind == ExprKind::TypeName) return normalize_type(callee.name);
      if (callee.kind == ExprKind::Ident) {
        if (auto idx = resolve_internal_call(e, f)) {
          const auto& rets = functions[*idx].def->returns;
          return rets.empty() ? std::string() : normalize_type(rets[0].type);
        }
        if (unit->find_contract(callee.name) || is_struct_or_enum(*unit, callee.name) ||
            (!callee.name.empty() && std::isupper(static_cast<unsigned char>(callee.name[0]))))
          return callee.name;
        return {};
      }
      if (callee.kind == ExprKind::Member) {
        if (auto idx = resolve_internal_call(e, f)) {
          const auto& rets = functions[*idx].def->returns;
          return rets.empty() ? std::string() : normalize_type(rets[0].type);
        }
        std::string bt = type_of(callee.base(), f);
        if (const ContractDef* c = unit->find_contract(bt))
          if (const FunctionDef* fn = c->find_function(callee.name); fn && !fn->returns.empty())
            return normalize_type(fn->returns[0].type);
      }
      return {};
    }
    case ExprKind::New:
      return normalize_type(e.name);
    case ExprKind::Conditional:
      return type_of(e.operands[1], f);
    default:
      return {};
  }
}

bool ContractModel::is_caller(const Expr& e, const FunctionModel* f) const {
  // Bounded walk through zero-argument helpers such as `_msgSender()`.
  const Expr* cur = &strip_conversions(e);
  const FunctionModel* ctx = f;
  for (int depth = 0; depth < kMaxDepth; ++depth) {
    if (is_msg_sender(*cur) || is_tx_origin(*cur)) return true;
    if (cur->kind != ExprKind::Call || cur->arg_count() != 0) return false;
    auto idx = resolve_internal_call(*cur, ctx);
    if (!idx) return false;
    const FunctionModel& g = functions[*idx];
    auto rets = return_exprs(g);
    if (rets.empty()) return false;
    for (std::size_t i = 1; i < rets.size(); ++i)
      if (!is_caller(*rets[i], &g)) return false;
    cur = &strip_conversions(*rets[0]);
    ctx = &g;
  }
  return false;
}

const Expr& ContractModel::strip_all_conversions(const Expr& e) const {
  const Expr* cur = &e;
  while (true) {
    const Expr* next = &strip_conversions(*cur);
    if (next->kind == ExprKind::Call && next->arg_count() == 1 && next->callee().kind == ExprKind::Ident &&
        !find_function(next->callee().name) && is_contract_type(next->callee().name))
      next = &next->arg(0);
    if (next == cur) return *cur;
    cur = next;
  }
}

std::optional<std::set<AddressClass>> ContractModel::guard_classes(const Expr& cond, const FunctionModel* f) const {
  return guard_impl(*this, cond, f, 0);
}

std::vector<GuardReason> ContractModel::site_guards(const FunctionModel& f, const Stmt& site) const {
  std::vector<GuardReason> out;
  const Stmt* cur = &site;
  while (true) {
    auto it = f.parent.find(cur);
    if (it == f.parent.end() || !it->second) break;
    const Stmt* p = it->second;
    if (p->kind == StmtKind::Block) {
      for (const Stmt& sib : p->body) {
        if (&sib == cur) break;
        if (sib.kind == StmtKind::Require || sib.kind == StmtKind::Assert || sib.kind == StmtKind::If) {
          if (sib.kind == StmtKind::If) {
            if (!sib.body.empty() && is_terminating(sib.body[0]))
              if (auto g = exclusion_impl(*this, sib.exprs[0], &f, 0))
                out.push_back({GuardKind::InlineIfGuard, {}, sib.exprs[0].span, *g, to_source(sib.exprs[0])});
          } else if (!sib.exprs.empty()) {
            if (auto g = guard_classes(sib.exprs[0], &f))
              out.push_back({GuardKind::InlineRequireGuard, {}, sib.exprs[0].span, *g, to_source(sib.exprs[0])});
          }
        }
      }
    } else if (p->kind == StmtKind::If && !p->body.empty() && &p->body[0] == cur) {
      if (auto g = guard_classes(p->exprs[0], &f))
        out.push_back({GuardKind::InlineIfGuard, {}, p->exprs[0].span, *g, to_source(p->exprs[0])});
    }
    cur = p;
  }
  return out;
}

const ContractModel* UnitModel::find(std::string_view name) const {
  for (const ContractModel& c : contracts)
    if (c.def->name == name) return &c;
  return nullptr;
}

AddressClass classify_address(const Expr& e, const ContractModel& m, const FunctionModel* f) {
  Classifier c(m, nullptr);
  return c.classify(e, f, f && f->is_constructor(), 0);
}

bool reachable_from_unrestricted(const ContractModel& m, const FunctionModel& f) {
  for (std::size_t i = 0; i < m.own_count; ++i)
    if (&m.functions[i] == &f) return m.call_graph.reachable.count(i) != 0;
  return false;
}

const TaintSet& taint_timestamp(const ContractModel&, const FunctionModel& f) { return f.taint; }

// --- building ---------------------------------------------------------------

namespace {

void collect_lineage(const SourceUnit& unit, const ContractDef* c, std::vector<const ContractDef*>& out,
                     int depth) {
  if (depth > 32 || std::find(out.begin(), out.end(), c) != out.end()) return;
  out.push_back(c);
  for (auto it = c->bases.rbegin(); it != c->bases.rend(); ++it)
    if (const ContractDef* b = unit.find_contract(*it)) collect_lineage(unit, b, out, depth + 1);
}

FunctionModel make_function(const FunctionDef& def, const ContractDef* declared_in, bool own) {
  FunctionModel fm;
  fm.def = &def;
  fm.declared_in = declared_in;
  fm.own = own;
  fm.visibility = def.visibility == Visibility::Unspecified ? Visibility::Public : def.visibility;
  for (const Param& p : def.params)
    if (!p.name.empty()) {
      fm.locals[p.name] = p.type;
      fm.params.insert(p.name);
    }
  for (const Param& p : def.returns)
    if (!p.name.empty()) fm.locals[p.name] = p.type;
  if (def.body) {
    std::function<void(const Stmt&, const Stmt*)> index = [&](const Stmt& s, const Stmt* parent) {
      fm.parent[&s] = parent;
      if (s.kind == StmtKind::VarDecl)
        for (const VarBinding& v : s.vars)
          if (!v.name.empty()) fm.locals[v.name] = v.type;
      if (s.kind == StmtKind::Opaque && s.parse_error) fm.has_parse_error = true;
      for (const Stmt& c : s.init) index(c, &s);
      for (const Stmt& c : s.body) index(c, &s);
      for (const Stmt& c : s.else_body) index(c, &s);
    };
    index(*def.body, nullptr);
  }
  return fm;
}

std::set<std::string> mentions_closure(const Stmt& body, std::set<std::string> tainted) {
  while (true) {
    std::set<std::string> next = propagate_taint_once(body, tainted);
    if (next == tainted) return tainted;
    tainted = std::move(next);
  }
}

}  // namespace

std::set<std::string> propagate_taint_once(const Stmt& body, const std::set<std::string>& tainted) {
  auto mentions = [&](const Expr& e) {
    bool hit = false;
    for_each_expr(e, [&](const Expr& x) {
      if (hit) return;
      if (is_block_timestamp(x)) hit = true;
      else if (x.kind == ExprKind::Ident && tainted.count(x.name)) hit = true;
    });
    return hit;
  };
  std::set<std::string> out = tainted;
  for_each_stmt(body, [&](const Stmt& s) {
    if (s.kind == StmtKind::VarDecl && !s.exprs.empty() && s.exprs[0].kind != ExprKind::Empty && mentions(s.exprs[0]))
      for (const VarBinding& v : s.vars)
        if (!v.name.empty()) out.insert(v.name);
  });
  for_each_write(body, [&](const Expr& lhs, std::string_view, const Expr* rhs, const Stmt&) {
    if (rhs && mentions(*rhs))
      for (const std::string& r : write_roots(lhs)) out.insert(r);
  });
  return out;
}

namespace {

void compute_uses(const ContractModel& m, FunctionModel& f);

void build_contract(ContractModel& m) {
  const SourceUnit& unit = *m.unit;
  collect_lineage(unit, m.def, m.lineage, 0);

  // Functions: own first, then inherited ones not overridden by a nearer
  // contract. Every constructor in the lineage is kept.
  std::set<std::string> taken;
  for (const ContractDef* c : m.lineage) {
    bool own = c == m.def;
    if (!own && c->kind == ContractKind::Interface) continue;
    std::set<std::string> here;
    for (const FunctionDef& fd : c->functions) {
      std::string key = fd.kind == FunctionKind::Constructor ? std::string() : fd.display_name();
      if (!own && !key.empty() && taken.count(key)) continue;
      if (!key.empty()) here.insert(key);
      m.functions.push_back(make_function(fd, c, own));
    }
    taken.insert(here.begin(), here.end());
    if (own) m.own_count = m.functions.size();
  }

  for (const ContractDef* c : m.lineage)
    for (const StateVarDecl& sv : c->state_vars)
      if (!m.state_vars.count(sv.name)) m.state_vars[sv.name] = StateVarInfo{&sv, c, AddressClass::Unknown, false};

  // State-variable provenance.
  {
    std::map<std::string, AddressClass> memo;
    Classifier cls(m, &memo);
    for (auto& [name, info] : m.state_vars) info.provenance = cls.state_class(name, 0);
  }

  // Restrictions.
  for (FunctionModel& f : m.functions) {
    RestrictionInfo& r = f.restriction;
    for (const ModifierInvocation& inv : f.def->modifiers) {
      const ModifierDef* md = m.find_modifier(inv.name);
      if (!md) {
        if (unit.find_contract(inv.name)) continue;  // base constructor arguments
        r.unresolved_modifiers.push_back(inv.name);
        if (f.own)
          m.diagnostics.push_back({inv.span, Severity::Warning,
                                   "modifier '" + inv.name + "' is not declared in this unit; treated as non-restricting"});
        continue;
      }
      if (!md->body) continue;
      std::vector<GuardReason> inner;
      scan_guards(m, md->body->body, nullptr, 0, inner);
      if (inner.empty()) continue;
      GuardReason g{GuardKind::ModifierGuard, inv.name, inv.span, {}, {}};
      for (const GuardReason& x : inner) {
        g.classes.insert(x.classes.begin(), x.classes.end());
        g.text += (g.text.empty() ? "" : "; ") + x.text;
      }
      r.reasons.push_back(std::move(g));
    }
    if (f.has_body()) scan_guards(m, f.def->body->body, &f, 0, r.reasons);
    r.restricted = !r.reasons.empty();
    for (const GuardReason& g : r.reasons) r.restricted_to.insert(g.classes.begin(), g.classes.end());
  }

  // Effect summaries: least fixpoint over internal calls, then the CFGs.
  std::vector<Effects> summaries(m.functions.size());
  EffectAnalyzer eff(m, summaries);
  for (FunctionModel& f : m.functions) {
    if (!f.has_body()) continue;
    auto& refs = eff.storage_refs_[&f];
    for_each_stmt(*f.def->body, [&](const Stmt& s) {
      if (s.kind != StmtKind::VarDecl || s.vars.size() != 1 || s.exprs.empty()) return;
      const VarBinding& v = s.vars[0];
      std::string type = normalize_type(v.type);
      bool complex = m.unit->find_contract(type) == nullptr &&
                     (is_struct_or_enum(unit, type) || type.back() == ']' || type.rfind("mapping(", 0) == 0);
      bool storage = v.location == "storage" || (v.location.empty() && complex);
      if (!storage) return;
      std::string root = root_identifier(s.exprs[0]);
      if (m.is_state_var(root, &f)) refs[v.name] = root;
      else if (auto it = refs.find(root); it != refs.end()) refs[v.name] = it->second;
    });
  }
  auto body_effects = [&](const FunctionModel& f) {
    Effects total;
    if (f.has_body()) for_each_stmt(*f.def->body, [&](const Stmt& s) {
        if (is_simple_stmt(s)) total.merge(eff.of(s, f));
      });
    for (const ModifierInvocation& inv : f.def->modifiers)
      if (const ModifierDef* md = m.find_modifier(inv.name); md && md->body)
        for_each_stmt(*md->body, [&](const Stmt& s) {
          if (is_simple_stmt(s)) total.merge(eff.of(s, f));
        });
    return total;
  };
  for (bool changed = true; changed;) {
    changed = false;
    for (std::size_t i = 0; i < m.functions.size(); ++i) {
      Effects e = body_effects(m.functions[i]);
      if (!(e == summaries[i])) {
        summaries[i] = std::move(e);
        changed = true;
      }
    }
  }
  for (std::size_t i = 0; i < m.functions.size(); ++i) {
    FunctionModel& f = m.functions[i];
    f.summary = summaries[i];
    if (f.has_body()) f.cfg = Cfg::build(*f.def->body, [&](const Stmt& s) { return eff.of(s, f); });
  }

  // Call graph over own functions.
  CallGraph& cg = m.call_graph;
  cg.edges.assign(m.own_count, {});
  for (std::size_t i = 0; i < m.own_count; ++i) {
    FunctionModel& f = m.functions[i];
    auto visit_calls = [&](const Stmt& root) {
      for_each_stmt(root, [&](const Stmt& s) {
        for (const Expr* e : own_exprs(s))
          for_each_expr(*e, [&](const Expr& x) {
            if (x.kind != ExprKind::Call) return;
            auto idx = m.resolve_internal_call(x, &f);
            if (idx && *idx < m.own_count) cg.edges[i].insert(*idx);
          });
      });
    };
    if (f.has_body()) visit_calls(*f.def->body);
    for (const ModifierInvocation& inv : f.def->modifiers)
      if (const ModifierDef* md = m.find_modifier(inv.name); md && md->body) visit_calls(*md->body);
  }
  for (std::size_t i = 0; i < m.own_count; ++i)
    for (std::size_t j : cg.edges[i]) {
      m.functions[i].callees.insert(j);
      m.functions[j].callers.insert(i);
    }
  std::deque<std::size_t> work;
  for (std::size_t i = 0; i < m.own_count; ++i) {
    const FunctionModel& f = m.functions[i];
    bool open = f.visibility == Visibility::Public || f.visibility == Visibility::External;
    if (open && !f.restriction.restricted) {
      cg.entry_points.push_back(i);
      cg.reachable.insert(i);
      work.push_back(i);
    }
  }
  while (!work.empty()) {
    std::size_t cur = work.front();
    work.pop_front();
    for (std::size_t j : cg.edges[cur])
      if (cg.reachable.insert(j).second) work.push_back(j);
  }

  // Timestamp taint: state variables first (contract-wide fixpoint), then
  // each function's locals.
  std::set<std::string> tainted_state;
  for (auto& [name, info] : m.state_vars)
    if (info.decl->initializer) {
      bool hit = false;
      for_each_expr(*info.decl->initializer, [&](const Expr& x) { hit = hit || is_block_timestamp(x); });
      if (hit) tainted_state.insert(name);
    }
  auto seed_for = [&](const FunctionModel& f) {
    std::set<std::string> seed{"block.timestamp", "now"};
    for (const std::string& s : tainted_state)
      if (!f.locals.count(s)) seed.insert(s);
    return seed;
  };
  for (bool changed = true; changed;) {
    changed = false;
    for (const FunctionModel& f : m.functions) {
      if (!f.has_body()) continue;
      for (const std::string& n : mentions_closure(*f.def->body, seed_for(f)))
        if (m.is_state_var(n, &f) && tainted_state.insert(n).second) changed = true;
    }
  }
  for (const std::string& n : tainted_state) m.state_vars[n].tainted = true;
  for (FunctionModel& f : m.functions) {
    f.taint.members = seed_for(f);
    if (!f.has_body()) continue;
    f.taint.members = mentions_closure(*f.def->body, f.taint.members);
    compute_uses(m, f);
  }
}

// --- taint uses ------------------------------------------------------------

bool is_chain(const Expr& e) {
  return e.kind == ExprKind::Ident || e.kind == ExprKind::Index || e.kind == ExprKind::Member;
}

bool is_arith_op(std::string_view op) { return op == "*" || op == "/" || op == "%" || op == "**"; }

bool is_passthrough_method(std::string_view name) { return name == "add" || name == "sub"; }

bool is_arith_method(std::string_view name) { return name == "mul" || name == "div" || name == "mod"; }

void collect_root_uses(const ContractModel& m, FunctionModel& f, const Stmt& s, const Expr& root,
                       const std::vector<std::string>* assign_targets, bool root_is_lhs) {
  const TaintSet& ts = f.taint;
  for_each_expr_with_parents(root, [&](const Expr& node, const std::vector<const Expr*>& anc) {
    const Expr* parent = anc.empty() ? nullptr : anc.back();
    std::string root_name;
    if (is_block_timestamp(node)) {
      root_name = "block.timestamp";
    } else if (is_chain(node)) {
      std::string r = root_identifier(node);
      if (r.empty() || r == "this" || !ts.contains(r) || (r == "block" && node.kind == ExprKind::Ident)) return;
      // Only maximal chains: skip when the parent extends this chain.
      if (parent && (parent->kind == ExprKind::Index || parent->kind == ExprKind::Member) &&
          &parent->operands[0] == &node) {
        bool method_receiver = parent->kind == ExprKind::Member && anc.size() >= 2 &&
                               anc[anc.size() - 2]->kind == ExprKind::Call && &anc[anc.size() - 2]->operands[0] == parent;
        if (!method_receiver) return;
      }
      root_name = r;
    } else {
      return;
    }
    // `x.add` as a callee is a method reference; its receiver is the use.
    if (node.kind == ExprKind::Member && parent && parent->kind == ExprKind::Call && &parent->operands[0] == &node)
      return;
    // Write targets are not reads.
    if (root_is_lhs && &node == &root) return;
    if (parent && parent->kind == ExprKind::Binary && is_assignment_op(parent->name) && &parent->operands[0] == &node)
      return;
    if (parent && parent->kind == ExprKind::Unary && parent->name == "delete") return;

    TaintUse use;
    use.stmt = &s;
    use.expr = &node;
    use.span = node.span;
    use.root = root_name;

    const Expr* cur = &node;
    std::size_t i = anc.size();
    bool decided = false;
    while (i > 0 && !decided) {
      const Expr* p = anc[i - 1];
      if (p->kind == ExprKind::Binary && (p->name == "+" || p->name == "-")) {
        cur = p;
        --i;
        continue;
      }
      if (p->kind == ExprKind::Member && &p->operands[0] == cur && i >= 2 && anc[i - 2]->kind == ExprKind::Call &&
          &anc[i - 2]->operands[0] == p) {
        // receiver of a method call: x.add(k)
        if (is_passthrough_method(p->name)) {
          cur = anc[i - 2];
          i -= 2;
          continue;
        }
        if (is_arith_method(p->name)) {
          use.kind = UseKind::ArithmeticIntoValueFlow;
          decided = true;
          break;
        }
        break;
      }
      if (p->kind == ExprKind::Call && &p->operands[0] != cur && p->callee().kind == ExprKind::Member) {
        if (is_passthrough_method(p->callee().name)) {
          cur = p;
          --i;
          continue;
        }
        if (is_arith_method(p->callee().name)) {
          use.kind = UseKind::ArithmeticIntoValueFlow;
          decided = true;
          break;
        }
      }
      if (p->kind == ExprKind::Binary && is_relational_op(p->name)) {
        use.kind = UseKind::ComparisonOperand;
        use.comparison = p;
        decided = true;
        break;
      }
      if (p->kind == ExprKind::Binary && is_arith_op(p->name)) {
        use.kind = UseKind::ArithmeticIntoValueFlow;
        decided = true;
        break;
      }
      break;
    }
    if (!decided) {
      const Expr* p = i > 0 ? anc[i - 1] : nullptr;
      if (!p && assign_targets) {
        use.kind = UseKind::AssignmentSource;
        use.targets = *assign_targets;
      } else if (p && p->kind == ExprKind::Binary && is_assignment_op(p->name) && &p->operands[1] == cur) {
        use.kind = UseKind::AssignmentSource;
        use.targets = write_roots(p->operands[0]);
      } else {
        use.kind = UseKind::Other;
        if (p && p->kind == ExprKind::Call && &p->operands[0] != cur && m.resolve_internal_call(*p, &f))
          use.into_internal_call = true;
      }
    }
    f.taint.uses.push_back(std::move(use));
  });
}

void compute_uses(const ContractModel& m, FunctionModel& f) {
  for_each_stmt(*f.def->body, [&](const Stmt& s) {
    if (!is_simple_stmt(s)) return;
    if (s.kind == StmtKind::Assign && s.exprs.size() == 2) {
      std::vector<std::string> targets = write_roots(s.exprs[0]);
      collect_root_uses(m, f, s, s.exprs[0], nullptr, true);
      collect_root_uses(m, f, s, s.exprs[1], &targets, false);
      return;
    }
    if (s.kind == StmtKind::VarDecl) {
      std::vector<std::string> targets;
      for (const VarBinding& v : s.vars)
        if (!v.name.empty()) targets.push_back(v.name);
      for (const Expr* e : own_exprs(s)) collect_root_uses(m, f, s, *e, &targets, false);
      return;
    }
    for (const Expr* e : own_exprs(s)) collect_root_uses(m, f, s, *e, nullptr, false);
  });
}

}  // namespace

UnitModel build_model(std::shared_ptr<const SourceUnit> unit) {
  UnitModel um;
  um.unit = std::move(unit);
  std::set<std::string> seen;
  for (const ContractDef& c : um.unit->contracts) {
    if (!seen.insert(c.name).second)
      um.diagnostics.push_back({c.span, Severity::Warning, "duplicate contract name '" + c.name + "'"});
  }
  um.contracts.reserve(um.unit->contracts.size());
  for (const ContractDef& c : um.unit->contracts) {
    if (c.kind == ContractKind::Interface) continue;
    ContractModel& m = um.contracts.emplace_back();
    m.def = &c;
    m.unit = um.unit.get();
    build_contract(m);
    um.diagnostics.insert(um.diagnostics.end(), m.diagnostics.begin(), m.diagnostics.end());
  }
  return um;
}

}  // namespace solfp
