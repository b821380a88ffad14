// SPDX-License-Identifier: Apache-2.0

#include "solfp/ast.hpp"

namespace solfp {

bool same_structure(const Expr& a, const Expr& b) {
  if (a.kind != b.kind || a.name != b.name || a.unit != b.unit || a.number != b.number) return false;
  if (a.operands.size() != b.operands.size() || a.options.size() != b.options.size()) return false;
  for (std::size_t i = 0; i < a.operands.size(); ++i)
    if (!same_structure(a.operands[i], b.operands[i])) return false;
  for (std::size_t i = 0; i < a.options.size(); ++i) {
    if (a.options[i].name != b.options[i].name) return false;
    if (!same_structure(a.options[i].value, b.options[i].value)) return false;
  }
  return true;
}

const char* to_string(StmtKind kind) {
  switch (kind) {
    case StmtKind::Expression: return "expression";
    case StmtKind::VarDecl: return "declaration";
    case StmtKind::Assign: return "assignment";
    case StmtKind::If: return "if";
    case StmtKind::While: return "while";
    case StmtKind::DoWhile: return "do-while";
    case StmtKind::For: return "for";
    case StmtKind::Return: return "return";
    case StmtKind::Require: return "require";
    case StmtKind::Assert: return "assert";
    case StmtKind::Revert: return "revert";
    case StmtKind::Throw: return "throw";
    case StmtKind::Emit: return "emit";
    case StmtKind::Block: return "block";
    case StmtKind::Placeholder: return "placeholder";
    case StmtKind::Break: return "break";
    case StmtKind::Continue: return "continue";
    case StmtKind::Opaque: return "opaque";
  }
  return "?";
}

const char* to_string(Visibility v) {
  switch (v) {
    case Visibility::Public: return "public";
    case Visibility::External: return "external";
    case Visibility::Internal: return "internal";
    case Visibility::Private: return "private";
    case Visibility::Unspecified: return "unspecified";
  }
  return "?";
}

const char* to_string(ContractKind kind) {
  switch (kind) {
    case ContractKind::Contract: return "contract";
    case ContractKind::Interface: return "interface";
    case ContractKind::Library: return "library";
  }
  return "?";
}

std::string FunctionDef::display_name() const {
  switch (kind) {
    case FunctionKind::Constructor: return "constructor";
    case FunctionKind::Fallback: return "fallback";
    case FunctionKind::Receive: return "receive";
    case FunctionKind::Regular: break;
  }
  return name;
}

const FunctionDef* ContractDef::find_function(std::string_view fn) const {
  for (const FunctionDef& f : functions)
    if (f.kind == FunctionKind::Regular && f.name == fn) return &f;
  return nullptr;
}

const ModifierDef* ContractDef::find_modifier(std::string_view mod) const {
  for (const ModifierDef& m : modifiers)
    if (m.name == mod) return &m;
  return nullptr;
}

const StateVarDecl* ContractDef::find_state_var(std::string_view var) const {
  for (const StateVarDecl& v : state_vars)
    if (v.name == var) return &v;
  return nullptr;
}

const StructDef* ContractDef::find_struct(std::string_view name) const {
  for (const StructDef& s : structs)
    if (s.name == name) return &s;
  return nullptr;
}

const ContractDef* SourceUnit::find_contract(std::string_view contract) const {
  for (const ContractDef& c : contracts)
    if (c.name == contract) return &c;
  return nullptr;
}

}  // namespace solfp
