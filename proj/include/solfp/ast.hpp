// SPDX-License-Identifier: Apache-2.0
//
// Syntax tree for the supported Solidity subset. Nodes are plain values:
// children are held by value in vectors, so a tree can be copied, compared
// and rewritten freely. Nothing in the tree points back into the source
// buffer.

#pragma once

#include <optional>
#include <string>
#include <vector>

#include "solfp/source.hpp"

namespace solfp {

enum class ExprKind {
  Ident,       // name
  Member,      // operands[0].name
  Index,       // operands[0][operands[1]]; operands.size() == 1 for `T[]`
  Call,        // operands[0](operands[1..]); call options in `options`
  Binary,      // operands[0] op operands[1]; also assignments (`=`, `+=`, ...)
  Unary,       // op operands[0]; postfix ops are spelled "x++" / "x--"
  Conditional, // operands[0] ? operands[1] : operands[2]
  AddressLit,  // 40-hex-digit literal
  NumberLit,
  BoolLit,
  StringLit,
  Tuple,       // (a, b, ) ; empty slots are ExprKind::Empty
  New,         // `new T`; name holds the type text
  TypeName,    // elementary type used as a value, e.g. `address` in `address(x)`
  Empty,       // missing tuple element
  Opaque,      // anything the parser could not make sense of
};

struct CallOption;

struct Expr {
  ExprKind kind = ExprKind::Empty;
  SourceSpan span;
  /// Identifier name, member name, operator spelling or literal text.
  std::string name;
  std::vector<Expr> operands;
  std::vector<CallOption> options;
  /// NumberLit only: the value with any time or ether unit applied.
  std::optional<double> number;
  /// NumberLit only: the unit suffix as written (`days`, `ether`, ...).
  std::string unit;
  /// Member only: set when this node was written as `now`.
  bool now_alias = false;

  const Expr& base() const { return operands.front(); }
  const Expr& callee() const { return operands.front(); }
  std::size_t arg_count() const { return kind == ExprKind::Call ? operands.size() - 1 : 0; }
  const Expr& arg(std::size_t i) const { return operands[i + 1]; }
};

/// `{value: x}` / `.value(x)` / `{gas: g}` / `.gas(g)`.
struct CallOption {
  std::string name;
  Expr value;
};

/// Equality of two expressions ignoring spans and the `now` spelling flag.
bool same_structure(const Expr& a, const Expr& b);

enum class StmtKind {
  Expression,  // exprs[0]
  VarDecl,     // vars, optional initializer in exprs[0]
  Assign,      // exprs[0] op exprs[1]
  If,          // exprs[0]; then in body[0], optional else in else_body[0]
  While,       // exprs[0]; body[0]
  DoWhile,     // body[0]; exprs[0]
  For,         // init (0/1), exprs = {cond or Empty}, post (0/1), body[0]
  Return,      // exprs (0/1)
  Require,     // exprs are the arguments
  Assert,
  Revert,      // exprs are the arguments; `op` holds a custom error name if any
  Throw,
  Emit,        // op is the event name, exprs are the arguments
  Block,       // body
  Placeholder, // `_;` inside a modifier
  Break,
  Continue,
  Opaque,      // unsupported or unparseable statement; op holds the reason
};

const char* to_string(StmtKind kind);

struct VarBinding {
  std::string type;  // as written, e.g. "uint256", "address payable", "mapping(address => uint)"
  std::string name;  // empty for a skipped tuple slot
  std::string location;  // "memory", "storage", "calldata" or empty
  SourceSpan span;
};

struct Stmt {
  StmtKind kind = StmtKind::Block;
  SourceSpan span;
  std::vector<Expr> exprs;
  std::string op;
  std::vector<VarBinding> vars;
  std::vector<Stmt> body;
  std::vector<Stmt> else_body;
  std::vector<Stmt> init;
  std::vector<Expr> post;
  /// Opaque only: true when produced by error recovery rather than by a
  /// construct the subset deliberately leaves uninterpreted (assembly, try).
  bool parse_error = false;
};

enum class Visibility { Public, External, Internal, Private, Unspecified };

const char* to_string(Visibility v);

enum class FunctionKind { Regular, Constructor, Fallback, Receive };

struct ModifierInvocation {
  std::string name;
  std::vector<Expr> args;
  SourceSpan span;
};

struct Param {
  std::string type;
  std::string name;
};

struct FunctionDef {
  std::string name;
  FunctionKind kind = FunctionKind::Regular;
  Visibility visibility = Visibility::Unspecified;
  std::string mutability;  // "", "view", "pure", "payable", "constant"
  bool is_payable = false;
  std::vector<ModifierInvocation> modifiers;
  std::vector<Param> params;
  std::vector<Param> returns;
  std::optional<Stmt> body;  // a Block; absent for declarations
  SourceSpan span;

  /// Name used in reports: the declared name, or constructor/fallback/receive.
  std::string display_name() const;
};

struct ModifierDef {
  std::string name;
  std::vector<Param> params;
  std::optional<Stmt> body;
  SourceSpan span;
};

struct StructDef {
  std::string name;
  std::vector<Param> fields;
};

struct StateVarDecl {
  std::string type;
  std::string name;
  std::optional<Expr> initializer;
  bool is_constant = false;
  SourceSpan span;
};

enum class ContractKind { Contract, Interface, Library };

const char* to_string(ContractKind kind);

struct ContractDef {
  std::string name;
  ContractKind kind = ContractKind::Contract;
  bool is_abstract = false;
  std::vector<std::string> bases;
  std::vector<StateVarDecl> state_vars;
  std::vector<FunctionDef> functions;
  std::vector<ModifierDef> modifiers;
  std::vector<std::string> events;
  std::vector<StructDef> structs;
  std::vector<std::string> enums;
  SourceSpan span;
  /// Set when the contract body could not be recovered; members are partial.
  bool unparsed = false;
  /// Members dropped by error recovery.
  std::vector<SourceSpan> skipped_members;

  const FunctionDef* find_function(std::string_view fn) const;
  const ModifierDef* find_modifier(std::string_view mod) const;
  const StateVarDecl* find_state_var(std::string_view var) const;
  const StructDef* find_struct(std::string_view name) const;
};

struct SourceUnit {
  std::string file;
  std::vector<std::string> pragma_versions;
  std::vector<ContractDef> contracts;
  std::vector<Diagnostic> diagnostics;

  const ContractDef* find_contract(std::string_view contract) const;
};

}  // namespace solfp
