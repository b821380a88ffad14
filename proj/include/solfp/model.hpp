// SPDX-License-Identifier: Apache-2.0
//
// Semantic model of a parsed unit: per-contract state-variable provenance,
// address classes, caller restrictions, the intra-contract call graph, a
// statement-level CFG per function and timestamp taint.
//
// A model keeps raw pointers into the SourceUnit it was built from. The
// UnitModel owns that unit through a shared_ptr, so pointers stay valid for
// as long as the UnitModel (or a copy of the shared_ptr) is alive.

#pragma once

#include <cstddef>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <unordered_map>
#include <vector>

#include "solfp/ast.hpp"

namespace solfp {

enum class AddressClass { LiteralHardcoded, DeployerAtConstruction, CallerControlled, Unknown };

const char* to_string(AddressClass c);

enum class GuardKind { ModifierGuard, InlineRequireGuard, InlineIfGuard };

const char* to_string(GuardKind k);

struct GuardReason {
  GuardKind kind = GuardKind::InlineRequireGuard;
  std::string modifier;  // ModifierGuard only
  SourceSpan span;       // the guard condition, or the modifier invocation
  /// Classes of the addresses the caller is compared with.
  std::set<AddressClass> classes;
  std::string text;
};

struct RestrictionInfo {
  bool restricted = false;
  std::vector<GuardReason> reasons;
  std::set<AddressClass> restricted_to;
  /// Modifiers applied to the function that no contract in the unit declares.
  std::vector<std::string> unresolved_modifiers;

  bool has_modifier_guard() const;
  bool has_inline_guard() const;
};

/// Side effects of one statement. An empty set is LocalOnly.
struct Effects {
  std::set<std::string> state_writes;
  bool external_call = false;
  bool event_emit = false;

  bool local_only() const { return state_writes.empty() && !external_call && !event_emit; }
  bool has_state_write() const { return !state_writes.empty(); }
  void merge(const Effects& other);
  bool operator==(const Effects&) const = default;
};

std::string to_string(const Effects& e);

/// Statement-level control-flow graph. Node 0 is the exit node and carries
/// no statement; every other node is one simple statement of the body.
class Cfg {
 public:
  static constexpr std::size_t exit_node = 0;

  struct Node {
    const Stmt* stmt = nullptr;
    std::vector<std::size_t> succ;
    Effects effects;
    std::size_t block = 0;
  };

  struct Block {
    std::vector<std::size_t> nodes;
    std::vector<std::size_t> succ;  // successor blocks
    bool loop_trapped = false;      // cannot reach the exit node
  };

  Cfg();

  template <typename EffectFn>
  static Cfg build(const Stmt& body, EffectFn&& effects_of) {
    Cfg cfg;
    cfg.construct(body);
    for (std::size_t i = 1; i < cfg.nodes_.size(); ++i)
      cfg.nodes_[i].effects = effects_of(*cfg.nodes_[i].stmt);
    cfg.form_blocks();
    return cfg;
  }

  std::size_t entry() const { return entry_; }
  const std::vector<Node>& nodes() const { return nodes_; }
  const std::vector<Block>& blocks() const { return blocks_; }
  std::optional<std::size_t> node_of(const Stmt* s) const;
  /// Number of statement nodes, i.e. without the exit node.
  std::size_t statement_count() const { return nodes_.size() - 1; }

 private:
  struct Jumps {
    std::size_t brk = exit_node;
    std::size_t cont = exit_node;
  };

  void construct(const Stmt& body);
  std::size_t add(const Stmt& s);
  std::size_t build(const Stmt& s, std::size_t next, const Jumps& j);
  std::size_t build_list(const std::vector<Stmt>& list, std::size_t next, const Jumps& j);
  void form_blocks();

  std::vector<Node> nodes_;
  std::vector<Block> blocks_;
  std::unordered_map<const Stmt*, std::size_t> index_;
  std::size_t entry_ = exit_node;
};

/// Union of the effects of every statement reachable strictly after `site`.
/// Loops count: a statement inside a loop sees the whole loop as after.
/// Throws std::logic_error when `site` is not a node of `cfg`.
Effects statements_after(const Cfg& cfg, const Stmt& site);
Effects statements_after(const Cfg& cfg, const SourceSpan& site);

enum class UseKind { ComparisonOperand, ArithmeticIntoValueFlow, AssignmentSource, Other };

const char* to_string(UseKind k);

struct TaintUse {
  const Stmt* stmt = nullptr;
  const Expr* expr = nullptr;  // the maximal access chain, or block.timestamp
  SourceSpan span;
  UseKind kind = UseKind::Other;
  /// Root variable name, or "block.timestamp".
  std::string root;
  /// ComparisonOperand only: the relational expression.
  const Expr* comparison = nullptr;
  /// AssignmentSource only: root names of the assigned variables.
  std::vector<std::string> targets;
  /// The value is passed as an argument to a function of this contract.
  bool into_internal_call = false;
};

struct TaintSet {
  /// Always holds "block.timestamp" and "now".
  std::set<std::string> members;
  std::vector<TaintUse> uses;

  bool contains(const std::string& name) const { return members.count(name) != 0; }
};

struct FunctionModel {
  const FunctionDef* def = nullptr;
  const ContractDef* declared_in = nullptr;
  /// Declared in the modelled contract rather than inherited.
  bool own = true;
  /// Unspecified visibility is read as public.
  Visibility visibility = Visibility::Public;
  /// Parameters, named returns and every local declared in the body.
  std::map<std::string, std::string> locals;
  std::set<std::string> params;
  RestrictionInfo restriction;
  Cfg cfg;
  TaintSet taint;
  /// Effects of the whole body, including functions it calls.
  Effects summary;
  /// Own-function indices in ContractModel::functions.
  std::set<std::size_t> callees;
  std::set<std::size_t> callers;
  bool has_parse_error = false;
  std::unordered_map<const Stmt*, const Stmt*> parent;

  bool is_constructor() const { return def->kind == FunctionKind::Constructor; }
  bool has_body() const { return def->body.has_value(); }
  std::string name() const { return def->display_name(); }
};

struct StateVarInfo {
  const StateVarDecl* decl = nullptr;
  const ContractDef* declared_in = nullptr;
  AddressClass provenance = AddressClass::Unknown;
  bool tainted = false;
};

struct CallGraph {
  /// Own-function indices.
  std::vector<std::set<std::size_t>> edges;
  std::vector<std::size_t> entry_points;
  std::set<std::size_t> reachable;
};

class ContractModel {
 public:
  const ContractDef* def = nullptr;
  const SourceUnit* unit = nullptr;
  /// The contract itself first, then bases declared in the same unit.
  std::vector<const ContractDef*> lineage;
  /// Own functions first, then inherited ones that are not overridden.
  std::vector<FunctionModel> functions;
  std::size_t own_count = 0;
  std::map<std::string, StateVarInfo> state_vars;
  CallGraph call_graph;
  std::vector<Diagnostic> diagnostics;

  const FunctionModel* find_function(std::string_view name) const;
  const ModifierDef* find_modifier(std::string_view name) const;
  const StateVarInfo* find_state_var(std::string_view name) const;
  /// Index of the function (own or inherited) called by `call`, if it is an
  /// internal call `g(...)`, `this.g(...)` or `super.g(...)`.
  std::optional<std::size_t> resolve_internal_call(const Expr& call, const FunctionModel* ctx) const;
  /// A variable name resolves to a local of `f` before a state variable.
  bool is_state_var(const std::string& name, const FunctionModel* f) const;

  /// Declared type of an expression, as written in the source, or empty.
  std::string type_of(const Expr& e, const FunctionModel* f) const;
  /// A contract or interface type: declared in the unit (libraries
  /// excluded), or an undeclared capitalised name.
  bool is_contract_type(std::string_view type) const;
  bool is_caller(const Expr& e, const FunctionModel* f) const;
  /// Strips address/payable/uintN conversions, and contract-type conversions
  /// such as `Token(addr)`.
  const Expr& strip_all_conversions(const Expr& e) const;
  /// `Binary ==` style caller-equality guard; returns the classes compared.
  std::optional<std::set<AddressClass>> guard_classes(const Expr& cond, const FunctionModel* f) const;
  /// Guards protecting one statement: enclosing `if (guard)` and earlier
  /// `require(guard)` / `if (!guard) revert` in enclosing blocks.
  std::vector<GuardReason> site_guards(const FunctionModel& f, const Stmt& site) const;
};

struct UnitModel {
  std::shared_ptr<const SourceUnit> unit;
  std::vector<ContractModel> contracts;
  std::vector<Diagnostic> diagnostics;

  const ContractModel* find(std::string_view name) const;
};

UnitModel build_model(std::shared_ptr<const SourceUnit> unit);

AddressClass classify_address(const Expr& e, const ContractModel& m, const FunctionModel* f);

bool reachable_from_unrestricted(const ContractModel& m, const FunctionModel& f);

const TaintSet& taint_timestamp(const ContractModel& m, const FunctionModel& f);

/// One propagation round over a function body: names assigned from an
/// expression that mentions a member of `tainted` (or block.timestamp) are
/// added. Returns the enlarged set.
std::set<std::string> propagate_taint_once(const Stmt& body, const std::set<std::string>& tainted);

}  // namespace solfp
