// SPDX-License-Identifier: Apache-2.0
//
// Random inputs for the property suites.

#pragma once

#include <map>
#include <random>
#include <string>
#include <vector>

namespace solfp::testing {

// --- guarded contracts -------------------------------------------------------

struct GenStmt {
  enum Kind {
    Guard,          // require(msg.sender == owner);
    GuardIf,        // if (msg.sender != admin) { revert(); }
    CallerIf,       // if (msg.sender == owner) { inner }
    CondIf,         // if (counter > 3) { inner }
    Send,           // R.send(A);
    Call,           // R.call.value(A)();
    Write,          // balances[msg.sender] = 0;  /  counter += 1;
    Emit,           // emit Paid(A);
    TimeWrite,      // lastTime = now;
    TimeCheck,      // require(now > lastTime + 1 days);
    TimeArith,      // counter = now % 7;
    InternalCall,   // helperN();
  };
  Kind kind = Write;
  int receiver = 0;  // 0 msg.sender, 1 owner, 2 admin, 3 local `who`, 4 parameter `to`
  int amount = 0;    // 0 msg.value, 1 msg.value / 2, 2 balances[msg.sender], 3 1 ether
  int variant = 0;
  int callee = 0;    // InternalCall: index into ContractSpec::functions
  std::vector<GenStmt> inner;
};

struct GenFunction {
  std::string name;
  std::string visibility;  // public, external, internal, private
  bool only_owner = false;
  std::vector<GenStmt> body;
};

struct ContractSpec {
  std::string name = "Gen";
  std::vector<GenFunction> functions;
};

struct RenderMode {
  /// Drop modifier invocations and caller guards (CallerIf keeps its body).
  bool strip_guards = false;
  /// Replaces function names and the locals `who`, `amt`, `to`.
  std::map<std::string, std::string> rename;
};

/// Every internal or private function is called from at least one public
/// or external function.
ContractSpec random_contract(std::mt19937& rng);
std::string render(const ContractSpec& spec, const RenderMode& mode = {});

/// Fresh names for every function and renamable local.
std::map<std::string, std::string> random_renaming(const ContractSpec& spec, std::mt19937& rng);

// --- assignment graphs --------------------------------------------------------

struct Assignment {
  /// Node ids: 0 is the timestamp, then state variables, then each
  /// function's locals.
  int target = 0;
  std::vector<int> sources;  // empty: a literal is assigned
  bool compound = false;     // `+=` instead of `=`
  bool conditional = false;  // sources combined through `?:`
};

struct AssignmentGraph {
  int state_vars = 0;
  std::vector<int> locals_per_function;
  /// Per function, in program order.
  std::vector<std::vector<Assignment>> assignments;

  int node_count() const;
  int state_node(int i) const { return 1 + i; }
  int local_node(int fn, int i) const;
  /// Name the node is rendered under (locals are per function).
  std::string name(int node) const;
  /// Function a local node belongs to, or -1.
  int owner(int node) const;
};

AssignmentGraph random_assignment_graph(std::mt19937& rng);
std::string render(const AssignmentGraph& g);

// --- fuzzing ------------------------------------------------------------------

/// Applies one to four byte- or token-level edits to `text`.
std::string fuzz_mutate(const std::string& text, std::mt19937& rng);

}  // namespace solfp::testing
