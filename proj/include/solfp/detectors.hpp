// SPDX-License-Identifier: Apache-2.0
//
// Baseline candidate detection for the three vulnerability classes. Every
// candidate is a site the filters in patterns.hpp then try to clear.

#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "solfp/model.hpp"

namespace solfp {

enum class VulnClass { URV, REE, TD };

const char* to_string(VulnClass v);

/// Accepts "URV"/"urv", "REE"/"ree", "TD"/"td".
std::optional<VulnClass> parse_vuln(std::string_view text);

enum class CallKind { Send, Call, CallCode, DelegateCall, Transfer, ExternalMemberCall, TimestampUse };

const char* to_string(CallKind k);

struct Candidate {
  VulnClass vuln = VulnClass::URV;
  std::string file;
  SourceSpan span;
  std::string contract;
  std::string function;
  CallKind call_kind = CallKind::Send;
  const ContractModel* model = nullptr;
  std::size_t function_index = 0;
  const Stmt* stmt = nullptr;
  const Expr* call = nullptr;      // URV/REE: the call expression
  const Expr* receiver = nullptr;  // URV/REE: the address or contract called
  const Expr* value_arg = nullptr; // amount sent, if any
  std::string receiver_text;
  std::string value_text;
  bool analyzed = true;
  std::string reason;

  const FunctionModel& fn() const { return model->functions[function_index]; }
};

/// A function or contract the detectors could not look into.
struct NotAnalyzedScope {
  std::string file;
  std::string contract;
  std::string function;  // empty for a whole contract
  SourceSpan span;
  std::string reason;
};

struct Detection {
  std::vector<Candidate> candidates;
  std::vector<NotAnalyzedScope> not_analyzed;
};

/// `send`/`call`/`callcode`/`delegatecall` whose boolean result is dropped.
Detection detect_urv(const UnitModel& um);

/// Low-level `call`, and member calls on contract-typed targets.
Detection detect_ree(const UnitModel& um);

/// One candidate per statement reading a timestamp-tainted value.
Detection detect_td(const UnitModel& um);

Detection detect(const UnitModel& um, VulnClass v);

/// Orders candidates by (file, line, column, class).
void sort_candidates(std::vector<Candidate>& cs);

}  // namespace solfp
