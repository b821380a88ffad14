// SPDX-License-Identifier: Apache-2.0

#include <gtest/gtest.h>

#include "solfp/ast_util.hpp"
#include "solfp/parser.hpp"
#include "support/corpus.hpp"

namespace solfp {
namespace {

const Stmt& first_body_stmt(const FunctionDef& fn) { return fn.body->body.front(); }

TEST(Parser, EmptyFile) {
  SourceUnit unit = parse("", "empty.sol");
  EXPECT_TRUE(unit.contracts.empty());
  EXPECT_TRUE(unit.diagnostics.empty());
}

TEST(Parser, CollectMoneyShape) {
  std::string text = testing::read_file(testing::curated("CollectMoney"));
  SourceUnit unit = parse(text, "CollectMoney.sol");
  ASSERT_EQ(unit.contracts.size(), 1u);
  const ContractDef& c = unit.contracts[0];
  EXPECT_EQ(c.name, "CollectMoney");
  EXPECT_EQ(unit.pragma_versions, std::vector<std::string>{"^0.8.0"});
  ASSERT_EQ(c.functions.size(), 4u);
  EXPECT_EQ(c.functions[0].kind, FunctionKind::Constructor);
  EXPECT_EQ(c.functions[2].name, "_sendFunds");
  EXPECT_EQ(c.functions[2].visibility, Visibility::Private);
  ASSERT_EQ(c.modifiers.size(), 1u);
  EXPECT_EQ(c.modifiers[0].name, "onlyOwner");
  ASSERT_EQ(c.functions[1].modifiers.size(), 1u);
  EXPECT_EQ(c.functions[1].modifiers[0].name, "onlyOwner");

  const Stmt& send = first_body_stmt(c.functions[2]);
  ASSERT_EQ(send.kind, StmtKind::Expression);
  EXPECT_EQ(send.span.line_start, 18u);
  EXPECT_EQ(to_source(send.exprs[0]), "recipient.send(amount)");
  const Stmt& req = c.modifiers[0].body->body.front();
  EXPECT_EQ(req.kind, StmtKind::Require);
  EXPECT_EQ(req.exprs.size(), 2u);
  EXPECT_EQ(c.modifiers[0].body->body[1].kind, StmtKind::Placeholder);
}

TEST(Parser, EscrowLegacyConstructorAndLiterals) {
  SourceUnit unit = parse(testing::read_file(testing::curated("Escrow")), "Escrow.sol");
  ASSERT_EQ(unit.contracts.size(), 1u);
  const ContractDef& c = unit.contracts[0];
  EXPECT_EQ(c.find_function("Escrow"), nullptr);
  const FunctionDef* ctor = &c.functions[0];
  EXPECT_EQ(ctor->kind, FunctionKind::Constructor);
  EXPECT_EQ(ctor->display_name(), "constructor");
  EXPECT_TRUE(ctor->is_payable);
  const Stmt& assign = first_body_stmt(*ctor);
  ASSERT_EQ(assign.kind, StmtKind::Assign);
  EXPECT_EQ(assign.exprs[1].kind, ExprKind::AddressLit);
  EXPECT_EQ(c.find_function("finalize")->visibility, Visibility::Unspecified);
  const Stmt& guard = first_body_stmt(*c.find_function("finalize"));
  ASSERT_EQ(guard.kind, StmtKind::If);
  EXPECT_EQ(guard.exprs[0].name, "||");
  EXPECT_EQ(guard.body[0].span.line_start, 12u);
}

TEST(Parser, DecoreLineageAndTupleDeclaration) {
  SourceUnit unit = parse(testing::read_file(testing::curated("Decore")), "Decore.sol");
  EXPECT_TRUE(unit.diagnostics.empty());
  ASSERT_EQ(unit.contracts.size(), 5u);
  EXPECT_EQ(unit.contracts[0].kind, ContractKind::Library);
  EXPECT_EQ(unit.contracts[3].kind, ContractKind::Interface);
  const ContractDef* token = unit.find_contract("NBUNIERC20");
  ASSERT_NE(token, nullptr);
  EXPECT_EQ(token->bases, (std::vector<std::string>{"Context", "INBUNIERC20", "Ownable"}));
  const FunctionDef& drain = token->functions.back();
  const Stmt& call = drain.body->body[1];
  ASSERT_EQ(call.kind, StmtKind::VarDecl);
  ASSERT_EQ(call.vars.size(), 2u);
  EXPECT_EQ(call.vars[0].name, "success");
  EXPECT_TRUE(call.vars[1].name.empty());
  const Expr& init = call.exprs[0];
  ASSERT_EQ(init.kind, ExprKind::Call);
  ASSERT_EQ(init.options.size(), 1u);
  EXPECT_EQ(init.options[0].name, "value");
  EXPECT_EQ(to_source(init.callee()), "msg.sender.call");
}

TEST(Parser, CallValueSyntaxesNormaliseIdentically) {
  Expr legacy = parse_expression("a.call.value(1 ether)(\"\")");
  Expr modern = parse_expression("a.call{value: 1 ether}(\"\")");
  EXPECT_TRUE(same_structure(legacy, modern));
  Expr gas_legacy = parse_expression("a.call.gas(5000).value(v)(data)");
  Expr gas_modern = parse_expression("a.call{gas: 5000, value: v}(data)");
  EXPECT_TRUE(same_structure(gas_legacy, gas_modern));
}

TEST(Parser, NowIsBlockTimestamp) {
  Expr a = parse_expression("now - last");
  Expr b = parse_expression("block.timestamp - last");
  EXPECT_TRUE(same_structure(a, b));
  EXPECT_TRUE(a.operands[0].now_alias);
  EXPECT_TRUE(is_block_timestamp(a.operands[0]));
}

TEST(Parser, TimeUnitsFoldToSeconds) {
  const std::pair<const char*, double> cases[] = {
      {"1 seconds", 1},    {"2 minutes", 120},        {"3 hours", 10800},
      {"1 days", 86400},   {"2 weeks", 1209600},      {"1 years", 31536000},
      {"24 * 60 * 60", 86400}, {"4 days + 1 hours", 349200},
  };
  for (const auto& [src, want] : cases) {
    auto v = constant_value(parse_expression(src));
    ASSERT_TRUE(v.has_value()) << src;
    EXPECT_DOUBLE_EQ(*v, want) << src;
  }
  EXPECT_DOUBLE_EQ(*unit_multiplier("ether"), 1e18);
  EXPECT_FALSE(unit_multiplier("fortnights").has_value());
}

TEST(Parser, LegacyEventCallIsEmit) {
  SourceUnit unit = parse(
      "contract C { event Paid(address a); function f() { Paid(msg.sender); emit Paid(msg.sender); } }");
  const auto& body = unit.contracts[0].functions[0].body->body;
  ASSERT_EQ(body.size(), 2u);
  EXPECT_EQ(body[0].kind, StmtKind::Emit);
  EXPECT_EQ(body[0].op, "Paid");
  EXPECT_EQ(body[1].kind, StmtKind::Emit);
}

TEST(Parser, AssemblyIsOpaqueWithWarning) {
  SourceUnit unit = parse("contract C { function f() public { assembly { let x := 1 } uint y = 2; } }");
  ASSERT_EQ(unit.contracts.size(), 1u);
  const auto& body = unit.contracts[0].functions[0].body->body;
  ASSERT_EQ(body.size(), 2u);
  EXPECT_EQ(body[0].kind, StmtKind::Opaque);
  EXPECT_FALSE(body[0].parse_error);
  EXPECT_EQ(body[1].kind, StmtKind::VarDecl);
  ASSERT_FALSE(unit.diagnostics.empty());
  EXPECT_EQ(unit.diagnostics[0].severity, Severity::Warning);
}

TEST(Parser, BrokenStatementRecovers) {
  SourceUnit unit = parse("contract C { function f() public { x = = 1; y = 2; } function g() public {} }");
  ASSERT_EQ(unit.contracts.size(), 1u);
  const ContractDef& c = unit.contracts[0];
  ASSERT_EQ(c.functions.size(), 2u);
  const auto& body = c.functions[0].body->body;
  ASSERT_EQ(body.size(), 2u);
  EXPECT_EQ(body[0].kind, StmtKind::Opaque);
  EXPECT_TRUE(body[0].parse_error);
  EXPECT_EQ(body[1].kind, StmtKind::Assign);
  EXPECT_FALSE(unit.diagnostics.empty());
}

TEST(Parser, UnterminatedContractIsUnparsed) {
  SourceUnit unit = parse("contract A { function f() public { }\ncontract B { }");
  ASSERT_FALSE(unit.contracts.empty());
  EXPECT_TRUE(unit.contracts[0].unparsed);
  EXPECT_FALSE(unit.diagnostics.empty());
}

TEST(Parser, ControlFlowStatements) {
  Stmt s = parse_statement("for (uint i = 0; i < n; i++) { if (i == 3) break; else continue; }");
  ASSERT_EQ(s.kind, StmtKind::For);
  EXPECT_EQ(s.init.size(), 1u);
  EXPECT_EQ(s.post.size(), 1u);
  EXPECT_EQ(s.post[0].name, "x++");
  const Stmt& inner = s.body[0].body[0];
  EXPECT_EQ(inner.kind, StmtKind::If);
  EXPECT_EQ(inner.body[0].kind, StmtKind::Break);
  EXPECT_EQ(inner.else_body[0].kind, StmtKind::Continue);
  EXPECT_EQ(count_simple_statements(s), 5u);
}

TEST(Parser, CompoundAssignments) {
  Stmt s = parse_statement("balance[msg.sender] += msg.value;");
  ASSERT_EQ(s.kind, StmtKind::Assign);
  EXPECT_EQ(s.op, "+=");
  EXPECT_EQ(root_identifier(s.exprs[0]), "balance");
}

TEST(Parser, ModernConstructs) {
  SourceUnit unit = parse(R"(
pragma solidity ^0.8.4;
error Nope(uint code);
abstract contract A {
  receive() external payable {}
  fallback() external {}
  function f(uint x) public pure virtual returns (uint) {
    unchecked { x += 1; }
    if (x == 0) revert Nope({code: 1});
    return x;
  }
}
)");
  ASSERT_EQ(unit.contracts.size(), 1u);
  const ContractDef& c = unit.contracts[0];
  EXPECT_TRUE(c.is_abstract);
  ASSERT_EQ(c.functions.size(), 3u);
  EXPECT_EQ(c.functions[0].kind, FunctionKind::Receive);
  EXPECT_EQ(c.functions[1].kind, FunctionKind::Fallback);
  for (const Diagnostic& d : unit.diagnostics) EXPECT_NE(d.severity, Severity::Error) << d.message;
}

// Every span produced for the corpus lies inside the file and its text
// starts where the line/column coordinates say it does.
TEST(Parser, SpansAreSoundOnCorpus) {
  for (const auto& entry : std::filesystem::recursive_directory_iterator(testing::corpus_dir())) {
    if (entry.path().extension() != ".sol") continue;
    std::string text = testing::read_file(entry.path());
    SourceUnit unit = parse(text, entry.path().filename().string());
    LineIndex index(text);
    auto check = [&](const SourceSpan& sp) {
      ASSERT_TRUE(span_is_valid(sp, text.size())) << entry.path();
      EXPECT_EQ(index.line_of(sp.byte_offset), sp.line_start);
      EXPECT_EQ(index.column_of(sp.byte_offset), sp.col_start);
    };
    for (const ContractDef& c : unit.contracts) {
      check(c.span);
      for (const FunctionDef& f : c.functions) {
        check(f.span);
        if (!f.body) continue;
        for_each_stmt(*f.body, [&](const Stmt& s) {
          check(s.span);
          for (const Expr* e : own_exprs(s)) for_each_expr(*e, [&](const Expr& x) { check(x.span); });
        });
      }
    }
  }
}

}  // namespace
}  // namespace solfp
