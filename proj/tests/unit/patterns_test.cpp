// SPDX-License-Identifier: Apache-2.0

#include <gtest/gtest.h>

#include <algorithm>

#include "solfp/analysis.hpp"
#include "solfp/parser.hpp"
#include "support/corpus.hpp"

namespace solfp {
namespace {

using testing::curated;
using testing::line_of;
using testing::read_file;

using Ids = std::vector<PatternId>;

FileReport run(const std::string& text, VulnClass v, double threshold = 20) {
  AnalysisOptions o;
  o.classes = {v};
  o.classify.interval_threshold = threshold;
  return analyze_source(text, "t.sol", o);
}

const Verdict& at(const FileReport& r, std::uint32_t line) {
  for (const Verdict& v : r.verdicts)
    if (v.candidate.span.line_start == line) return v;
  throw std::runtime_error("no verdict at line " + std::to_string(line));
}

TEST(Urv, EscrowSendsAreGuardedAndTerminal) {
  FileReport r = run(read_file(curated("Escrow")), VulnClass::URV);
  ASSERT_EQ(r.verdicts.size(), 2u);
  for (const Verdict& v : r.verdicts) {
    EXPECT_EQ(v.outcome, Outcome::FlaggedFP);
    EXPECT_TRUE(v.has(PatternId::URV3_GuardCondition));
    EXPECT_TRUE(v.has(PatternId::URV5_TerminalCall));
  }
}

TEST(Urv, EasyInvestMarkers) {
  FileReport r = run(read_file(curated("EasyInvest10")), VulnClass::URV);
  ASSERT_EQ(r.verdicts.size(), 2u);
  EXPECT_EQ(at(r, 9).outcome, Outcome::LikelyTP);
  EXPECT_TRUE(at(r, 9).matched.empty());
  EXPECT_EQ(at(r, 13).outcome, Outcome::FlaggedFP);
  EXPECT_EQ(at(r, 13).matched, Ids{PatternId::URV4_RecipientIsCaller});
}

TEST(Urv, CollectMoneyPrivateHelper) {
  FileReport r = run(read_file(curated("CollectMoney")), VulnClass::URV);
  const Verdict& v = at(r, 18);
  EXPECT_EQ(v.outcome, Outcome::FlaggedFP);
  EXPECT_TRUE(v.has(PatternId::URV1_Unreachable) || v.has(PatternId::URV2_RestrictiveModifier));
}

TEST(Urv, EveryPatternIsCheckedAndJustified) {
  FileReport r = run(read_file(curated("EasyInvest10")), VulnClass::URV);
  for (const Verdict& v : r.verdicts) {
    EXPECT_EQ(v.checks.size(), 5u);
    for (const PatternCheck& c : v.checks) EXPECT_FALSE(c.evidence.empty());
    EXPECT_FALSE(v.justification.empty());
  }
}

TEST(Urv, EventAfterSendKeepsItTerminal) {
  FileReport r = run(R"(
contract C {
  event E();
  function f(address a) public {
    a.send(1);
    emit E();
  }
}
)",
                     VulnClass::URV);
  EXPECT_EQ(at(r, 5).matched, Ids{PatternId::URV5_TerminalCall});
}

TEST(Urv, StateWriteInSameStatementDefeatsTerminal) {
  FileReport r = run(R"(
contract C {
  bool done;
  function f(address a) public {
    done = a.send(1) || true;
  }
}
)",
                     VulnClass::URV);
  EXPECT_TRUE(r.verdicts.empty() || !at(r, 5).has(PatternId::URV5_TerminalCall));
}

TEST(Ree, DecoreOnlyOwner) {
  std::string text = read_file(curated("Decore"));
  FileReport r = run(text, VulnClass::REE);
  const Verdict& v = at(r, line_of(text, "msg.sender.call.value"));
  EXPECT_EQ(v.outcome, Outcome::FlaggedFP);
  EXPECT_TRUE(v.has(PatternId::REE2_RestrictiveModifier));
}

TEST(Ree, CallFollowedOnlyByEmit) {
  FileReport r = run(R"(
contract C {
  event Done();
  function f(address a) public {
    a.call("");
    emit Done();
  }
}
)",
                     VulnClass::REE);
  EXPECT_EQ(at(r, 5).outcome, Outcome::FlaggedFP);
  EXPECT_EQ(at(r, 5).matched, Ids{PatternId::REE5_NoStateChangeAfter});
}

TEST(Ree, ValueBoundedByMsgValue) {
  FileReport r = run(R"(
contract C {
  mapping(address => uint) balances;
  function f() public payable {
    msg.sender.call{value: msg.value / 2}("");
    balances[msg.sender] = 0;
  }
}
)",
                     VulnClass::REE);
  EXPECT_EQ(at(r, 5).outcome, Outcome::FlaggedFP);
  EXPECT_EQ(at(r, 5).matched, Ids{PatternId::REE6_ValueWithinMsgValue});
}

TEST(Ree, ValueFromBalanceIsLikelyTp) {
  FileReport r = run(R"(
contract C {
  mapping(address => uint) balances;
  function f() public {
    msg.sender.call.value(balances[msg.sender])("");
    balances[msg.sender] = 0;
  }
}
)",
                     VulnClass::REE);
  EXPECT_EQ(at(r, 5).outcome, Outcome::LikelyTP);
}

TEST(Ree, HardcodedTarget) {
  FileReport r = run(R"(
contract C {
  address constant T = 0x1111111111111111111111111111111111111111;
  uint n;
  function f() public {
    T.call("");
    n = 1;
  }
}
)",
                     VulnClass::REE);
  EXPECT_EQ(at(r, 6).matched, Ids{PatternId::REE4_HardcodedTarget});
}

TEST(Ree, CallerTargetIsNotHardcoded) {
  FileReport r = run(R"(
contract C {
  uint n;
  function f() public {
    msg.sender.call("");
    n = 1;
  }
}
)",
                     VulnClass::REE);
  EXPECT_EQ(at(r, 5).outcome, Outcome::LikelyTP);
}

TEST(Ree, LocalScopeOnlyWithCallersIsNotAnalyzed) {
  FileReport r = run(R"(
contract C {
  uint n;
  function f(address a) public {
    g(a);
    n = 1;
  }
  function g(address a) public {
    a.call("");
  }
}
)",
                     VulnClass::REE);
  const Verdict& v = at(r, 9);
  EXPECT_EQ(v.outcome, Outcome::NotAnalyzed);
  EXPECT_EQ(v.reason, "function-local-scope");
}

TEST(Td, FifteenPlusDailyCheck) {
  FileReport r = run(read_file(curated("FifteenPlus")), VulnClass::TD);
  EXPECT_EQ(at(r, 15).outcome, Outcome::FlaggedFP);
  EXPECT_EQ(at(r, 15).matched, Ids{PatternId::TD1_IntervalCheck});
  EXPECT_EQ(at(r, 20).outcome, Outcome::LikelyTP);
  EXPECT_EQ(at(r, 21).outcome, Outcome::LikelyTP);
}

TEST(Td, ThresholdAboveTheIntervalFlipsVerdict) {
  FileReport r = run(read_file(curated("FifteenPlus")), VulnClass::TD, 86400);
  EXPECT_EQ(at(r, 15).outcome, Outcome::LikelyTP);
  FileReport s = run(read_file(curated("FifteenPlus")), VulnClass::TD, 86399);
  EXPECT_EQ(at(s, 15).outcome, Outcome::FlaggedFP);
}

TEST(Td, TimestampIntoAmountIsLikelyTp) {
  FileReport r = run(R"(
contract C {
  mapping(address => uint) invested;
  function f(address payable x, uint t) public {
    uint getout = invested[x]*10/100*(block.timestamp - t)/5900;
    x.send(getout);
  }
}
)",
                     VulnClass::TD);
  EXPECT_EQ(at(r, 5).outcome, Outcome::LikelyTP);
}

TEST(Td, WindowAgainstVariables) {
  FileReport r = run(R"(
contract C {
  uint start; uint end;
  function f() public {
    require(now >= start && now <= end);
  }
}
)",
                     VulnClass::TD);
  EXPECT_EQ(at(r, 5).outcome, Outcome::FlaggedFP);
  EXPECT_TRUE(at(r, 5).has(PatternId::TD1_IntervalCheck));
}

TEST(Td, NarrowIntervalIsLikelyTp) {
  FileReport r = run(R"(
contract C {
  uint last;
  function f() public {
    require(now > last + 15);
  }
}
)",
                     VulnClass::TD);
  EXPECT_EQ(at(r, 5).outcome, Outcome::LikelyTP);
}

TEST(Td, EqualityOnTimestampIsLikelyTp) {
  FileReport r = run(R"(
contract C {
  uint last;
  function f() public {
    if (now % 15 == 0) { last = 1; }
  }
}
)",
                     VulnClass::TD);
  EXPECT_EQ(at(r, 5).outcome, Outcome::LikelyTP);
}

TEST(IntervalWidth, ReadsTheConstantOffset) {
  FileReport r = run(R"(
contract C {
  uint last;
  uint constant DELAY = 2 hours;
  function f() public {
    require(now - last >= 1 days);
    require(now > last + DELAY);
    require(now >= last);
  }
}
)",
                     VulnClass::TD);
  const ContractModel& m = r.model->contracts[0];
  const FunctionModel& f = *m.find_function("f");
  std::vector<std::optional<double>> widths;
  for (const TaintUse& u : f.taint.uses)
    if (u.comparison) widths.push_back(interval_width(*u.comparison, m, f));
  ASSERT_EQ(widths.size(), 3u);
  EXPECT_EQ(widths[0], 86400.0);
  EXPECT_EQ(widths[1], 7200.0);
  EXPECT_FALSE(widths[2].has_value());
}

TEST(MsgValueBound, Forms) {
  FileReport r = run(R"(
contract C {
  function f() public payable {
    uint half = msg.value / 2;
    uint all = msg.value;
    uint more = msg.value * 2;
    uint half2 = all - 3;
  }
}
)",
                     VulnClass::TD);
  const FunctionModel& f = r.model->contracts[0].functions[0];
  EXPECT_TRUE(bounded_by_msg_value(parse_expression("msg.value"), f));
  EXPECT_TRUE(bounded_by_msg_value(parse_expression("msg.value / 2"), f));
  EXPECT_TRUE(bounded_by_msg_value(parse_expression("half"), f));
  EXPECT_TRUE(bounded_by_msg_value(parse_expression("half2"), f));
  EXPECT_FALSE(bounded_by_msg_value(parse_expression("more"), f));
  EXPECT_FALSE(bounded_by_msg_value(parse_expression("msg.value + 1"), f));
}

TEST(Verdicts, FamilyDiscipline) {
  for (const char* name : {"Escrow", "EasyInvest10", "CollectMoney", "Decore", "FifteenPlus"}) {
    FileReport r = analyze_source(read_file(curated(name)), name);
    for (const Verdict& v : r.verdicts) {
      for (PatternId p : v.matched) EXPECT_EQ(family(p), v.candidate.vuln);
      for (const PatternCheck& c : v.checks) EXPECT_EQ(family(c.id), v.candidate.vuln);
      EXPECT_EQ(v.outcome == Outcome::FlaggedFP, !v.matched.empty());
    }
    EXPECT_TRUE(std::is_sorted(r.verdicts.begin(), r.verdicts.end(), [](const Verdict& a, const Verdict& b) {
      return a.candidate.span.line_start < b.candidate.span.line_start;
    }));
  }
}

TEST(Verdicts, EmptyContractHasNone) {
  EXPECT_TRUE(analyze_source("contract C {}", "t.sol").verdicts.empty());
  EXPECT_TRUE(analyze_source("", "t.sol").verdicts.empty());
}

TEST(Verdicts, Names) {
  EXPECT_STREQ(to_string(PatternId::URV3_GuardCondition), "URV3");
  EXPECT_STREQ(long_name(PatternId::REE6_ValueWithinMsgValue), "REE6_ValueWithinMsgValue");
  EXPECT_EQ(family(PatternId::TD1_IntervalCheck), VulnClass::TD);
  EXPECT_STREQ(to_string(Outcome::NotAnalyzed), "NotAnalyzed");
}

}  // namespace
}  // namespace solfp
