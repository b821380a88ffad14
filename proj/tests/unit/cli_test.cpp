// SPDX-License-Identifier: Apache-2.0

#include <gtest/gtest.h>

#include <sstream>

#include "json.hpp"
#include "solfp/cli.hpp"
#include "solfp/wizard.hpp"
#include "support/corpus.hpp"

namespace solfp {
namespace {

using testing::curated;
using testing::corpus_dir;
using testing::read_file;

struct CliRun {
  int status = 0;
  std::string out;
  std::string err;
};

CliRun cli(std::vector<std::string> args, const std::string& input = {}, bool interactive = false) {
  args.insert(args.begin(), "solfp");
  std::vector<const char*> argv;
  for (const std::string& a : args) argv.push_back(a.c_str());
  std::istringstream in(input);
  std::ostringstream out, err;
  CliRun r;
  r.status = run_cli(static_cast<int>(argv.size()), argv.data(), in, out, err, interactive);
  r.out = out.str();
  r.err = err.str();
  return r;
}

class InDirectory {
 public:
  explicit InDirectory(const std::filesystem::path& p) : saved_(std::filesystem::current_path()) {
    std::filesystem::current_path(p);
  }
  ~InDirectory() { std::filesystem::current_path(saved_); }

 private:
  std::filesystem::path saved_;
};

std::string sol(const char* name) { return curated(name).string(); }

TEST(Analyze, EscrowIsClean) {
  CliRun r = cli({"analyze", sol("Escrow"), "--vuln", "urv"});
  EXPECT_EQ(r.status, 0);
  EXPECT_NE(r.out.find("summary: 0 LikelyTP, 2 FlaggedFP, 0 NotAnalyzed"), std::string::npos) << r.out;
}

TEST(Analyze, EasyInvestIsSuspicious) {
  CliRun r = cli({"analyze", sol("EasyInvest10"), "--vuln", "urv"});
  EXPECT_EQ(r.status, 1);
  EXPECT_NE(r.out.find("summary: 1 LikelyTP, 1 FlaggedFP, 0 NotAnalyzed"), std::string::npos) << r.out;
}

TEST(Analyze, MissingFileIsAnError) {
  CliRun r = cli({"analyze", "nonexistent.sol"});
  EXPECT_EQ(r.status, 2);
  EXPECT_NE(r.out.find("nonexistent.sol: error: cannot read"), std::string::npos);
  EXPECT_NE(cli({"analyze", "nonexistent.sol", "--format", "json"}).err.find("cannot read"), std::string::npos);
}

TEST(Analyze, MissingFileAmongOthersContinues) {
  CliRun r = cli({"analyze", "nonexistent.sol", sol("Escrow"), "--vuln", "urv"});
  EXPECT_EQ(r.status, 0);
  EXPECT_NE(r.out.find("nonexistent.sol: error"), std::string::npos);
}

TEST(Analyze, BadFlagsAreErrors) {
  EXPECT_EQ(cli({"analyze", sol("Escrow"), "--vuln", "tod"}).status, 2);
  EXPECT_EQ(cli({"analyze", sol("Escrow"), "--format", "xml"}).status, 2);
  EXPECT_EQ(cli({"analyze", sol("Escrow"), "--interval-threshold", "-1"}).status, 2);
  EXPECT_EQ(cli({"frobnicate"}).status, 2);
  EXPECT_EQ(cli({}).status, 2);
}

TEST(Analyze, HelpExitsCleanly) { EXPECT_EQ(cli({"--help"}).status, 0); }

TEST(Analyze, JsonIsDeterministic) {
  std::vector<std::string> args = {"analyze", sol("Decore"), sol("FifteenPlus"), sol("Escrow"), "--format", "json"};
  CliRun a = cli(args);
  CliRun b = cli(args);
  EXPECT_EQ(a.out, b.out);
  auto doc = nlohmann::json::parse(a.out);
  EXPECT_EQ(doc["files"].size(), 3u);
  EXPECT_EQ(doc["files"][0]["file"], sol("Decore"));
  EXPECT_EQ(a.out.find("seconds"), std::string::npos);
}

TEST(Analyze, VerboseListsEveryCheck) {
  CliRun r = cli({"analyze", sol("Escrow"), "--vuln", "urv", "--verbose"});
  EXPECT_NE(r.out.find("URV1_Unreachable"), std::string::npos);
  EXPECT_NE(r.out.find("+ URV5_TerminalCall"), std::string::npos) << r.out;
}

TEST(Analyze, ThresholdFlag) {
  CliRun strict = cli({"analyze", sol("FifteenPlus"), "--vuln", "td", "--interval-threshold", "100000", "--format",
                    "json"});
  auto doc = nlohmann::json::parse(strict.out);
  EXPECT_EQ(doc["summary"]["flagged_fp"], 0);
}

TEST(Analyze, ExitCodeMatchesVerdicts) {
  for (const auto& entry : std::filesystem::directory_iterator(corpus_dir() / "extra")) {
    CliRun r = cli({"analyze", entry.path().string(), "--format", "json"});
    auto doc = nlohmann::json::parse(r.out);
    int expected = doc["summary"]["likely_tp"].get<int>() > 0 ? 1 : 0;
    EXPECT_EQ(r.status, expected) << entry.path();
  }
}

TEST(Triage, EscrowFixture) {
  CliRun r = cli({"triage", "--report", (corpus_dir() / "reports" / "escrow_urv.json").string(), "--format", "json"});
  EXPECT_EQ(r.status, 0);
  auto doc = nlohmann::json::parse(r.out);
  ASSERT_EQ(doc.size(), 2u);
  for (const auto& x : doc) EXPECT_EQ(x["judgement"], "ProbableFalseAlarm");
}

TEST(Triage, EmptyAndMixed) {
  CliRun e = cli({"triage", "--report", (corpus_dir() / "reports" / "empty.json").string()});
  EXPECT_EQ(e.status, 0);
  CliRun m = cli({"triage", "--report", (corpus_dir() / "reports" / "mixed.json").string()});
  EXPECT_EQ(m.status, 1);
  EXPECT_NE(m.err.find("line must be >= 1"), std::string::npos);
}

TEST(Triage, BadFindingsFile) {
  EXPECT_EQ(cli({"triage", "--report", "/nonexistent.json"}).status, 2);
  EXPECT_EQ(cli({"triage", "--report", sol("Escrow")}).status, 2);
}

TEST(Bench, CuratedCorpus) {
  CliRun r = cli({"bench", (corpus_dir() / "curated").string(), "--labels",
               (corpus_dir() / "labels" / "curated.csv").string(), "--format", "json"});
  EXPECT_EQ(r.status, 0);
  auto doc = nlohmann::json::parse(r.out);
  EXPECT_EQ(doc["files"], 5);
  EXPECT_EQ(doc["classes"][2]["tp"], 3);
}

TEST(Bench, Errors) {
  EXPECT_EQ(cli({"bench", "/nonexistent", "--labels", (corpus_dir() / "labels" / "curated.csv").string()}).status,
            2);
  EXPECT_EQ(cli({"bench", (corpus_dir() / "curated").string(), "--labels", "/nonexistent.csv"}).status, 2);
}

TEST(Wizard, GoldenTranscript) {
  std::string expected = read_file(corpus_dir() / "wizard" / "EasyInvest10.transcript");
  InDirectory here(corpus_dir() / "curated");
  CliRun r = cli({"wizard", "EasyInvest10.sol", "--answers", "../wizard/EasyInvest10.answers"});
  EXPECT_EQ(r.status, 1);
  EXPECT_EQ(r.out, expected);
}

TEST(Wizard, AcceptingEverythingReproducesAnalyze) {
  CliRun a = cli({"analyze", sol("Escrow"), sol("EasyInvest10"), sol("FifteenPlus")});
  std::string all_a;
  for (int i = 0; i < 200; ++i) all_a += "a\n";
  CliRun w = cli({"wizard", sol("Escrow"), sol("EasyInvest10"), sol("FifteenPlus")}, all_a, true);
  EXPECT_EQ(w.status, a.status);
  std::size_t at = w.out.find(a.out);
  ASSERT_NE(at, std::string::npos);
  std::string trail = w.out.substr(at + a.out.size());
  EXPECT_EQ(trail.rfind("decisions:\n", 0), 0u);
  EXPECT_EQ(trail.find("user-"), std::string::npos);
}

TEST(Wizard, OverrideFlaggedFpConfirmsTp) {
  std::string answers = "a\na\no\na\na\n";  // Escrow line 12: override URV3
  answers += "a\na\no\na\no\n";             // line 16: override URV3 and URV5
  CliRun w = cli({"wizard", sol("Escrow"), "--vuln", "urv"}, answers, true);
  EXPECT_NE(w.out.find(":12 URV FlaggedFP -> FlaggedFP user-adjusted"), std::string::npos) << w.out;
  EXPECT_NE(w.out.find(":16 URV FlaggedFP -> LikelyTP user-confirmed-TP"), std::string::npos) << w.out;
  EXPECT_EQ(w.status, 1);
}

TEST(Wizard, EofResolvesTheRestAutomatically) {
  CliRun w = cli({"wizard", sol("EasyInvest10"), "--vuln", "urv"}, "a\no\n", true);
  EXPECT_NE(w.out.find("(no more answers; remaining checks keep their automatic results)"), std::string::npos);
  EXPECT_NE(w.out.find(":13 URV FlaggedFP -> FlaggedFP auto"), std::string::npos) << w.out;
}

TEST(Wizard, WithoutTerminalFallsBackToAnalyze) {
  CliRun a = cli({"analyze", sol("Escrow")});
  CliRun w = cli({"wizard", sol("Escrow")}, "", false);
  EXPECT_EQ(w.out, a.out);
  EXPECT_EQ(w.status, a.status);
  EXPECT_NE(w.err.find("falling back to analyze"), std::string::npos);
}

TEST(Wizard, MissingAnswersFile) {
  EXPECT_EQ(cli({"wizard", sol("Escrow"), "--answers", "/nonexistent.answers"}).status, 2);
}

}  // namespace
}  // namespace solfp
