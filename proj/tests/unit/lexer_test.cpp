// SPDX-License-Identifier: Apache-2.0

#include <gtest/gtest.h>

#include <random>

#include "solfp/lexer.hpp"
#include "support/corpus.hpp"

namespace solfp {
namespace {

std::vector<std::string> significant(const std::vector<Token>& toks) {
  std::vector<std::string> out;
  for (const Token& t : toks)
    if (t.kind != TokenKind::EndOfFile) out.push_back(t.text);
  return out;
}

std::string reassemble(const std::vector<Token>& toks) {
  std::string out;
  for (const Token& t : toks) out += t.leading_trivia + t.text;
  return out;
}

TEST(Lexer, MinimalContract) {
  auto toks = tokenize("contract C {}");
  ASSERT_EQ(toks.size(), 5u);
  EXPECT_TRUE(toks[0].is_keyword("contract"));
  EXPECT_EQ(toks[1].kind, TokenKind::Identifier);
  EXPECT_EQ(toks[1].text, "C");
  EXPECT_TRUE(toks[2].is_punct("{"));
  EXPECT_TRUE(toks[3].is_punct("}"));
  EXPECT_EQ(toks[4].kind, TokenKind::EndOfFile);
}

TEST(Lexer, SendStatementStream) {
  auto toks = tokenize("owner.send(msg.value/5);");
  EXPECT_EQ(significant(toks),
            (std::vector<std::string>{"owner", ".", "send", "(", "msg", ".", "value", "/", "5", ")", ";"}));
  EXPECT_EQ(toks[8].kind, TokenKind::Number);
  EXPECT_EQ(toks[2].span.col_start, 7u);
}

TEST(Lexer, IllegalCharacterBecomesOneErrorToken) {
  auto toks = tokenize("uint a = 1; @ uint b = 2;");
  int errors = 0;
  for (const Token& t : toks)
    if (t.kind == TokenKind::Error) {
      ++errors;
      EXPECT_EQ(t.text, "@");
    }
  EXPECT_EQ(errors, 1);
  EXPECT_EQ(significant(toks).size(), 11u);
}

TEST(Lexer, AtSignInsideCommentIsTrivia) {
  auto toks = tokenize("// @notice hi\n/* @dev */ x");
  ASSERT_EQ(toks.size(), 2u);
  EXPECT_EQ(toks[0].text, "x");
  EXPECT_EQ(toks[0].leading_trivia, "// @notice hi\n/* @dev */ ");
}

TEST(Lexer, MultiCharPunctuation) {
  EXPECT_EQ(significant(tokenize("a >>= b => c ** d != e")),
            (std::vector<std::string>{"a", ">>=", "b", "=>", "c", "**", "d", "!=", "e"}));
}

TEST(Lexer, HexAddressAndStringPrefixes) {
  auto toks = tokenize("x = 0x5ed8cee6b63b1c6afce3ad7c92f4fd7e1b8fad9f; hex\"00ff\"");
  EXPECT_EQ(toks[2].kind, TokenKind::HexNumber);
  EXPECT_EQ(toks[4].kind, TokenKind::String);
  EXPECT_EQ(toks[4].text, "hex\"00ff\"");
}

TEST(Lexer, SpansTrackLines) {
  auto toks = tokenize("a\n  bb\n");
  EXPECT_EQ(toks[1].span.line_start, 2u);
  EXPECT_EQ(toks[1].span.col_start, 3u);
  EXPECT_EQ(toks[1].span.col_end, 5u);
}

TEST(Lexer, LosslessOnCorpus) {
  for (const auto& entry : std::filesystem::recursive_directory_iterator(testing::corpus_dir())) {
    if (entry.path().extension() != ".sol") continue;
    std::string text = testing::read_file(entry.path());
    EXPECT_EQ(reassemble(tokenize(text)), text) << entry.path();
  }
}

// Random byte strings: tokens plus trivia must tile the input exactly, and
// every span must agree with the token's byte range.
TEST(Lexer, FuzzCoverageEqualsInput) {
  std::mt19937 rng(7);
  const std::string alphabet = "abc019_ \n\t(){}[];.,=+-*/<>!&|@#\"'`\\x\xc3\xa9";
  for (int round = 0; round < 2000; ++round) {
    std::string text;
    int n = std::uniform_int_distribution<int>(0, 60)(rng);
    for (int i = 0; i < n; ++i) text.push_back(alphabet[rng() % alphabet.size()]);
    auto toks = tokenize(text);
    ASSERT_EQ(reassemble(toks), text);
    std::size_t covered = 0;
    for (const Token& t : toks) {
      covered += t.leading_trivia.size();
      ASSERT_EQ(t.span.byte_offset, covered);
      ASSERT_EQ(t.span.byte_length, t.text.size());
      covered += t.text.size();
    }
    ASSERT_EQ(covered, text.size());
  }
}

}  // namespace
}  // namespace solfp
