// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "solfp/source.hpp"

namespace solfp {

enum class TokenKind {
  Identifier,
  Keyword,
  Number,
  HexNumber,
  String,
  Punct,
  Error,
  EndOfFile,
};

const char* to_string(TokenKind kind);

/// One significant token. Whitespace and comments preceding it are kept in
/// `leading_trivia`, so concatenating `leading_trivia + text` over the whole
/// stream (including the end-of-file token) reproduces the input exactly.
struct Token {
  TokenKind kind = TokenKind::EndOfFile;
  std::string text;
  std::string leading_trivia;
  SourceSpan span;

  bool is(TokenKind k, std::string_view t) const { return kind == k && text == t; }
  bool is_punct(std::string_view t) const { return kind == TokenKind::Punct && text == t; }
  bool is_keyword(std::string_view t) const { return kind == TokenKind::Keyword && text == t; }
};

/// Splits Solidity source into tokens. Never fails: characters that cannot
/// start a token become `TokenKind::Error` tokens and lexing continues after
/// them. The last token is always `EndOfFile`.
std::vector<Token> tokenize(std::string_view text);

bool is_keyword(std::string_view word);

}  // namespace solfp
