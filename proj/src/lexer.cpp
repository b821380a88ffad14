// SPDX-License-Identifier: Apache-2.0
//
// Hand-written Solidity lexer. Comments and whitespace are attached to the
// following token as trivia so the token stream is lossless.

#include "solfp/lexer.hpp"

#include <array>
#include <cctype>
#include <unordered_set>

namespace solfp {

namespace {

const std::unordered_set<std::string_view>& keyword_set() {
  static const std::unordered_set<std::string_view> words = {
      "abstract", "anonymous", "as",        "assembly", "break",     "calldata",
      "catch",    "constant",  "constructor", "continue", "contract", "delete",
      "do",       "else",      "emit",      "enum",     "event",     "external",
      "fallback", "false",     "for",       "function", "if",        "immutable",
      "import",   "indexed",   "interface", "internal", "is",        "library",
      "mapping",  "memory",    "modifier",  "new",      "override",  "payable",
      "pragma",   "private",   "public",    "pure",     "receive",   "return",
      "returns",  "storage",   "struct",    "throw",    "true",      "try",
      "unchecked", "using",    "var",       "view",     "virtual",   "while",
      "constant"};
  return words;
}

// Longest first so that greedy matching picks `>>>=` before `>>`.
constexpr std::array<std::string_view, 35> kPuncts = {
    ">>>=", "<<=", ">>=", ">>>", "**=", "...", "=>", "==", "!=", "<=", ">=", "&&",
    "||",   "++",  "--",  "+=",  "-=",  "*=",  "/=", "%=", "|=", "&=", "^=", "<<",
    ">>",   "**",  "->",  ":=",  "{",   "}",   "(",  ")",  "[",  "]",  ";"};

constexpr std::string_view kSinglePuncts = ",.?:=+-*/%!~&|^<>";

bool is_ident_start(unsigned char c) { return std::isalpha(c) || c == '_' || c == '$'; }
bool is_ident_char(unsigned char c) { return std::isalnum(c) || c == '_' || c == '$'; }

class Lexer {
 public:
  explicit Lexer(std::string_view text) : text_(text), index_(text) {}

  std::vector<Token> run() {
    std::vector<Token> out;
    for (;;) {
      std::size_t trivia_begin = pos_;
      skip_trivia();
      std::string trivia(text_.substr(trivia_begin, pos_ - trivia_begin));
      if (pos_ >= text_.size()) {
        Token eof;
        eof.kind = TokenKind::EndOfFile;
        eof.leading_trivia = std::move(trivia);
        eof.span = index_.span(static_cast<std::uint32_t>(pos_), static_cast<std::uint32_t>(pos_));
        out.push_back(std::move(eof));
        return out;
      }
      std::size_t begin = pos_;
      TokenKind kind = lex_one();
      Token tok;
      tok.kind = kind;
      tok.text = std::string(text_.substr(begin, pos_ - begin));
      tok.leading_trivia = std::move(trivia);
      tok.span = index_.span(static_cast<std::uint32_t>(begin), static_cast<std::uint32_t>(pos_));
      out.push_back(std::move(tok));
    }
  }

 private:
  char peek(std::size_t ahead = 0) const {
    return pos_ + ahead < text_.size() ? text_[pos_ + ahead] : '\0';
  }

  void skip_trivia() {
    while (pos_ < text_.size()) {
      char c = text_[pos_];
      if (c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' || c == '\v') {
        ++pos_;
      } else if (c == '/' && peek(1) == '/') {
        while (pos_ < text_.size() && text_[pos_] != '\n') ++pos_;
      } else if (c == '/' && peek(1) == '*') {
        std::size_t end = text_.find("*/", pos_ + 2);
        pos_ = end == std::string_view::npos ? text_.size() : end + 2;
      } else {
        return;
      }
    }
  }

  TokenKind lex_one() {
    unsigned char c = static_cast<unsigned char>(text_[pos_]);
    if (is_ident_start(c)) {
      // hex"..." and unicode"..." string prefixes
      std::size_t start = pos_;
      while (pos_ < text_.size() && is_ident_char(static_cast<unsigned char>(text_[pos_]))) ++pos_;
      std::string_view word = text_.substr(start, pos_ - start);
      if ((word == "hex" || word == "unicode") && (peek() == '"' || peek() == '\'')) {
        return lex_string();
      }
      return keyword_set().count(word) ? TokenKind::Keyword : TokenKind::Identifier;
    }
    if (std::isdigit(c) || (c == '.' && std::isdigit(static_cast<unsigned char>(peek(1))))) {
      return lex_number();
    }
    if (c == '"' || c == '\'') return lex_string();
    for (std::string_view p : kPuncts) {
      if (text_.substr(pos_, p.size()) == p) {
        pos_ += p.size();
        return TokenKind::Punct;
      }
    }
    if (kSinglePuncts.find(static_cast<char>(c)) != std::string_view::npos) {
      ++pos_;
      return TokenKind::Punct;
    }
    // Illegal character. Consume a whole UTF-8 sequence so spans stay on
    // code-point boundaries.
    ++pos_;
    while (pos_ < text_.size() && (static_cast<unsigned char>(text_[pos_]) & 0xC0) == 0x80) ++pos_;
    return TokenKind::Error;
  }

  TokenKind lex_number() {
    if (peek() == '0' && (peek(1) == 'x' || peek(1) == 'X')) {
      pos_ += 2;
      while (pos_ < text_.size() && (std::isxdigit(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_')) ++pos_;
      return TokenKind::HexNumber;
    }
    auto digits = [&] {
      while (pos_ < text_.size() && (std::isdigit(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_')) ++pos_;
    };
    digits();
    if (peek() == '.' && std::isdigit(static_cast<unsigned char>(peek(1)))) {
      ++pos_;
      digits();
    }
    if ((peek() == 'e' || peek() == 'E') &&
        (std::isdigit(static_cast<unsigned char>(peek(1))) ||
         (peek(1) == '-' && std::isdigit(static_cast<unsigned char>(peek(2)))))) {
      pos_ += peek(1) == '-' ? 2 : 1;
      digits();
    }
    return TokenKind::Number;
  }

  TokenKind lex_string() {
    char quote = text_[pos_];
    ++pos_;
    while (pos_ < text_.size()) {
      char c = text_[pos_];
      if (c == '\\' && pos_ + 1 < text_.size()) {
        pos_ += 2;
        continue;
      }
      if (c == '\n') return TokenKind::Error;  // unterminated on this line
      ++pos_;
      if (c == quote) return TokenKind::String;
    }
    return TokenKind::Error;
  }

  std::string_view text_;
  LineIndex index_;
  std::size_t pos_ = 0;
};

}  // namespace

bool is_keyword(std::string_view word) { return keyword_set().count(word) != 0; }

const char* to_string(TokenKind kind) {
  switch (kind) {
    case TokenKind::Identifier: return "identifier";
    case TokenKind::Keyword: return "keyword";
    case TokenKind::Number: return "number";
    case TokenKind::HexNumber: return "hex-number";
    case TokenKind::String: return "string";
    case TokenKind::Punct: return "punctuation";
    case TokenKind::Error: return "error";
    case TokenKind::EndOfFile: return "end-of-file";
  }
  return "?";
}

std::vector<Token> tokenize(std::string_view text) { return Lexer(text).run(); }

}  // namespace solfp
