// SPDX-License-Identifier: Apache-2.0
//
// Recursive-descent parser for the Solidity subset used by the analyses.
//
// Recovery works at three levels. A statement that fails to parse becomes an
// Opaque statement and parsing resumes after the next `;` or before the
// closing `}` of the enclosing block. A contract member that fails is skipped
// the same way. A contract whose closing brace is never found is kept but
// marked unparsed, and parsing resumes at the next contract keyword.

#include "solfp/parser.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <stdexcept>

#include "solfp/ast_util.hpp"
#include "solfp/lexer.hpp"

namespace solfp {

namespace {

struct ParseError : std::runtime_error {
  ParseError(SourceSpan s, const std::string& msg) : std::runtime_error(msg), span(s) {}
  SourceSpan span;
};

constexpr int kMaxDepth = 200;

bool is_int_type(std::string_view w, std::string_view prefix) {
  if (w.substr(0, prefix.size()) != prefix) return false;
  std::string_view rest = w.substr(prefix.size());
  if (rest.empty()) return true;
  int bits = 0;
  auto [ptr, ec] = std::from_chars(rest.data(), rest.data() + rest.size(), bits);
  return ec == std::errc{} && ptr == rest.data() + rest.size() && bits > 0 && bits <= 256 && bits % 8 == 0;
}

bool is_bytes_type(std::string_view w) {
  if (w == "bytes" || w == "byte") return true;
  if (w.substr(0, 5) != "bytes") return false;
  std::string_view rest = w.substr(5);
  int n = 0;
  auto [ptr, ec] = std::from_chars(rest.data(), rest.data() + rest.size(), n);
  return ec == std::errc{} && ptr == rest.data() + rest.size() && n >= 1 && n <= 32;
}

bool is_location(const Token& t) {
  return t.is_keyword("memory") || t.is_keyword("storage") || t.is_keyword("calldata");
}

bool is_visibility(const Token& t) {
  return t.is_keyword("public") || t.is_keyword("external") || t.is_keyword("internal") ||
         t.is_keyword("private");
}

Visibility visibility_of(std::string_view w) {
  if (w == "public") return Visibility::Public;
  if (w == "external") return Visibility::External;
  if (w == "internal") return Visibility::Internal;
  if (w == "private") return Visibility::Private;
  return Visibility::Unspecified;
}

int binary_precedence(std::string_view op) {
  if (op == "||") return 1;
  if (op == "&&") return 2;
  if (op == "==" || op == "!=") return 3;
  if (op == "<" || op == ">" || op == "<=" || op == ">=") return 4;
  if (op == "|") return 5;
  if (op == "^") return 6;
  if (op == "&") return 7;
  if (op == "<<" || op == ">>" || op == ">>>") return 8;
  if (op == "+" || op == "-") return 9;
  if (op == "*" || op == "/" || op == "%") return 10;
  if (op == "**") return 11;
  return 0;
}

std::optional<double> parse_decimal(std::string_view text) {
  std::string cleaned;
  for (char c : text)
    if (c != '_') cleaned.push_back(c);
  try {
    std::size_t used = 0;
    double v = std::stod(cleaned, &used);
    if (used != cleaned.size()) return std::nullopt;
    return v;
  } catch (const std::exception&) {
    return std::nullopt;
  }
}

std::optional<double> parse_hex(std::string_view text) {
  double v = 0;
  bool any = false;
  for (char c : text.substr(2)) {
    if (c == '_') continue;
    int d = std::isdigit(static_cast<unsigned char>(c)) ? c - '0' : std::tolower(c) - 'a' + 10;
    v = v * 16 + d;
    any = true;
  }
  if (!any) return std::nullopt;
  return v;
}

class Parser {
 public:
  Parser(std::string_view text, std::set<std::string, std::less<>> events)
      : text_(text), tokens_(tokenize(text)), events_(std::move(events)) {
    for (const Token& t : tokens_) {
      if (t.kind == TokenKind::Error) {
        error(t.span, t.text.size() > 1 && (t.text[0] == '"' || t.text[0] == '\'')
                          ? "unterminated string literal"
                          : "illegal character '" + t.text + "'");
      }
    }
  }

  SourceUnit parse_unit(std::string file) {
    SourceUnit unit;
    unit.file = std::move(file);
    collect_event_names();
    while (!at_end()) {
      std::size_t before = pos_;
      try {
        parse_top_level(unit);
      } catch (const ParseError& e) {
        error(e.span, e.what());
        recover_to_next_contract();
      }
      if (pos_ == before) advance();
    }
    unit.diagnostics = std::move(diagnostics_);
    return unit;
  }

  Expr parse_standalone_expression() {
    try {
      Expr e = parse_expr();
      if (!at_end()) throw ParseError(cur().span, "trailing tokens after expression");
      return e;
    } catch (const ParseError& e) {
      Expr out;
      out.kind = ExprKind::Opaque;
      out.span = e.span;
      out.name = e.what();
      return out;
    }
  }

  Stmt parse_standalone_statement() {
    Stmt s = parse_statement_recovering();
    if (!at_end()) {
      Stmt bad;
      bad.kind = StmtKind::Opaque;
      bad.parse_error = true;
      bad.op = "trailing tokens after statement";
      bad.span = cur().span;
      return bad;
    }
    return s;
  }

 private:
  // --- token access -------------------------------------------------------

  // Error tokens are reported once in the constructor and otherwise skipped.
  std::size_t skip_errors(std::size_t i) const {
    while (i + 1 < tokens_.size() && tokens_[i].kind == TokenKind::Error) ++i;
    return i;
  }

  const Token& cur() const { return tokens_[skip_errors(pos_)]; }

  const Token& peek(std::size_t n = 1) const {
    std::size_t i = skip_errors(pos_);
    while (n > 0 && i + 1 < tokens_.size()) {
      i = skip_errors(i + 1);
      --n;
    }
    return tokens_[i];
  }

  bool at_end() const { return cur().kind == TokenKind::EndOfFile; }

  const Token& advance() {
    pos_ = skip_errors(pos_);
    const Token& t = tokens_[pos_];
    if (pos_ + 1 < tokens_.size()) ++pos_;
    last_end_ = t.span;
    return t;
  }

  bool accept_punct(std::string_view p) {
    if (cur().is_punct(p)) {
      advance();
      return true;
    }
    return false;
  }

  bool accept_keyword(std::string_view k) {
    if (cur().is_keyword(k)) {
      advance();
      return true;
    }
    return false;
  }

  const Token& expect_punct(std::string_view p) {
    if (!cur().is_punct(p)) fail("expected '" + std::string(p) + "'");
    return advance();
  }

  std::string expect_identifier() {
    const Token& t = cur();
    // Several contextual words lex as keywords but may name things.
    if (t.kind == TokenKind::Identifier ||
        (t.kind == TokenKind::Keyword &&
         (t.text == "fallback" || t.text == "receive" || t.text == "constructor"))) {
      return advance().text;
    }
    fail("expected identifier");
  }

  [[noreturn]] void fail(const std::string& msg) const {
    std::string found = at_end() ? "end of file" : "'" + cur().text + "'";
    throw ParseError(cur().span, msg + ", found " + found);
  }

  void error(SourceSpan span, std::string msg, Severity sev = Severity::Error) {
    diagnostics_.push_back(Diagnostic{span, sev, std::move(msg)});
  }

  SourceSpan span_from(const SourceSpan& start) const { return merge(start, last_end_); }

  std::string text_between(const SourceSpan& start) const {
    std::uint32_t b = start.byte_offset;
    std::uint32_t e = last_end_.byte_end();
    if (e < b) return {};
    std::string out;
    bool space = false;
    for (char c : text_.substr(b, e - b)) {
      if (std::isspace(static_cast<unsigned char>(c))) {
        space = true;
        continue;
      }
      if (space && !out.empty()) out.push_back(' ');
      space = false;
      out.push_back(c);
    }
    return out;
  }

  struct DepthGuard {
    explicit DepthGuard(Parser& p) : p_(p) {
      if (++p_.depth_ > kMaxDepth) {
        --p_.depth_;
        throw ParseError(p_.cur().span, "nesting too deep");
      }
    }
    ~DepthGuard() { --p_.depth_; }
    Parser& p_;
  };

  // Skips a balanced bracketed region starting at the current opening token.
  void skip_balanced() {
    std::string_view open = cur().text;
    std::string_view close = open == "{" ? "}" : open == "(" ? ")" : "]";
    int depth = 0;
    while (!at_end()) {
      const Token& t = advance();
      if (t.is_punct(open)) ++depth;
      else if (t.is_punct(close) && --depth == 0) return;
    }
    throw ParseError(cur().span, "unbalanced '" + std::string(open) + "'");
  }

  void collect_event_names() {
    for (std::size_t i = 0; i + 1 < tokens_.size(); ++i) {
      if (tokens_[i].is_keyword("event") && tokens_[i + 1].kind == TokenKind::Identifier)
        events_.insert(tokens_[i + 1].text);
    }
  }

  // --- top level ----------------------------------------------------------

  void parse_top_level(SourceUnit& unit) {
    const Token& t = cur();
    if (t.is_keyword("pragma")) {
      advance();
      SourceSpan start = cur().span;
      bool is_solidity = cur().text == "solidity";
      while (!at_end() && !cur().is_punct(";")) advance();
      if (is_solidity) {
        std::string text = text_between(start);
        if (text.size() > 9) unit.pragma_versions.push_back(text.substr(9));
      }
      accept_punct(";");
      return;
    }
    if (t.is_keyword("import") || t.is_keyword("using") || t.text == "error" || t.text == "type") {
      while (!at_end() && !cur().is_punct(";")) advance();
      accept_punct(";");
      return;
    }
    if (t.is_keyword("abstract") || t.is_keyword("contract") || t.is_keyword("interface") ||
        t.is_keyword("library")) {
      parse_contract(unit);
      return;
    }
    if (t.is_keyword("struct") || t.is_keyword("enum")) {
      advance();
      expect_identifier();
      skip_balanced();
      return;
    }
    if (t.is_keyword("function") || t.is_keyword("event")) {
      // Free functions and file-level events are outside the analysed subset.
      SourceSpan s = cur().span;
      while (!at_end() && !cur().is_punct(";") && !cur().is_punct("{")) advance();
      if (cur().is_punct("{")) skip_balanced();
      else accept_punct(";");
      error(span_from(s), "file-level function or event ignored", Severity::Warning);
      return;
    }
    // Constants and user types at file level: skip the declaration.
    if (t.kind == TokenKind::Identifier) {
      SourceSpan s = cur().span;
      while (!at_end() && !cur().is_punct(";") && !cur().is_keyword("contract")) advance();
      accept_punct(";");
      error(span_from(s), "file-level declaration ignored", Severity::Warning);
      return;
    }
    fail("expected contract, interface, library or pragma");
  }

  void recover_to_next_contract() {
    while (!at_end()) {
      const Token& t = cur();
      if (t.is_keyword("contract") || t.is_keyword("interface") || t.is_keyword("library") ||
          t.is_keyword("abstract") || t.is_keyword("pragma"))
        return;
      advance();
    }
  }

  void parse_contract(SourceUnit& unit) {
    ContractDef c;
    SourceSpan start = cur().span;
    if (accept_keyword("abstract")) c.is_abstract = true;
    if (accept_keyword("contract")) c.kind = ContractKind::Contract;
    else if (accept_keyword("interface")) c.kind = ContractKind::Interface;
    else if (accept_keyword("library")) c.kind = ContractKind::Library;
    else fail("expected contract");
    c.name = expect_identifier();
    if (accept_keyword("is")) {
      do {
        SourceSpan bs = cur().span;
        std::string base = expect_identifier();
        while (accept_punct(".")) base += "." + expect_identifier();
        if (cur().is_punct("(")) {
          // Base constructor arguments are not modelled.
          skip_balanced();
          error(span_from(bs), "base constructor arguments ignored", Severity::Note);
        }
        c.bases.push_back(std::move(base));
      } while (accept_punct(","));
    }
    expect_punct("{");
    for (const ContractDef& other : unit.contracts) {
      if (other.name == c.name) {
        error(start, "duplicate contract name '" + c.name + "'");
        break;
      }
    }
    bool closed = false;
    while (!at_end()) {
      if (cur().is_punct("}")) {
        advance();
        closed = true;
        break;
      }
      if (cur().is_keyword("contract") || cur().is_keyword("interface") ||
          cur().is_keyword("library") || cur().is_keyword("pragma") || cur().is_keyword("abstract")) {
        break;  // unterminated contract; the next one starts here
      }
      std::size_t before = pos_;
      SourceSpan member_start = cur().span;
      try {
        parse_member(c);
      } catch (const ParseError& e) {
        error(e.span, e.what());
        recover_member();
        c.skipped_members.push_back(span_from(member_start));
      }
      if (pos_ == before) advance();
    }
    if (!closed) {
      c.unparsed = true;
      error(start, "contract '" + c.name + "' is not terminated; marked unparsed");
    }
    c.span = span_from(start);
    unit.contracts.push_back(std::move(c));
  }

  // Skip to the end of the current member: past a `;` or a balanced block.
  void recover_member() {
    int depth = 0;
    while (!at_end()) {
      const Token& t = cur();
      if (depth == 0 && (t.is_keyword("function") || t.is_keyword("modifier") ||
                         t.is_keyword("event") || t.is_keyword("constructor") ||
                         t.is_keyword("contract") || t.is_keyword("library") ||
                         t.is_keyword("interface"))) {
        return;
      }
      if (t.is_punct("{")) ++depth;
      if (t.is_punct("}")) {
        if (depth == 0) return;
        if (--depth == 0) {
          advance();
          return;
        }
      }
      if (t.is_punct(";") && depth == 0) {
        advance();
        return;
      }
      advance();
    }
  }

  void parse_member(ContractDef& c) {
    const Token& t = cur();
    if (t.is_keyword("function") || t.is_keyword("constructor") ||
        ((t.is_keyword("fallback") || t.is_keyword("receive")) && peek().is_punct("("))) {
      c.functions.push_back(parse_function(c.name));
      return;
    }
    if (t.is_keyword("modifier")) {
      c.modifiers.push_back(parse_modifier());
      return;
    }
    if (t.is_keyword("event")) {
      advance();
      c.events.push_back(expect_identifier());
      skip_balanced();
      accept_keyword("anonymous");
      expect_punct(";");
      return;
    }
    if (t.is_keyword("struct")) {
      advance();
      StructDef sd;
      sd.name = expect_identifier();
      expect_punct("{");
      while (!accept_punct("}")) {
        Param field;
        field.type = parse_type();
        field.name = expect_identifier();
        expect_punct(";");
        sd.fields.push_back(std::move(field));
      }
      c.structs.push_back(std::move(sd));
      return;
    }
    if (t.is_keyword("enum")) {
      advance();
      c.enums.push_back(expect_identifier());
      if (!cur().is_punct("{")) fail("expected '{'");
      skip_balanced();
      return;
    }
    if (t.is_keyword("using") || ((t.text == "error" || t.text == "type") &&
                                  peek().kind == TokenKind::Identifier)) {
      while (!at_end() && !cur().is_punct(";")) advance();
      expect_punct(";");
      return;
    }
    c.state_vars.push_back(parse_state_var());
  }

  StateVarDecl parse_state_var() {
    StateVarDecl v;
    SourceSpan start = cur().span;
    v.type = parse_type();
    for (;;) {
      if (is_visibility(cur()) || cur().is_keyword("immutable") || cur().text == "transient") {
        advance();
      } else if (cur().is_keyword("constant")) {
        advance();
        v.is_constant = true;
      } else if (cur().is_keyword("override")) {
        advance();
        if (cur().is_punct("(")) skip_balanced();
      } else {
        break;
      }
    }
    v.name = expect_identifier();
    if (accept_punct("=")) v.initializer = parse_expr();
    expect_punct(";");
    v.span = span_from(start);
    return v;
  }

  std::vector<Param> parse_params() {
    std::vector<Param> out;
    expect_punct("(");
    if (accept_punct(")")) return out;
    do {
      Param p;
      p.type = parse_type();
      while (is_location(cur()) || cur().is_keyword("indexed") || cur().is_keyword("payable")) advance();
      if (cur().kind == TokenKind::Identifier) p.name = advance().text;
      out.push_back(std::move(p));
    } while (accept_punct(","));
    expect_punct(")");
    return out;
  }

  FunctionDef parse_function(const std::string& contract_name) {
    FunctionDef f;
    SourceSpan start = cur().span;
    if (accept_keyword("constructor")) {
      f.kind = FunctionKind::Constructor;
      f.name = "constructor";
    } else if (accept_keyword("fallback")) {
      f.kind = FunctionKind::Fallback;
      f.name = "fallback";
    } else if (accept_keyword("receive")) {
      f.kind = FunctionKind::Receive;
      f.name = "receive";
    } else {
      advance();  // function
      if (cur().is_punct("(")) {
        f.kind = FunctionKind::Fallback;
        f.name = "fallback";
      } else {
        f.name = expect_identifier();
        if (f.name == contract_name) f.kind = FunctionKind::Constructor;
      }
    }
    f.params = parse_params();
    for (;;) {
      const Token& t = cur();
      if (is_visibility(t)) {
        f.visibility = visibility_of(advance().text);
      } else if (t.is_keyword("pure") || t.is_keyword("view") || t.is_keyword("constant")) {
        f.mutability = advance().text;
      } else if (t.is_keyword("payable")) {
        advance();
        f.mutability = "payable";
        f.is_payable = true;
      } else if (t.is_keyword("virtual")) {
        advance();
      } else if (t.is_keyword("override")) {
        advance();
        if (cur().is_punct("(")) skip_balanced();
      } else if (t.is_keyword("returns")) {
        advance();
        f.returns = parse_params();
      } else if (t.kind == TokenKind::Identifier) {
        ModifierInvocation m;
        SourceSpan ms = cur().span;
        m.name = advance().text;
        while (accept_punct(".")) m.name += "." + expect_identifier();
        if (accept_punct("(")) {
          if (!cur().is_punct(")")) {
            do {
              m.args.push_back(parse_expr());
            } while (accept_punct(","));
          }
          expect_punct(")");
        }
        m.span = span_from(ms);
        f.modifiers.push_back(std::move(m));
      } else {
        break;
      }
    }
    if (cur().is_punct("{")) {
      f.body = parse_block();
    } else {
      expect_punct(";");
    }
    f.span = span_from(start);
    return f;
  }

  ModifierDef parse_modifier() {
    ModifierDef m;
    SourceSpan start = cur().span;
    advance();
    m.name = expect_identifier();
    if (cur().is_punct("(")) m.params = parse_params();
    for (;;) {
      if (accept_keyword("virtual")) continue;
      if (accept_keyword("override")) {
        if (cur().is_punct("(")) skip_balanced();
        continue;
      }
      break;
    }
    if (cur().is_punct("{")) m.body = parse_block();
    else expect_punct(";");
    m.span = span_from(start);
    return m;
  }

  // --- types --------------------------------------------------------------

  std::string parse_type() {
    DepthGuard guard(*this);
    SourceSpan start = cur().span;
    if (accept_keyword("mapping")) {
      expect_punct("(");
      parse_type();
      if (cur().kind == TokenKind::Identifier) advance();  // named key
      expect_punct("=>");
      parse_type();
      if (cur().kind == TokenKind::Identifier) advance();  // named value
      expect_punct(")");
    } else if (accept_keyword("function")) {
      if (!cur().is_punct("(")) fail("expected '('");
      skip_balanced();
      while (cur().is_keyword("internal") || cur().is_keyword("external") || cur().is_keyword("pure") ||
             cur().is_keyword("view") || cur().is_keyword("payable"))
        advance();
      if (accept_keyword("returns")) {
        if (!cur().is_punct("(")) fail("expected '('");
        skip_balanced();
      }
    } else if (accept_keyword("var")) {
      // 0.4 inferred type
    } else {
      std::string name = expect_identifier();
      while (accept_punct(".")) expect_identifier();
      if (name == "address") accept_keyword("payable");
    }
    while (cur().is_punct("[")) {
      advance();
      if (!cur().is_punct("]")) parse_expr();
      expect_punct("]");
    }
    return text_between(start);
  }

  // Decides whether the tokens at the cursor begin a variable declaration.
  bool looks_like_declaration() const {
    const Token& t = cur();
    if (t.is_keyword("mapping") || t.is_keyword("var")) return true;
    if (t.is_keyword("function")) return peek().is_punct("(");
    if (t.kind != TokenKind::Identifier) return false;
    std::size_t i = 1;
    if (is_elementary_type_name(t.text)) {
      if (peek(i).is_punct("(")) return false;  // conversion, e.g. address(this)
      if (t.text == "address" && peek(i).is_keyword("payable")) ++i;
    } else {
      while (peek(i).is_punct(".") && peek(i + 1).kind == TokenKind::Identifier) i += 2;
    }
    // array suffixes: balanced brackets
    while (peek(i).is_punct("[")) {
      int depth = 0;
      for (;;) {
        const Token& b = peek(i);
        if (b.kind == TokenKind::EndOfFile) return false;
        if (b.is_punct("[")) ++depth;
        if (b.is_punct("]") && --depth == 0) break;
        ++i;
      }
      ++i;
    }
    const Token& next = peek(i);
    return next.kind == TokenKind::Identifier || is_location(next);
  }

  // `(` at the cursor: is this a tuple declaration like `(bool ok, ) = ...`?
  bool looks_like_tuple_declaration() const {
    std::size_t i = 1;
    int depth = 1;
    bool element_start = true;
    while (depth > 0) {
      const Token& t = peek(i);
      if (t.kind == TokenKind::EndOfFile) return false;
      if (depth == 1 && element_start && !t.is_punct(",") && !t.is_punct(")")) {
        // A declared element is a type followed by a name or location.
        const Token& n = peek(i + 1);
        if ((t.kind == TokenKind::Identifier || t.is_keyword("mapping")) &&
            (n.kind == TokenKind::Identifier || is_location(n) || n.is_keyword("payable")))
          return true;
        if (t.kind == TokenKind::Identifier && n.is_punct("[")) {
          // `uint[] memory a` inside a tuple
          std::size_t j = i + 1;
          int d = 0;
          for (;;) {
            const Token& b = peek(j);
            if (b.kind == TokenKind::EndOfFile) return false;
            if (b.is_punct("[")) ++d;
            if (b.is_punct("]") && --d == 0) break;
            ++j;
          }
          const Token& after = peek(j + 1);
          if (after.kind == TokenKind::Identifier || is_location(after)) return true;
        }
      }
      element_start = false;
      if (t.is_punct("(") || t.is_punct("[") || t.is_punct("{")) ++depth;
      else if (t.is_punct(")") || t.is_punct("]") || t.is_punct("}")) --depth;
      else if (t.is_punct(",") && depth == 1) element_start = true;
      ++i;
    }
    return false;
  }

  // --- statements ---------------------------------------------------------

  Stmt parse_block() {
    DepthGuard guard(*this);
    Stmt b;
    b.kind = StmtKind::Block;
    SourceSpan start = cur().span;
    expect_punct("{");
    while (!cur().is_punct("}")) {
      if (at_end()) throw ParseError(start, "unterminated block");
      std::size_t before = pos_;
      b.body.push_back(parse_statement_recovering());
      if (pos_ == before) advance();
    }
    advance();
    b.span = span_from(start);
    return b;
  }

  Stmt parse_statement_recovering() {
    SourceSpan start = cur().span;
    std::size_t start_pos = pos_;
    try {
      return parse_statement();
    } catch (const ParseError& e) {
      error(e.span, e.what());
      pos_ = start_pos;
      skip_statement();
      Stmt s;
      s.kind = StmtKind::Opaque;
      s.parse_error = true;
      s.op = e.what();
      s.span = pos_ == start_pos ? start : span_from(start);
      return s;
    }
  }

  // Skips to just past the next `;` at nesting depth zero, or to (but not
  // past) a `}` that closes the enclosing block.
  void skip_statement() {
    int depth = 0;
    while (!at_end()) {
      const Token& t = cur();
      if (t.is_punct("{") || t.is_punct("(") || t.is_punct("[")) ++depth;
      if (t.is_punct("}") || t.is_punct(")") || t.is_punct("]")) {
        if (depth == 0) return;
        --depth;
        if (depth == 0 && t.is_punct("}")) {
          advance();
          return;
        }
      }
      if (t.is_punct(";") && depth == 0) {
        advance();
        return;
      }
      advance();
    }
  }

  Stmt parse_statement() {
    DepthGuard guard(*this);
    const Token& t = cur();
    SourceSpan start = t.span;
    Stmt s;
    if (t.is_punct("{")) return parse_block();
    if (t.is_keyword("unchecked") && peek().is_punct("{")) {
      advance();
      Stmt b = parse_block();
      b.span = span_from(start);
      return b;
    }
    if (t.is_keyword("if")) {
      advance();
      s.kind = StmtKind::If;
      expect_punct("(");
      s.exprs.push_back(parse_expr());
      expect_punct(")");
      s.body.push_back(parse_statement());
      if (accept_keyword("else")) s.else_body.push_back(parse_statement());
    } else if (t.is_keyword("while")) {
      advance();
      s.kind = StmtKind::While;
      expect_punct("(");
      s.exprs.push_back(parse_expr());
      expect_punct(")");
      s.body.push_back(parse_statement());
    } else if (t.is_keyword("do")) {
      advance();
      s.kind = StmtKind::DoWhile;
      s.body.push_back(parse_statement());
      if (!accept_keyword("while")) fail("expected 'while'");
      expect_punct("(");
      s.exprs.push_back(parse_expr());
      expect_punct(")");
      expect_punct(";");
    } else if (t.is_keyword("for")) {
      advance();
      s.kind = StmtKind::For;
      expect_punct("(");
      if (!accept_punct(";")) s.init.push_back(parse_simple_statement());
      if (cur().is_punct(";")) {
        Expr empty;
        empty.span = cur().span;
        s.exprs.push_back(empty);
      } else {
        s.exprs.push_back(parse_expr());
      }
      expect_punct(";");
      if (!cur().is_punct(")")) s.post.push_back(parse_expr());
      expect_punct(")");
      s.body.push_back(parse_statement());
    } else if (t.is_keyword("return")) {
      advance();
      s.kind = StmtKind::Return;
      if (!cur().is_punct(";")) s.exprs.push_back(parse_expr());
      expect_punct(";");
    } else if (t.is_keyword("throw")) {
      advance();
      s.kind = StmtKind::Throw;
      expect_punct(";");
    } else if (t.is_keyword("break") || t.is_keyword("continue")) {
      s.kind = t.is_keyword("break") ? StmtKind::Break : StmtKind::Continue;
      advance();
      expect_punct(";");
    } else if (t.is_keyword("emit")) {
      advance();
      s.kind = StmtKind::Emit;
      Expr call = parse_expr();
      if (call.kind != ExprKind::Call) throw ParseError(call.span, "expected event invocation after 'emit'");
      s.op = expr_path(call.callee());
      s.exprs.assign(call.operands.begin() + 1, call.operands.end());
      expect_punct(";");
    } else if (t.kind == TokenKind::Identifier && t.text == "_" && peek().is_punct(";")) {
      advance();
      advance();
      s.kind = StmtKind::Placeholder;
    } else if (t.is_keyword("assembly")) {
      advance();
      if (cur().kind == TokenKind::String) advance();
      if (cur().is_punct("(")) skip_balanced();
      if (!cur().is_punct("{")) fail("expected '{' after assembly");
      skip_balanced();
      s.kind = StmtKind::Opaque;
      s.op = "inline assembly";
      s.span = span_from(start);
      error(s.span, "inline assembly not analysed", Severity::Warning);
      return s;
    } else if (t.is_keyword("try")) {
      advance();
      while (!at_end() && !cur().is_punct("{")) {
        if (cur().is_punct("(")) skip_balanced();
        else advance();
      }
      if (!cur().is_punct("{")) fail("expected '{' in try statement");
      skip_balanced();
      while (accept_keyword("catch")) {
        while (!at_end() && !cur().is_punct("{")) {
          if (cur().is_punct("(")) skip_balanced();
          else advance();
        }
        if (!cur().is_punct("{")) fail("expected '{' in catch clause");
        skip_balanced();
      }
      s.kind = StmtKind::Opaque;
      s.op = "try/catch";
      s.span = span_from(start);
      error(s.span, "try/catch not analysed", Severity::Warning);
      return s;
    } else if (t.kind == TokenKind::Identifier && t.text == "revert" &&
               peek().kind == TokenKind::Identifier && peek(2).is_punct("(")) {
      advance();
      s.kind = StmtKind::Revert;
      s.op = advance().text;
      Expr args = parse_call_args_only();
      s.exprs = std::move(args.operands);
      expect_punct(";");
    } else {
      s = parse_simple_statement();
      return s;
    }
    s.span = span_from(start);
    return s;
  }

  // Declaration or expression statement, including its terminating `;`.
  Stmt parse_simple_statement() {
    SourceSpan start = cur().span;
    Stmt s;
    if (cur().is_punct("(") && looks_like_tuple_declaration()) {
      s.kind = StmtKind::VarDecl;
      advance();
      for (;;) {
        VarBinding v;
        v.span = cur().span;
        if (!cur().is_punct(",") && !cur().is_punct(")")) {
          SourceSpan vs = cur().span;
          v.type = parse_type();
          while (is_location(cur())) v.location = advance().text;
          v.name = expect_identifier();
          v.span = span_from(vs);
        }
        s.vars.push_back(std::move(v));
        if (accept_punct(")")) break;
        expect_punct(",");
      }
      expect_punct("=");
      s.exprs.push_back(parse_expr());
    } else if (cur().is_keyword("var") && peek().is_punct("(")) {
      s.kind = StmtKind::VarDecl;
      advance();
      advance();
      for (;;) {
        VarBinding v;
        v.type = "var";
        v.span = cur().span;
        if (cur().kind == TokenKind::Identifier) v.name = advance().text;
        s.vars.push_back(std::move(v));
        if (accept_punct(")")) break;
        expect_punct(",");
      }
      expect_punct("=");
      s.exprs.push_back(parse_expr());
    } else if (looks_like_declaration()) {
      s.kind = StmtKind::VarDecl;
      VarBinding v;
      SourceSpan vs = cur().span;
      v.type = parse_type();
      while (is_location(cur())) v.location = advance().text;
      v.name = expect_identifier();
      v.span = span_from(vs);
      s.vars.push_back(std::move(v));
      if (accept_punct("=")) s.exprs.push_back(parse_expr());
    } else {
      Expr e = parse_expr();
      classify_expression_statement(s, std::move(e));
    }
    expect_punct(";");
    s.span = span_from(start);
    return s;
  }

  void classify_expression_statement(Stmt& s, Expr e) {
    if (e.kind == ExprKind::Binary && is_assignment_op(e.name)) {
      s.kind = StmtKind::Assign;
      s.op = e.name;
      s.exprs.push_back(std::move(e.operands[0]));
      s.exprs.push_back(std::move(e.operands[1]));
      return;
    }
    if (e.kind == ExprKind::Call && e.callee().kind == ExprKind::Ident) {
      const std::string& fn = e.callee().name;
      if (fn == "require" || fn == "assert" || fn == "revert") {
        s.kind = fn == "require" ? StmtKind::Require : fn == "assert" ? StmtKind::Assert : StmtKind::Revert;
        s.exprs.assign(e.operands.begin() + 1, e.operands.end());
        return;
      }
      if (events_.count(fn)) {
        s.kind = StmtKind::Emit;
        s.op = fn;
        s.exprs.assign(e.operands.begin() + 1, e.operands.end());
        return;
      }
    }
    s.kind = StmtKind::Expression;
    s.exprs.push_back(std::move(e));
  }

  static std::string expr_path(const Expr& e) {
    if (e.kind == ExprKind::Ident) return e.name;
    if (e.kind == ExprKind::Member) return expr_path(e.base()) + "." + e.name;
    return "<expr>";
  }

  // --- expressions --------------------------------------------------------

  Expr parse_expr() {
    DepthGuard guard(*this);
    return parse_assignment();
  }

  Expr parse_assignment() {
    Expr lhs = parse_conditional();
    if (cur().kind == TokenKind::Punct && is_assignment_op(cur().text)) {
      std::string op = advance().text;
      Expr rhs = parse_assignment();
      return make_binary(std::move(op), std::move(lhs), std::move(rhs));
    }
    return lhs;
  }

  Expr parse_conditional() {
    Expr cond = parse_binary(1);
    if (accept_punct("?")) {
      DepthGuard guard(*this);
      Expr a = parse_assignment();
      expect_punct(":");
      Expr b = parse_assignment();
      Expr e;
      e.kind = ExprKind::Conditional;
      e.span = merge(cond.span, b.span);
      e.operands = {std::move(cond), std::move(a), std::move(b)};
      return e;
    }
    return cond;
  }

  static Expr make_binary(std::string op, Expr lhs, Expr rhs) {
    Expr e;
    e.kind = ExprKind::Binary;
    e.name = std::move(op);
    e.span = merge(lhs.span, rhs.span);
    e.operands.push_back(std::move(lhs));
    e.operands.push_back(std::move(rhs));
    return e;
  }

  Expr parse_binary(int min_prec) {
    DepthGuard guard(*this);
    Expr lhs = parse_unary();
    for (;;) {
      const Token& t = cur();
      if (t.kind != TokenKind::Punct) break;
      int prec = binary_precedence(t.text);
      if (prec == 0 || prec < min_prec) break;
      std::string op = advance().text;
      // `**` is right-associative
      Expr rhs = op == "**" ? parse_binary(prec) : parse_binary(prec + 1);
      lhs = make_binary(std::move(op), std::move(lhs), std::move(rhs));
    }
    return lhs;
  }

  Expr parse_unary() {
    DepthGuard guard(*this);
    const Token& t = cur();
    if (t.kind == TokenKind::Punct &&
        (t.text == "!" || t.text == "-" || t.text == "~" || t.text == "++" || t.text == "--" || t.text == "+")) {
      SourceSpan start = t.span;
      std::string op = advance().text;
      Expr operand = parse_unary();
      Expr e;
      e.kind = ExprKind::Unary;
      e.name = std::move(op);
      e.span = merge(start, operand.span);
      e.operands.push_back(std::move(operand));
      return e;
    }
    if (t.is_keyword("delete")) {
      SourceSpan start = t.span;
      advance();
      Expr operand = parse_unary();
      Expr e;
      e.kind = ExprKind::Unary;
      e.name = "delete";
      e.span = merge(start, operand.span);
      e.operands.push_back(std::move(operand));
      return e;
    }
    return parse_postfix(parse_primary());
  }

  bool at_call_options() const {
    return cur().is_punct("{") && peek().kind == TokenKind::Identifier && peek(2).is_punct(":");
  }

  Expr parse_call_args_only() {
    Expr holder;
    expect_punct("(");
    if (cur().is_punct("{")) {
      // named arguments f({a: 1, b: 2})
      advance();
      while (!cur().is_punct("}")) {
        expect_identifier();
        expect_punct(":");
        holder.operands.push_back(parse_expr());
        if (!accept_punct(",")) break;
      }
      expect_punct("}");
    } else if (!cur().is_punct(")")) {
      do {
        holder.operands.push_back(parse_expr());
      } while (accept_punct(","));
    }
    expect_punct(")");
    return holder;
  }

  Expr parse_postfix(Expr e) {
    for (;;) {
      const Token& t = cur();
      if (t.is_punct(".")) {
        advance();
        SourceSpan name_span = cur().span;
        std::string member;
        if (cur().kind == TokenKind::Identifier || cur().kind == TokenKind::Keyword) member = advance().text;
        else fail("expected member name");
        // 0.4-style `.value(x)` / `.gas(g)` on a function reference become
        // call options, matching the 0.8 `{value: x}` form.
        if ((member == "value" || member == "gas") && cur().is_punct("(") &&
            (e.kind == ExprKind::Member || !e.options.empty())) {
          Expr args = parse_call_args_only();
          if (args.operands.size() != 1) throw ParseError(name_span, "expected one argument to ." + member);
          e.options.push_back(CallOption{member, std::move(args.operands[0])});
          continue;
        }
        Expr m;
        m.kind = ExprKind::Member;
        m.name = std::move(member);
        m.span = merge(e.span, name_span);
        m.operands.push_back(std::move(e));
        e = std::move(m);
      } else if (t.is_punct("[")) {
        advance();
        Expr idx;
        idx.kind = ExprKind::Index;
        idx.operands.push_back(std::move(e));
        if (!cur().is_punct("]")) {
          Expr key = parse_expr();
          if (accept_punct(":")) {
            // slice a[x:y]; keep the start only
            if (!cur().is_punct("]")) parse_expr();
          }
          idx.operands.push_back(std::move(key));
        }
        expect_punct("]");
        idx.span = merge(idx.operands.front().span, last_end_);
        e = std::move(idx);
      } else if (t.is_punct("(")) {
        Expr args = parse_call_args_only();
        Expr call;
        call.kind = ExprKind::Call;
        call.options = std::move(e.options);
        e.options.clear();
        call.span = merge(e.span, last_end_);
        call.operands.push_back(std::move(e));
        for (Expr& a : args.operands) call.operands.push_back(std::move(a));
        e = std::move(call);
      } else if (at_call_options()) {
        advance();
        while (!cur().is_punct("}")) {
          std::string name = expect_identifier();
          expect_punct(":");
          e.options.push_back(CallOption{std::move(name), parse_expr()});
          if (!accept_punct(",")) break;
        }
        expect_punct("}");
      } else if (t.is_punct("++") || t.is_punct("--")) {
        Expr u;
        u.kind = ExprKind::Unary;
        u.name = "x" + advance().text;
        u.span = merge(e.span, last_end_);
        u.operands.push_back(std::move(e));
        e = std::move(u);
      } else {
        return e;
      }
    }
  }

  Expr parse_primary() {
    DepthGuard guard(*this);
    const Token& t = cur();
    Expr e;
    e.span = t.span;
    switch (t.kind) {
      case TokenKind::Identifier: {
        std::string word = advance().text;
        if (word == "now") {
          // `now` is an alias of block.timestamp
          Expr block;
          block.kind = ExprKind::Ident;
          block.name = "block";
          block.span = e.span;
          e.kind = ExprKind::Member;
          e.name = "timestamp";
          e.now_alias = true;
          e.operands.push_back(std::move(block));
          return e;
        }
        if (is_elementary_type_name(word)) {
          e.kind = ExprKind::TypeName;
          e.name = word;
          if (word == "address" && cur().is_keyword("payable")) {
            advance();
            e.name = "address payable";
            e.span = merge(e.span, last_end_);
          }
          return e;
        }
        e.kind = ExprKind::Ident;
        e.name = std::move(word);
        return e;
      }
      case TokenKind::Keyword: {
        if (t.is_keyword("true") || t.is_keyword("false")) {
          e.kind = ExprKind::BoolLit;
          e.name = advance().text;
          return e;
        }
        if (t.is_keyword("payable")) {
          advance();
          e.kind = ExprKind::TypeName;
          e.name = "payable";
          return e;
        }
        if (t.is_keyword("new")) {
          advance();
          SourceSpan ts = cur().span;
          parse_type();
          e.kind = ExprKind::New;
          e.name = text_between(ts);
          e.span = merge(e.span, last_end_);
          return e;
        }
        if (t.is_keyword("mapping") || t.is_keyword("function")) fail("unexpected type in expression");
        fail("unexpected keyword");
      }
      case TokenKind::Number: {
        e.kind = ExprKind::NumberLit;
        e.name = advance().text;
        e.number = parse_decimal(e.name);
        attach_unit(e);
        return e;
      }
      case TokenKind::HexNumber: {
        e.name = advance().text;
        std::size_t digits = 0;
        for (char c : e.name.substr(2))
          if (c != '_') ++digits;
        if (digits == 40) {
          e.kind = ExprKind::AddressLit;
        } else {
          e.kind = ExprKind::NumberLit;
          e.number = parse_hex(e.name);
          attach_unit(e);
        }
        return e;
      }
      case TokenKind::String: {
        e.kind = ExprKind::StringLit;
        e.name = advance().text;
        while (cur().kind == TokenKind::String) {  // adjacent literals concatenate
          e.name += advance().text;
          e.span = merge(e.span, last_end_);
        }
        return e;
      }
      case TokenKind::Punct: {
        if (t.is_punct("(") || t.is_punct("[")) {
          bool inline_array = t.is_punct("[");
          std::string close = inline_array ? "]" : ")";
          advance();
          std::vector<Expr> elems;
          bool trailing_comma = false;
          while (!cur().is_punct(close)) {
            if (cur().is_punct(",")) {
              Expr empty;
              empty.span = cur().span;
              elems.push_back(std::move(empty));
              advance();
              trailing_comma = true;
              continue;
            }
            elems.push_back(parse_expr());
            trailing_comma = false;
            if (!accept_punct(",")) break;
            trailing_comma = true;
          }
          expect_punct(close);
          if (trailing_comma) {
            Expr empty;
            empty.span = last_end_;
            elems.push_back(std::move(empty));
          }
          if (!inline_array && elems.size() == 1 && !trailing_comma) {
            // Parenthesised expression; the node keeps its inner span.
            return std::move(elems.front());
          }
          e.kind = ExprKind::Tuple;
          e.name = inline_array ? "[]" : "()";
          e.operands = std::move(elems);
          e.span = merge(e.span, last_end_);
          return e;
        }
        fail("unexpected token in expression");
      }
      default:
        break;
    }
    fail("expected expression");
  }

  void attach_unit(Expr& e) {
    if (cur().kind != TokenKind::Identifier) return;
    auto mult = unit_multiplier(cur().text);
    if (!mult) return;
    e.unit = advance().text;
    if (e.number) e.number = *e.number * *mult;
    e.span = merge(e.span, last_end_);
  }

  std::string_view text_;
  std::vector<Token> tokens_;
  std::set<std::string, std::less<>> events_;
  std::vector<Diagnostic> diagnostics_;
  std::size_t pos_ = 0;
  SourceSpan last_end_;
  int depth_ = 0;
};

}  // namespace

std::optional<double> unit_multiplier(std::string_view unit) {
  if (unit == "seconds" || unit == "wei") return 1.0;
  if (unit == "minutes") return 60.0;
  if (unit == "hours") return 3600.0;
  if (unit == "days") return 86400.0;
  if (unit == "weeks") return 604800.0;
  if (unit == "years") return 31536000.0;
  if (unit == "gwei") return 1e9;
  if (unit == "szabo") return 1e12;
  if (unit == "finney") return 1e15;
  if (unit == "ether") return 1e18;
  return std::nullopt;
}

bool is_elementary_type_name(std::string_view w) {
  return w == "address" || w == "bool" || w == "string" || is_bytes_type(w) || is_int_type(w, "uint") ||
         is_int_type(w, "int") || w == "fixed" || w == "ufixed";
}

SourceUnit parse(std::string_view text, std::string file) {
  return Parser(text, {}).parse_unit(std::move(file));
}

Expr parse_expression(std::string_view text) { return Parser(text, {}).parse_standalone_expression(); }

Stmt parse_statement(std::string_view text, const std::set<std::string, std::less<>>& events) {
  return Parser(text, events).parse_standalone_statement();
}

}  // namespace solfp
