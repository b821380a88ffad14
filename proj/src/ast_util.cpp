// SPDX-License-Identifier: Apache-2.0

#include "solfp/ast_util.hpp"

#include <cmath>
#include <sstream>

#include "solfp/parser.hpp"

namespace solfp {

void for_each_expr(const Expr& e, const std::function<void(const Expr&)>& fn) {
  fn(e);
  for (const Expr& child : e.operands) for_each_expr(child, fn);
  for (const CallOption& o : e.options) for_each_expr(o.value, fn);
}

namespace {

void walk_with_parents(const Expr& e, std::vector<const Expr*>& stack,
                       const std::function<void(const Expr&, const std::vector<const Expr*>&)>& fn) {
  fn(e, stack);
  stack.push_back(&e);
  for (const Expr& child : e.operands) walk_with_parents(child, stack, fn);
  for (const CallOption& o : e.options) walk_with_parents(o.value, stack, fn);
  stack.pop_back();
}

}  // namespace

void for_each_expr_with_parents(
    const Expr& e, const std::function<void(const Expr&, const std::vector<const Expr*>&)>& fn) {
  std::vector<const Expr*> stack;
  walk_with_parents(e, stack, fn);
}

std::vector<const Expr*> own_exprs(const Stmt& s) {
  std::vector<const Expr*> out;
  for (const Expr& e : s.exprs)
    if (e.kind != ExprKind::Empty) out.push_back(&e);
  for (const Expr& e : s.post) out.push_back(&e);
  return out;
}

void for_each_stmt(const Stmt& s, const std::function<void(const Stmt&)>& fn) {
  fn(s);
  for (const Stmt& c : s.init) for_each_stmt(c, fn);
  for (const Stmt& c : s.body) for_each_stmt(c, fn);
  for (const Stmt& c : s.else_body) for_each_stmt(c, fn);
}

void for_each_write(
    const Stmt& s,
    const std::function<void(const Expr& lhs, std::string_view op, const Expr* rhs, const Stmt& at)>& fn) {
  for_each_stmt(s, [&](const Stmt& st) {
    if (st.kind == StmtKind::Assign && st.exprs.size() == 2) fn(st.exprs[0], st.op, &st.exprs[1], st);
    for (const Expr* root : own_exprs(st)) {
      for_each_expr(*root, [&](const Expr& e) {
        if (e.kind == ExprKind::Binary && is_assignment_op(e.name)) {
          fn(e.operands[0], e.name, &e.operands[1], st);
        } else if (e.kind == ExprKind::Unary && (e.name == "delete" || e.name == "++" || e.name == "--" ||
                                                 e.name == "x++" || e.name == "x--")) {
          fn(e.operands[0], e.name, nullptr, st);
        }
      });
    }
  });
}

bool is_simple_stmt(const Stmt& s) { return s.kind != StmtKind::Block; }

std::size_t count_simple_statements(const Stmt& s) {
  std::size_t n = 0;
  for_each_stmt(s, [&](const Stmt& x) {
    if (is_simple_stmt(x)) ++n;
  });
  return n;
}

namespace {

bool is_builtin_member(const Expr& e, std::string_view base, std::string_view member) {
  return e.kind == ExprKind::Member && e.name == member && e.base().kind == ExprKind::Ident &&
         e.base().name == base;
}

}  // namespace

bool is_block_timestamp(const Expr& e) { return is_builtin_member(e, "block", "timestamp"); }
bool is_msg_sender(const Expr& e) { return is_builtin_member(strip_conversions(e), "msg", "sender"); }
bool is_tx_origin(const Expr& e) { return is_builtin_member(strip_conversions(e), "tx", "origin"); }
bool is_msg_value(const Expr& e) { return is_builtin_member(e, "msg", "value"); }

const Expr& strip_conversions(const Expr& e) {
  const Expr* cur = &e;
  while (cur->kind == ExprKind::Call && cur->arg_count() == 1 && cur->callee().kind == ExprKind::TypeName) {
    const std::string& t = cur->callee().name;
    if (t == "address" || t == "payable" || t == "address payable" || t.rfind("uint", 0) == 0) {
      cur = &cur->arg(0);
    } else {
      break;
    }
  }
  return *cur;
}

std::string root_identifier(const Expr& e) {
  const Expr* cur = &e;
  while (cur->kind == ExprKind::Index || cur->kind == ExprKind::Member) cur = &cur->base();
  return cur->kind == ExprKind::Ident ? cur->name : std::string();
}

std::optional<double> constant_value(const Expr& e,
                                     const std::function<const Expr*(const std::string&)>& lookup) {
  switch (e.kind) {
    case ExprKind::NumberLit:
      return e.number;
    case ExprKind::Ident:
      if (lookup) {
        if (const Expr* def = lookup(e.name); def && def != &e) return constant_value(*def, {});
      }
      return std::nullopt;
    case ExprKind::Unary:
      if (e.name == "-") {
        auto v = constant_value(e.operands[0], lookup);
        if (v) return -*v;
      }
      if (e.name == "+") return constant_value(e.operands[0], lookup);
      return std::nullopt;
    case ExprKind::Binary: {
      auto a = constant_value(e.operands[0], lookup);
      if (!a) return std::nullopt;
      auto b = constant_value(e.operands[1], lookup);
      if (!b) return std::nullopt;
      if (e.name == "+") return *a + *b;
      if (e.name == "-") return *a - *b;
      if (e.name == "*") return *a * *b;
      if (e.name == "/" && *b != 0) return std::trunc(*a / *b);
      if (e.name == "%" && *b != 0) return std::fmod(*a, *b);
      if (e.name == "**") return std::pow(*a, *b);
      return std::nullopt;
    }
    case ExprKind::Call:
      // uint256(86400) and similar conversions
      if (e.arg_count() == 1 && e.callee().kind == ExprKind::TypeName) return constant_value(e.arg(0), lookup);
      return std::nullopt;
    default:
      return std::nullopt;
  }
}

namespace {

void render(const Expr& e, std::ostringstream& out) {
  switch (e.kind) {
    case ExprKind::Ident:
    case ExprKind::AddressLit:
    case ExprKind::BoolLit:
    case ExprKind::StringLit:
    case ExprKind::TypeName:
      out << e.name;
      return;
    case ExprKind::NumberLit:
      out << e.name;
      if (!e.unit.empty()) out << ' ' << e.unit;
      return;
    case ExprKind::Member:
      if (e.now_alias) {
        out << "now";
        return;
      }
      render(e.base(), out);
      out << '.' << e.name;
      for (const CallOption& o : e.options) {
        out << '{' << o.name << ": ";
        render(o.value, out);
        out << '}';
      }
      return;
    case ExprKind::Index:
      render(e.base(), out);
      out << '[';
      if (e.operands.size() > 1) render(e.operands[1], out);
      out << ']';
      return;
    case ExprKind::Call: {
      render(e.callee(), out);
      if (!e.options.empty()) {
        out << '{';
        for (std::size_t i = 0; i < e.options.size(); ++i) {
          if (i) out << ", ";
          out << e.options[i].name << ": ";
          render(e.options[i].value, out);
        }
        out << '}';
      }
      out << '(';
      for (std::size_t i = 0; i < e.arg_count(); ++i) {
        if (i) out << ", ";
        render(e.arg(i), out);
      }
      out << ')';
      return;
    }
    case ExprKind::Binary: {
      auto wrap = [&](const Expr& child) {
        bool paren = child.kind == ExprKind::Binary || child.kind == ExprKind::Conditional;
        if (paren) out << '(';
        render(child, out);
        if (paren) out << ')';
      };
      wrap(e.operands[0]);
      out << ' ' << e.name << ' ';
      wrap(e.operands[1]);
      return;
    }
    case ExprKind::Unary:
      if (e.name.size() == 3 && e.name[0] == 'x') {
        render(e.operands[0], out);
        out << e.name.substr(1);
      } else {
        out << e.name;
        if (e.name == "delete") out << ' ';
        render(e.operands[0], out);
      }
      return;
    case ExprKind::Conditional:
      render(e.operands[0], out);
      out << " ? ";
      render(e.operands[1], out);
      out << " : ";
      render(e.operands[2], out);
      return;
    case ExprKind::Tuple: {
      bool inline_array = e.name == "[]";
      out << (inline_array ? '[' : '(');
      for (std::size_t i = 0; i < e.operands.size(); ++i) {
        if (i) out << ", ";
        render(e.operands[i], out);
      }
      out << (inline_array ? ']' : ')');
      return;
    }
    case ExprKind::New:
      out << "new " << e.name;
      return;
    case ExprKind::Empty:
      return;
    case ExprKind::Opaque:
      out << "<?>";
      return;
  }
}

}  // namespace

std::string to_source(const Expr& e) {
  std::ostringstream out;
  render(e, out);
  return out.str();
}

bool is_relational_op(std::string_view op) {
  return op == "<" || op == ">" || op == "<=" || op == ">=" || op == "==" || op == "!=";
}

bool is_assignment_op(std::string_view op) {
  return op == "=" || op == "+=" || op == "-=" || op == "*=" || op == "/=" || op == "%=" ||
         op == "|=" || op == "&=" || op == "^=" || op == "<<=" || op == ">>=" || op == ">>>=";
}

}  // namespace solfp
