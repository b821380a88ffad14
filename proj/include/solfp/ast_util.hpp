// SPDX-License-Identifier: Apache-2.0
//
// Small queries over syntax trees that several analyses share.

#pragma once

#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "solfp/ast.hpp"

namespace solfp {

/// Pre-order walk over `e` and every sub-expression, including call options.
void for_each_expr(const Expr& e, const std::function<void(const Expr&)>& fn);

/// Like for_each_expr, but also passes the chain of ancestors (outermost
/// first) of each visited node, within `e`.
void for_each_expr_with_parents(
    const Expr& e, const std::function<void(const Expr&, const std::vector<const Expr*>&)>& fn);

/// Expressions evaluated by the statement itself, not by nested statements:
/// conditions, initializers, assignment operands, arguments, loop post
/// expressions.
std::vector<const Expr*> own_exprs(const Stmt& s);

/// Pre-order walk over `s` and its nested statements. Block statements are
/// visited too.
void for_each_stmt(const Stmt& s, const std::function<void(const Stmt&)>& fn);

/// Calls `fn(lhs, op, rhs, at)` for every write performed by `s` or its
/// nested statements: assignment statements, assignment sub-expressions,
/// `delete x`, `x++` and friends. `rhs` is null for the unary forms.
/// Declarations are not writes.
void for_each_write(
    const Stmt& s,
    const std::function<void(const Expr& lhs, std::string_view op, const Expr* rhs, const Stmt& at)>& fn);

/// Statements whose execution is a single step of control flow: everything
/// except Block.
bool is_simple_stmt(const Stmt& s);

/// Number of simple statements in `s`, counting nested ones.
std::size_t count_simple_statements(const Stmt& s);

bool is_block_timestamp(const Expr& e);
bool is_msg_sender(const Expr& e);
bool is_tx_origin(const Expr& e);
bool is_msg_value(const Expr& e);

/// `address(x)`, `payable(x)`, `address payable(x)` and `uintN(x)` unwrap
/// to `x`; anything else is returned unchanged.
const Expr& strip_conversions(const Expr& e);

/// The identifier at the root of an Ident/Index/Member chain, e.g. `balances`
/// for `balances[msg.sender].amount`. Empty when the root is not a plain
/// identifier.
std::string root_identifier(const Expr& e);

/// Folds literal arithmetic (`24 * 60 * 60`, `1 days`, `-5`). `lookup`
/// resolves identifiers to constant expressions when provided.
std::optional<double> constant_value(
    const Expr& e, const std::function<const Expr*(const std::string&)>& lookup = {});

/// Compact source-like rendering of an expression.
std::string to_source(const Expr& e);

bool is_relational_op(std::string_view op);
bool is_assignment_op(std::string_view op);

}  // namespace solfp
