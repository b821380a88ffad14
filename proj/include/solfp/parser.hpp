// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <set>
#include <string>
#include <string_view>

#include "solfp/ast.hpp"

namespace solfp {

/// Parses a whole source file. Never throws on malformed input: problems are
/// reported in `SourceUnit::diagnostics`, unsupported statements become
/// `StmtKind::Opaque`, and a contract whose body cannot be recovered is kept
/// with `unparsed = true`.
SourceUnit parse(std::string_view text, std::string file = {});

/// Parses a single expression. Returns an Opaque expression on failure.
Expr parse_expression(std::string_view text);

/// Parses a single statement. `events` lists names for which a bare call
/// statement is read as a 0.4-style event emission.
Stmt parse_statement(std::string_view text, const std::set<std::string, std::less<>>& events = {});

/// Multiplier applied to a number literal carrying `unit`, or nullopt when
/// `unit` is not a Solidity time or ether unit.
std::optional<double> unit_multiplier(std::string_view unit);

bool is_elementary_type_name(std::string_view word);

}  // namespace solfp
