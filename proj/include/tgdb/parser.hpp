#pragma once

#include <string_view>
#include <vector>

#include "tgdb/ast.hpp"
#include "tgdb/lexer.hpp"

namespace tgdb {

// Parses a sequence of statements separated by optional ';'. A statement
// wrapped in square brackets (the shell's multi-line form) is unwrapped.
std::vector<Statement> parse_statements(std::string_view text);

// Parses exactly one statement (an optional trailing ';' is allowed).
Statement parse_statement(std::string_view text);

Expr parse_expression(std::string_view text);

}  // namespace tgdb
