#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "rlang/ast.hpp"
#include "rlang/lexer.hpp"

namespace rlang {

/// Builds the declaration list from a token stream. `import "<path>"` lines
/// must precede all declarations. Stops at the first error (ParseError).
Program parse_program(const std::vector<Token>& tokens);

/// tokenize + parse_program.
Program parse_source(std::string_view source);

/// Canonical text: 4-space indentation, minimal parentheses. Re-parsing the
/// output yields a structurally equal program.
std::string pretty_print(const Program& program);
std::string pretty_print(const std::vector<Declaration>& declarations);
std::string print_expr(const Expr& expr);
std::string print_statement(const Statement& statement, int indent = 0);

}  // namespace rlang
