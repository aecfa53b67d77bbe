#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "rlang/diagnostics.hpp"

namespace rlang {

enum class TokenKind {
    Keyword,
    Identifier,
    IntegerLiteral,
    FloatLiteral,
    StringLiteral,
    Operator,
    Punctuation,
    Indent,
    Dedent,
    Newline,
};

std::string_view to_string(TokenKind kind);

struct Token {
    TokenKind kind;
    std::string lexeme;
    SourceSpan span;

    bool is(TokenKind k, std::string_view text) const { return kind == k && lexeme == text; }
    bool is_keyword(std::string_view text) const { return is(TokenKind::Keyword, text); }
    bool is_symbol(std::string_view text) const {
        return (kind == TokenKind::Operator || kind == TokenKind::Punctuation) && lexeme == text;
    }
};

bool is_keyword(std::string_view word);

/// Splits RLang source into tokens. Blocks are indentation-delimited: the
/// lexer emits Indent/Dedent tokens from an indentation stack and a Newline at
/// the end of each logical line. Newlines inside brackets are joined.
/// Comments (`#` to end of line) and blank lines produce no tokens.
std::vector<Token> tokenize(std::string_view source);

}  // namespace rlang
