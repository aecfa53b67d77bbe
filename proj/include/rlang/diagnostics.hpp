#pragma once

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

namespace rlang {

/// Location of a token or syntax node. Lines and columns are 1-based,
/// `offset` is the byte offset into the source text.
struct SourceSpan {
    std::size_t line = 0;
    std::size_t column = 0;
    std::size_t length = 0;
    std::size_t offset = 0;
};

enum class ErrorKind {
    Lex,
    Parse,
    Type,
    UnresolvedName,
    DuplicateName,
    Domain,
    Eval,
    Compile,
    IllFormedComposition,
    Recursion,
    FullRestriction,
    Schema,
    DuplicateKey,
    Config,
    Import,
};

std::string_view to_string(ErrorKind kind);

/// Base class of every diagnostic raised by the library.
class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& message, std::optional<SourceSpan> span = std::nullopt);

    ErrorKind kind() const noexcept { return kind_; }
    const std::optional<SourceSpan>& span() const noexcept { return span_; }
    const std::string& message() const noexcept { return message_; }

private:
    ErrorKind kind_;
    std::optional<SourceSpan> span_;
    std::string message_;
};

#define RLANG_DECLARE_ERROR(Name, Kind)                                                   \
    class Name : public Error {                                                           \
    public:                                                                               \
        explicit Name(const std::string& message, std::optional<SourceSpan> span = {})    \
            : Error(ErrorKind::Kind, message, span) {}                                    \
    }

RLANG_DECLARE_ERROR(LexError, Lex);
RLANG_DECLARE_ERROR(ParseError, Parse);
RLANG_DECLARE_ERROR(TypeError, Type);
RLANG_DECLARE_ERROR(UnresolvedName, UnresolvedName);
RLANG_DECLARE_ERROR(DuplicateName, DuplicateName);
RLANG_DECLARE_ERROR(DomainError, Domain);
RLANG_DECLARE_ERROR(EvalError, Eval);
RLANG_DECLARE_ERROR(CompileError, Compile);
RLANG_DECLARE_ERROR(IllFormedComposition, IllFormedComposition);
RLANG_DECLARE_ERROR(RecursionError, Recursion);
RLANG_DECLARE_ERROR(FullRestriction, FullRestriction);
RLANG_DECLARE_ERROR(SchemaError, Schema);
RLANG_DECLARE_ERROR(DuplicateKey, DuplicateKey);
RLANG_DECLARE_ERROR(ConfigError, Config);
RLANG_DECLARE_ERROR(ImportError, Import);

#undef RLANG_DECLARE_ERROR

/// Machine-readable single line: `file:line:col: severity: message`.
std::string format_diagnostic(std::string_view file, const Error& error,
                              std::string_view severity = "error");

}  // namespace rlang
