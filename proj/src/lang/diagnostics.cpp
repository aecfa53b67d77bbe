#include "rlang/diagnostics.hpp"

namespace rlang {

std::string_view to_string(ErrorKind kind) {
    switch (kind) {
    case ErrorKind::Lex: return "LexError";
    case ErrorKind::Parse: return "ParseError";
    case ErrorKind::Type: return "TypeError";
    case ErrorKind::UnresolvedName: return "UnresolvedName";
    case ErrorKind::DuplicateName: return "DuplicateName";
    case ErrorKind::Domain: return "DomainError";
    case ErrorKind::Eval: return "EvalError";
    case ErrorKind::Compile: return "CompileError";
    case ErrorKind::IllFormedComposition: return "IllFormedComposition";
    case ErrorKind::Recursion: return "RecursionError";
    case ErrorKind::FullRestriction: return "FullRestriction";
    case ErrorKind::Schema: return "SchemaError";
    case ErrorKind::DuplicateKey: return "DuplicateKey";
    case ErrorKind::Config: return "ConfigError";
    case ErrorKind::Import: return "ImportError";
    }
    return "Error";
}

Error::Error(ErrorKind kind, const std::string& message, std::optional<SourceSpan> span)
    : std::runtime_error(std::string(to_string(kind)) + ": " + message),
      kind_(kind),
      span_(span),
      message_(message) {}

std::string format_diagnostic(std::string_view file, const Error& error, std::string_view severity) {
    std::string out(file);
    if (error.span()) {
        out += ':' + std::to_string(error.span()->line) + ':' + std::to_string(error.span()->column);
    } else {
        out += ":0:0";
    }
    out += ": ";
    out += severity;
    out += ": ";
    out += to_string(error.kind());
    out += ": ";
    out += error.message();
    return out;
}

}  // namespace rlang
