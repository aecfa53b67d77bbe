#include "rlang/lexer.hpp"

#include <algorithm>
#include <array>
#include <cctype>

namespace rlang {

namespace {

constexpr std::array kKeywords = {
    "import", "Constant", "Action", "Factor", "Proposition", "Goal", "Feature", "MarkovFeature",
    "Markov", "Object", "Class", "Option", "Policy", "Effect", "ActionRestriction", "Execute",
    "Restrict", "Reward", "init", "until", "if", "elif", "else", "with", "and", "or", "not", "in",
    "S", "A", "True", "False",
};

// Longest match first.
constexpr std::array kOperators = {":=", "->", "<=", ">=", "==", "!=", "<", ">", "+", "-", "*", "/", "'"};
constexpr std::array kPunctuation = {"(", ")", "[", "]", ",", ":", "."};

bool is_ident_start(char c) { return std::isalpha(static_cast<unsigned char>(c)) || c == '_'; }
bool is_ident_char(char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_'; }
bool is_digit(char c) { return std::isdigit(static_cast<unsigned char>(c)) != 0; }

class Lexer {
public:
    explicit Lexer(std::string_view src) : src_(src) {}

    std::vector<Token> run() {
        while (pos_ < src_.size()) {
            if (at_line_start_ && depth_ == 0) {
                if (!handle_indentation()) continue;
            }
            lex_in_line();
        }
        if (line_has_tokens_) emit_newline();
        while (indents_.size() > 1) {
            indents_.pop_back();
            tokens_.push_back({TokenKind::Dedent, "", here(0)});
        }
        return std::move(tokens_);
    }

private:
    SourceSpan here(std::size_t length) const { return {line_, col_, length, pos_}; }

    void advance(std::size_t n = 1) {
        for (std::size_t i = 0; i < n && pos_ < src_.size(); ++i) {
            if (src_[pos_] == '\n') {
                ++line_;
                col_ = 1;
            } else {
                ++col_;
            }
            ++pos_;
        }
    }

    void emit_newline() {
        tokens_.push_back({TokenKind::Newline, "", here(0)});
        line_has_tokens_ = false;
    }

    // Returns false when the line was blank or a comment and has been consumed.
    bool handle_indentation() {
        std::size_t width = 0;
        std::size_t p = pos_;
        while (p < src_.size() && (src_[p] == ' ' || src_[p] == '\t' || src_[p] == '\r')) {
            if (src_[p] == '\t') {
                throw LexError("tab characters are not allowed in indentation",
                               SourceSpan{line_, col_ + (p - pos_), 1, p});
            }
            if (src_[p] == ' ') ++width;
            ++p;
        }
        if (p >= src_.size() || src_[p] == '\n' || src_[p] == '#') {
            // Blank or comment-only line: skip it entirely.
            while (pos_ < src_.size() && src_[pos_] != '\n') advance();
            advance();
            return false;
        }
        advance(p - pos_);
        at_line_start_ = false;
        if (width > indents_.back()) {
            indents_.push_back(width);
            tokens_.push_back({TokenKind::Indent, "", here(0)});
        } else {
            while (width < indents_.back()) {
                indents_.pop_back();
                tokens_.push_back({TokenKind::Dedent, "", here(0)});
            }
            if (width != indents_.back()) {
                throw LexError("inconsistent indentation", here(1));
            }
        }
        return true;
    }

    void lex_in_line() {
        const char c = src_[pos_];
        if (c == '\n') {
            if (depth_ == 0) {
                if (line_has_tokens_) emit_newline();
                at_line_start_ = true;
            }
            advance();
            return;
        }
        if (c == ' ' || c == '\r') {
            advance();
            return;
        }
        if (c == '\t') throw LexError("tab characters are not allowed", here(1));
        if (c == '#') {
            while (pos_ < src_.size() && src_[pos_] != '\n') advance();
            return;
        }
        line_has_tokens_ = true;
        if (is_ident_start(c)) {
            std::size_t end = pos_;
            while (end < src_.size() && is_ident_char(src_[end])) ++end;
            std::string word(src_.substr(pos_, end - pos_));
            const auto kind = is_keyword(word) ? TokenKind::Keyword : TokenKind::Identifier;
            tokens_.push_back({kind, word, here(word.size())});
            advance(word.size());
            return;
        }
        if (is_digit(c)) {
            lex_number();
            return;
        }
        if (c == '"') {
            lex_string();
            return;
        }
        for (std::string_view op : kOperators) {
            if (src_.substr(pos_, op.size()) == op) {
                tokens_.push_back({TokenKind::Operator, std::string(op), here(op.size())});
                advance(op.size());
                return;
            }
        }
        for (std::string_view p : kPunctuation) {
            if (src_.substr(pos_, p.size()) == p) {
                if (p == "(" || p == "[") ++depth_;
                if ((p == ")" || p == "]") && depth_ > 0) --depth_;
                tokens_.push_back({TokenKind::Punctuation, std::string(p), here(p.size())});
                advance(p.size());
                return;
            }
        }
        throw LexError(std::string("illegal character '") + c + "'", here(1));
    }

    void lex_number() {
        std::size_t end = pos_;
        while (end < src_.size() && is_digit(src_[end])) ++end;
        bool is_float = false;
        if (end < src_.size() && src_[end] == '.' &&
            !(end + 1 < src_.size() && is_ident_start(src_[end + 1]))) {
            is_float = true;
            ++end;
            while (end < src_.size() && is_digit(src_[end])) ++end;
        }
        if (end < src_.size() && (src_[end] == 'e' || src_[end] == 'E')) {
            std::size_t exp = end + 1;
            if (exp < src_.size() && (src_[exp] == '+' || src_[exp] == '-')) ++exp;
            if (exp < src_.size() && is_digit(src_[exp])) {
                is_float = true;
                end = exp;
                while (end < src_.size() && is_digit(src_[end])) ++end;
            }
        }
        if (end < src_.size() && is_ident_start(src_[end])) {
            throw LexError("malformed numeric literal", here(end - pos_ + 1));
        }
        std::string text(src_.substr(pos_, end - pos_));
        tokens_.push_back({is_float ? TokenKind::FloatLiteral : TokenKind::IntegerLiteral, text,
                           here(text.size())});
        advance(text.size());
    }

    void lex_string() {
        std::size_t end = pos_ + 1;
        std::string value;
        while (end < src_.size() && src_[end] != '"') {
            if (src_[end] == '\n') throw LexError("unterminated string literal", here(end - pos_));
            if (src_[end] == '\\' && end + 1 < src_.size()) {
                ++end;
                value += src_[end] == 'n' ? '\n' : src_[end];
            } else {
                value += src_[end];
            }
            ++end;
        }
        if (end >= src_.size()) throw LexError("unterminated string literal", here(end - pos_));
        tokens_.push_back({TokenKind::StringLiteral, value, here(end - pos_ + 1)});
        advance(end - pos_ + 1);
    }

    std::string_view src_;
    std::size_t pos_ = 0;
    std::size_t line_ = 1;
    std::size_t col_ = 1;
    std::size_t depth_ = 0;
    bool at_line_start_ = true;
    bool line_has_tokens_ = false;
    std::vector<std::size_t> indents_{0};
    std::vector<Token> tokens_;
};

}  // namespace

std::string_view to_string(TokenKind kind) {
    switch (kind) {
    case TokenKind::Keyword: return "keyword";
    case TokenKind::Identifier: return "identifier";
    case TokenKind::IntegerLiteral: return "integer";
    case TokenKind::FloatLiteral: return "float";
    case TokenKind::StringLiteral: return "string";
    case TokenKind::Operator: return "operator";
    case TokenKind::Punctuation: return "punctuation";
    case TokenKind::Indent: return "indent";
    case TokenKind::Dedent: return "dedent";
    case TokenKind::Newline: return "newline";
    }
    return "?";
}

bool is_keyword(std::string_view word) {
    return std::find(kKeywords.begin(), kKeywords.end(), word) != kKeywords.end();
}

std::vector<Token> tokenize(std::string_view source) { return Lexer(source).run(); }

}  // namespace rlang
