#include "rlang/parser.hpp"

#include <charconv>
#include <initializer_list>

namespace rlang {

namespace {

enum class BodyContext { Policy, Effect, Restriction };

std::string describe(const Token& tok) {
    switch (tok.kind) {
    case TokenKind::Indent: return "indent";
    case TokenKind::Dedent: return "dedent";
    case TokenKind::Newline: return "end of line";
    case TokenKind::StringLiteral: return "string \"" + tok.lexeme + "\"";
    default: return "'" + tok.lexeme + "'";
    }
}

class Parser {
public:
    explicit Parser(const std::vector<Token>& tokens) : toks_(tokens) {}

    Program run() {
        Program program;
        skip_newlines();
        while (!at_end()) {
            if (peek().is_keyword("import")) {
                if (!program.declarations.empty()) {
                    throw ParseError("import must precede all declarations", peek().span);
                }
                const Token& kw = advance();
                const Token& path = expect_kind(TokenKind::StringLiteral, "import path string");
                program.imports.push_back({path.lexeme, kw.span});
                expect_newline();
            } else {
                program.declarations.push_back(parse_declaration());
            }
            skip_newlines();
        }
        return program;
    }

private:
    // ---- token helpers ----------------------------------------------------
    bool at_end() const { return pos_ >= toks_.size(); }

    const Token& peek(std::size_t k = 0) const {
        static const Token eof{TokenKind::Newline, "<eof>", {}};
        if (pos_ + k >= toks_.size()) {
            if (!toks_.empty()) {
                static thread_local Token end;
                end = Token{TokenKind::Newline, "<eof>", toks_.back().span};
                end.span.offset += end.span.length;
                end.span.column += end.span.length;
                end.span.length = 0;
                return end;
            }
            return eof;
        }
        return toks_[pos_ + k];
    }

    const Token& advance() {
        const Token& t = toks_.at(pos_);
        ++pos_;
        last_ = &t;
        return t;
    }

    [[noreturn]] void fail(std::string_view expected) const {
        const Token& t = peek();
        std::string found = at_end() ? "end of input" : describe(t);
        throw ParseError("expected " + std::string(expected) + ", found " + found, t.span);
    }

    const Token& expect_kind(TokenKind kind, std::string_view what) {
        if (at_end() || peek().kind != kind) fail(what);
        return advance();
    }

    const Token& expect_symbol(std::string_view sym) {
        if (at_end() || !peek().is_symbol(sym)) fail("'" + std::string(sym) + "'");
        return advance();
    }

    const Token& expect_keyword(std::string_view kw) {
        if (at_end() || !peek().is_keyword(kw)) fail("'" + std::string(kw) + "'");
        return advance();
    }

    void expect_newline() {
        if (at_end()) return;  // the lexer always closes the last line, tolerate hand-made streams
        if (peek().kind != TokenKind::Newline) fail("end of line");
        advance();
    }

    void skip_newlines() {
        while (!at_end() && peek().kind == TokenKind::Newline) advance();
    }

    bool accept_symbol(std::string_view sym) {
        if (!at_end() && peek().is_symbol(sym)) {
            advance();
            return true;
        }
        return false;
    }

    SourceSpan span_from(const SourceSpan& start) const {
        SourceSpan s = start;
        if (last_ && last_->span.offset + last_->span.length >= start.offset) {
            s.length = last_->span.offset + last_->span.length - start.offset;
        }
        return s;
    }

    // ---- declarations -----------------------------------------------------
    Declaration parse_declaration() {
        const Token& kw = peek();
        if (kw.kind != TokenKind::Keyword) fail("a declaration keyword");
        const std::string word = kw.lexeme;
        const SourceSpan start = kw.span;
        advance();

        Declaration decl;
        if (word == "Markov") {
            expect_keyword("Feature");
            decl.kind = DeclarationKind::MarkovFeature;
        } else if (word == "Constant") {
            decl.kind = DeclarationKind::Constant;
        } else if (word == "Action") {
            decl.kind = DeclarationKind::Action;
        } else if (word == "Factor") {
            decl.kind = DeclarationKind::Factor;
        } else if (word == "Proposition") {
            decl.kind = DeclarationKind::Proposition;
        } else if (word == "Goal") {
            decl.kind = DeclarationKind::Goal;
        } else if (word == "Feature") {
            decl.kind = DeclarationKind::Feature;
        } else if (word == "MarkovFeature") {
            decl.kind = DeclarationKind::MarkovFeature;
        } else if (word == "Object") {
            decl.kind = DeclarationKind::Object;
        } else if (word == "Class") {
            decl.kind = DeclarationKind::ClassDefinition;
        } else if (word == "Option") {
            decl.kind = DeclarationKind::Option;
        } else if (word == "Policy") {
            decl.kind = DeclarationKind::Policy;
        } else if (word == "Effect") {
            decl.kind = DeclarationKind::Effect;
        } else if (word == "ActionRestriction") {
            decl.kind = DeclarationKind::ActionRestriction;
        } else {
            throw ParseError("expected a declaration keyword, found '" + word + "'", start);
        }
        decl.name = expect_kind(TokenKind::Identifier, "declaration name").lexeme;

        switch (decl.kind) {
        case DeclarationKind::ClassDefinition: parse_class_body(decl); break;
        case DeclarationKind::Option: parse_option_body(decl); break;
        case DeclarationKind::Policy:
            expect_symbol(":");
            decl.body = parse_block(BodyContext::Policy);
            break;
        case DeclarationKind::Effect:
            expect_symbol(":");
            decl.body = parse_block(BodyContext::Effect);
            break;
        case DeclarationKind::ActionRestriction:
            expect_symbol(":");
            decl.body = parse_block(BodyContext::Restriction);
            break;
        default:
            expect_symbol(":=");
            decl.value = parse_expr();
            expect_newline();
            break;
        }
        decl.span = span_from(start);
        return decl;
    }

    void parse_class_body(Declaration& decl) {
        if (accept_symbol("(")) {
            decl.parent_class = expect_kind(TokenKind::Identifier, "parent class name").lexeme;
            expect_symbol(")");
        }
        expect_symbol(":");
        expect_newline();
        expect_kind(TokenKind::Indent, "an indented attribute block");
        while (!at_end() && peek().kind != TokenKind::Dedent) {
            AttributeDefinition attr;
            const Token& name = expect_kind(TokenKind::Identifier, "attribute name");
            attr.name = name.lexeme;
            expect_symbol(":");
            attr.type_name = expect_kind(TokenKind::Identifier, "attribute type").lexeme;
            attr.span = span_from(name.span);
            expect_newline();
            decl.attributes.push_back(std::move(attr));
        }
        expect_kind(TokenKind::Dedent, "end of class block");
    }

    void parse_option_body(Declaration& decl) {
        expect_symbol(":");
        expect_newline();
        expect_kind(TokenKind::Indent, "an indented option block");
        expect_keyword("init");
        decl.init = parse_expr();
        accept_symbol(":");
        expect_newline();
        decl.body = parse_block_after_newline(BodyContext::Policy);
        expect_keyword("until");
        decl.until = parse_expr();
        expect_newline();
        expect_kind(TokenKind::Dedent, "end of option block");
    }

    // ':' has been consumed; parses NEWLINE INDENT statements DEDENT.
    std::vector<Statement> parse_block(BodyContext ctx) {
        expect_newline();
        return parse_block_after_newline(ctx);
    }

    std::vector<Statement> parse_block_after_newline(BodyContext ctx) {
        expect_kind(TokenKind::Indent, "an indented block");
        std::vector<Statement> body;
        while (!at_end() && peek().kind != TokenKind::Dedent) {
            body.push_back(parse_statement(ctx));
        }
        expect_kind(TokenKind::Dedent, "end of block");
        return body;
    }

    // ---- statements -------------------------------------------------------
    Statement parse_statement(BodyContext ctx) {
        if (peek().is_keyword("if")) return parse_conditional(ctx);
        const SourceSpan start = peek().span;
        Statement first = parse_simple(ctx);
        if (!peek().is_keyword("with")) {
            expect_newline();
            return first;
        }
        Statement prob;
        prob.kind = StatementKind::Probabilistic;
        prob.alternatives.push_back({{std::move(first)}, parse_with()});
        while (true) {
            if (peek().is_keyword("or")) {
                advance();
            } else if (peek().kind == TokenKind::Newline && pos_ + 1 < toks_.size() &&
                       peek(1).is_keyword("or")) {
                advance();
                advance();
            } else {
                break;
            }
            Statement alt = parse_simple(ctx);
            if (!peek().is_keyword("with")) fail("'with' after alternative");
            prob.alternatives.push_back({{std::move(alt)}, parse_with()});
        }
        expect_newline();
        prob.span = span_from(start);
        return prob;
    }

    ExprPtr parse_with() {
        expect_keyword("with");
        const Token& p = expect_kind(TokenKind::Identifier, "'P'");
        if (p.lexeme != "P") throw ParseError("expected 'P', found '" + p.lexeme + "'", p.span);
        expect_symbol("(");
        ExprPtr prob = parse_expr();
        expect_symbol(")");
        return prob;
    }

    Statement parse_conditional(BodyContext ctx) {
        Statement st;
        st.kind = StatementKind::Conditional;
        const SourceSpan start = peek().span;
        bool first = true;
        while (true) {
            ConditionalBranch branch;
            branch.span = peek().span;
            if (first ? peek().is_keyword("if") : peek().is_keyword("elif")) {
                advance();
                branch.guard = parse_expr();
            } else if (!first && peek().is_keyword("else")) {
                advance();
            } else {
                break;
            }
            expect_symbol(":");
            branch.body = parse_block(ctx);
            const bool is_else = !branch.guard;
            st.branches.push_back(std::move(branch));
            first = false;
            if (is_else) break;
        }
        st.span = span_from(start);
        return st;
    }

    Statement parse_simple(BodyContext ctx) {
        Statement st;
        const Token& t = peek();
        st.span = t.span;
        auto require = [&](BodyContext wanted, const char* what) {
            if (ctx != wanted) {
                throw ParseError(std::string(what) + " statement is not allowed here", t.span);
            }
        };
        if (t.is_keyword("Execute")) {
            require(BodyContext::Policy, "Execute");
            advance();
            st.kind = StatementKind::Execute;
            st.expr = parse_expr();
        } else if (t.is_keyword("Reward")) {
            require(BodyContext::Effect, "Reward");
            advance();
            st.kind = StatementKind::Reward;
            st.expr = parse_expr();
        } else if (t.is_keyword("Restrict")) {
            require(BodyContext::Restriction, "Restrict");
            advance();
            st.kind = StatementKind::Restrict;
            st.expr = parse_expr();
        } else if (t.is_symbol("->")) {
            require(BodyContext::Effect, "effect reference");
            advance();
            st.kind = StatementKind::Reference;
            st.reference = expect_kind(TokenKind::Identifier, "effect name").lexeme;
        } else if ((t.is_keyword("S") || t.kind == TokenKind::Identifier) && peek(1).is_symbol("'")) {
            require(BodyContext::Effect, "prediction");
            st.kind = StatementKind::Predict;
            advance();
            advance();
            if (t.is_keyword("S")) {
                if (accept_symbol(".")) {
                    st.target.kind = PredictionTargetKind::ObjectAttribute;
                    st.target.object = expect_kind(TokenKind::Identifier, "object name").lexeme;
                    expect_symbol(".");
                    st.target.attribute = expect_kind(TokenKind::Identifier, "attribute name").lexeme;
                } else {
                    st.target.kind = PredictionTargetKind::WholeState;
                }
            } else {
                st.target.kind = PredictionTargetKind::Factor;
                st.target.factor = t.lexeme;
            }
            expect_symbol("->");
            st.expr = parse_expr();
        } else {
            switch (ctx) {
            case BodyContext::Policy: fail("'Execute', 'if'");
            case BodyContext::Effect: fail("'Reward', a prediction, '->' or 'if'");
            case BodyContext::Restriction: fail("'Restrict' or 'if'");
            }
        }
        st.span = span_from(st.span);
        return st;
    }

    // ---- expressions ------------------------------------------------------
    ExprPtr parse_expr() { return parse_or(); }

    ExprPtr parse_or() {
        ExprPtr lhs = parse_and();
        while (peek().is_keyword("or") && !at_end()) {
            // `or` followed by a statement keyword continues a probabilistic statement.
            const Token& next = peek(1);
            if (next.is_keyword("Execute") || next.is_keyword("Reward") || next.is_keyword("Restrict") ||
                next.is_symbol("->") || (next.kind != TokenKind::Keyword && peek(2).is_symbol("'") &&
                                         peek(3).is_symbol("->"))) {
                break;
            }
            advance();
            ExprPtr rhs = parse_and();
            lhs = make_binary(BinaryOp::Or, lhs, rhs, span_from(lhs->span));
        }
        return lhs;
    }

    ExprPtr parse_and() {
        ExprPtr lhs = parse_not();
        while (peek().is_keyword("and") && !at_end()) {
            advance();
            ExprPtr rhs = parse_not();
            lhs = make_binary(BinaryOp::And, lhs, rhs, span_from(lhs->span));
        }
        return lhs;
    }

    ExprPtr parse_not() {
        if (peek().is_keyword("not") && !at_end()) {
            const SourceSpan start = advance().span;
            ExprPtr operand = parse_not();
            return make_node(ExprKind::Not, {operand}, span_from(start));
        }
        return parse_comparison();
    }

    static bool comparison_op(const Token& t, BinaryOp& op) {
        static const std::pair<const char*, BinaryOp> table[] = {
            {"<", BinaryOp::Lt}, {"<=", BinaryOp::Le}, {">", BinaryOp::Gt},
            {">=", BinaryOp::Ge}, {"==", BinaryOp::Eq}, {"!=", BinaryOp::Ne},
        };
        if (t.is_keyword("in")) {
            op = BinaryOp::In;
            return true;
        }
        if (t.kind != TokenKind::Operator) return false;
        for (const auto& [text, value] : table) {
            if (t.lexeme == text) {
                op = value;
                return true;
            }
        }
        return false;
    }

    ExprPtr parse_comparison() {
        ExprPtr lhs = parse_additive();
        BinaryOp op;
        if (!at_end() && comparison_op(peek(), op)) {
            advance();
            ExprPtr rhs = parse_additive();
            BinaryOp again;
            if (!at_end() && comparison_op(peek(), again)) {
                throw ParseError("comparison operators cannot be chained; add parentheses", peek().span);
            }
            return make_binary(op, lhs, rhs, span_from(lhs->span));
        }
        return lhs;
    }

    ExprPtr parse_additive() {
        ExprPtr lhs = parse_multiplicative();
        while (!at_end() && (peek().is_symbol("+") || peek().is_symbol("-"))) {
            const BinaryOp op = advance().lexeme == "+" ? BinaryOp::Add : BinaryOp::Sub;
            ExprPtr rhs = parse_multiplicative();
            lhs = make_binary(op, lhs, rhs, span_from(lhs->span));
        }
        return lhs;
    }

    ExprPtr parse_multiplicative() {
        ExprPtr lhs = parse_unary();
        while (!at_end() && (peek().is_symbol("*") || peek().is_symbol("/"))) {
            const BinaryOp op = advance().lexeme == "*" ? BinaryOp::Mul : BinaryOp::Div;
            ExprPtr rhs = parse_unary();
            lhs = make_binary(op, lhs, rhs, span_from(lhs->span));
        }
        return lhs;
    }

    ExprPtr parse_unary() {
        if (!at_end() && peek().is_symbol("-")) {
            const SourceSpan start = advance().span;
            const bool literal_follows = !at_end() && (peek().kind == TokenKind::IntegerLiteral ||
                                                       peek().kind == TokenKind::FloatLiteral);
            ExprPtr operand = literal_follows ? parse_postfix() : parse_unary();
            if (literal_follows && operand->kind == ExprKind::Number) {
                // Negative literals are folded so that `-1` is a single literal node.
                return make_number(-operand->number, operand->is_integer, span_from(start));
            }
            return make_node(ExprKind::Negate, {operand}, span_from(start));
        }
        return parse_postfix();
    }

    static bool primeable(const Expr& e) {
        switch (e.kind) {
        case ExprKind::Identifier:
        case ExprKind::State: return true;
        case ExprKind::Attribute: return primeable(*e.children[0]);
        default: return false;
        }
    }

    ExprPtr parse_slice_bound() {
        const Token& t = peek();
        if (t.kind == TokenKind::IntegerLiteral) {
            advance();
            return make_number(std::stod(t.lexeme), true, t.span);
        }
        if (t.kind == TokenKind::Identifier) {
            advance();
            return make_identifier(t.lexeme, t.span);
        }
        fail("an integer literal or constant name");
    }

    ExprPtr parse_postfix() {
        ExprPtr base = parse_primary();
        while (!at_end()) {
            const Token& t = peek();
            if (t.is_symbol("'")) {
                if (!primeable(*base)) {
                    throw ParseError("prime applies only to names, S, or attribute chains", t.span);
                }
                advance();
                base = make_node(ExprKind::Prime, {base}, span_from(base->span));
            } else if (t.is_symbol("[")) {
                advance();
                ExprPtr lo = parse_slice_bound();
                if (accept_symbol(":")) {
                    ExprPtr hi = parse_slice_bound();
                    expect_symbol("]");
                    base = make_node(ExprKind::Slice, {base, lo, hi}, span_from(base->span));
                } else {
                    expect_symbol("]");
                    base = make_node(ExprKind::Index, {base, lo}, span_from(base->span));
                }
            } else if (t.is_symbol(".")) {
                advance();
                auto e = std::make_shared<Expr>();
                e->kind = ExprKind::Attribute;
                e->name = expect_kind(TokenKind::Identifier, "attribute name").lexeme;
                e->children = {base};
                e->span = span_from(base->span);
                base = e;
            } else if (t.is_symbol("(") && base->kind == ExprKind::Identifier) {
                advance();
                auto e = std::make_shared<Expr>();
                e->kind = ExprKind::Call;
                e->name = base->name;
                if (!peek().is_symbol(")")) {
                    e->children.push_back(parse_expr());
                    while (accept_symbol(",")) e->children.push_back(parse_expr());
                }
                expect_symbol(")");
                e->span = span_from(base->span);
                base = e;
            } else {
                break;
            }
        }
        return base;
    }

    ExprPtr parse_primary() {
        if (at_end()) fail("an expression");
        const Token& t = peek();
        switch (t.kind) {
        case TokenKind::IntegerLiteral:
        case TokenKind::FloatLiteral: {
            advance();
            double value = 0.0;
            auto [ptr, ec] = std::from_chars(t.lexeme.data(), t.lexeme.data() + t.lexeme.size(), value);
            if (ec != std::errc()) throw ParseError("numeric literal out of range", t.span);
            (void)ptr;
            return make_number(value, t.kind == TokenKind::IntegerLiteral, t.span);
        }
        case TokenKind::Identifier: advance(); return make_identifier(t.lexeme, t.span);
        case TokenKind::Keyword: {
            if (t.lexeme == "True" || t.lexeme == "False") {
                advance();
                auto e = std::make_shared<Expr>();
                e->kind = ExprKind::Boolean;
                e->boolean = t.lexeme == "True";
                e->span = t.span;
                return e;
            }
            if (t.lexeme == "S" || t.lexeme == "A") {
                advance();
                return make_node(t.lexeme == "S" ? ExprKind::State : ExprKind::Action, {}, t.span);
            }
            break;
        }
        case TokenKind::Punctuation: {
            if (t.lexeme == "(") {
                advance();
                ExprPtr inner = parse_expr();
                expect_symbol(")");
                return inner;
            }
            if (t.lexeme == "[") {
                const SourceSpan start = advance().span;
                std::vector<ExprPtr> items;
                if (!peek().is_symbol("]")) {
                    items.push_back(parse_expr());
                    while (accept_symbol(",")) {
                        if (peek().is_symbol("]")) break;
                        items.push_back(parse_expr());
                    }
                }
                expect_symbol("]");
                return make_node(ExprKind::List, std::move(items), span_from(start));
            }
            break;
        }
        default: break;
        }
        fail("an expression");
    }

    const std::vector<Token>& toks_;
    std::size_t pos_ = 0;
    const Token* last_ = nullptr;
};

}  // namespace

Program parse_program(const std::vector<Token>& tokens) { return Parser(tokens).run(); }

Program parse_source(std::string_view source) { return parse_program(tokenize(source)); }

}  // namespace rlang
