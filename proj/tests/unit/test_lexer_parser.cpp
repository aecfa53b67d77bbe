#include <gtest/gtest.h>

#include <fstream>

#include "rlang/lexer.hpp"
#include "rlang/loader.hpp"
#include "rlang/parser.hpp"
#include "support.hpp"

using namespace rlang;

namespace {

std::vector<std::pair<TokenKind, std::string>> kinds(std::string_view src) {
    std::vector<std::pair<TokenKind, std::string>> out;
    for (const auto& t : tokenize(src)) out.emplace_back(t.kind, t.lexeme);
    return out;
}

}  // namespace

TEST(Lexer, FactorSliceTokens) {
    const auto toks = kinds("Factor position := S[0:2]");
    const std::vector<std::pair<TokenKind, std::string>> want{
        {TokenKind::Keyword, "Factor"},     {TokenKind::Identifier, "position"}, {TokenKind::Operator, ":="},
        {TokenKind::Keyword, "S"},          {TokenKind::Punctuation, "["},       {TokenKind::IntegerLiteral, "0"},
        {TokenKind::Punctuation, ":"},      {TokenKind::IntegerLiteral, "2"},    {TokenKind::Punctuation, "]"},
        {TokenKind::Newline, ""},
    };
    EXPECT_EQ(toks, want);
}

TEST(Lexer, EmptyInput) { EXPECT_TRUE(tokenize("").empty()); }

TEST(Lexer, IndentDedentAroundBlock) {
    const auto toks = tokenize("Policy main:\n    Execute up");
    int indents = 0, dedents = 0;
    std::size_t indent_pos = 0;
    for (std::size_t i = 0; i < toks.size(); ++i) {
        if (toks[i].kind == TokenKind::Indent) {
            ++indents;
            indent_pos = i;
        }
        if (toks[i].kind == TokenKind::Dedent) ++dedents;
    }
    EXPECT_EQ(indents, 1);
    EXPECT_EQ(dedents, 1);
    EXPECT_TRUE(toks[indent_pos + 1].is_keyword("Execute"));
    EXPECT_EQ(toks.back().kind, TokenKind::Dedent);
}

TEST(Lexer, CommentsAndBlankLinesVanish) {
    const auto a = kinds("Constant c := 3 # a comment\n\n   \n# whole line\nConstant d := 4\n");
    const auto b = kinds("Constant c := 3\nConstant d := 4\n");
    EXPECT_EQ(a, b);
}

TEST(Lexer, RejectsTabsAndIllegalCharacters) {
    EXPECT_THROW(tokenize("Policy main:\n\tExecute up"), LexError);
    EXPECT_THROW(tokenize("Constant c := 1 $ 2"), LexError);
    try {
        tokenize("Constant c := 1\nConstant d := ?");
        FAIL();
    } catch (const LexError& e) {
        ASSERT_TRUE(e.span());
        EXPECT_EQ(e.span()->line, 2u);
        EXPECT_EQ(e.span()->column, 15u);
    }
}

TEST(Lexer, InconsistentDedentIsAnError) {
    EXPECT_THROW(tokenize("Policy main:\n    if x:\n        Execute up\n  Execute down"), LexError);
}

TEST(Lexer, BracketsJoinLines) {
    const auto toks = kinds("Constant c := [1,\n    2]\n");
    for (const auto& [k, _] : toks) EXPECT_NE(k, TokenKind::Indent);
}

TEST(Lexer, IndentTokensBalanceOnCorpus) {
    for (const auto& c : test::corpus()) {
        int depth = 0;
        for (const auto& t : tokenize(read_text_file(c.program))) {
            if (t.kind == TokenKind::Indent) ++depth;
            if (t.kind == TokenKind::Dedent) --depth;
            ASSERT_GE(depth, 0) << c.program;
        }
        EXPECT_EQ(depth, 0) << c.program;
    }
}

TEST(Lexer, SpansCoverTheirLexemes) {
    for (const auto& c : test::corpus()) {
        const std::string src = read_text_file(c.program);
        for (const auto& t : tokenize(src)) {
            if (t.lexeme.empty()) continue;
            ASSERT_LE(t.span.offset + t.span.length, src.size());
            EXPECT_EQ(src.substr(t.span.offset, t.span.length), t.lexeme) << c.program;
        }
    }
}

TEST(Parser, MountainCarPolicyShape) {
    const Program p = parse_source(
        "Policy gain_momentum:\n    if velocity < 0:\n        Execute go_left\n    else:\n        Execute go_right\n");
    ASSERT_EQ(p.declarations.size(), 1u);
    const Declaration& d = p.declarations[0];
    EXPECT_EQ(d.kind, DeclarationKind::Policy);
    EXPECT_EQ(d.name, "gain_momentum");
    ASSERT_EQ(d.body.size(), 1u);
    EXPECT_EQ(d.body[0].kind, StatementKind::Conditional);
    ASSERT_EQ(d.body[0].branches.size(), 2u);
    EXPECT_NE(d.body[0].branches[0].guard, nullptr);
    EXPECT_EQ(d.body[0].branches[1].guard, nullptr);
}

TEST(Parser, LavaGapHasFourEffects) {
    const Program p = parse_source(read_text_file(test::fixture_dir() / "corpus" / "17_lava_gap.rlang"));
    std::vector<std::string> names;
    for (const auto& d : p.declarations) {
        EXPECT_EQ(d.kind, DeclarationKind::Effect);
        names.push_back(d.name);
    }
    EXPECT_EQ(names, (std::vector<std::string>{"moving_effect", "dynamics", "reward", "main"}));
}

TEST(Parser, SingleConstant) {
    const Program p = parse_source("Constant c := 3");
    ASSERT_EQ(p.declarations.size(), 1u);
    EXPECT_EQ(p.declarations[0].kind, DeclarationKind::Constant);
    ASSERT_NE(p.declarations[0].value, nullptr);
    EXPECT_EQ(p.declarations[0].value->kind, ExprKind::Number);
    EXPECT_EQ(p.declarations[0].value->number, 3.0);
    EXPECT_TRUE(p.declarations[0].value->is_integer);
}

TEST(Parser, AllThirteenDeclarationKinds) {
    const char* src =
        "Constant c := 1\n"
        "Action jump := 7\n"
        "Factor f := S[0:2]\n"
        "Proposition p := f[0] > 1\n"
        "Goal g := p\n"
        "Feature q := f[0] + f[1]\n"
        "Markov Feature m := q' - q\n"
        "Class Arm:\n    length: int\n"
        "Object o := Arm(1)\n"
        "Policy main:\n    Execute jump\n"
        "Option opt:\n    init p\n        Execute jump\n    until not p\n"
        "Effect main:\n    Reward 1\n"
        "ActionRestriction r:\n    if p:\n        Restrict jump\n";
    const Program prog = parse_source(src);
    std::vector<DeclarationKind> got;
    for (const auto& d : prog.declarations) got.push_back(d.kind);
    const std::vector<DeclarationKind> want{
        DeclarationKind::Constant,      DeclarationKind::Action, DeclarationKind::Factor,
        DeclarationKind::Proposition,   DeclarationKind::Goal,   DeclarationKind::Feature,
        DeclarationKind::MarkovFeature, DeclarationKind::ClassDefinition, DeclarationKind::Object,
        DeclarationKind::Policy,        DeclarationKind::Option, DeclarationKind::Effect,
        DeclarationKind::ActionRestriction,
    };
    EXPECT_EQ(got, want);
}

TEST(Parser, OperatorPrecedence) {
    const Program p = parse_source("Constant c := 1 + 2 * 3 < 10 and not False");
    const Expr& e = *p.declarations[0].value;
    ASSERT_EQ(e.kind, ExprKind::Binary);
    EXPECT_EQ(e.op, BinaryOp::And);
    const Expr& cmp = *e.children[0];
    EXPECT_EQ(cmp.op, BinaryOp::Lt);
    const Expr& sum = *cmp.children[0];
    EXPECT_EQ(sum.op, BinaryOp::Add);
    EXPECT_EQ(sum.children[1]->op, BinaryOp::Mul);
}

TEST(Parser, ProbabilisticPolicy) {
    const Program p = parse_source(
        "Policy random_move:\n    Execute up with P(0.25)\n    or Execute down with P(0.25)\n"
        "    or Execute left with P(0.25)\n    or Execute right with P(0.25)\n");
    const Statement& st = p.declarations[0].body.at(0);
    EXPECT_EQ(st.kind, StatementKind::Probabilistic);
    EXPECT_EQ(st.alternatives.size(), 4u);
}

TEST(Parser, ImportsAreRecorded) {
    const Program p = parse_source("import \"vocab.json\"\nimport \"base.rlang\"\nConstant c := 1\n");
    ASSERT_EQ(p.imports.size(), 2u);
    EXPECT_EQ(p.imports[0].path, "vocab.json");
    EXPECT_EQ(p.imports[1].path, "base.rlang");
}

TEST(Parser, ErrorsCarrySpans) {
    try {
        parse_source("Constant c := \n");
        FAIL();
    } catch (const ParseError& e) {
        ASSERT_TRUE(e.span());
        EXPECT_EQ(e.span()->line, 1u);
    }
    EXPECT_THROW(parse_source("Policy main:\nExecute up\n"), ParseError);
    EXPECT_THROW(parse_source("Factor := S[0]"), ParseError);
    EXPECT_THROW(parse_source("Effect e:\n    x' -> \n"), ParseError);
}

TEST(Parser, PrimeOnlyOnReferences) {
    EXPECT_THROW(parse_source("Constant c := 3'"), ParseError);
    EXPECT_NO_THROW(parse_source("Markov Feature m := S' - S"));
}

TEST(Printer, EmptyProgramPrintsNothing) { EXPECT_EQ(pretty_print(std::vector<Declaration>{}), ""); }

TEST(Printer, RandomMoveRoundTrip) {
    const char* src =
        "Policy random_move:\n    Execute up with P(0.25)\n    or Execute down with P(0.25)\n"
        "    or Execute left with P(0.25)\n    or Execute right with P(0.25)\n";
    const Program a = parse_source(src);
    const Program b = parse_source(pretty_print(a));
    EXPECT_TRUE(structurally_equal(a, b));
}

TEST(Printer, CorpusRoundTrip) {
    const auto entries = test::corpus();
    ASSERT_GE(entries.size(), 20u);
    for (const auto& c : entries) {
        const Program a = parse_source(read_text_file(c.program));
        const std::string printed = pretty_print(a);
        const Program b = parse_source(printed);
        EXPECT_TRUE(structurally_equal(a, b)) << c.program << "\n" << printed;
        // Printing is canonical: a second trip is a fixed point.
        EXPECT_EQ(pretty_print(b), printed) << c.program;
    }
}

TEST(Printer, StructuralEqualityNoticesDifferences) {
    EXPECT_FALSE(structurally_equal(parse_source("Constant c := 1"), parse_source("Constant c := 2")));
    EXPECT_FALSE(structurally_equal(parse_source("Constant c := 1"), parse_source("Constant d := 1")));
    EXPECT_FALSE(structurally_equal(parse_source("Constant c := 1"), parse_source("Constant c := 1.0")));
}
