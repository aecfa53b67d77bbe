#include <cmath>

#include "rlang/parser.hpp"
#include "rlang/value.hpp"

namespace rlang {

namespace {

// Binding strength; higher binds tighter.
int precedence(const Expr& e) {
    switch (e.kind) {
    case ExprKind::Binary:
        switch (e.op) {
        case BinaryOp::Or: return 1;
        case BinaryOp::And: return 2;
        case BinaryOp::Add:
        case BinaryOp::Sub: return 5;
        case BinaryOp::Mul:
        case BinaryOp::Div: return 6;
        default: return 4;
        }
    case ExprKind::Not: return 3;
    case ExprKind::Negate: return 7;
    case ExprKind::Number: return (e.number < 0 || std::signbit(e.number)) ? 7 : 9;
    case ExprKind::Prime:
    case ExprKind::Index:
    case ExprKind::Slice:
    case ExprKind::Attribute:
    case ExprKind::Call: return 8;
    default: return 9;
    }
}

std::string number_text(const Expr& e) {
    std::string text = format_number(e.number);
    if (e.is_integer) return text;
    if (text.find_first_of(".en") == std::string::npos) text += ".0";
    if (std::signbit(e.number) && e.number == 0.0) text = "-" + text;
    return text;
}

void print(const Expr& e, int min_prec, std::string& out);

void print_list(const std::vector<ExprPtr>& items, std::string& out) {
    for (std::size_t i = 0; i < items.size(); ++i) {
        if (i) out += ", ";
        print(*items[i], 0, out);
    }
}

void print(const Expr& e, int min_prec, std::string& out) {
    const int prec = precedence(e);
    const bool parens = prec < min_prec;
    if (parens) out += '(';
    switch (e.kind) {
    case ExprKind::Number: out += number_text(e); break;
    case ExprKind::Boolean: out += e.boolean ? "True" : "False"; break;
    case ExprKind::List:
        out += '[';
        print_list(e.children, out);
        out += ']';
        break;
    case ExprKind::Identifier: out += e.name; break;
    case ExprKind::State: out += 'S'; break;
    case ExprKind::Action: out += 'A'; break;
    case ExprKind::Prime:
        print(*e.children[0], 8, out);
        out += '\'';
        break;
    case ExprKind::Index:
        print(*e.children[0], 8, out);
        out += '[';
        print(*e.children[1], 0, out);
        out += ']';
        break;
    case ExprKind::Slice:
        print(*e.children[0], 8, out);
        out += '[';
        print(*e.children[1], 0, out);
        out += ':';
        print(*e.children[2], 0, out);
        out += ']';
        break;
    case ExprKind::Attribute:
        print(*e.children[0], 8, out);
        out += '.';
        out += e.name;
        break;
    case ExprKind::Call:
        out += e.name;
        out += '(';
        print_list(e.children, out);
        out += ')';
        break;
    case ExprKind::Negate:
        out += '-';
        // A bare literal after '-' would be folded into a negative literal on re-parse.
        print(*e.children[0], e.children[0]->kind == ExprKind::Number ? 10 : 7, out);
        break;
    case ExprKind::Not:
        out += "not ";
        print(*e.children[0], 3, out);
        break;
    case ExprKind::Binary: {
        const bool comparison = prec == 4;
        print(*e.children[0], comparison ? prec + 1 : prec, out);
        out += ' ';
        out += to_string(e.op);
        out += ' ';
        print(*e.children[1], prec + 1, out);
        break;
    }
    }
    if (parens) out += ')';
}

std::string pad(int indent) { return std::string(static_cast<std::size_t>(indent) * 4, ' '); }

std::string simple_statement(const Statement& st) {
    switch (st.kind) {
    case StatementKind::Execute: return "Execute " + print_expr(*st.expr);
    case StatementKind::Reward: return "Reward " + print_expr(*st.expr);
    case StatementKind::Restrict: return "Restrict " + print_expr(*st.expr);
    case StatementKind::Reference: return "-> " + st.reference;
    case StatementKind::Predict: {
        std::string target;
        switch (st.target.kind) {
        case PredictionTargetKind::WholeState: target = "S'"; break;
        case PredictionTargetKind::Factor: target = st.target.factor + "'"; break;
        case PredictionTargetKind::ObjectAttribute:
            target = "S'." + st.target.object + "." + st.target.attribute;
            break;
        }
        return target + " -> " + print_expr(*st.expr);
    }
    default: return "";
    }
}

void print_block(const std::vector<Statement>& body, int indent, std::string& out) {
    for (const auto& st : body) out += print_statement(st, indent);
}

}  // namespace

std::string print_expr(const Expr& expr) {
    std::string out;
    print(expr, 0, out);
    return out;
}

std::string print_statement(const Statement& st, int indent) {
    std::string out;
    switch (st.kind) {
    case StatementKind::Conditional:
        for (std::size_t i = 0; i < st.branches.size(); ++i) {
            const auto& br = st.branches[i];
            out += pad(indent);
            if (!br.guard) {
                out += "else:\n";
            } else {
                out += (i == 0 ? "if " : "elif ") + print_expr(*br.guard) + ":\n";
            }
            print_block(br.body, indent + 1, out);
        }
        break;
    case StatementKind::Probabilistic:
        for (std::size_t i = 0; i < st.alternatives.size(); ++i) {
            const auto& alt = st.alternatives[i];
            out += pad(indent);
            if (i) out += "or ";
            out += simple_statement(alt.statement.front());
            out += " with P(" + print_expr(*alt.probability) + ")\n";
        }
        break;
    default: out += pad(indent) + simple_statement(st) + "\n"; break;
    }
    return out;
}

std::string pretty_print(const std::vector<Declaration>& declarations) {
    std::string out;
    for (const auto& d : declarations) {
        switch (d.kind) {
        case DeclarationKind::Policy:
        case DeclarationKind::Effect:
        case DeclarationKind::ActionRestriction:
            out += std::string(to_string(d.kind)) + " " + d.name + ":\n";
            print_block(d.body, 1, out);
            break;
        case DeclarationKind::Option:
            out += "Option " + d.name + ":\n";
            out += pad(1) + "init " + print_expr(*d.init) + "\n";
            print_block(d.body, 2, out);
            out += pad(1) + "until " + print_expr(*d.until) + "\n";
            break;
        case DeclarationKind::ClassDefinition:
            out += "Class " + d.name;
            if (!d.parent_class.empty()) out += "(" + d.parent_class + ")";
            out += ":\n";
            for (const auto& a : d.attributes) out += pad(1) + a.name + ": " + a.type_name + "\n";
            break;
        default:
            out += std::string(to_string(d.kind)) + " " + d.name + " := " + print_expr(*d.value) + "\n";
            break;
        }
    }
    return out;
}

std::string pretty_print(const Program& program) {
    std::string out;
    for (const auto& imp : program.imports) {
        out += "import \"";
        for (char c : imp.path) {
            if (c == '"' || c == '\\') out += '\\';
            if (c == '\n') {
                out += "\\n";
                continue;
            }
            out += c;
        }
        out += "\"\n";
    }
    return out + pretty_print(program.declarations);
}

}  // namespace rlang
