#include "rlang/ast.hpp"

namespace rlang {

std::string_view to_string(BinaryOp op) {
    switch (op) {
    case BinaryOp::Add: return "+";
    case BinaryOp::Sub: return "-";
    case BinaryOp::Mul: return "*";
    case BinaryOp::Div: return "/";
    case BinaryOp::Lt: return "<";
    case BinaryOp::Le: return "<=";
    case BinaryOp::Gt: return ">";
    case BinaryOp::Ge: return ">=";
    case BinaryOp::Eq: return "==";
    case BinaryOp::Ne: return "!=";
    case BinaryOp::And: return "and";
    case BinaryOp::Or: return "or";
    case BinaryOp::In: return "in";
    }
    return "?";
}

std::string_view to_string(DeclarationKind kind) {
    switch (kind) {
    case DeclarationKind::Constant: return "Constant";
    case DeclarationKind::Action: return "Action";
    case DeclarationKind::Factor: return "Factor";
    case DeclarationKind::Proposition: return "Proposition";
    case DeclarationKind::Goal: return "Goal";
    case DeclarationKind::Feature: return "Feature";
    case DeclarationKind::MarkovFeature: return "MarkovFeature";
    case DeclarationKind::Object: return "Object";
    case DeclarationKind::ClassDefinition: return "Class";
    case DeclarationKind::Option: return "Option";
    case DeclarationKind::Policy: return "Policy";
    case DeclarationKind::Effect: return "Effect";
    case DeclarationKind::ActionRestriction: return "ActionRestriction";
    }
    return "?";
}

ExprPtr make_number(double value, bool is_integer, SourceSpan span) {
    auto e = std::make_shared<Expr>();
    e->kind = ExprKind::Number;
    e->number = value;
    e->is_integer = is_integer;
    e->span = span;
    return e;
}

ExprPtr make_identifier(std::string name, SourceSpan span) {
    auto e = std::make_shared<Expr>();
    e->kind = ExprKind::Identifier;
    e->name = std::move(name);
    e->span = span;
    return e;
}

ExprPtr make_binary(BinaryOp op, ExprPtr lhs, ExprPtr rhs, SourceSpan span) {
    auto e = std::make_shared<Expr>();
    e->kind = ExprKind::Binary;
    e->op = op;
    e->children = {std::move(lhs), std::move(rhs)};
    e->span = span;
    return e;
}

ExprPtr make_node(ExprKind kind, std::vector<ExprPtr> children, SourceSpan span) {
    auto e = std::make_shared<Expr>();
    e->kind = kind;
    e->children = std::move(children);
    e->span = span;
    return e;
}

namespace {

bool equal_ptr(const ExprPtr& a, const ExprPtr& b) {
    if (!a || !b) return !a && !b;
    return structurally_equal(*a, *b);
}

template <typename T>
bool equal_range(const std::vector<T>& a, const std::vector<T>& b) {
    if (a.size() != b.size()) return false;
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (!structurally_equal(a[i], b[i])) return false;
    }
    return true;
}

}  // namespace

bool structurally_equal(const Expr& a, const Expr& b) {
    if (a.kind != b.kind || a.number != b.number || a.is_integer != b.is_integer ||
        a.boolean != b.boolean || a.name != b.name || a.op != b.op ||
        a.children.size() != b.children.size()) {
        return false;
    }
    for (std::size_t i = 0; i < a.children.size(); ++i) {
        if (!equal_ptr(a.children[i], b.children[i])) return false;
    }
    return true;
}

bool structurally_equal(const Statement& a, const Statement& b) {
    if (a.kind != b.kind || !equal_ptr(a.expr, b.expr) || a.target.kind != b.target.kind ||
        a.target.factor != b.target.factor || a.target.object != b.target.object ||
        a.target.attribute != b.target.attribute || a.reference != b.reference ||
        a.branches.size() != b.branches.size() || a.alternatives.size() != b.alternatives.size()) {
        return false;
    }
    for (std::size_t i = 0; i < a.branches.size(); ++i) {
        if (!equal_ptr(a.branches[i].guard, b.branches[i].guard) ||
            !equal_range(a.branches[i].body, b.branches[i].body)) {
            return false;
        }
    }
    for (std::size_t i = 0; i < a.alternatives.size(); ++i) {
        if (!equal_ptr(a.alternatives[i].probability, b.alternatives[i].probability) ||
            !equal_range(a.alternatives[i].statement, b.alternatives[i].statement)) {
            return false;
        }
    }
    return true;
}

bool structurally_equal(const Declaration& a, const Declaration& b) {
    if (a.kind != b.kind || a.name != b.name || !equal_ptr(a.value, b.value) ||
        !equal_ptr(a.init, b.init) || !equal_ptr(a.until, b.until) ||
        a.parent_class != b.parent_class || a.attributes.size() != b.attributes.size() ||
        !equal_range(a.body, b.body)) {
        return false;
    }
    for (std::size_t i = 0; i < a.attributes.size(); ++i) {
        if (a.attributes[i].name != b.attributes[i].name ||
            a.attributes[i].type_name != b.attributes[i].type_name) {
            return false;
        }
    }
    return true;
}

bool structurally_equal(const Program& a, const Program& b) {
    if (a.imports.size() != b.imports.size()) return false;
    for (std::size_t i = 0; i < a.imports.size(); ++i) {
        if (a.imports[i].path != b.imports[i].path) return false;
    }
    return equal_range(a.declarations, b.declarations);
}

}  // namespace rlang
