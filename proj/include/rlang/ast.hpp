#pragma once

#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "rlang/diagnostics.hpp"

namespace rlang {

enum class ExprKind {
    Number,        // numeric literal
    Boolean,       // True / False
    List,          // [a, b, ...]
    Identifier,    // name reference
    State,         // S
    Action,        // A
    Prime,         // operand'
    Index,         // base[i]
    Slice,         // base[lo:hi]
    Attribute,     // base.name
    Call,          // Class(args...)
    Negate,        // -operand
    Not,           // not operand
    Binary,        // lhs op rhs
};

enum class BinaryOp { Add, Sub, Mul, Div, Lt, Le, Gt, Ge, Eq, Ne, And, Or, In };

std::string_view to_string(BinaryOp op);

struct Expr;
using ExprPtr = std::shared_ptr<const Expr>;

/// Expression node. The payload fields used depend on `kind`; unused fields
/// keep their defaults so structural equality is a plain field comparison.
struct Expr {
    ExprKind kind = ExprKind::Number;
    SourceSpan span;
    double number = 0.0;
    bool is_integer = false;   // Number: written without a fractional part
    bool boolean = false;
    std::string name;          // Identifier / Attribute / Call callee
    BinaryOp op = BinaryOp::Add;
    std::vector<ExprPtr> children;
};

bool structurally_equal(const Expr& a, const Expr& b);

ExprPtr make_number(double value, bool is_integer, SourceSpan span = {});
ExprPtr make_identifier(std::string name, SourceSpan span = {});
ExprPtr make_binary(BinaryOp op, ExprPtr lhs, ExprPtr rhs, SourceSpan span = {});
ExprPtr make_node(ExprKind kind, std::vector<ExprPtr> children, SourceSpan span = {});

// ---------------------------------------------------------------------------
// Statements (bodies of Policy, Option, Effect and ActionRestriction)

enum class StatementKind {
    Execute,        // Execute expr
    Reward,         // Reward expr
    Predict,        // target' -> expr
    Reference,      // -> effect_name
    Restrict,       // Restrict expr
    Conditional,    // if / elif / else
    Probabilistic,  // stmt with P(p) or stmt with P(q) ...
};

enum class PredictionTargetKind { WholeState, Factor, ObjectAttribute };

struct PredictionTarget {
    PredictionTargetKind kind = PredictionTargetKind::WholeState;
    std::string factor;     // Factor
    std::string object;     // ObjectAttribute
    std::string attribute;  // ObjectAttribute
};

struct Statement;

struct ConditionalBranch {
    ExprPtr guard;  // null for the else branch
    std::vector<Statement> body;
    SourceSpan span;
};

struct WeightedAlternative {
    std::vector<Statement> statement;  // exactly one element
    ExprPtr probability;
};

struct Statement {
    StatementKind kind = StatementKind::Execute;
    SourceSpan span;
    ExprPtr expr;                 // Execute / Reward / Predict value / Restrict
    PredictionTarget target;      // Predict
    std::string reference;        // Reference
    std::vector<ConditionalBranch> branches;
    std::vector<WeightedAlternative> alternatives;
};

bool structurally_equal(const Statement& a, const Statement& b);

// ---------------------------------------------------------------------------
// Declarations

enum class DeclarationKind {
    Constant,
    Action,
    Factor,
    Proposition,
    Goal,
    Feature,
    MarkovFeature,
    Object,
    ClassDefinition,
    Option,
    Policy,
    Effect,
    ActionRestriction,
};

std::string_view to_string(DeclarationKind kind);

struct AttributeDefinition {
    std::string name;
    std::string type_name;  // int, float, bool, str, object or a class name
    SourceSpan span;
};

struct Declaration {
    DeclarationKind kind = DeclarationKind::Constant;
    std::string name;
    SourceSpan span;
    ExprPtr value;                              // `:=` declarations
    std::vector<Statement> body;                // Policy / Effect / ActionRestriction / Option policy
    ExprPtr init;                               // Option
    ExprPtr until;                              // Option
    std::string parent_class;                   // ClassDefinition
    std::vector<AttributeDefinition> attributes;  // ClassDefinition
};

bool structurally_equal(const Declaration& a, const Declaration& b);

struct Import {
    std::string path;
    SourceSpan span;
};

struct Program {
    std::vector<Import> imports;
    std::vector<Declaration> declarations;
};

bool structurally_equal(const Program& a, const Program& b);

}  // namespace rlang
