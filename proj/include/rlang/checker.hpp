#pragma once

#include <array>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "rlang/ast.hpp"
#include "rlang/types.hpp"
#include "rlang/value.hpp"
#include "rlang/vocabulary.hpp"

namespace rlang {

enum class SymbolKind {
    Constant,
    Action,
    Factor,
    Proposition,
    Goal,
    Feature,
    MarkovFeature,
    Object,
    Class,
    Policy,
    LearnablePolicy,
    Effect,
    Option,
    ActionRestriction,
    StateObject,  // vocabulary attribute map, reachable as S.<name>
    Builtin,
};

std::string_view to_string(SymbolKind kind);

struct Symbol {
    std::string name;
    SymbolKind kind = SymbolKind::Constant;
    ValueType type;
    DomainSignature sig;
    const Declaration* decl = nullptr;        // program definition site
    const VocabularyEntry* entry = nullptr;   // external vocabulary definition
    bool learnable = false;
    SourceSpan site;
    std::vector<std::size_t> indices;         // factors: selected state indices
};

/// Names live in four namespaces: values (constants, factors, propositions,
/// policies, ...), effects, options and action restrictions.
enum class Namespace { Value, Effect, Option, Restriction };

class SymbolTable {
public:
    const Symbol* lookup(std::string_view name, Namespace ns = Namespace::Value) const;
    Symbol& insert(Symbol symbol, Namespace ns);
    const std::vector<const Symbol*>& in_order(Namespace ns) const { return order_[index(ns)]; }

private:
    static std::size_t index(Namespace ns) { return static_cast<std::size_t>(ns); }
    std::array<std::map<std::string, std::unique_ptr<Symbol>, std::less<>>, 4> maps_;
    std::array<std::vector<const Symbol*>, 4> order_;
};

struct ExprInfo {
    ValueType type;
    DomainSignature sig;
};

struct ClassInfo {
    std::string name;
    std::string parent;
    std::vector<std::pair<std::string, ValueType>> attributes;  // own + inherited, parent first
};

/// Fixed axis order shared with agent capability descriptors.
enum class Capability { Transition = 0, Reward, Policy, Options, Restrictions, Goals };
inline constexpr std::size_t kCapabilityCount = 6;
using CapabilityVector = std::array<bool, kCapabilityCount>;
std::string_view to_string(Capability c);
std::string format_capabilities(const CapabilityVector& v);

/// A type- and name-checked program. Owns its AST; expression annotations are
/// keyed by node address. Immutable after construction.
struct CheckedProgram {
    Program program;
    std::shared_ptr<const VocabularyRegistry> vocab;
    SymbolTable symbols;
    std::unordered_map<const Expr*, ExprInfo> info;
    std::map<std::string, ClassInfo> classes;
    std::vector<ActionValue> actions;  // full action set, declaration order
    std::optional<std::size_t> state_dim;

    const ExprInfo& info_of(const Expr& e) const;
    const Declaration* effect(std::string_view name) const;
    const Declaration* policy(std::string_view name) const;
    std::optional<ActionValue> action_named(std::string_view name) const;
};

/// Resolves names (declare-before-use), infers types and domain signatures,
/// enforces per-kind constraints. Throws TypeError, UnresolvedName,
/// DuplicateName, DomainError, RecursionError, CompileError,
/// IllFormedComposition.
std::shared_ptr<const CheckedProgram> check_program(Program program,
                                                    std::shared_ptr<const VocabularyRegistry> vocab);

/// Convenience: an empty vocabulary.
std::shared_ptr<const CheckedProgram> check_program(Program program);

CapabilityVector capability_vector(const CheckedProgram& program);

}  // namespace rlang
