#include "rlang/checker.hpp"

#include <cmath>
#include <set>

#include "rlang/diagnostics.hpp"
#include "rlang/evaluator.hpp"
#include "rlang/parser.hpp"

namespace rlang {

std::string_view to_string(SymbolKind kind) {
    switch (kind) {
    case SymbolKind::Constant: return "constant";
    case SymbolKind::Action: return "action";
    case SymbolKind::Factor: return "factor";
    case SymbolKind::Proposition: return "proposition";
    case SymbolKind::Goal: return "goal";
    case SymbolKind::Feature: return "feature";
    case SymbolKind::MarkovFeature: return "markov feature";
    case SymbolKind::Object: return "object";
    case SymbolKind::Class: return "class";
    case SymbolKind::Policy: return "policy";
    case SymbolKind::LearnablePolicy: return "learnable policy";
    case SymbolKind::Effect: return "effect";
    case SymbolKind::Option: return "option";
    case SymbolKind::ActionRestriction: return "action restriction";
    case SymbolKind::StateObject: return "state object";
    case SymbolKind::Builtin: return "builtin";
    }
    return "?";
}

std::string_view to_string(Capability c) {
    switch (c) {
    case Capability::Transition: return "transition";
    case Capability::Reward: return "reward";
    case Capability::Policy: return "policy";
    case Capability::Options: return "options";
    case Capability::Restrictions: return "restrictions";
    case Capability::Goals: return "goals";
    }
    return "?";
}

std::string format_capabilities(const CapabilityVector& v) {
    std::string out;
    for (std::size_t i = 0; i < kCapabilityCount; ++i) {
        if (i) out += ' ';
        out += std::string(to_string(static_cast<Capability>(i))) + "=" + (v[i] ? "1" : "0");
    }
    return out;
}

const Symbol* SymbolTable::lookup(std::string_view name, Namespace ns) const {
    const auto& m = maps_[index(ns)];
    auto it = m.find(name);
    return it == m.end() ? nullptr : it->second.get();
}

Symbol& SymbolTable::insert(Symbol symbol, Namespace ns) {
    auto& m = maps_[index(ns)];
    auto ptr = std::make_unique<Symbol>(std::move(symbol));
    Symbol& ref = *ptr;
    order_[index(ns)].push_back(ptr.get());
    m[ref.name] = std::move(ptr);
    return ref;
}

const ExprInfo& CheckedProgram::info_of(const Expr& e) const {
    auto it = info.find(&e);
    if (it == info.end()) throw EvalError("expression was not checked: " + print_expr(e), e.span);
    return it->second;
}

const Declaration* CheckedProgram::effect(std::string_view name) const {
    const Symbol* s = symbols.lookup(name, Namespace::Effect);
    return s ? s->decl : nullptr;
}

const Declaration* CheckedProgram::policy(std::string_view name) const {
    const Symbol* s = symbols.lookup(name, Namespace::Value);
    return s && s->kind == SymbolKind::Policy ? s->decl : nullptr;
}

std::optional<ActionValue> CheckedProgram::action_named(std::string_view name) const {
    for (const auto& a : actions) {
        if (a.name == name) return a;
    }
    return std::nullopt;
}

namespace {

enum class BodyKind { Policy, Effect, Restriction };

class Checker {
public:
    explicit Checker(CheckedProgram& cp) : cp_(cp) {}

    void run() {
        if (cp_.vocab) cp_.state_dim = cp_.vocab->state_dim();
        Symbol any;
        any.name = "any";
        any.kind = SymbolKind::Builtin;
        any.type = ValueType::boolean();
        cp_.symbols.insert(std::move(any), Namespace::Value);
        if (cp_.vocab) register_vocabulary();
        for (const auto& decl : cp_.program.declarations) check_declaration(decl);
        check_static_restrictions();
    }

private:
    // ---- vocabulary -------------------------------------------------------
    void register_vocabulary() {
        for (const auto& e : cp_.vocab->entries()) {
            Symbol s;
            s.name = e.name;
            s.entry = &e;
            s.type = e.type;
            Namespace ns = Namespace::Value;
            switch (e.kind) {
            case VocabularyKind::Factor:
                s.kind = SymbolKind::Factor;
                s.sig = DomainSignature::state();
                s.indices = e.indices;
                break;
            case VocabularyKind::Feature:
                s.kind = SymbolKind::Feature;
                s.sig = DomainSignature::state();
                break;
            case VocabularyKind::Proposition:
                s.kind = SymbolKind::Proposition;
                s.sig = DomainSignature::state();
                break;
            case VocabularyKind::Constant: s.kind = SymbolKind::Constant; break;
            case VocabularyKind::Action:
                s.kind = SymbolKind::Action;
                add_action(e.value.action, {});
                break;
            case VocabularyKind::Policy: s.kind = SymbolKind::Policy; break;
            case VocabularyKind::LearnablePolicy:
                s.kind = SymbolKind::LearnablePolicy;
                s.learnable = true;
                break;
            case VocabularyKind::Effect:
                s.kind = SymbolKind::Effect;
                ns = Namespace::Effect;
                break;
            case VocabularyKind::AttributeMap: {
                s.kind = SymbolKind::StateObject;
                s.sig = DomainSignature::state();
                ClassInfo ci;
                ci.name = e.name;
                for (const auto& a : e.attributes) ci.attributes.emplace_back(a.name, a.type);
                cp_.classes[e.name] = std::move(ci);
                break;
            }
            }
            if (cp_.symbols.lookup(e.name, ns)) {
                throw DuplicateName("vocabulary entry '" + e.name + "' conflicts with a builtin name");
            }
            cp_.symbols.insert(std::move(s), ns);
        }
    }

    void add_action(const ActionValue& a, const SourceSpan& span) {
        for (const auto& existing : cp_.actions) {
            if (existing.id == a.id) {
                throw CompileError("actions '" + existing.name + "' and '" + a.name + "' share id " +
                                       format_number(a.id),
                                   span);
            }
        }
        cp_.actions.push_back(a);
    }

    // ---- declarations -----------------------------------------------------
    Symbol& declare(const Declaration& d, SymbolKind kind, Namespace ns) {
        if (const Symbol* prev = cp_.symbols.lookup(d.name, ns)) {
            if (d.name == "main" && (kind == SymbolKind::Effect || kind == SymbolKind::Policy)) {
                throw CompileError("duplicate main " + std::string(to_string(kind)), d.span);
            }
            if (prev->entry) {
                throw DuplicateName("'" + d.name + "' shadows a vocabulary entry", d.span);
            }
            throw DuplicateName("'" + d.name + "' is already declared", d.span);
        }
        Symbol s;
        s.name = d.name;
        s.kind = kind;
        s.decl = &d;
        s.site = d.span;
        return cp_.symbols.insert(std::move(s), ns);
    }

    void require_sig(const Expr& e, DomainSignature sig, DomainSignature allowed, const std::string& what) {
        if (!sig.subset_of(allowed)) {
            throw DomainError(what + " must depend only on " + allowed.str() + ", but '" + print_expr(e) +
                                  "' depends on " + sig.str(),
                              e.span);
        }
    }

    void check_declaration(const Declaration& d) {
        switch (d.kind) {
        case DeclarationKind::Constant: {
            ExprInfo ei = expr(*d.value);
            require_sig(*d.value, ei.sig, DomainSignature::none(), "a Constant");
            Symbol& s = declare(d, SymbolKind::Constant, Namespace::Value);
            s.type = ei.type.kind == TypeKind::State ? ValueType::real(ei.type.dim) : ei.type;
            break;
        }
        case DeclarationKind::Action: {
            ExprInfo ei = expr(*d.value);
            require_sig(*d.value, ei.sig, DomainSignature::none(), "an Action");
            if (!ei.type.is_scalar()) throw TypeError("an Action must be a scalar id", d.value->span);
            GroundedValue v = evaluate(cp_, *d.value, EvalContext{});
            if (!v.is_scalar()) throw TypeError("an Action must be a scalar id", d.value->span);
            Symbol& s = declare(d, SymbolKind::Action, Namespace::Value);
            s.type = ValueType::action();
            add_action({d.name, v.real[0]}, d.span);
            break;
        }
        case DeclarationKind::Factor: {
            ExprInfo ei = expr(*d.value);
            std::vector<std::size_t> idx = factor_indices(*d.value);
            Symbol& s = declare(d, SymbolKind::Factor, Namespace::Value);
            s.type = ValueType::real(idx.size());
            s.sig = ei.sig;
            s.indices = std::move(idx);
            break;
        }
        case DeclarationKind::Proposition:
        case DeclarationKind::Goal: {
            const bool goal = d.kind == DeclarationKind::Goal;
            ExprInfo ei = expr(*d.value);
            require_sig(*d.value, ei.sig, DomainSignature::state(), goal ? "a Goal" : "a Proposition");
            if (ei.type.kind != TypeKind::Boolean) {
                throw TypeError(std::string(goal ? "a Goal" : "a Proposition") + " must be Boolean, found " +
                                    ei.type.str(),
                                d.value->span);
            }
            Symbol& s = declare(d, goal ? SymbolKind::Goal : SymbolKind::Proposition, Namespace::Value);
            s.type = ValueType::boolean();
            s.sig = ei.sig;
            break;
        }
        case DeclarationKind::Feature:
        case DeclarationKind::MarkovFeature: {
            const bool markov = d.kind == DeclarationKind::MarkovFeature;
            ExprInfo ei = expr(*d.value);
            if (!ei.type.is_numeric()) {
                throw TypeError(std::string(markov ? "a MarkovFeature" : "a Feature") + " must be real-valued, found " +
                                    ei.type.str(),
                                d.value->span);
            }
            if (!markov) require_sig(*d.value, ei.sig, DomainSignature::state(), "a Feature");
            Symbol& s = declare(d, markov ? SymbolKind::MarkovFeature : SymbolKind::Feature, Namespace::Value);
            s.type = ValueType::real(ei.type.dim);
            s.sig = ei.sig;
            break;
        }
        case DeclarationKind::Object: {
            ExprInfo ei = expr(*d.value);
            if (ei.type.kind != TypeKind::Object) {
                throw TypeError("an Object must be a class instantiation, found " + ei.type.str(), d.value->span);
            }
            Symbol& s = declare(d, SymbolKind::Object, Namespace::Value);
            s.type = ei.type;
            s.sig = ei.sig;
            break;
        }
        case DeclarationKind::ClassDefinition: check_class(d); break;
        case DeclarationKind::Policy: {
            Symbol& s = declare(d, SymbolKind::Policy, Namespace::Value);
            s.type = ValueType::any();
            statements(d.body, BodyKind::Policy, d.name);
            break;
        }
        case DeclarationKind::Effect:
            declare(d, SymbolKind::Effect, Namespace::Effect);
            statements(d.body, BodyKind::Effect, d.name);
            break;
        case DeclarationKind::ActionRestriction:
            declare(d, SymbolKind::ActionRestriction, Namespace::Restriction);
            statements(d.body, BodyKind::Restriction, d.name);
            break;
        case DeclarationKind::Option: {
            for (const ExprPtr& e : {d.init, d.until}) {
                ExprInfo ei = expr(*e);
                if (ei.type.kind != TypeKind::Boolean) {
                    throw TypeError("option init/until must be Boolean, found " + ei.type.str(), e->span);
                }
                require_sig(*e, ei.sig, DomainSignature::state(), "an option condition");
            }
            declare(d, SymbolKind::Option, Namespace::Option);
            statements(d.body, BodyKind::Policy, "");
            break;
        }
        }
    }

    ValueType attribute_type(const std::string& type_name, const SourceSpan& span) {
        if (type_name == "int" || type_name == "float") return ValueType::real(1);
        if (type_name == "bool") return ValueType::boolean();
        if (type_name == "str") return ValueType::any();
        if (type_name == "object") return ValueType::object("");
        const Symbol* s = cp_.symbols.lookup(type_name);
        if (s && s->kind == SymbolKind::Class) return ValueType::object(type_name);
        throw TypeError("unknown attribute type '" + type_name + "'", span);
    }

    void check_class(const Declaration& d) {
        ClassInfo ci;
        ci.name = d.name;
        std::set<std::string> names;
        if (!d.parent_class.empty()) {
            const Symbol* parent = cp_.symbols.lookup(d.parent_class);
            if (!parent) throw UnresolvedName("unknown parent class '" + d.parent_class + "'", d.span);
            if (parent->kind != SymbolKind::Class) {
                throw TypeError("'" + d.parent_class + "' is not a class", d.span);
            }
            ci.parent = d.parent_class;
            ci.attributes = cp_.classes.at(d.parent_class).attributes;
            for (const auto& [n, _] : ci.attributes) names.insert(n);
        }
        Symbol& s = declare(d, SymbolKind::Class, Namespace::Value);
        s.type = ValueType::object(d.name);
        for (const auto& a : d.attributes) {
            if (!names.insert(a.name).second) {
                throw DuplicateName("attribute '" + a.name + "' is already defined in class " + d.name, a.span);
            }
            ci.attributes.emplace_back(a.name, attribute_type(a.type_name, a.span));
        }
        cp_.classes[d.name] = std::move(ci);
    }

    // Factor bodies select state components: S, S[i], S[a:b], or the same
    // forms over another factor.
    std::vector<std::size_t> factor_indices(const Expr& e) {
        auto fail = [&]() -> std::vector<std::size_t> {
            throw TypeError("a Factor must be S, a factor, or an index/slice of one: '" + print_expr(e) + "'", e.span);
        };
        switch (e.kind) {
        case ExprKind::State: {
            if (!cp_.state_dim) fail();
            std::vector<std::size_t> all(*cp_.state_dim);
            for (std::size_t i = 0; i < all.size(); ++i) all[i] = i;
            return all;
        }
        case ExprKind::Identifier: {
            const Symbol* s = cp_.symbols.lookup(e.name);
            if (!s || s->kind != SymbolKind::Factor) return fail();
            return s->indices;
        }
        case ExprKind::Index: {
            auto base = factor_indices(*e.children[0]);
            std::size_t i = constant_index(*e.children[1]);
            if (i >= base.size()) throw TypeError("index out of range in factor", e.span);
            return {base[i]};
        }
        case ExprKind::Slice: {
            std::size_t lo = constant_index(*e.children[1]);
            std::size_t hi = constant_index(*e.children[2]);
            if (e.children[0]->kind == ExprKind::State && !cp_.state_dim) {
                std::vector<std::size_t> out;
                for (std::size_t i = lo; i < hi; ++i) out.push_back(i);
                return out;
            }
            auto base = factor_indices(*e.children[0]);
            if (hi > base.size()) throw TypeError("slice out of range in factor", e.span);
            return {base.begin() + static_cast<std::ptrdiff_t>(lo), base.begin() + static_cast<std::ptrdiff_t>(hi)};
        }
        default: return fail();
        }
    }

    std::size_t constant_index(const Expr& e) {
        if (e.kind == ExprKind::Number) {
            if (!e.is_integer || e.number < 0) throw TypeError("index must be a non-negative integer", e.span);
            return static_cast<std::size_t>(e.number);
        }
        if (e.kind == ExprKind::Identifier) {
            const Symbol* s = cp_.symbols.lookup(e.name);
            if (!s) throw UnresolvedName("unknown name '" + e.name + "'", e.span);
            if (s->kind != SymbolKind::Constant || !s->type.is_scalar()) {
                throw TypeError("index '" + e.name + "' must be an integer constant", e.span);
            }
            GroundedValue v = evaluate(cp_, e, EvalContext{});
            if (!v.is_scalar() || v.real[0] < 0 || v.real[0] != std::floor(v.real[0])) {
                throw TypeError("index '" + e.name + "' must be a non-negative integer constant", e.span);
            }
            return static_cast<std::size_t>(v.real[0]);
        }
        throw TypeError("index must be an integer literal or constant", e.span);
    }

    // ---- statements -------------------------------------------------------
    void statements(const std::vector<Statement>& body, BodyKind kind, const std::string& owner) {
        for (const auto& st : body) statement(st, kind, owner);
    }

    void statement(const Statement& st, BodyKind kind, const std::string& owner) {
        switch (st.kind) {
        case StatementKind::Execute: check_execute(st, owner); break;
        case StatementKind::Reward: {
            ExprInfo ei = expr(*st.expr);
            if (!ei.type.is_numeric() || ei.type.dim > 1) {
                throw TypeError("Reward must be a real scalar, found " + ei.type.str(), st.expr->span);
            }
            break;
        }
        case StatementKind::Restrict: {
            ExprInfo ei = expr(*st.expr);
            if (ei.type.kind != TypeKind::Action) {
                throw TypeError("Restrict expects an action, found " + ei.type.str(), st.expr->span);
            }
            require_sig(*st.expr, ei.sig, DomainSignature::none(), "a restricted action");
            break;
        }
        case StatementKind::Reference: {
            const Symbol* s = cp_.symbols.lookup(st.reference, Namespace::Effect);
            if (st.reference == owner) {
                throw RecursionError("effect '" + owner + "' references itself", st.span);
            }
            if (!s) throw UnresolvedName("unknown effect '" + st.reference + "'", st.span);
            if (s->entry && !cp_.vocab->is_bound(*s->entry)) {
                throw UnresolvedName("no grounding registered for effect '" + st.reference + "'", st.span);
            }
            break;
        }
        case StatementKind::Predict: check_prediction(st); break;
        case StatementKind::Conditional: {
            const DomainSignature allowed =
                kind == BodyKind::Effect ? DomainSignature::state_action() : DomainSignature::state();
            for (const auto& br : st.branches) {
                if (br.guard) {
                    ExprInfo ei = expr(*br.guard);
                    if (ei.type.kind != TypeKind::Boolean) {
                        throw TypeError("condition must be Boolean, found " + ei.type.str(), br.guard->span);
                    }
                    require_sig(*br.guard, ei.sig, allowed, "a condition here");
                }
                statements(br.body, kind, owner);
            }
            break;
        }
        case StatementKind::Probabilistic: {
            double total = 0.0;
            for (const auto& alt : st.alternatives) {
                ExprInfo ei = expr(*alt.probability);
                if (!ei.type.is_scalar()) throw TypeError("probability must be a real scalar", alt.probability->span);
                require_sig(*alt.probability, ei.sig, DomainSignature::none(), "a probability");
                GroundedValue p = evaluate(cp_, *alt.probability, EvalContext{});
                if (!p.is_scalar()) throw TypeError("probability must be a real scalar", alt.probability->span);
                if (p.real[0] < 0.0 || p.real[0] > 1.0) {
                    throw IllFormedComposition("probability " + format_number(p.real[0]) + " is outside [0, 1]",
                                               alt.probability->span);
                }
                total += p.real[0];
                statements(alt.statement, kind, owner);
            }
            if (total > 1.0 + 1e-9) {
                throw IllFormedComposition("probabilities sum to " + format_number(total) + " > 1", st.span);
            }
            break;
        }
        }
    }

    void check_execute(const Statement& st, const std::string& owner) {
        const Expr& e = *st.expr;
        if (e.kind == ExprKind::Identifier) {
            const Symbol* s = cp_.symbols.lookup(e.name);
            if (!s) throw UnresolvedName("unknown action or policy '" + e.name + "'", e.span);
            if (s->kind == SymbolKind::Policy || s->kind == SymbolKind::LearnablePolicy) {
                if (!owner.empty() && e.name == owner) {
                    throw RecursionError("policy '" + owner + "' executes itself", e.span);
                }
                if (s->entry && !cp_.vocab->is_bound(*s->entry)) {
                    throw UnresolvedName("no grounding registered for policy '" + e.name + "'", e.span);
                }
                cp_.info[&e] = {ValueType::any(), DomainSignature::state()};
                return;
            }
        }
        ExprInfo ei = expr(e);
        if (ei.type.kind != TypeKind::Action) {
            throw TypeError("Execute expects an action or a policy, found " + ei.type.str(), e.span);
        }
        require_sig(e, ei.sig, DomainSignature::none(), "an executed action");
    }

    void check_prediction(const Statement& st) {
        ExprInfo ei = expr(*st.expr);
        require_sig(*st.expr, ei.sig, DomainSignature::state_action(), "a prediction");
        switch (st.target.kind) {
        case PredictionTargetKind::WholeState:
            if (!ei.type.is_numeric()) {
                throw TypeError("S' must be predicted by a state vector, found " + ei.type.str(), st.expr->span);
            }
            if (cp_.state_dim && ei.type.dim != 0 && ei.type.dim != *cp_.state_dim) {
                throw TypeError("predicted state has dimension " + std::to_string(ei.type.dim) + ", expected " +
                                    std::to_string(*cp_.state_dim),
                                st.expr->span);
            }
            break;
        case PredictionTargetKind::Factor: {
            const Symbol* s = cp_.symbols.lookup(st.target.factor);
            if (!s) throw UnresolvedName("unknown factor '" + st.target.factor + "'", st.span);
            if (s->kind != SymbolKind::Factor) {
                throw TypeError("'" + st.target.factor + "' is a " + std::string(to_string(s->kind)) +
                                    ", only factors can be predicted",
                                st.span);
            }
            if (!ei.type.is_numeric()) {
                throw TypeError("factor prediction must be real-valued, found " + ei.type.str(), st.expr->span);
            }
            const std::size_t d = s->indices.size();
            if (ei.type.dim != 0 && ei.type.dim != d && ei.type.dim != 1) {
                throw TypeError("factor '" + s->name + "' has dimension " + std::to_string(d) +
                                    " but the prediction has " + std::to_string(ei.type.dim),
                                st.expr->span);
            }
            break;
        }
        case PredictionTargetKind::ObjectAttribute: {
            const Symbol* s = cp_.symbols.lookup(st.target.object);
            if (!s || s->kind != SymbolKind::StateObject) {
                throw UnresolvedName("unknown state object '" + st.target.object + "'", st.span);
            }
            const AttributeSpec* a = s->entry->attribute(st.target.attribute);
            if (!a) {
                throw UnresolvedName("object '" + st.target.object + "' has no attribute '" + st.target.attribute + "'",
                                     st.span);
            }
            const bool ok = a->type.kind == TypeKind::Boolean ? ei.type.kind == TypeKind::Boolean
                                                                 : ei.type.is_numeric();
            if (!ok) {
                throw TypeError("attribute " + st.target.object + "." + st.target.attribute + " is " +
                                    a->type.str() + ", prediction is " + ei.type.str(),
                                st.expr->span);
            }
            break;
        }
        }
    }

    void check_static_restrictions() {
        if (cp_.actions.empty()) return;
        for (const Symbol* s : cp_.symbols.in_order(Namespace::Restriction)) {
            std::set<double> ids;
            for (const auto& st : s->decl->body) {
                if (st.kind != StatementKind::Restrict) continue;
                GroundedValue v = evaluate(cp_, *st.expr, EvalContext{});
                if (v.kind == GroundedValue::Kind::Action) ids.insert(v.action.id);
            }
            if (ids.size() == cp_.actions.size()) {
                throw CompileError("action restriction '" + s->name + "' unconditionally restricts every action",
                                   s->site);
            }
        }
    }

    // ---- expressions ------------------------------------------------------
    ExprInfo record(const Expr& e, ExprInfo info) {
        cp_.info[&e] = info;
        return info;
    }

    ExprInfo identifier(const Expr& e) {
        const Symbol* s = cp_.symbols.lookup(e.name);
        if (!s) {
            if (cp_.symbols.lookup(e.name, Namespace::Effect)) {
                throw TypeError("effect '" + e.name + "' cannot be used as a value", e.span);
            }
            if (cp_.symbols.lookup(e.name, Namespace::Option)) {
                throw TypeError("option '" + e.name + "' cannot be used as a value", e.span);
            }
            throw UnresolvedName("unknown name '" + e.name + "'", e.span);
        }
        switch (s->kind) {
        case SymbolKind::Policy:
        case SymbolKind::LearnablePolicy:
        case SymbolKind::Class:
        case SymbolKind::StateObject:
            throw TypeError(std::string(to_string(s->kind)) + " '" + e.name + "' cannot be used as a value", e.span);
        default: break;
        }
        if (s->entry && !cp_.vocab->is_bound(*s->entry)) {
            throw UnresolvedName("no grounding registered for '" + s->entry->grounding_key + "'", e.span);
        }
        return record(e, {s->type, s->sig});
    }

    static std::size_t broadcast_dim(std::size_t a, std::size_t b, bool& ok) {
        ok = true;
        if (a == b) return a;
        if (a == 0 || b == 0) return a > 1 ? a : (b > 1 ? b : 0);
        if (a == 1) return b;
        if (b == 1) return a;
        ok = false;
        return 0;
    }

    static bool comparable(const ValueType& a, const ValueType& b) {
        if (a.is_numeric() && b.is_numeric()) return a.dim == b.dim || a.dim == 0 || b.dim == 0;
        if (a.kind == TypeKind::Any || b.kind == TypeKind::Any) return true;
        if (a.kind != b.kind) return false;
        if (a.kind == TypeKind::List) return comparable(*a.element, *b.element);
        return a.kind != TypeKind::Object || a.class_name == b.class_name;
    }

    ExprInfo expr(const Expr& e) {
        switch (e.kind) {
        case ExprKind::Number: return record(e, {ValueType::real(1), {}});
        case ExprKind::Boolean: return record(e, {ValueType::boolean(), {}});
        case ExprKind::List: {
            DomainSignature sig;
            std::vector<ValueType> types;
            for (const auto& c : e.children) {
                ExprInfo ci = expr(*c);
                sig |= ci.sig;
                types.push_back(ci.type);
            }
            if (types.empty()) return record(e, {ValueType::list_of(ValueType::any()), sig});
            bool all_scalar = true;
            for (const auto& t : types) all_scalar = all_scalar && t.is_scalar();
            if (all_scalar) return record(e, {ValueType::real(types.size()), sig});
            for (const auto& t : types) {
                if (!comparable(t, types.front())) {
                    throw TypeError("list elements have different types: " + types.front().str() + " and " + t.str(),
                                    e.span);
                }
            }
            ValueType elem = types.front().kind == TypeKind::State ? ValueType::real(types.front().dim) : types.front();
            return record(e, {ValueType::list_of(elem), sig});
        }
        case ExprKind::Identifier: return identifier(e);
        case ExprKind::State:
            return record(e, {ValueType::state(cp_.state_dim.value_or(0)), DomainSignature::state()});
        case ExprKind::Action: return record(e, {ValueType::action(), DomainSignature(DomainSignature::kA)});
        case ExprKind::Prime: {
            ExprInfo ci = expr(*e.children[0]);
            if (ci.sig.has_action() || ci.sig.has_next_state()) {
                throw DomainError("prime applies only to functions of the state, '" + print_expr(*e.children[0]) +
                                      "' depends on " + ci.sig.str(),
                                  e.span);
            }
            return record(e, {ci.type, ci.sig | DomainSignature(DomainSignature::kSNext)});
        }
        case ExprKind::Index: {
            ExprInfo base = expr(*e.children[0]);
            expr(*e.children[1]);
            const std::size_t i = constant_index(*e.children[1]);
            if (base.type.is_numeric()) {
                if (base.type.dim != 0 && i >= base.type.dim) {
                    throw TypeError("index " + std::to_string(i) + " out of range for " + base.type.str(), e.span);
                }
                return record(e, {ValueType::real(1), base.sig});
            }
            if (base.type.kind == TypeKind::List) return record(e, {*base.type.element, base.sig});
            throw TypeError("cannot index a value of type " + base.type.str(), e.span);
        }
        case ExprKind::Slice: {
            ExprInfo base = expr(*e.children[0]);
            expr(*e.children[1]);
            expr(*e.children[2]);
            const std::size_t lo = constant_index(*e.children[1]);
            const std::size_t hi = constant_index(*e.children[2]);
            if (!base.type.is_numeric()) throw TypeError("cannot slice a value of type " + base.type.str(), e.span);
            if (lo >= hi || (base.type.dim != 0 && hi > base.type.dim)) {
                throw TypeError("slice [" + std::to_string(lo) + ":" + std::to_string(hi) + "] is invalid for " +
                                    base.type.str(),
                                e.span);
            }
            return record(e, {ValueType::real(hi - lo), base.sig});
        }
        case ExprKind::Attribute: {
            ExprInfo base = expr(*e.children[0]);
            if (base.type.kind == TypeKind::State) {
                const Symbol* s = cp_.symbols.lookup(e.name);
                if (!s || s->kind != SymbolKind::StateObject) {
                    throw UnresolvedName("unknown state object '" + e.name + "'", e.span);
                }
                return record(e, {ValueType::object(e.name), base.sig});
            }
            if (base.type.kind == TypeKind::Object) {
                auto it = cp_.classes.find(base.type.class_name);
                if (it == cp_.classes.end()) {
                    // Untyped object attribute (declared as `object`).
                    return record(e, {ValueType::any(), base.sig});
                }
                for (const auto& [name, type] : it->second.attributes) {
                    if (name == e.name) return record(e, {type, base.sig});
                }
                throw TypeError(base.type.class_name + " has no attribute '" + e.name + "'", e.span);
            }
            if (base.type.kind == TypeKind::Any) return record(e, {ValueType::any(), base.sig});
            throw TypeError("cannot access attribute of a value of type " + base.type.str(), e.span);
        }
        case ExprKind::Call: {
            const Symbol* s = cp_.symbols.lookup(e.name);
            if (!s) throw UnresolvedName("unknown class '" + e.name + "'", e.span);
            if (s->kind != SymbolKind::Class) throw TypeError("'" + e.name + "' is not a class", e.span);
            const ClassInfo& ci = cp_.classes.at(e.name);
            if (ci.attributes.size() != e.children.size()) {
                throw TypeError(e.name + " expects " + std::to_string(ci.attributes.size()) + " arguments, got " +
                                    std::to_string(e.children.size()),
                                e.span);
            }
            DomainSignature sig;
            for (std::size_t i = 0; i < e.children.size(); ++i) {
                ExprInfo ai = expr(*e.children[i]);
                sig |= ai.sig;
                const ValueType& want = ci.attributes[i].second;
                const bool ok = want.kind == TypeKind::Any || ai.type.kind == TypeKind::Any ||
                                (want.is_real() ? ai.type.is_numeric() && ai.type.dim <= 1
                                                : comparable(want, ai.type));
                if (!ok) {
                    throw TypeError("argument " + std::to_string(i + 1) + " of " + e.name + " should be " +
                                        want.str() + ", found " + ai.type.str(),
                                    e.children[i]->span);
                }
            }
            return record(e, {ValueType::object(e.name), sig});
        }
        case ExprKind::Negate: {
            ExprInfo ci = expr(*e.children[0]);
            if (!ci.type.is_numeric()) throw TypeError("cannot negate a value of type " + ci.type.str(), e.span);
            return record(e, {ValueType::real(ci.type.dim), ci.sig});
        }
        case ExprKind::Not: {
            ExprInfo ci = expr(*e.children[0]);
            if (ci.type.kind != TypeKind::Boolean) throw TypeError("'not' expects a Boolean, found " + ci.type.str(), e.span);
            return record(e, {ValueType::boolean(), ci.sig});
        }
        case ExprKind::Binary: return binary(e);
        }
        throw TypeError("unsupported expression", e.span);
    }

    ExprInfo binary(const Expr& e) {
        ExprInfo l = expr(*e.children[0]);
        ExprInfo r = expr(*e.children[1]);
        const DomainSignature sig = l.sig | r.sig;
        const std::string op(to_string(e.op));
        auto mismatch = [&]() -> ExprInfo {
            throw TypeError("operator '" + op + "' cannot combine " + l.type.str() + " and " + r.type.str(), e.span);
        };
        switch (e.op) {
        case BinaryOp::Add:
        case BinaryOp::Sub:
        case BinaryOp::Mul:
        case BinaryOp::Div: {
            if (!l.type.is_numeric() || !r.type.is_numeric()) return mismatch();
            bool ok = false;
            const std::size_t d = broadcast_dim(l.type.dim, r.type.dim, ok);
            if (!ok) return mismatch();
            return record(e, {ValueType::real(d), sig});
        }
        case BinaryOp::Lt:
        case BinaryOp::Le:
        case BinaryOp::Gt:
        case BinaryOp::Ge:
            if (!l.type.is_numeric() || !r.type.is_numeric() || l.type.dim > 1 || r.type.dim > 1) {
                throw TypeError("order comparison '" + op + "' requires scalars, found " + l.type.str() + " and " +
                                    r.type.str(),
                                e.span);
            }
            return record(e, {ValueType::boolean(), sig});
        case BinaryOp::Eq:
        case BinaryOp::Ne:
            if ((l.type.kind == TypeKind::Action) != (r.type.kind == TypeKind::Action)) {
                throw TypeError("comparison with an action requires an action on both sides ('" +
                                    print_expr(l.type.kind == TypeKind::Action ? *e.children[1] : *e.children[0]) +
                                    "' is " + (l.type.kind == TypeKind::Action ? r.type : l.type).str() + ")",
                                e.span);
            }
            if (!comparable(l.type, r.type)) return mismatch();
            return record(e, {ValueType::boolean(), sig});
        case BinaryOp::And:
        case BinaryOp::Or:
            if (l.type.kind != TypeKind::Boolean || r.type.kind != TypeKind::Boolean) return mismatch();
            return record(e, {ValueType::boolean(), sig});
        case BinaryOp::In:
            if (r.type.kind == TypeKind::List) {
                if (!comparable(l.type.kind == TypeKind::State ? ValueType::real(l.type.dim) : l.type, *r.type.element)) {
                    return mismatch();
                }
                return record(e, {ValueType::boolean(), sig});
            }
            if (r.type.is_numeric() && l.type.is_numeric() && l.type.dim <= 1) {
                return record(e, {ValueType::boolean(), sig});
            }
            return mismatch();
        }
        return mismatch();
    }

    CheckedProgram& cp_;
};

bool reaches(const CheckedProgram& cp, const std::vector<Statement>& body, StatementKind wanted,
             std::set<std::string>& visiting) {
    for (const auto& st : body) {
        if (st.kind == wanted) return true;
        switch (st.kind) {
        case StatementKind::Conditional:
            for (const auto& br : st.branches) {
                if (reaches(cp, br.body, wanted, visiting)) return true;
            }
            break;
        case StatementKind::Probabilistic:
            for (const auto& alt : st.alternatives) {
                if (reaches(cp, alt.statement, wanted, visiting)) return true;
            }
            break;
        case StatementKind::Reference: {
            const Symbol* s = cp.symbols.lookup(st.reference, Namespace::Effect);
            if (!s) break;
            if (s->entry) return true;  // host effects may carry either kind of knowledge
            if (s->decl && visiting.insert(st.reference).second) {
                if (reaches(cp, s->decl->body, wanted, visiting)) return true;
            }
            break;
        }
        default: break;
        }
    }
    return false;
}

}  // namespace

std::shared_ptr<const CheckedProgram> check_program(Program program, std::shared_ptr<const VocabularyRegistry> vocab) {
    auto cp = std::make_shared<CheckedProgram>();
    cp->program = std::move(program);
    cp->vocab = vocab ? std::move(vocab) : std::make_shared<const VocabularyRegistry>();
    Checker(*cp).run();
    return cp;
}

std::shared_ptr<const CheckedProgram> check_program(Program program) {
    return check_program(std::move(program), nullptr);
}

CapabilityVector capability_vector(const CheckedProgram& cp) {
    CapabilityVector v{};
    if (const Symbol* main = cp.symbols.lookup("main", Namespace::Effect)) {
        if (main->entry) {
            v[static_cast<std::size_t>(Capability::Transition)] = true;
            v[static_cast<std::size_t>(Capability::Reward)] = true;
        } else {
            std::set<std::string> visiting{"main"};
            v[static_cast<std::size_t>(Capability::Transition)] =
                reaches(cp, main->decl->body, StatementKind::Predict, visiting);
            visiting = {"main"};
            v[static_cast<std::size_t>(Capability::Reward)] =
                reaches(cp, main->decl->body, StatementKind::Reward, visiting);
        }
    }
    const Symbol* policy = cp.symbols.lookup("main");
    v[static_cast<std::size_t>(Capability::Policy)] =
        policy && (policy->kind == SymbolKind::Policy || policy->kind == SymbolKind::LearnablePolicy);
    v[static_cast<std::size_t>(Capability::Options)] = !cp.symbols.in_order(Namespace::Option).empty();
    v[static_cast<std::size_t>(Capability::Restrictions)] = !cp.symbols.in_order(Namespace::Restriction).empty();
    for (const Symbol* s : cp.symbols.in_order(Namespace::Value)) {
        if (s->kind == SymbolKind::Goal) v[static_cast<std::size_t>(Capability::Goals)] = true;
    }
    return v;
}

}  // namespace rlang
