#include "rlang/evaluator.hpp"

#include <cmath>

#include "rlang/diagnostics.hpp"
#include "rlang/parser.hpp"

namespace rlang {

namespace {

using Kind = GroundedValue::Kind;

class Evaluator {
public:
    Evaluator(const CheckedProgram& cp, const EvalContext& ctx) : cp_(cp), ctx_(ctx) {}

    GroundedValue eval(const Expr& e) {
        switch (e.kind) {
        case ExprKind::Number: return GroundedValue::scalar(e.number);
        case ExprKind::Boolean: return GroundedValue::make_bool(e.boolean);
        case ExprKind::List: {
            std::vector<GroundedValue> items;
            bool all_scalar = true;
            for (const auto& c : e.children) {
                items.push_back(eval(*c));
                if (items.back().is_unknown()) return GroundedValue::unknown();
                all_scalar = all_scalar && items.back().is_scalar();
            }
            if (all_scalar && !items.empty()) {
                std::vector<double> v;
                for (const auto& it : items) v.push_back(it.real[0]);
                return GroundedValue::make_real(std::move(v));
            }
            return GroundedValue::make_list(std::move(items));
        }
        case ExprKind::Identifier: return identifier(e);
        case ExprKind::State: return GroundedValue::make_state(state(e));
        case ExprKind::Action:
            if (!ctx_.a) throw EvalError("no action in context for '" + print_expr(e) + "'", e.span);
            return GroundedValue::make_action(*ctx_.a);
        case ExprKind::Prime: {
            if (!ctx_.s_next) throw EvalError("no next state in context for '" + print_expr(e) + "'", e.span);
            EvalContext next;
            next.s = ctx_.s_next;
            next.object_attribute = ctx_.object_attribute;
            return Evaluator(cp_, next).eval(*e.children[0]);
        }
        case ExprKind::Index: {
            GroundedValue base = eval(*e.children[0]);
            GroundedValue idx = eval(*e.children[1]);
            if (base.is_unknown() || idx.is_unknown()) return GroundedValue::unknown();
            const std::size_t i = as_index(idx, e);
            if (base.is_numeric()) {
                if (i >= base.real.size()) throw EvalError("index " + std::to_string(i) + " out of range", e.span);
                return GroundedValue::scalar(base.real[i]);
            }
            if (base.kind == Kind::List) {
                if (i >= base.list.size()) throw EvalError("index " + std::to_string(i) + " out of range", e.span);
                return base.list[i];
            }
            throw TypeError("cannot index " + base.str(), e.span);
        }
        case ExprKind::Slice: {
            GroundedValue base = eval(*e.children[0]);
            GroundedValue lo = eval(*e.children[1]);
            GroundedValue hi = eval(*e.children[2]);
            if (base.is_unknown() || lo.is_unknown() || hi.is_unknown()) return GroundedValue::unknown();
            const std::size_t l = as_index(lo, e), h = as_index(hi, e);
            if (!base.is_numeric()) throw TypeError("cannot slice " + base.str(), e.span);
            if (l > h || h > base.real.size()) throw EvalError("slice out of range", e.span);
            return GroundedValue::make_real({base.real.begin() + static_cast<std::ptrdiff_t>(l),
                                             base.real.begin() + static_cast<std::ptrdiff_t>(h)});
        }
        case ExprKind::Attribute: {
            if (e.children[0]->kind == ExprKind::State) return state_object(e.name, state(*e.children[0]), e);
            GroundedValue base = eval(*e.children[0]);
            if (base.is_unknown()) return GroundedValue::unknown();
            if (base.kind != Kind::Object) throw TypeError("cannot access attribute of " + base.str(), e.span);
            const GroundedValue* v = base.attribute(e.name);
            if (!v) throw EvalError(base.class_name + " has no attribute '" + e.name + "'", e.span);
            return *v;
        }
        case ExprKind::Call: {
            const ClassInfo& ci = cp_.classes.at(e.name);
            std::vector<std::pair<std::string, GroundedValue>> attrs;
            for (std::size_t i = 0; i < e.children.size(); ++i) {
                GroundedValue v = eval(*e.children[i]);
                if (v.is_unknown()) return GroundedValue::unknown();
                attrs.emplace_back(ci.attributes[i].first, std::move(v));
            }
            return GroundedValue::make_object(e.name, std::move(attrs));
        }
        case ExprKind::Negate: {
            GroundedValue v = eval(*e.children[0]);
            if (v.is_unknown()) return v;
            if (!v.is_numeric()) throw TypeError("cannot negate " + v.str(), e.span);
            for (double& x : v.real) x = -x;
            v.kind = Kind::Real;
            return v;
        }
        case ExprKind::Not: {
            GroundedValue v = eval(*e.children[0]);
            if (v.is_unknown()) return v;
            if (v.kind != Kind::Bool) throw TypeError("'not' expects a Boolean, got " + v.str(), e.span);
            return GroundedValue::make_bool(!v.boolean);
        }
        case ExprKind::Binary: return binary(e);
        }
        throw EvalError("unsupported expression", e.span);
    }

private:
    const std::vector<double>& state(const Expr& e) {
        if (!ctx_.s) throw EvalError("no state in context for '" + print_expr(e) + "'", e.span);
        return *ctx_.s;
    }

    static std::size_t as_index(const GroundedValue& v, const Expr& e) {
        if (!v.is_scalar() || v.real[0] < 0 || v.real[0] != std::floor(v.real[0])) {
            throw EvalError("index must be a non-negative integer, got " + v.str(), e.span);
        }
        return static_cast<std::size_t>(v.real[0]);
    }

    GroundedValue state_object(const std::string& object, const std::vector<double>& s, const Expr& e) {
        const Symbol* sym = cp_.symbols.lookup(object);
        if (!sym || sym->kind != SymbolKind::StateObject) throw UnresolvedName("unknown state object '" + object + "'", e.span);
        std::vector<std::pair<std::string, GroundedValue>> attrs;
        for (const auto& a : sym->entry->attributes) {
            GroundedValue v;
            if (ctx_.object_attribute) {
                v = ctx_.object_attribute(object, a.name, s);
            } else if (a.index) {
                if (*a.index >= s.size()) throw EvalError("attribute index out of range for " + object + "." + a.name, e.span);
                const double x = s[*a.index];
                v = a.type.kind == TypeKind::Boolean ? GroundedValue::make_bool(x != 0.0) : GroundedValue::scalar(x);
            }
            attrs.emplace_back(a.name, std::move(v));
        }
        return GroundedValue::make_object(object, std::move(attrs));
    }

    GroundedValue host_value(const Symbol& s, const Expr& e) {
        const ValueGrounding* fn = cp_.vocab->value_grounding(s.entry->grounding_key);
        if (!fn) throw UnresolvedName("no grounding registered for '" + s.entry->grounding_key + "'", e.span);
        GroundedValue v = (*fn)(ctx_);
        if (v.is_unknown()) return v;
        const bool ok = s.kind == SymbolKind::Proposition ? v.kind == Kind::Bool : v.is_numeric();
        if (!ok) {
            throw TypeError("grounding '" + s.entry->grounding_key + "' returned " + v.str() + " for " +
                                std::string(to_string(s.kind)) + " '" + s.name + "'",
                            e.span);
        }
        if (v.kind == Kind::State) v.kind = Kind::Real;
        return v;
    }

    GroundedValue identifier(const Expr& e) {
        const Symbol* s = cp_.symbols.lookup(e.name);
        if (!s) throw UnresolvedName("unknown name '" + e.name + "'", e.span);
        switch (s->kind) {
        case SymbolKind::Builtin: return GroundedValue::make_bool(true);
        case SymbolKind::Constant:
            if (s->entry) return s->entry->value;
            return Evaluator(cp_, EvalContext{}).eval(*s->decl->value);
        case SymbolKind::Action:
            if (s->entry) return s->entry->value;
            if (auto a = cp_.action_named(s->name)) return GroundedValue::make_action(*a);
            throw EvalError("action '" + s->name + "' has no id", e.span);
        case SymbolKind::Factor: {
            const auto& st = state(e);
            std::vector<double> out;
            out.reserve(s->indices.size());
            for (std::size_t i : s->indices) {
                if (i >= st.size()) throw EvalError("factor '" + s->name + "' index out of range", e.span);
                out.push_back(st[i]);
            }
            return GroundedValue::make_real(std::move(out));
        }
        case SymbolKind::Proposition:
        case SymbolKind::Feature:
            if (s->entry) return host_value(*s, e);
            [[fallthrough]];
        case SymbolKind::Goal:
        case SymbolKind::MarkovFeature:
        case SymbolKind::Object: {
            GroundedValue v = eval(*s->decl->value);
            if (v.kind == Kind::State) v.kind = Kind::Real;
            return v;
        }
        default: throw TypeError(std::string(to_string(s->kind)) + " '" + e.name + "' is not a value", e.span);
        }
    }

    static bool values_equal(const GroundedValue& a, const GroundedValue& b) {
        if (a.is_numeric() && b.is_numeric()) return a.real == b.real;
        if (a.kind != b.kind) return false;
        if (a.kind == Kind::List) {
            if (a.list.size() != b.list.size()) return false;
            for (std::size_t i = 0; i < a.list.size(); ++i) {
                if (!values_equal(a.list[i], b.list[i])) return false;
            }
            return true;
        }
        return a == b;
    }

    static bool contains_unknown(const GroundedValue& v) {
        if (v.is_unknown()) return true;
        for (const auto& x : v.list) {
            if (contains_unknown(x)) return true;
        }
        for (const auto& [_, x] : v.attributes) {
            if (contains_unknown(x)) return true;
        }
        return false;
    }

    GroundedValue binary(const Expr& e) {
        GroundedValue l = eval(*e.children[0]);
        GroundedValue r = eval(*e.children[1]);
        if (l.is_unknown() || r.is_unknown()) return GroundedValue::unknown();
        switch (e.op) {
        case BinaryOp::Add:
        case BinaryOp::Sub:
        case BinaryOp::Mul:
        case BinaryOp::Div: return arithmetic(e, l, r);
        case BinaryOp::Lt:
        case BinaryOp::Le:
        case BinaryOp::Gt:
        case BinaryOp::Ge: {
            if (!l.is_scalar() || !r.is_scalar()) throw TypeError("order comparison requires scalars", e.span);
            const double x = l.real[0], y = r.real[0];
            bool out = e.op == BinaryOp::Lt ? x < y : e.op == BinaryOp::Le ? x <= y : e.op == BinaryOp::Gt ? x > y : x >= y;
            return GroundedValue::make_bool(out);
        }
        case BinaryOp::Eq:
        case BinaryOp::Ne: {
            if (contains_unknown(l) || contains_unknown(r)) return GroundedValue::unknown();
            const bool eq = values_equal(l, r);
            return GroundedValue::make_bool(e.op == BinaryOp::Eq ? eq : !eq);
        }
        case BinaryOp::And:
        case BinaryOp::Or:
            if (l.kind != Kind::Bool || r.kind != Kind::Bool) throw TypeError("and/or expect Booleans", e.span);
            return GroundedValue::make_bool(e.op == BinaryOp::And ? l.boolean && r.boolean : l.boolean || r.boolean);
        case BinaryOp::In: {
            if (contains_unknown(l) || contains_unknown(r)) return GroundedValue::unknown();
            if (r.kind == Kind::List) {
                for (const auto& item : r.list) {
                    if (values_equal(l, item)) return GroundedValue::make_bool(true);
                }
                return GroundedValue::make_bool(false);
            }
            if (r.is_numeric() && l.is_scalar()) {
                for (double x : r.real) {
                    if (x == l.real[0]) return GroundedValue::make_bool(true);
                }
                return GroundedValue::make_bool(false);
            }
            // A vector against a vector of scalars: the checker accepts a
            // list of one vector written as a plain vector.
            if (r.is_numeric() && l.is_numeric()) return GroundedValue::make_bool(l.real == r.real);
            throw TypeError("'in' expects a list or vector on the right, got " + r.str(), e.span);
        }
        }
        throw EvalError("unsupported operator", e.span);
    }

    static GroundedValue arithmetic(const Expr& e, const GroundedValue& l, const GroundedValue& r) {
        if (!l.is_numeric() || !r.is_numeric()) {
            throw TypeError("arithmetic on non-numeric values " + l.str() + " and " + r.str(), e.span);
        }
        const std::size_t n = std::max(l.real.size(), r.real.size());
        if (l.real.size() != n && l.real.size() != 1) throw TypeError("dimension mismatch in arithmetic", e.span);
        if (r.real.size() != n && r.real.size() != 1) throw TypeError("dimension mismatch in arithmetic", e.span);
        std::vector<double> out(n);
        for (std::size_t i = 0; i < n; ++i) {
            const double x = l.real[l.real.size() == 1 ? 0 : i];
            const double y = r.real[r.real.size() == 1 ? 0 : i];
            switch (e.op) {
            case BinaryOp::Add: out[i] = x + y; break;
            case BinaryOp::Sub: out[i] = x - y; break;
            case BinaryOp::Mul: out[i] = x * y; break;
            default:
                if (y == 0.0) throw EvalError("division by zero in '" + print_expr(e) + "'", e.span);
                out[i] = x / y;
            }
        }
        return GroundedValue::make_real(std::move(out));
    }

    const CheckedProgram& cp_;
    const EvalContext& ctx_;
};

}  // namespace

GroundedValue evaluate(const CheckedProgram& program, const Expr& expr, const EvalContext& ctx) {
    return Evaluator(program, ctx).eval(expr);
}

std::optional<bool> evaluate_guard(const CheckedProgram& program, const Expr& expr, const EvalContext& ctx) {
    GroundedValue v = evaluate(program, expr, ctx);
    if (v.is_unknown()) return std::nullopt;
    if (v.kind != Kind::Bool) throw TypeError("condition did not produce a Boolean: " + v.str(), expr.span);
    return v.boolean;
}

GroundedValue evaluate_partial(const CheckedProgram& program, const PartialFunction& pf, const EvalContext& ctx) {
    for (const auto& [guard, value] : pf.rules) {
        if (!guard) return evaluate(program, *value, ctx);
        std::optional<bool> g = evaluate_guard(program, *guard, ctx);
        if (!g) return GroundedValue::unknown();
        if (*g) return evaluate(program, *value, ctx);
    }
    return GroundedValue::unknown();
}

PartialFunction partial_function_of(const Statement& conditional) {
    if (conditional.kind != StatementKind::Conditional) {
        throw CompileError("partial function requires a conditional statement", conditional.span);
    }
    PartialFunction pf;
    for (const auto& br : conditional.branches) {
        if (br.body.size() != 1 || !br.body[0].expr ||
            (br.body[0].kind != StatementKind::Reward && br.body[0].kind != StatementKind::Execute)) {
            throw CompileError("each branch must hold a single Reward or Execute statement", br.span);
        }
        pf.rules.emplace_back(br.guard, br.body[0].expr);
    }
    return pf;
}

}  // namespace rlang
