#include "rlang/knowledge.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>

#include "rlang/diagnostics.hpp"
#include "rlang/evaluator.hpp"
#include "rlang/parser.hpp"

namespace rlang {

namespace {

constexpr double kTol = 1e-9;

std::string probability_text(double p) { return format_probability(std::abs(p) < kTol ? 0.0 : p); }

// ---------------------------------------------------------------------------
// Effects

class EffectInterpreter {
public:
    EffectInterpreter(const CheckedProgram& cp, const EvalContext& ctx) : cp_(cp), ctx_(ctx) {}

    EffectOutcome effect(const std::string& name) {
        const Symbol* s = cp_.symbols.lookup(name, Namespace::Effect);
        if (!s) throw UnresolvedName("unknown effect '" + name + "'");
        if (s->entry) {
            const EffectGrounding* fn = cp_.vocab->effect_grounding(s->entry->grounding_key);
            if (!fn) throw UnresolvedName("no grounding registered for effect '" + name + "'");
            return (*fn)(ctx_);
        }
        return block(s->decl->body);
    }

    // Plain statements compose by product over disjoint factors; references
    // compose by sum over disjoint supports; the two parts then multiply.
    EffectOutcome block(const std::vector<Statement>& body) {
        std::optional<TransitionMeasure> local, refs;
        std::optional<double> reward;
        for (const auto& st : body) {
            EffectOutcome o = statement(st);
            if (o.reward) reward = reward.value_or(0.0) + *o.reward;
            if (!o.transition) continue;
            if (st.kind == StatementKind::Reference) {
                refs = refs ? sum(*refs, *o.transition) : *o.transition;
            } else {
                local = local ? product(*local, *o.transition) : *o.transition;
            }
        }
        EffectOutcome out;
        out.reward = reward;
        if (local && refs) out.transition = product(*local, *refs);
        else if (local) out.transition = local;
        else out.transition = refs;
        return out;
    }

    EffectOutcome statement(const Statement& st) {
        EffectOutcome out;
        switch (st.kind) {
        case StatementKind::Predict: out.transition = prediction(st); break;
        case StatementKind::Reward: {
            if (cp_.info_of(*st.expr).sig.has_next_state() && !ctx_.s_next) break;
            GroundedValue v = evaluate(cp_, *st.expr, ctx_);
            if (v.is_scalar()) out.reward = v.real[0];
            break;
        }
        case StatementKind::Reference: return effect(st.reference);
        case StatementKind::Conditional:
            for (const auto& br : st.branches) {
                if (!br.guard) return block(br.body);
                std::optional<bool> g = evaluate_guard(cp_, *br.guard, ctx_);
                if (!g) return out;
                if (*g) return block(br.body);
            }
            break;
        case StatementKind::Probabilistic: {
            TransitionMeasure mix;
            bool any_transition = false;
            std::optional<double> reward;
            for (const auto& alt : st.alternatives) {
                const double p = evaluate(cp_, *alt.probability, EvalContext{}).real.at(0);
                EffectOutcome o = block(alt.statement);
                if (o.reward) reward = reward.value_or(0.0) + p * *o.reward;
                if (o.transition) {
                    any_transition = true;
                    for (const auto& e : o.transition->entries) mix.add(e.next, p * e.probability);
                }
            }
            if (any_transition) {
                mix.normalize_unknown();
                out.transition = mix;
            }
            out.reward = reward;
            break;
        }
        default: break;
        }
        return out;
    }

private:
    std::optional<TransitionMeasure> prediction(const Statement& st) {
        GroundedValue v = evaluate(cp_, *st.expr, ctx_);
        if (v.is_unknown()) return std::nullopt;
        switch (st.target.kind) {
        case PredictionTargetKind::WholeState:
            return TransitionMeasure::point(NextStateAssignment::full_state(v.real));
        case PredictionTargetKind::Factor: {
            const Symbol* s = cp_.symbols.lookup(st.target.factor);
            FactorAssignment f{st.target.factor, s->indices, v.real};
            if (f.values.size() == 1 && f.indices.size() > 1) f.values.assign(f.indices.size(), v.real[0]);
            if (f.values.size() != f.indices.size()) {
                throw EvalError("prediction for factor '" + f.name + "' has " + std::to_string(f.values.size()) +
                                    " values, expected " + std::to_string(f.indices.size()),
                                st.span);
            }
            return TransitionMeasure::point(NextStateAssignment::factor(std::move(f)));
        }
        case PredictionTargetKind::ObjectAttribute: {
            const Symbol* s = cp_.symbols.lookup(st.target.object);
            const AttributeSpec* a = s->entry->attribute(st.target.attribute);
            if (!a || !a->index) return std::nullopt;  // unmapped attribute: no knowledge
            const double x = v.kind == GroundedValue::Kind::Bool ? (v.boolean ? 1.0 : 0.0) : v.real.at(0);
            FactorAssignment f{st.target.object + "." + st.target.attribute, {*a->index}, {x}};
            return TransitionMeasure::point(NextStateAssignment::factor(std::move(f)));
        }
        }
        return std::nullopt;
    }

    const CheckedProgram& cp_;
    const EvalContext& ctx_;
};

// ---------------------------------------------------------------------------
// Policies: `Execute` behaves as a return statement.

class PolicyInterpreter {
public:
    PolicyInterpreter(const CheckedProgram& cp, const std::vector<double>& s) : cp_(cp) { ctx_.s = s; }

    PolicyQueryResult named(const std::string& name) {
        const Symbol* s = cp_.symbols.lookup(name);
        if (!s) throw UnresolvedName("unknown policy '" + name + "'");
        if (s->kind == SymbolKind::LearnablePolicy) return PolicyQueryResult::unknown();
        if (s->kind != SymbolKind::Policy) throw TypeError("'" + name + "' is not a policy");
        if (s->entry) {
            const ValueGrounding* fn = cp_.vocab->value_grounding(s->entry->grounding_key);
            if (!fn) throw UnresolvedName("no grounding registered for policy '" + name + "'");
            GroundedValue v = (*fn)(ctx_);
            if (v.is_unknown()) return PolicyQueryResult::unknown();
            if (v.kind != GroundedValue::Kind::Action) {
                throw TypeError("policy grounding '" + s->entry->grounding_key + "' returned " + v.str());
            }
            return PolicyQueryResult::point(v.action);
        }
        if (!active_.insert(name).second) throw RecursionError("policy '" + name + "' executes itself");
        auto r = body(s->decl->body);
        active_.erase(name);
        return r.value_or(PolicyQueryResult::unknown());
    }

    // nullopt: control fell through without executing anything.
    std::optional<PolicyQueryResult> body(const std::vector<Statement>& stmts) {
        for (const auto& st : stmts) {
            if (auto r = statement(st)) return r;
        }
        return std::nullopt;
    }

private:
    std::optional<PolicyQueryResult> statement(const Statement& st) {
        switch (st.kind) {
        case StatementKind::Execute: {
            const Expr& e = *st.expr;
            if (e.kind == ExprKind::Identifier) {
                const Symbol* s = cp_.symbols.lookup(e.name);
                if (s && (s->kind == SymbolKind::Policy || s->kind == SymbolKind::LearnablePolicy)) return named(e.name);
            }
            GroundedValue v = evaluate(cp_, e, ctx_);
            if (v.kind != GroundedValue::Kind::Action) return PolicyQueryResult::unknown();
            return PolicyQueryResult::point(v.action);
        }
        case StatementKind::Conditional:
            for (const auto& br : st.branches) {
                if (br.guard) {
                    std::optional<bool> g = evaluate_guard(cp_, *br.guard, ctx_);
                    if (!g) return PolicyQueryResult::unknown();
                    if (!*g) continue;
                }
                return body(br.body);
            }
            return std::nullopt;
        case StatementKind::Probabilistic: {
            PolicyQueryResult mix;
            for (const auto& alt : st.alternatives) {
                const double p = evaluate(cp_, *alt.probability, EvalContext{}).real.at(0);
                auto r = body(alt.statement);
                if (!r) continue;
                for (const auto& [a, q] : r->entries) mix.add(a, p * q);
            }
            mix.unknown_mass = std::max(0.0, 1.0 - mix.known_mass());
            if (mix.unknown_mass < kTol) mix.unknown_mass = 0.0;
            return mix;
        }
        default: return std::nullopt;
        }
    }

    const CheckedProgram& cp_;
    EvalContext ctx_;
    std::set<std::string> active_;
};

void collect_restrictions(const CheckedProgram& cp, const std::vector<Statement>& body, const EvalContext& ctx,
                          std::vector<ActionValue>& out) {
    for (const auto& st : body) {
        if (st.kind == StatementKind::Restrict) {
            GroundedValue v = evaluate(cp, *st.expr, ctx);
            if (v.kind != GroundedValue::Kind::Action) continue;
            if (std::find(out.begin(), out.end(), v.action) == out.end()) out.push_back(v.action);
        } else if (st.kind == StatementKind::Conditional) {
            for (const auto& br : st.branches) {
                if (br.guard) {
                    std::optional<bool> g = evaluate_guard(cp, *br.guard, ctx);
                    if (!g) break;
                    if (!*g) continue;
                }
                collect_restrictions(cp, br.body, ctx, out);
                break;
            }
        }
    }
}

// ---------------------------------------------------------------------------
// Best-effort static diagnostics

void predicted_targets(const CheckedProgram& cp, const std::vector<Statement>& body, std::set<std::string>& out,
                       std::set<std::string>& visiting) {
    for (const auto& st : body) {
        switch (st.kind) {
        case StatementKind::Predict:
            if (st.target.kind == PredictionTargetKind::WholeState) out.insert("S");
            else if (st.target.kind == PredictionTargetKind::Factor) out.insert(st.target.factor);
            else out.insert(st.target.object + "." + st.target.attribute);
            break;
        case StatementKind::Conditional:
            for (const auto& br : st.branches) predicted_targets(cp, br.body, out, visiting);
            break;
        case StatementKind::Probabilistic:
            for (const auto& alt : st.alternatives) predicted_targets(cp, alt.statement, out, visiting);
            break;
        case StatementKind::Reference: {
            const Symbol* s = cp.symbols.lookup(st.reference, Namespace::Effect);
            if (s && s->decl && visiting.insert(st.reference).second) {
                predicted_targets(cp, s->decl->body, out, visiting);
            }
            break;
        }
        default: break;
        }
    }
}

void overlap_warnings(const CheckedProgram& cp, const std::string& owner, const std::vector<Statement>& body,
                      std::vector<std::string>& warnings) {
    std::vector<std::pair<std::string, std::set<std::string>>> refs;
    for (const auto& st : body) {
        if (st.kind == StatementKind::Reference) {
            std::set<std::string> targets, visiting{st.reference};
            const Symbol* s = cp.symbols.lookup(st.reference, Namespace::Effect);
            if (s && s->decl) predicted_targets(cp, s->decl->body, targets, visiting);
            refs.emplace_back(st.reference, std::move(targets));
        } else if (st.kind == StatementKind::Conditional) {
            for (const auto& br : st.branches) overlap_warnings(cp, owner, br.body, warnings);
        }
    }
    for (std::size_t i = 0; i < refs.size(); ++i) {
        for (std::size_t j = i + 1; j < refs.size(); ++j) {
            for (const auto& t : refs[i].second) {
                const bool clash = refs[j].second.count(t) || (t == "S" && !refs[j].second.empty()) ||
                                   (refs[j].second.count("S") && !refs[i].second.empty());
                if (clash) {
                    warnings.push_back("effect '" + owner + "': referenced effects '" + refs[i].first + "' and '" +
                                       refs[j].first + "' may both predict " + (t == "S" ? "S" : t) +
                                       "'; supports are checked at query time");
                    break;
                }
            }
        }
    }
}

void attribute_warnings(const CheckedProgram& cp, const std::string& owner, const std::vector<Statement>& body,
                        std::vector<std::string>& warnings) {
    for (const auto& st : body) {
        if (st.kind == StatementKind::Predict && st.target.kind == PredictionTargetKind::ObjectAttribute) {
            const Symbol* s = cp.symbols.lookup(st.target.object);
            const AttributeSpec* a = s && s->entry ? s->entry->attribute(st.target.attribute) : nullptr;
            if (!a || !a->index) {
                warnings.push_back("effect '" + owner + "': attribute " + st.target.object + "." +
                                   st.target.attribute + " has no state index; its predictions are unknown");
            }
        }
        for (const auto& br : st.branches) attribute_warnings(cp, owner, br.body, warnings);
        for (const auto& alt : st.alternatives) attribute_warnings(cp, owner, alt.statement, warnings);
    }
}

}  // namespace

// ---------------------------------------------------------------------------

PolicyQueryResult PolicyQueryResult::point(ActionValue a) {
    PolicyQueryResult r;
    r.entries.emplace_back(std::move(a), 1.0);
    r.unknown_mass = 0.0;
    return r;
}

double PolicyQueryResult::known_mass() const {
    double t = 0.0;
    for (const auto& e : entries) t += e.second;
    return t;
}

void PolicyQueryResult::add(const ActionValue& a, double p) {
    if (p <= 0.0) return;
    for (auto& e : entries) {
        if (e.first == a) {
            e.second += p;
            return;
        }
    }
    entries.emplace_back(a, p);
}

std::string PolicyQueryResult::str() const {
    if (entries.empty()) return "unknown";
    std::string out;
    for (const auto& [a, p] : entries) {
        out += (a.name.empty() ? format_number(a.id) : a.name) + ": " + probability_text(p) + "; ";
    }
    return out + "unknown: " + probability_text(unknown_mass);
}

DynamicsTaskKnowledge::DynamicsTaskKnowledge(std::shared_ptr<const CheckedProgram> program)
    : program_(std::move(program)) {
    if (const Symbol* m = program_->symbols.lookup("main", Namespace::Effect)) {
        if (m->entry) host_main_ = true;
        else main_ = m->decl;
    }
    for (const Symbol* s : program_->symbols.in_order(Namespace::Value)) {
        if (s->kind == SymbolKind::Goal) goals_.push_back(s->name);
    }
}

EffectOutcome DynamicsTaskKnowledge::main_outcome(const EvalContext& ctx) const {
    if (!has_main_effect()) return {};
    return EffectInterpreter(*program_, ctx).effect("main");
}

TransitionMeasure DynamicsTaskKnowledge::query_transition(const std::vector<double>& s, const ActionValue& a) const {
    if (!program_) return TransitionMeasure::unknown();
    EffectOutcome o = main_outcome(EvalContext::of(s, a));
    if (!o.transition) return TransitionMeasure::unknown();
    TransitionMeasure t = *o.transition;
    t.normalize_unknown();
    return t;
}

std::optional<double> DynamicsTaskKnowledge::query_reward(const std::vector<double>& s, const ActionValue& a,
                                                          const std::optional<std::vector<double>>& s_next) const {
    if (!program_) return std::nullopt;
    EvalContext ctx = EvalContext::of(s, a);
    ctx.s_next = s_next;
    return main_outcome(ctx).reward;
}

EffectOutcome DynamicsTaskKnowledge::query_effect(const std::string& name, const EvalContext& ctx) const {
    return EffectInterpreter(*program_, ctx).effect(name);
}

bool DynamicsTaskKnowledge::is_goal(const std::vector<double>& s) const {
    if (!program_) return false;
    const EvalContext ctx = EvalContext::of_state(s);
    for (const auto& g : goals_) {
        const Symbol* sym = program_->symbols.lookup(g);
        if (evaluate_guard(*program_, *sym->decl->value, ctx).value_or(false)) return true;
    }
    return false;
}

SolutionKnowledge::SolutionKnowledge(std::shared_ptr<const CheckedProgram> program) : program_(std::move(program)) {
    const Symbol* m = program_->symbols.lookup("main");
    has_main_policy_ = m && (m->kind == SymbolKind::Policy || m->kind == SymbolKind::LearnablePolicy);
    for (const Symbol* s : program_->symbols.in_order(Namespace::Option)) {
        OptionSpec o;
        o.name = s->name;
        o.decl = s->decl;
        o.init = s->decl->init;
        o.until = s->decl->until;
        const auto& body = s->decl->body;
        if (body.size() == 1 && body[0].kind == StatementKind::Execute && body[0].expr->kind == ExprKind::Identifier) {
            const Symbol* p = program_->symbols.lookup(body[0].expr->name);
            if (p && p->kind == SymbolKind::LearnablePolicy) {
                o.is_learnable = true;
                o.learnable_policy = p->name;
            }
        }
        options_.push_back(std::move(o));
    }
}

PolicyQueryResult SolutionKnowledge::query_policy(const std::vector<double>& s) const {
    if (!program_ || !has_main_policy_) return PolicyQueryResult::unknown();
    return PolicyInterpreter(*program_, s).named("main");
}

PolicyQueryResult SolutionKnowledge::query_named_policy(const std::string& name, const std::vector<double>& s) const {
    return PolicyInterpreter(*program_, s).named(name);
}

PolicyQueryResult SolutionKnowledge::query_option_policy(const OptionSpec& option, const std::vector<double>& s) const {
    if (option.is_learnable) return PolicyQueryResult::unknown();
    return PolicyInterpreter(*program_, s).body(option.decl->body).value_or(PolicyQueryResult::unknown());
}

std::optional<bool> SolutionKnowledge::option_can_start(const OptionSpec& option, const std::vector<double>& s) const {
    return evaluate_guard(*program_, *option.init, EvalContext::of_state(s));
}

std::optional<bool> SolutionKnowledge::option_terminates(const OptionSpec& option, const std::vector<double>& s) const {
    return evaluate_guard(*program_, *option.until, EvalContext::of_state(s));
}

std::vector<ActionValue> SolutionKnowledge::restricted_actions(const std::vector<double>& s) const {
    std::vector<ActionValue> out;
    if (!program_) return out;
    const EvalContext ctx = EvalContext::of_state(s);
    for (const Symbol* r : program_->symbols.in_order(Namespace::Restriction)) {
        collect_restrictions(*program_, r->decl->body, ctx, out);
    }
    if (!out.empty() && out.size() >= program_->actions.size()) {
        throw FullRestriction("every action is restricted in this state");
    }
    return out;
}

bool SolutionKnowledge::has_restrictions() const {
    return program_ && !program_->symbols.in_order(Namespace::Restriction).empty();
}

RLangKnowledge compile_knowledge(std::shared_ptr<const CheckedProgram> program) {
    RLangKnowledge k;
    k.program = program;
    k.dynamics = DynamicsTaskKnowledge(program);
    k.solution = SolutionKnowledge(program);
    for (const Symbol* s : program->symbols.in_order(Namespace::Effect)) {
        if (!s->decl) continue;
        overlap_warnings(*program, s->name, s->decl->body, k.warnings);
        attribute_warnings(*program, s->name, s->decl->body, k.warnings);
    }
    return k;
}

std::optional<ActionValue> sample_policy(const PolicyQueryResult& result, std::mt19937_64& rng) {
    std::uniform_real_distribution<double> u(0.0, 1.0);
    double x = u(rng);
    for (const auto& [a, p] : result.entries) {
        if (x < p) return a;
        x -= p;
    }
    return std::nullopt;
}

std::optional<ActionValue> sample_policy(const SolutionKnowledge& k, const std::vector<double>& s,
                                         std::mt19937_64& rng) {
    return sample_policy(k.query_policy(s), rng);
}

std::string dump_knowledge(const RLangKnowledge& k) {
    const CheckedProgram& cp = *k.program;
    std::string out = "capabilities: " + format_capabilities(capability_vector(cp)) + "\n";
    out += "actions:";
    for (const auto& a : cp.actions) out += " " + a.name + "=" + format_number(a.id);
    out += "\n";
    if (cp.state_dim) out += "state_dim: " + std::to_string(*cp.state_dim) + "\n";

    auto decl_text = [](const Declaration& d) { return pretty_print(std::vector<Declaration>{d}); };

    out += "\n[dynamics]\n";
    if (const Symbol* m = cp.symbols.lookup("main", Namespace::Effect)) {
        std::set<std::string> seen;
        std::vector<std::string> stack{"main"};
        std::vector<const Symbol*> reached;
        while (!stack.empty()) {
            std::string name = stack.back();
            stack.pop_back();
            if (!seen.insert(name).second) continue;
            const Symbol* s = cp.symbols.lookup(name, Namespace::Effect);
            if (!s) continue;
            reached.push_back(s);
            if (!s->decl) continue;
            std::vector<const std::vector<Statement>*> bodies{&s->decl->body};
            while (!bodies.empty()) {
                const auto* b = bodies.back();
                bodies.pop_back();
                for (const auto& st : *b) {
                    if (st.kind == StatementKind::Reference) stack.push_back(st.reference);
                    for (const auto& br : st.branches) bodies.push_back(&br.body);
                    for (const auto& alt : st.alternatives) bodies.push_back(&alt.statement);
                }
            }
        }
        std::sort(reached.begin(), reached.end(), [](const Symbol* a, const Symbol* b) { return a->name < b->name; });
        for (const Symbol* s : reached) {
            if (s->entry) out += "# host effect " + s->name + " (" + s->entry->grounding_key + ")\n";
            else out += decl_text(*s->decl);
        }
        (void)m;
    } else {
        out += "unknown\n";
    }

    out += "\n[goals]\n";
    if (k.dynamics.goals().empty()) out += "none\n";
    for (const auto& g : k.dynamics.goals()) out += decl_text(*cp.symbols.lookup(g)->decl);

    out += "\n[policy]\n";
    const Symbol* pm = cp.symbols.lookup("main");
    if (pm && pm->kind == SymbolKind::Policy && pm->decl) out += decl_text(*pm->decl);
    else if (pm && (pm->kind == SymbolKind::Policy || pm->kind == SymbolKind::LearnablePolicy)) out += "# host policy main\n";
    else out += "unknown\n";

    out += "\n[options]\n";
    if (k.solution.options().empty()) out += "none\n";
    for (const auto& o : k.solution.options()) {
        out += "# " + o.name + (o.is_learnable ? " learnable(" + o.learnable_policy + ")" : " fixed") + "\n";
        out += decl_text(*o.decl);
    }

    out += "\n[restrictions]\n";
    if (cp.symbols.in_order(Namespace::Restriction).empty()) out += "none\n";
    for (const Symbol* r : cp.symbols.in_order(Namespace::Restriction)) out += decl_text(*r->decl);

    if (!k.warnings.empty()) {
        out += "\n[warnings]\n";
        for (const auto& w : k.warnings) out += w + "\n";
    }
    return out;
}

}  // namespace rlang
