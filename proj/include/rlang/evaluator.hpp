#pragma once

#include <utility>
#include <vector>

#include "rlang/checker.hpp"
#include "rlang/eval_context.hpp"
#include "rlang/value.hpp"

namespace rlang {

/// Grounds a checked expression at `ctx`. Unknown is absorbing: any operator
/// with an Unknown operand yields Unknown (no short-circuit). Throws EvalError
/// when ctx lacks a needed element, on division by zero, and on out-of-range
/// indices; TypeError when a host grounding returns a value of the wrong type.
GroundedValue evaluate(const CheckedProgram& program, const Expr& expr, const EvalContext& ctx);

/// Truth value of a guard: true/false, or nullopt when the guard is Unknown.
std::optional<bool> evaluate_guard(const CheckedProgram& program, const Expr& expr, const EvalContext& ctx);

/// Ordered (guard, value) rules with default Unknown; a null guard is `else`.
struct PartialFunction {
    std::vector<std::pair<ExprPtr, ExprPtr>> rules;
};

/// Value of the first rule whose guard holds. An Unknown guard makes the whole
/// result Unknown; no match and no else gives Unknown.
GroundedValue evaluate_partial(const CheckedProgram& program, const PartialFunction& pf, const EvalContext& ctx);

/// Builds the partial function of an if/elif/else statement whose branches each
/// hold a single Reward (or Execute) statement.
PartialFunction partial_function_of(const Statement& conditional);

}  // namespace rlang
