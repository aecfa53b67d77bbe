#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "rlang/value.hpp"

namespace rlang {

/// The (s, a, s') tuple an expression is grounded against. Any element may be
/// absent; evaluating an expression that needs an absent element is an EvalError.
struct EvalContext {
    std::optional<std::vector<double>> s;
    std::optional<ActionValue> a;
    std::optional<std::vector<double>> s_next;
    /// Optional provider for `S.object.attribute`; when unset, the vocabulary's
    /// attribute maps are used.
    std::function<GroundedValue(const std::string& object, const std::string& attribute,
                                const std::vector<double>& state)>
        object_attribute;

    static EvalContext of_state(std::vector<double> state) {
        EvalContext ctx;
        ctx.s = std::move(state);
        return ctx;
    }
    static EvalContext of(std::vector<double> state, ActionValue action) {
        EvalContext ctx;
        ctx.s = std::move(state);
        ctx.a = std::move(action);
        return ctx;
    }
};

}  // namespace rlang
