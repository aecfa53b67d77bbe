#pragma once

#include <string>
#include <utility>
#include <vector>

namespace rlang {

/// A primitive action: a name plus the numeric id the environment uses.
/// Two actions are the same action iff their ids are equal.
struct ActionValue {
    std::string name;
    double id = 0.0;

    friend bool operator==(const ActionValue& a, const ActionValue& b) { return a.id == b.id; }
};

/// Runtime value produced by grounding an expression.
struct GroundedValue {
    enum class Kind { Real, Bool, Action, State, List, Object, Unknown };

    Kind kind = Kind::Unknown;
    std::vector<double> real;   // Real and State
    bool boolean = false;
    ActionValue action;
    std::vector<GroundedValue> list;
    std::string class_name;     // Object
    std::vector<std::pair<std::string, GroundedValue>> attributes;  // Object

    static GroundedValue unknown() { return {}; }
    static GroundedValue make_real(std::vector<double> v);
    static GroundedValue scalar(double v) { return make_real({v}); }
    static GroundedValue make_bool(bool b);
    static GroundedValue make_action(ActionValue a);
    static GroundedValue make_state(std::vector<double> s);
    static GroundedValue make_list(std::vector<GroundedValue> items);
    static GroundedValue make_object(std::string class_name,
                                     std::vector<std::pair<std::string, GroundedValue>> attributes);

    bool is_unknown() const { return kind == Kind::Unknown; }
    bool is_numeric() const { return kind == Kind::Real || kind == Kind::State; }
    bool is_scalar() const { return is_numeric() && real.size() == 1; }

    const GroundedValue* attribute(const std::string& name) const;

    std::string str() const;
    friend bool operator==(const GroundedValue& a, const GroundedValue& b);
};

std::string_view to_string(GroundedValue::Kind kind);

/// Shortest round-trippable decimal text for a double ("3", "0.25", "-1e-05").
std::string format_number(double value);

}  // namespace rlang
