#include "rlang/value.hpp"

#include <charconv>
#include <cmath>

namespace rlang {

GroundedValue GroundedValue::make_real(std::vector<double> v) {
    GroundedValue g;
    g.kind = Kind::Real;
    g.real = std::move(v);
    return g;
}

GroundedValue GroundedValue::make_bool(bool b) {
    GroundedValue g;
    g.kind = Kind::Bool;
    g.boolean = b;
    return g;
}

GroundedValue GroundedValue::make_action(ActionValue a) {
    GroundedValue g;
    g.kind = Kind::Action;
    g.action = std::move(a);
    return g;
}

GroundedValue GroundedValue::make_state(std::vector<double> s) {
    GroundedValue g;
    g.kind = Kind::State;
    g.real = std::move(s);
    return g;
}

GroundedValue GroundedValue::make_list(std::vector<GroundedValue> items) {
    GroundedValue g;
    g.kind = Kind::List;
    g.list = std::move(items);
    return g;
}

GroundedValue GroundedValue::make_object(std::string class_name,
                                         std::vector<std::pair<std::string, GroundedValue>> attributes) {
    GroundedValue g;
    g.kind = Kind::Object;
    g.class_name = std::move(class_name);
    g.attributes = std::move(attributes);
    return g;
}

const GroundedValue* GroundedValue::attribute(const std::string& name) const {
    for (const auto& [key, value] : attributes) {
        if (key == name) return &value;
    }
    return nullptr;
}

std::string_view to_string(GroundedValue::Kind kind) {
    switch (kind) {
    case GroundedValue::Kind::Real: return "Real";
    case GroundedValue::Kind::Bool: return "Bool";
    case GroundedValue::Kind::Action: return "Action";
    case GroundedValue::Kind::State: return "State";
    case GroundedValue::Kind::List: return "List";
    case GroundedValue::Kind::Object: return "Object";
    case GroundedValue::Kind::Unknown: return "Unknown";
    }
    return "?";
}

std::string format_number(double value) {
    if (value == 0.0) return "0";  // folds -0
    if (std::isnan(value)) return "nan";
    if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
    char buf[64];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), value);
    return std::string(buf, ptr);
}

namespace {

std::string vector_text(const std::vector<double>& v) {
    if (v.size() == 1) return format_number(v[0]);
    std::string out = "[";
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (i) out += ", ";
        out += format_number(v[i]);
    }
    return out + "]";
}

}  // namespace

std::string GroundedValue::str() const {
    switch (kind) {
    case Kind::Real: return vector_text(real);
    case Kind::Bool: return boolean ? "True" : "False";
    case Kind::Action: return action.name.empty() ? format_number(action.id) : action.name;
    case Kind::State: {
        std::string out = "S(";
        for (std::size_t i = 0; i < real.size(); ++i) {
            if (i) out += ", ";
            out += format_number(real[i]);
        }
        return out + ")";
    }
    case Kind::List: {
        std::string out = "[";
        for (std::size_t i = 0; i < list.size(); ++i) {
            if (i) out += ", ";
            out += list[i].str();
        }
        return out + "]";
    }
    case Kind::Object: {
        std::string out = class_name + "(";
        for (std::size_t i = 0; i < attributes.size(); ++i) {
            if (i) out += ", ";
            out += attributes[i].first + "=" + attributes[i].second.str();
        }
        return out + ")";
    }
    case Kind::Unknown: return "unknown";
    }
    return "?";
}

bool operator==(const GroundedValue& a, const GroundedValue& b) {
    if (a.kind != b.kind) return false;
    switch (a.kind) {
    case GroundedValue::Kind::Real:
    case GroundedValue::Kind::State: return a.real == b.real;
    case GroundedValue::Kind::Bool: return a.boolean == b.boolean;
    case GroundedValue::Kind::Action: return a.action == b.action;
    case GroundedValue::Kind::List: return a.list == b.list;
    case GroundedValue::Kind::Object: return a.class_name == b.class_name && a.attributes == b.attributes;
    case GroundedValue::Kind::Unknown: return true;
    }
    return false;
}

}  // namespace rlang
