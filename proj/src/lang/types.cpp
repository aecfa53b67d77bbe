#include "rlang/types.hpp"

#include <charconv>

namespace rlang {

ValueType ValueType::real(std::size_t dim) {
    ValueType t;
    t.kind = TypeKind::Real;
    t.dim = dim;
    return t;
}

ValueType ValueType::boolean() {
    ValueType t;
    t.kind = TypeKind::Boolean;
    return t;
}

ValueType ValueType::action() {
    ValueType t;
    t.kind = TypeKind::Action;
    return t;
}

ValueType ValueType::state(std::size_t dim) {
    ValueType t;
    t.kind = TypeKind::State;
    t.dim = dim;
    return t;
}

ValueType ValueType::object(std::string class_name) {
    ValueType t;
    t.kind = TypeKind::Object;
    t.class_name = std::move(class_name);
    return t;
}

ValueType ValueType::list_of(ValueType element) {
    ValueType t;
    t.kind = TypeKind::List;
    t.element = std::make_shared<const ValueType>(std::move(element));
    return t;
}

ValueType ValueType::any() { return {}; }

std::string ValueType::str() const {
    switch (kind) {
    case TypeKind::Real: return dim == 0 ? "Real(?)" : "Real(" + std::to_string(dim) + ")";
    case TypeKind::Boolean: return "Boolean";
    case TypeKind::Action: return "Action";
    case TypeKind::State: return dim == 0 ? "State" : "State(" + std::to_string(dim) + ")";
    case TypeKind::Object: return "Object(" + class_name + ")";
    case TypeKind::List: return "ListOf(" + (element ? element->str() : std::string("?")) + ")";
    case TypeKind::Any: return "Any";
    }
    return "?";
}

bool operator==(const ValueType& a, const ValueType& b) {
    if (a.kind != b.kind || a.dim != b.dim || a.class_name != b.class_name) return false;
    if (!a.element || !b.element) return !a.element && !b.element;
    return *a.element == *b.element;
}

bool parse_type_annotation(std::string_view text, ValueType& out) {
    if (text == "real") {
        out = ValueType::real(1);
        return true;
    }
    if (text == "bool") {
        out = ValueType::boolean();
        return true;
    }
    if (text == "action") {
        out = ValueType::action();
        return true;
    }
    if (text == "state") {
        out = ValueType::state();
        return true;
    }
    if (text.starts_with("real[") && text.ends_with("]")) {
        auto digits = text.substr(5, text.size() - 6);
        std::size_t dim = 0;
        auto [ptr, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), dim);
        if (ec != std::errc() || ptr != digits.data() + digits.size() || dim == 0) return false;
        out = ValueType::real(dim);
        return true;
    }
    return false;
}

std::string DomainSignature::str() const {
    std::string out = "{";
    auto add = [&](const char* s) {
        if (out.size() > 1) out += ", ";
        out += s;
    };
    if (has_state()) add("S");
    if (has_action()) add("A");
    if (has_next_state()) add("S'");
    return out + "}";
}

}  // namespace rlang
