#include "rlang/vocabulary.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

#include "rlang/diagnostics.hpp"
#include "rlang/lexer.hpp"

namespace rlang {

using nlohmann::json;

std::string_view to_string(VocabularyKind kind) {
    switch (kind) {
    case VocabularyKind::Factor: return "factor";
    case VocabularyKind::Feature: return "feature";
    case VocabularyKind::Proposition: return "proposition";
    case VocabularyKind::Constant: return "constant";
    case VocabularyKind::Action: return "action";
    case VocabularyKind::Policy: return "policy";
    case VocabularyKind::Effect: return "effect";
    case VocabularyKind::LearnablePolicy: return "learnable_policy";
    case VocabularyKind::AttributeMap: return "attribute_map";
    }
    return "?";
}

const AttributeSpec* VocabularyEntry::attribute(std::string_view attr) const {
    for (const auto& a : attributes) {
        if (a.name == attr) return &a;
    }
    return nullptr;
}

namespace {

[[noreturn]] void schema_error(const std::string& pointer, const std::string& message) {
    throw SchemaError((pointer.empty() ? std::string("/") : pointer) + ": " + message);
}

bool valid_identifier(const std::string& s) {
    if (s.empty() || !(std::isalpha(static_cast<unsigned char>(s[0])) || s[0] == '_')) return false;
    for (char c : s) {
        if (!(std::isalnum(static_cast<unsigned char>(c)) || c == '_')) return false;
    }
    return !is_keyword(s);
}

std::optional<VocabularyKind> parse_kind(const std::string& s) {
    static const std::pair<const char*, VocabularyKind> table[] = {
        {"factor", VocabularyKind::Factor},
        {"feature", VocabularyKind::Feature},
        {"proposition", VocabularyKind::Proposition},
        {"constant", VocabularyKind::Constant},
        {"action", VocabularyKind::Action},
        {"policy", VocabularyKind::Policy},
        {"effect", VocabularyKind::Effect},
        {"learnable_policy", VocabularyKind::LearnablePolicy},
        {"attribute_map", VocabularyKind::AttributeMap},
    };
    for (const auto& [text, kind] : table) {
        if (s == text) return kind;
    }
    return std::nullopt;
}

std::size_t parse_index(const json& j, const std::string& ptr) {
    if (!j.is_number_integer() || j.get<long long>() < 0) schema_error(ptr, "expected a non-negative integer");
    return static_cast<std::size_t>(j.get<long long>());
}

GroundedValue literal_value(const json& j, const std::string& ptr) {
    if (j.is_boolean()) return GroundedValue::make_bool(j.get<bool>());
    if (j.is_number()) return GroundedValue::scalar(j.get<double>());
    if (j.is_array()) {
        bool all_numbers = true;
        for (const auto& item : j) all_numbers = all_numbers && item.is_number();
        if (all_numbers && !j.empty()) {
            std::vector<double> v;
            for (const auto& item : j) v.push_back(item.get<double>());
            return GroundedValue::make_real(std::move(v));
        }
        std::vector<GroundedValue> items;
        for (std::size_t i = 0; i < j.size(); ++i) {
            items.push_back(literal_value(j[i], ptr + "/" + std::to_string(i)));
        }
        return GroundedValue::make_list(std::move(items));
    }
    schema_error(ptr, "expected a number, boolean or array");
}

ValueType type_of_literal(const GroundedValue& v) {
    switch (v.kind) {
    case GroundedValue::Kind::Bool: return ValueType::boolean();
    case GroundedValue::Kind::Real: return ValueType::real(v.real.size());
    case GroundedValue::Kind::List:
        return ValueType::list_of(v.list.empty() ? ValueType::any() : type_of_literal(v.list.front()));
    default: return ValueType::any();
    }
}

ValueType parse_type(const json& j, const std::string& ptr) {
    if (!j.is_string()) schema_error(ptr, "expected a type string");
    ValueType t;
    if (!parse_type_annotation(j.get<std::string>(), t)) {
        schema_error(ptr, "unknown type '" + j.get<std::string>() + "'");
    }
    return t;
}

VocabularyEntry parse_entry(const json& j, const std::string& ptr) {
    if (!j.is_object()) schema_error(ptr, "expected an object");
    static const std::set<std::string> allowed = {"name", "kind", "type", "indices",
                                                  "value", "grounding", "attributes"};
    for (const auto& [key, _] : j.items()) {
        if (!allowed.count(key)) schema_error(ptr + "/" + key, "unknown field '" + key + "'");
    }
    if (!j.contains("name") || !j["name"].is_string()) schema_error(ptr + "/name", "missing string 'name'");
    if (!j.contains("kind") || !j["kind"].is_string()) schema_error(ptr + "/kind", "missing string 'kind'");

    VocabularyEntry e;
    e.name = j["name"].get<std::string>();
    if (!valid_identifier(e.name)) schema_error(ptr + "/name", "'" + e.name + "' is not a valid identifier");
    auto kind = parse_kind(j["kind"].get<std::string>());
    if (!kind) schema_error(ptr + "/kind", "unknown kind '" + j["kind"].get<std::string>() + "'");
    e.kind = *kind;

    auto forbid = [&](const char* field) {
        if (j.contains(field)) {
            schema_error(ptr + "/" + field,
                         std::string("field '") + field + "' is not allowed for kind " +
                             std::string(to_string(e.kind)));
        }
    };

    if (e.needs_grounding()) {
        e.grounding_key = e.name;
        if (j.contains("grounding")) {
            if (!j["grounding"].is_string() || j["grounding"].get<std::string>().empty()) {
                schema_error(ptr + "/grounding", "expected a non-empty string");
            }
            e.grounding_key = j["grounding"].get<std::string>();
        }
    } else {
        forbid("grounding");
    }

    switch (e.kind) {
    case VocabularyKind::Factor: {
        forbid("value");
        forbid("attributes");
        if (!j.contains("indices") || !j["indices"].is_array() || j["indices"].empty()) {
            schema_error(ptr + "/indices", "factor needs a non-empty 'indices' array");
        }
        for (std::size_t i = 0; i < j["indices"].size(); ++i) {
            e.indices.push_back(parse_index(j["indices"][i], ptr + "/indices/" + std::to_string(i)));
        }
        e.type = ValueType::real(e.indices.size());
        if (j.contains("type")) {
            ValueType t = parse_type(j["type"], ptr + "/type");
            if (!(t == e.type)) schema_error(ptr + "/type", "type does not match the number of indices");
        }
        break;
    }
    case VocabularyKind::Feature:
        forbid("value");
        forbid("indices");
        forbid("attributes");
        e.type = j.contains("type") ? parse_type(j["type"], ptr + "/type") : ValueType::real(1);
        if (!e.type.is_real()) schema_error(ptr + "/type", "feature type must be real or real[n]");
        break;
    case VocabularyKind::Proposition:
        forbid("value");
        forbid("indices");
        forbid("attributes");
        e.type = ValueType::boolean();
        if (j.contains("type") && !(parse_type(j["type"], ptr + "/type") == e.type)) {
            schema_error(ptr + "/type", "proposition type must be bool");
        }
        break;
    case VocabularyKind::Constant:
        forbid("indices");
        forbid("attributes");
        if (!j.contains("value")) schema_error(ptr + "/value", "constant needs a 'value'");
        e.value = literal_value(j["value"], ptr + "/value");
        e.type = type_of_literal(e.value);
        if (j.contains("type") && !(parse_type(j["type"], ptr + "/type") == e.type)) {
            schema_error(ptr + "/type", "type does not match the constant value");
        }
        break;
    case VocabularyKind::Action:
        forbid("indices");
        forbid("attributes");
        forbid("type");
        if (!j.contains("value") || !j["value"].is_number()) {
            schema_error(ptr + "/value", "action needs a numeric 'value' (its id)");
        }
        e.type = ValueType::action();
        e.value = GroundedValue::make_action({e.name, j["value"].get<double>()});
        break;
    case VocabularyKind::Policy:
    case VocabularyKind::Effect:
    case VocabularyKind::LearnablePolicy:
        forbid("indices");
        forbid("attributes");
        forbid("type");
        forbid("value");
        break;
    case VocabularyKind::AttributeMap: {
        forbid("indices");
        forbid("type");
        forbid("value");
        if (!j.contains("attributes") || !j["attributes"].is_object()) {
            schema_error(ptr + "/attributes", "attribute_map needs an 'attributes' object");
        }
        for (const auto& [attr, spec] : j["attributes"].items()) {
            const std::string aptr = ptr + "/attributes/" + attr;
            if (!valid_identifier(attr)) schema_error(aptr, "invalid attribute name");
            if (!spec.is_object()) schema_error(aptr, "expected an object");
            for (const auto& [key, _] : spec.items()) {
                if (key != "type" && key != "index") schema_error(aptr + "/" + key, "unknown field '" + key + "'");
            }
            if (!spec.contains("type")) schema_error(aptr + "/type", "missing 'type'");
            AttributeSpec a;
            a.name = attr;
            a.type = parse_type(spec["type"], aptr + "/type");
            if (a.type.kind != TypeKind::Real && a.type.kind != TypeKind::Boolean) {
                schema_error(aptr + "/type", "attribute type must be real, real[n] or bool");
            }
            if (spec.contains("index")) a.index = parse_index(spec["index"], aptr + "/index");
            e.attributes.push_back(std::move(a));
        }
        e.type = ValueType::object(e.name);
        break;
    }
    }
    return e;
}

}  // namespace

VocabularyDocument parse_vocabulary_document(std::string_view json_text) {
    json root;
    try {
        root = json::parse(json_text);
    } catch (const json::parse_error& ex) {
        throw SchemaError(std::string("/: invalid JSON: ") + ex.what());
    }
    if (!root.is_object()) schema_error("", "expected a top-level object");
    for (const auto& [key, _] : root.items()) {
        if (key != "vocabulary" && key != "state_dim") schema_error("/" + key, "unknown field '" + key + "'");
    }
    if (!root.contains("vocabulary") || !root["vocabulary"].is_array()) {
        schema_error("/vocabulary", "missing 'vocabulary' array");
    }
    VocabularyDocument doc;
    if (root.contains("state_dim")) {
        doc.state_dim = parse_index(root["state_dim"], "/state_dim");
        if (*doc.state_dim == 0) schema_error("/state_dim", "must be positive");
    }
    std::set<std::string> seen;
    const auto& items = root["vocabulary"];
    for (std::size_t i = 0; i < items.size(); ++i) {
        doc.entries.push_back(parse_entry(items[i], "/vocabulary/" + std::to_string(i)));
    }
    for (const auto& e : doc.entries) {
        if (!seen.insert(e.name).second) throw DuplicateName("vocabulary entry '" + e.name + "' is declared twice");
    }
    if (doc.state_dim) {
        for (std::size_t i = 0; i < doc.entries.size(); ++i) {
            for (std::size_t idx : doc.entries[i].indices) {
                if (idx >= *doc.state_dim) {
                    schema_error("/vocabulary/" + std::to_string(i) + "/indices", "index exceeds state_dim");
                }
            }
        }
    }
    return doc;
}

VocabularyDocument load_vocabulary_document(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open vocabulary file '" + path.string() + "'");
    std::stringstream buf;
    buf << in.rdbuf();
    try {
        return parse_vocabulary_document(buf.str());
    } catch (const SchemaError& e) {
        throw SchemaError(path.string() + ": " + e.message());
    }
}

std::vector<VocabularyEntry> load_vocabulary(const std::filesystem::path& path) {
    return load_vocabulary_document(path).entries;
}

void VocabularyRegistry::add_entries(const std::vector<VocabularyEntry>& entries) {
    for (const auto& e : entries) {
        if (by_name_.count(e.name)) throw DuplicateName("vocabulary entry '" + e.name + "' is declared twice");
    }
    for (const auto& e : entries) {
        by_name_.emplace(e.name, entries_.size());
        entries_.push_back(e);
    }
}

void VocabularyRegistry::add_document(const VocabularyDocument& doc) {
    if (doc.state_dim) set_state_dim(*doc.state_dim);
    add_entries(doc.entries);
}

void VocabularyRegistry::set_state_dim(std::size_t dim) {
    if (state_dim_ && *state_dim_ != dim) {
        throw SchemaError("/state_dim: conflicting state dimensions " + std::to_string(*state_dim_) + " and " +
                          std::to_string(dim));
    }
    state_dim_ = dim;
}

void VocabularyRegistry::register_grounding(const std::string& key, ValueGrounding fn) {
    if (values_.count(key) || effects_.count(key)) throw DuplicateKey("grounding key '" + key + "' is already bound");
    values_.emplace(key, std::move(fn));
}

void VocabularyRegistry::register_effect(const std::string& key, EffectGrounding fn) {
    if (values_.count(key) || effects_.count(key)) throw DuplicateKey("grounding key '" + key + "' is already bound");
    effects_.emplace(key, std::move(fn));
}

const VocabularyEntry* VocabularyRegistry::find(std::string_view name) const {
    auto it = by_name_.find(name);
    return it == by_name_.end() ? nullptr : &entries_[it->second];
}

const ValueGrounding* VocabularyRegistry::value_grounding(const std::string& key) const {
    auto it = values_.find(key);
    return it == values_.end() ? nullptr : &it->second;
}

const EffectGrounding* VocabularyRegistry::effect_grounding(const std::string& key) const {
    auto it = effects_.find(key);
    return it == effects_.end() ? nullptr : &it->second;
}

bool VocabularyRegistry::is_bound(const VocabularyEntry& entry) const {
    if (!entry.needs_grounding()) return true;
    if (entry.kind == VocabularyKind::Effect) return effect_grounding(entry.grounding_key) != nullptr;
    return value_grounding(entry.grounding_key) != nullptr;
}

std::vector<std::string> VocabularyRegistry::unbound_keys() const {
    std::vector<std::string> out;
    for (const auto& e : entries_) {
        if (!is_bound(e)) out.push_back(e.grounding_key);
    }
    return out;
}

void VocabularyRegistry::bind_stubs() {
    for (const auto& e : entries_) {
        if (is_bound(e)) continue;
        if (e.kind == VocabularyKind::Effect) {
            effects_.emplace(e.grounding_key, [](const EvalContext&) { return EffectOutcome{}; });
        } else {
            values_.emplace(e.grounding_key, [](const EvalContext&) { return GroundedValue::unknown(); });
        }
    }
}

VocabularyRegistry register_grounding(VocabularyRegistry reg, const std::string& key, ValueGrounding fn) {
    reg.register_grounding(key, std::move(fn));
    return reg;
}

}  // namespace rlang
