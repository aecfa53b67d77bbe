#pragma once

#include <cstddef>
#include <filesystem>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "rlang/eval_context.hpp"
#include "rlang/transition.hpp"
#include "rlang/types.hpp"
#include "rlang/value.hpp"

namespace rlang {

enum class VocabularyKind {
    Factor,
    Feature,
    Proposition,
    Constant,
    Action,
    Policy,
    Effect,
    LearnablePolicy,
    AttributeMap,
};

std::string_view to_string(VocabularyKind kind);

struct AttributeSpec {
    std::string name;
    ValueType type;
    std::optional<std::size_t> index;  // first state index; unset means unmapped
};

struct VocabularyEntry {
    std::string name;
    VocabularyKind kind = VocabularyKind::Constant;
    ValueType type;
    std::string grounding_key;             // feature / proposition / policy / effect
    std::vector<std::size_t> indices;      // factor
    GroundedValue value;                   // constant literal, action id
    std::vector<AttributeSpec> attributes; // attribute_map

    bool needs_grounding() const {
        return kind == VocabularyKind::Feature || kind == VocabularyKind::Proposition ||
               kind == VocabularyKind::Policy || kind == VocabularyKind::Effect;
    }
    const AttributeSpec* attribute(std::string_view attr) const;
};

struct VocabularyDocument {
    std::optional<std::size_t> state_dim;
    std::vector<VocabularyEntry> entries;
};

/// Strict parser for the vocabulary JSON schema:
///   {"state_dim": n?, "vocabulary": [{"name", "kind", "type"?, "indices"?,
///    "value"?, "grounding"?, "attributes"?}, ...]}
/// Unknown fields are rejected. Errors are SchemaError carrying a JSON pointer,
/// or DuplicateName.
VocabularyDocument parse_vocabulary_document(std::string_view json_text);
VocabularyDocument load_vocabulary_document(const std::filesystem::path& path);
std::vector<VocabularyEntry> load_vocabulary(const std::filesystem::path& path);

/// Host callable for features, propositions and policies. Policies return an
/// Action value, or Unknown when they have no advice at that state.
using ValueGrounding = std::function<GroundedValue(const EvalContext&)>;
/// Host callable for externally defined effects.
using EffectGrounding = std::function<EffectOutcome(const EvalContext&)>;

/// Names declared outside the program plus their host groundings.
class VocabularyRegistry {
public:
    void add_entries(const std::vector<VocabularyEntry>& entries);
    void add_document(const VocabularyDocument& doc);

    void register_grounding(const std::string& key, ValueGrounding fn);
    void register_effect(const std::string& key, EffectGrounding fn);

    const VocabularyEntry* find(std::string_view name) const;
    const std::vector<VocabularyEntry>& entries() const { return entries_; }
    const ValueGrounding* value_grounding(const std::string& key) const;
    const EffectGrounding* effect_grounding(const std::string& key) const;
    bool is_bound(const VocabularyEntry& entry) const;

    std::optional<std::size_t> state_dim() const { return state_dim_; }
    void set_state_dim(std::size_t dim);

    /// Grounding keys referenced by entries but not registered.
    std::vector<std::string> unbound_keys() const;
    /// Binds every unbound key to a stub that always answers Unknown, so a
    /// program can be checked without host code.
    void bind_stubs();

private:
    std::vector<VocabularyEntry> entries_;
    std::map<std::string, std::size_t, std::less<>> by_name_;
    std::map<std::string, ValueGrounding> values_;
    std::map<std::string, EffectGrounding> effects_;
    std::optional<std::size_t> state_dim_;
};

/// Functional form: returns a copy of `reg` with `key` bound.
VocabularyRegistry register_grounding(VocabularyRegistry reg, const std::string& key, ValueGrounding fn);

}  // namespace rlang
