#include "rlang/env/environment.hpp"

#include <cstdlib>

#include "rlang/diagnostics.hpp"

namespace rlang::env {

std::filesystem::path asset_dir() {
    if (const char* dir = std::getenv("RLANG_ASSET_DIR")) return dir;
    return RLANG_ASSET_DIR;
}

std::filesystem::path Environment::vocabulary_path() const { return asset_dir() / (name() + ".vocab.json"); }

std::filesystem::path Environment::advice_path() const { return asset_dir() / (name() + ".rlang"); }

std::shared_ptr<VocabularyRegistry> Environment::make_registry() const {
    auto reg = std::make_shared<VocabularyRegistry>();
    reg->add_document(load_vocabulary_document(vocabulary_path()));
    register_groundings(*reg);
    return reg;
}

std::size_t Environment::action_index(const ActionValue& a) const {
    const auto& acts = actions();
    for (std::size_t i = 0; i < acts.size(); ++i) {
        if (acts[i].id == a.id) return i;
    }
    throw ConfigError("action '" + a.name + "' (id " + format_number(a.id) + ") is not available in " + name());
}

}  // namespace rlang::env
