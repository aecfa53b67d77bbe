#pragma once

#include <filesystem>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include "rlang/checker.hpp"
#include "rlang/knowledge.hpp"
#include "rlang/parser.hpp"
#include "rlang/vocabulary.hpp"

namespace rlang::test {

inline std::filesystem::path fixture_dir() { return RLANG_FIXTURE_DIR; }

inline std::shared_ptr<VocabularyRegistry> registry_from(std::string_view vocab_json) {
    auto reg = std::make_shared<VocabularyRegistry>();
    if (!vocab_json.empty()) reg->add_document(parse_vocabulary_document(vocab_json));
    return reg;
}

inline std::shared_ptr<const CheckedProgram> check_source(std::string_view source,
                                                          std::shared_ptr<VocabularyRegistry> reg = nullptr) {
    if (!reg) reg = std::make_shared<VocabularyRegistry>();
    return check_program(parse_source(source), reg);
}

inline std::shared_ptr<const CheckedProgram> check_source(std::string_view source, std::string_view vocab_json) {
    return check_source(source, registry_from(vocab_json));
}

inline RLangKnowledge compile_source(std::string_view source, std::shared_ptr<VocabularyRegistry> reg = nullptr) {
    return compile_knowledge(check_source(source, std::move(reg)));
}

inline RLangKnowledge compile_source(std::string_view source, std::string_view vocab_json) {
    return compile_knowledge(check_source(source, vocab_json));
}

/// Every corpus listing, paired with its stub vocabulary.
struct CorpusEntry {
    std::filesystem::path program;
    std::filesystem::path vocab;
};

inline std::vector<CorpusEntry> corpus() {
    std::vector<CorpusEntry> out;
    for (const auto& e : std::filesystem::directory_iterator(fixture_dir() / "corpus")) {
        if (e.path().extension() != ".rlang") continue;
        auto v = e.path();
        v.replace_extension(".vocab.json");
        out.push_back({e.path(), v});
    }
    std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) { return a.program < b.program; });
    return out;
}

}  // namespace rlang::test
