#pragma once

#include <filesystem>
#include <memory>
#include <string>
#include <vector>

#include "rlang/ast.hpp"
#include "rlang/checker.hpp"
#include "rlang/vocabulary.hpp"

namespace rlang {

/// A program with its imports resolved: imported RLang declarations come first,
/// imported `.json` files are merged into the vocabulary.
struct LoadedProgram {
    Program program;
    std::shared_ptr<VocabularyRegistry> vocab;
    std::vector<std::filesystem::path> files;  // every file read, in load order
};

/// Reads `path` and follows `import "<relative path>"` lines (relative to the
/// importing file). Cycles raise ImportError. On any error, `failing_file` is
/// set to the file being processed.
LoadedProgram load_program(const std::filesystem::path& path, std::shared_ptr<VocabularyRegistry> vocab,
                           std::string* failing_file = nullptr);

/// Loads each vocabulary file into a fresh registry.
std::shared_ptr<VocabularyRegistry> load_registry(const std::vector<std::filesystem::path>& vocab_files);

/// load_program + check_program. When `stub_unbound` is set, grounding keys
/// that no host code registered are bound to stubs that answer Unknown.
std::shared_ptr<const CheckedProgram> load_and_check(const std::filesystem::path& path,
                                                     std::shared_ptr<VocabularyRegistry> vocab, bool stub_unbound,
                                                     std::string* failing_file = nullptr);

std::string read_text_file(const std::filesystem::path& path);

}  // namespace rlang
