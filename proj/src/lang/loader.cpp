#include "rlang/loader.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include "rlang/diagnostics.hpp"
#include "rlang/parser.hpp"

namespace rlang {

namespace fs = std::filesystem;

std::string read_text_file(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ImportError("cannot open '" + path.string() + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

namespace {

struct Loader {
    LoadedProgram out;
    std::set<fs::path> done;
    std::vector<fs::path> active;
    std::string* failing_file;

    void load(const fs::path& raw, const std::optional<SourceSpan>& site) {
        std::error_code ec;
        fs::path path = fs::weakly_canonical(raw, ec);
        if (ec) path = raw;
        for (const auto& p : active) {
            if (p == path) throw ImportError("import cycle through '" + raw.string() + "'", site);
        }
        if (done.count(path)) return;
        if (!fs::exists(path)) throw ImportError("imported file '" + raw.string() + "' does not exist", site);

        if (path.extension() == ".json") {
            if (failing_file) *failing_file = raw.string();
            out.vocab->add_document(load_vocabulary_document(path));
            done.insert(path);
            out.files.push_back(path);
            return;
        }

        active.push_back(path);
        if (failing_file) *failing_file = raw.string();
        Program prog = parse_source(read_text_file(path));
        for (const auto& imp : prog.imports) {
            load(path.parent_path() / imp.path, imp.span);
            if (failing_file) *failing_file = raw.string();
        }
        for (auto& d : prog.declarations) out.program.declarations.push_back(std::move(d));
        active.pop_back();
        done.insert(path);
        out.files.push_back(path);
    }
};

}  // namespace

LoadedProgram load_program(const fs::path& path, std::shared_ptr<VocabularyRegistry> vocab, std::string* failing_file) {
    Loader l;
    l.failing_file = failing_file;
    l.out.vocab = vocab ? std::move(vocab) : std::make_shared<VocabularyRegistry>();
    l.load(path, std::nullopt);
    return std::move(l.out);
}

std::shared_ptr<VocabularyRegistry> load_registry(const std::vector<fs::path>& vocab_files) {
    auto reg = std::make_shared<VocabularyRegistry>();
    for (const auto& f : vocab_files) reg->add_document(load_vocabulary_document(f));
    return reg;
}

std::shared_ptr<const CheckedProgram> load_and_check(const fs::path& path, std::shared_ptr<VocabularyRegistry> vocab,
                                                     bool stub_unbound, std::string* failing_file) {
    LoadedProgram lp = load_program(path, std::move(vocab), failing_file);
    if (failing_file) *failing_file = path.string();
    if (stub_unbound) lp.vocab->bind_stubs();
    return check_program(std::move(lp.program), lp.vocab);
}

}  // namespace rlang
