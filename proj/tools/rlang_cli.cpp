#include <CLI11.hpp>

#include <iostream>
#include <sstream>

#include "rlang/agents/experiment.hpp"
#include "rlang/diagnostics.hpp"
#include "rlang/env/registry.hpp"
#include "rlang/knowledge.hpp"
#include "rlang/loader.hpp"
#include "rlang/vocabulary.hpp"

namespace fs = std::filesystem;
using namespace rlang;

namespace {

constexpr int kOk = 0;
constexpr int kDiagnostics = 1;
constexpr int kUsage = 2;

struct ProgramArgs {
    std::string file;
    std::vector<std::string> vocab;
    std::string env;
};

void add_program_args(CLI::App* cmd, ProgramArgs& args) {
    cmd->add_option("file", args.file, "RLang program")->required()->check(CLI::ExistingFile);
    cmd->add_option("--vocab", args.vocab, "extra vocabulary JSON files")->check(CLI::ExistingFile);
    cmd->add_option("--env", args.env, "bind the groundings of a built-in environment");
}

/// Without --env, every grounding key is bound to an Unknown-answering stub.
RLangKnowledge compile(const ProgramArgs& args, std::string* failing) {
    std::shared_ptr<VocabularyRegistry> reg;
    if (!args.env.empty()) {
        reg = env::make_environment(args.env)->make_registry();
    } else {
        reg = std::make_shared<VocabularyRegistry>();
    }
    for (const auto& v : args.vocab) reg->add_document(load_vocabulary_document(v));
    auto checked = load_and_check(args.file, reg, args.env.empty(), failing);
    return compile_knowledge(std::move(checked));
}

void print_warnings(const std::string& file, const RLangKnowledge& k) {
    for (const auto& w : k.warnings) std::cerr << file << ":0:0: warning: " << w << '\n';
}

std::vector<double> parse_vector(const std::string& text) {
    std::vector<double> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        try {
            std::size_t used = 0;
            out.push_back(std::stod(item, &used));
            while (used < item.size() && std::isspace(static_cast<unsigned char>(item[used]))) ++used;
            if (used != item.size()) throw std::invalid_argument(item);
        } catch (const std::exception&) {
            throw ConfigError("bad number '" + item + "' in state '" + text + "'");
        }
    }
    if (out.empty()) throw ConfigError("empty state");
    return out;
}

template <typename F>
int guarded(const std::string& file, F&& body) {
    std::string failing;
    try {
        return body(&failing);
    } catch (const ConfigError& e) {
        std::cerr << "rlang: " << e.message() << '\n';
        return kUsage;
    } catch (const Error& e) {
        std::cerr << format_diagnostic(failing.empty() ? file : failing, e) << '\n';
        return kDiagnostics;
    } catch (const std::exception& e) {
        std::cerr << "rlang: " << e.what() << '\n';
        return kUsage;
    }
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"RLang compiler and experiment runner"};
    app.require_subcommand(1);

    ProgramArgs check_args;
    auto* check = app.add_subcommand("check", "parse and type-check a program");
    add_program_args(check, check_args);

    ProgramArgs query_args;
    std::string state, action, next;
    auto* query = app.add_subcommand("query", "query the compiled knowledge at one state");
    add_program_args(query, query_args);
    query->add_option("--state", state, "comma-separated state vector")->required();
    query->add_option("--action", action, "action name");
    query->add_option("--next", next, "comma-separated next state");

    ProgramArgs dump_args;
    auto* dump = app.add_subcommand("dump-knowledge", "print the compiled knowledge");
    add_program_args(dump, dump_args);

    std::string config;
    auto* run = app.add_subcommand("run", "run an experiment config and write its CSV");
    run->add_option("config", config, "experiment config JSON")->required()->check(CLI::ExistingFile);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? kOk : kUsage;
    }

    if (*check) {
        return guarded(check_args.file, [&](std::string* failing) {
            RLangKnowledge k = compile(check_args, failing);
            print_warnings(check_args.file, k);
            std::cout << "ok: " << check_args.file << " (" << format_capabilities(capability_vector(*k.program))
                      << ")\n";
            return kOk;
        });
    }
    if (*query) {
        return guarded(query_args.file, [&](std::string* failing) {
            RLangKnowledge k = compile(query_args, failing);
            print_warnings(query_args.file, k);
            const std::vector<double> s = parse_vector(state);
            std::optional<std::vector<double>> sn;
            if (!next.empty()) sn = parse_vector(next);
            if (!action.empty()) {
                auto a = k.program->action_named(action);
                if (!a) throw ConfigError("unknown action '" + action + "'");
                if (k.dynamics.has_main_effect()) {
                    std::cout << "transition: " << k.dynamics.query_transition(s, *a).str() << '\n';
                    const auto r = k.dynamics.query_reward(s, *a, sn);
                    std::cout << "reward: " << (r ? format_number(*r) : "unknown") << '\n';
                } else {
                    std::cout << "transition: unknown\nreward: unknown\n";
                }
            }
            std::cout << "policy: " << k.solution.query_policy(s).str() << '\n';
            const auto restricted = k.solution.restricted_actions(s);
            if (!restricted.empty()) {
                std::cout << "restricted:";
                for (const auto& a : restricted) std::cout << ' ' << a.name;
                std::cout << '\n';
            }
            return kOk;
        });
    }
    if (*dump) {
        return guarded(dump_args.file, [&](std::string* failing) {
            RLangKnowledge k = compile(dump_args, failing);
            std::cout << dump_knowledge(k);
            return kOk;
        });
    }
    return guarded(config, [&](std::string*) {
        const auto cfg = agents::load_config(config);
        const fs::path out = agents::run_experiment(cfg);
        std::cout << "wrote " << out.string() << '\n';
        return kOk;
    });
}
