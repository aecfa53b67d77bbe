#include "rlang/agents/experiment.hpp"

#include <cstdlib>
#include <fstream>
#include <set>

#include "rlang/agents/hierarchical.hpp"
#include "rlang/agents/policy_gradient.hpp"
#include "rlang/agents/q_init.hpp"
#include "rlang/agents/rmax.hpp"
#include "rlang/agents/selector.hpp"
#include "rlang/diagnostics.hpp"
#include "rlang/env/registry.hpp"
#include "rlang/loader.hpp"
#include "rlang/vocabulary.hpp"

namespace rlang::agents {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

void reject_unknown(const json& j, const std::set<std::string>& allowed, const std::string& where) {
    if (!j.is_object()) throw ConfigError(where + " must be an object");
    for (const auto& [key, _] : j.items()) {
        if (!allowed.count(key)) throw ConfigError("unknown key '" + key + "' in " + where);
    }
}

template <typename T>
T get(const json& j, const std::string& key) {
    try {
        return j.at(key).get<T>();
    } catch (const json::exception& e) {
        throw ConfigError("bad value for '" + key + "': " + e.what());
    }
}

void in_range(double v, double lo, double hi, const std::string& key, bool open_lo = false) {
    if (!(v >= lo && v <= hi) || (open_lo && v == lo)) {
        throw ConfigError("'" + key + "' = " + format_number(v) + " is out of range");
    }
}

Hyperparameters parse_hp(const json& j) {
    static const std::set<std::string> keys{"epsilon",     "alpha",        "gamma",          "beta0",
                                            "decay",       "vi_sweeps",    "rmax_m",         "rmax_k",
                                            "rmax_reward", "option_timeout", "inner_epsilon", "inner_alpha",
                                            "learning_rate", "batch_size"};
    reject_unknown(j, keys, "hyperparameters");
    Hyperparameters hp;
    auto num = [&](const char* k, double& out) {
        if (j.contains(k)) out = get<double>(j, k);
    };
    auto integer = [&](const char* k, int& out) {
        if (j.contains(k)) out = get<int>(j, k);
    };
    num("epsilon", hp.epsilon);
    num("alpha", hp.alpha);
    if (j.contains("gamma")) hp.gamma = get<double>(j, "gamma");
    num("beta0", hp.beta0);
    num("decay", hp.decay);
    integer("vi_sweeps", hp.vi_sweeps);
    integer("rmax_m", hp.rmax_m);
    integer("rmax_k", hp.rmax_k);
    num("rmax_reward", hp.rmax_reward);
    integer("option_timeout", hp.option_timeout);
    num("inner_epsilon", hp.inner_epsilon);
    num("inner_alpha", hp.inner_alpha);
    num("learning_rate", hp.learning_rate);
    integer("batch_size", hp.batch_size);

    in_range(hp.epsilon, 0, 1, "epsilon");
    in_range(hp.alpha, 0, 1, "alpha", true);
    if (hp.gamma) in_range(*hp.gamma, 0, 1, "gamma");
    in_range(hp.beta0, 0, 1, "beta0");
    in_range(hp.decay, 0, 1, "decay", true);
    if (hp.vi_sweeps < 0) throw ConfigError("'vi_sweeps' must be non-negative");
    if (hp.rmax_m < 1) throw ConfigError("'rmax_m' must be at least 1");
    if (hp.rmax_k < 0 || hp.rmax_k >= hp.rmax_m) throw ConfigError("'rmax_k' must satisfy 0 <= K < rmax_m");
    if (!(hp.rmax_reward > 0)) throw ConfigError("'rmax_reward' must be positive");
    if (hp.option_timeout < 1) throw ConfigError("'option_timeout' must be at least 1");
    in_range(hp.inner_epsilon, 0, 1, "inner_epsilon");
    in_range(hp.inner_alpha, 0, 1, "inner_alpha", true);
    if (!(hp.learning_rate > 0)) throw ConfigError("'learning_rate' must be positive");
    if (hp.batch_size < 1) throw ConfigError("'batch_size' must be at least 1");
    return hp;
}

fs::path resolve(const fs::path& p, const fs::path& base) { return p.is_absolute() || base.empty() ? p : base / p; }

}  // namespace

ExperimentConfig parse_config(const json& j, const fs::path& base_dir) {
    reject_unknown(j, {"env", "program", "vocabulary", "agent", "hyperparameters", "episodes", "step_cap", "seeds",
                       "output"},
                   "experiment config");
    ExperimentConfig c;
    if (!j.contains("env")) throw ConfigError("missing 'env'");
    c.env = get<std::string>(j, "env");
    if (j.contains("program")) c.program = resolve(get<std::string>(j, "program"), base_dir);
    if (j.contains("vocabulary")) {
        for (const auto& v : get<std::vector<std::string>>(j, "vocabulary")) c.vocabulary.push_back(resolve(v, base_dir));
    }
    if (j.contains("agent")) c.agent = get<std::string>(j, "agent");
    if (j.contains("hyperparameters")) c.hp = parse_hp(j.at("hyperparameters"));
    if (j.contains("episodes")) c.episodes = get<int>(j, "episodes");
    if (c.episodes < 1) throw ConfigError("'episodes' must be at least 1");
    if (j.contains("step_cap")) {
        c.step_cap = get<int>(j, "step_cap");
        if (*c.step_cap < 1) throw ConfigError("'step_cap' must be at least 1");
    }
    if (!j.contains("seeds")) throw ConfigError("missing 'seeds'");
    c.seeds = get<std::vector<std::uint64_t>>(j, "seeds");
    if (c.seeds.empty()) throw ConfigError("'seeds' must not be empty");
    if (!j.contains("output")) throw ConfigError("missing 'output'");
    c.output = get<std::string>(j, "output");
    if (c.agent != "auto") {
        const auto& ids = agent_ids();
        if (std::find(ids.begin(), ids.end(), c.agent) == ids.end()) {
            throw ConfigError("unknown agent '" + c.agent + "'");
        }
    }
    return c;
}

ExperimentConfig load_config(const fs::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config " + path.string());
    json j;
    try {
        j = json::parse(in);
    } catch (const json::parse_error& e) {
        throw ConfigError(path.string() + ": " + e.what());
    }
    return parse_config(j, path.parent_path());
}

const std::vector<std::string>& agent_ids() {
    static const std::vector<std::string> ids{"informed_q",     "uninformed_q",   "informed_rmax",
                                              "uninformed_rmax", "hierarchical_q", "policy_mixing",
                                              "reinforce",      "rlang_policy",   "uninformed"};
    return ids;
}

bool agent_needs_knowledge(const std::string& id) {
    return id == "informed_q" || id == "informed_rmax" || id == "hierarchical_q" || id == "policy_mixing" ||
           id == "rlang_policy";
}

std::unique_ptr<RLangKnowledge> load_knowledge(const Environment& env, const fs::path& program,
                                               const std::vector<fs::path>& extra_vocab) {
    auto reg = env.make_registry();
    for (const auto& v : extra_vocab) reg->add_document(load_vocabulary_document(v));
    auto checked = load_and_check(program, reg, false);
    return std::make_unique<RLangKnowledge>(compile_knowledge(std::move(checked)));
}

std::string resolve_agent_id(const std::string& requested, const Environment& env, const RLangKnowledge* k) {
    std::string id = requested;
    if (id == "auto") {
        id = k ? select_agent(capability_vector(*k->program), default_agent_registry()) : "uninformed";
    }
    if (id == "uninformed") id = env.is_tabular() ? "uninformed_q" : "reinforce";
    return id;
}

std::unique_ptr<Agent> make_agent(const std::string& id, const Environment& env, const RLangKnowledge* knowledge,
                                  const Hyperparameters& hp) {
    const double gamma = hp.gamma.value_or(env.gamma());
    if (agent_needs_knowledge(id) && !knowledge) throw ConfigError("agent '" + id + "' needs an RLang program");
    const bool tabular = id == "informed_q" || id == "uninformed_q" || id == "informed_rmax" ||
                         id == "uninformed_rmax" || id == "hierarchical_q";
    if (tabular && !env.is_tabular()) throw ConfigError("agent '" + id + "' needs a tabular environment");

    if (id == "informed_q") {
        TerminalTest terminal = [&env, knowledge](const State& s) {
            return env.is_terminal(s) || knowledge->dynamics.is_goal(s);
        };
        QTable init = init_q_table(knowledge->dynamics, env.states(), env.actions(), gamma, hp.vi_sweeps, terminal);
        return std::make_unique<QLearningAgent>(id, env, knowledge, std::move(init), hp.epsilon, hp.alpha, gamma);
    }
    if (id == "uninformed_q") {
        return std::make_unique<QLearningAgent>(id, env, nullptr, QTable(env.actions().size()), hp.epsilon, hp.alpha,
                                                gamma);
    }
    if (id == "informed_rmax") return std::make_unique<RMaxAgent>(id, env, knowledge, hp, gamma);
    if (id == "uninformed_rmax") return std::make_unique<RMaxAgent>(id, env, nullptr, hp, gamma);
    if (id == "hierarchical_q") return std::make_unique<HierarchicalAgent>(id, env, *knowledge, hp, gamma);
    if (id == "policy_mixing") return std::make_unique<PolicyMixingAgent>(id, env, knowledge, hp, gamma);
    if (id == "reinforce") return std::make_unique<PolicyMixingAgent>(id, env, nullptr, hp, gamma);
    if (id == "rlang_policy") return std::make_unique<RLangPolicyAgent>(id, env, *knowledge);
    if (id == "uninformed") return make_agent(resolve_agent_id(id, env, nullptr), env, nullptr, hp);
    throw ConfigError("unknown agent '" + id + "'");
}

std::vector<ReturnRow> run_episodes(const Environment& env, const RLangKnowledge* knowledge, const std::string& agent,
                                    const Hyperparameters& hp, int episodes, int step_cap,
                                    const std::vector<std::uint64_t>& seeds) {
    std::vector<ReturnRow> rows;
    for (std::uint64_t seed : seeds) {
        Rng rng(seed);
        auto a = make_agent(agent, env, knowledge, hp);
        for (int e = 1; e <= episodes; ++e) rows.push_back({seed, e, a->run_episode(rng, step_cap)});
    }
    return rows;
}

void write_csv(std::ostream& os, const std::vector<ReturnRow>& rows) {
    os << "seed,episode,return\n";
    for (const auto& r : rows) os << r.seed << ',' << r.episode << ',' << format_number(r.ret) << '\n';
}

fs::path output_path(const ExperimentConfig& cfg) {
    if (const char* dir = std::getenv("RLANG_OUTPUT_DIR"); dir && *dir) return fs::path(dir) / cfg.output.filename();
    return cfg.output;
}

fs::path run_experiment(const ExperimentConfig& cfg) {
    auto env = env::make_environment(cfg.env);
    std::unique_ptr<RLangKnowledge> knowledge;
    const std::string requested = cfg.agent;
    const bool wants_program =
        cfg.program || requested == "auto" || agent_needs_knowledge(requested);
    if (wants_program) knowledge = load_knowledge(*env, cfg.program.value_or(env->advice_path()), cfg.vocabulary);
    const std::string id = resolve_agent_id(requested, *env, knowledge.get());
    auto rows = run_episodes(*env, knowledge.get(), id, cfg.hp, cfg.episodes, cfg.step_cap.value_or(env->step_cap()),
                             cfg.seeds);
    const fs::path out = output_path(cfg);
    if (out.has_parent_path()) fs::create_directories(out.parent_path());
    std::ofstream os(out, std::ios::binary);
    if (!os) throw ConfigError("cannot write " + out.string());
    write_csv(os, rows);
    return out;
}

}  // namespace rlang::agents
