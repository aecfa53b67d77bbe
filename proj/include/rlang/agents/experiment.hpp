#pragma once

#include <filesystem>
#include <iosfwd>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "rlang/agents/agent.hpp"

namespace rlang::agents {

struct ExperimentConfig {
    std::string env;
    std::optional<std::filesystem::path> program;  // unset: the environment's shipped advice
    std::vector<std::filesystem::path> vocabulary;
    std::string agent = "auto";
    Hyperparameters hp;
    int episodes = 100;
    std::optional<int> step_cap;  // unset: the environment's cap
    std::vector<std::uint64_t> seeds;
    std::filesystem::path output;
};

/// Strict parse: unknown keys and out-of-range values raise ConfigError.
/// Relative paths resolve against `base_dir`, except `output`.
ExperimentConfig parse_config(const nlohmann::json& j, const std::filesystem::path& base_dir = {});
ExperimentConfig load_config(const std::filesystem::path& path);

/// Every agent id make_agent accepts.
const std::vector<std::string>& agent_ids();
bool agent_needs_knowledge(const std::string& id);

/// Compiles `program` against the environment's vocabulary plus `extra_vocab`.
std::unique_ptr<RLangKnowledge> load_knowledge(const Environment& env, const std::filesystem::path& program,
                                               const std::vector<std::filesystem::path>& extra_vocab = {});

/// "auto" resolves through select_agent on the program's capability vector;
/// "uninformed" becomes uninformed_q on tabular tasks and reinforce otherwise.
std::string resolve_agent_id(const std::string& requested, const Environment& env, const RLangKnowledge* k);

/// Builds a fresh agent. `knowledge` must outlive the agent; informed agents
/// require it. Tabular agents on continuous tasks raise ConfigError.
std::unique_ptr<Agent> make_agent(const std::string& id, const Environment& env, const RLangKnowledge* knowledge,
                                  const Hyperparameters& hp);

struct ReturnRow {
    std::uint64_t seed = 0;
    int episode = 0;  // 1-based
    double ret = 0.0;
};

/// Runs every seed in order, each with a fresh agent and an RNG seeded by the seed.
std::vector<ReturnRow> run_episodes(const Environment& env, const RLangKnowledge* knowledge, const std::string& agent,
                                    const Hyperparameters& hp, int episodes, int step_cap,
                                    const std::vector<std::uint64_t>& seeds);

void write_csv(std::ostream& os, const std::vector<ReturnRow>& rows);

/// Output path after the RLANG_OUTPUT_DIR override.
std::filesystem::path output_path(const ExperimentConfig& cfg);

/// Runs the whole configuration and writes the CSV; returns the path written.
std::filesystem::path run_experiment(const ExperimentConfig& cfg);

}  // namespace rlang::agents
