#pragma once

#include <cstddef>
#include <filesystem>
#include <memory>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "rlang/value.hpp"
#include "rlang/vocabulary.hpp"

namespace rlang::env {

using State = std::vector<double>;
using Rng = std::mt19937_64;

struct StepResult {
    State next;
    double reward = 0.0;
    bool terminal = false;
};

/// A seeded simulator. `step` is a pure function of (state, action, rng draws).
class Environment {
public:
    virtual ~Environment() = default;

    virtual std::string name() const = 0;
    virtual std::size_t state_dim() const = 0;
    virtual const std::vector<ActionValue>& actions() const = 0;
    virtual double gamma() const = 0;
    virtual int step_cap() const = 0;

    virtual State reset(Rng& rng) const = 0;
    virtual StepResult step(const State& s, std::size_t action, Rng& rng) const = 0;

    /// Finite state list for tabular methods; empty for continuous tasks.
    virtual std::vector<State> states() const { return {}; }
    virtual bool is_tabular() const { return false; }
    /// Terminal states known to the environment (not to the agent's advice).
    virtual bool is_terminal(const State&) const { return false; }

    /// The environment's "grounding file": host callables for its vocabulary.
    virtual void register_groundings(VocabularyRegistry& reg) const = 0;
    std::filesystem::path vocabulary_path() const;
    std::filesystem::path advice_path() const;

    /// Vocabulary document loaded into a registry with groundings bound.
    std::shared_ptr<VocabularyRegistry> make_registry() const;

    std::size_t action_index(const ActionValue& a) const;
};

std::filesystem::path asset_dir();

}  // namespace rlang::env
