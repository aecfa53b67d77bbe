#pragma once

#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "rlang/env/environment.hpp"
#include "rlang/knowledge.hpp"

namespace rlang::agents {

using env::Environment;
using env::Rng;
using env::State;

struct Hyperparameters {
    double epsilon = 0.1;
    double alpha = 0.05;
    std::optional<double> gamma;  // unset: the environment's discount
    double beta0 = 0.7;
    double decay = 0.99;
    int vi_sweeps = 1000;
    int rmax_m = 30;
    int rmax_k = 1;
    double rmax_reward = 1.0;
    int option_timeout = 100;
    double inner_epsilon = 0.1;
    double inner_alpha = 0.1;
    double learning_rate = 0.001;
    int batch_size = 5;
};

/// Called for every primitive step an agent takes: (state, action index).
using StepObserver = std::function<void(const State&, std::size_t)>;

class Agent {
public:
    virtual ~Agent() = default;
    virtual std::string id() const = 0;
    /// Runs one episode (at most `step_cap` primitive steps), learning online,
    /// and returns the undiscounted return.
    virtual double run_episode(Rng& rng, int step_cap) = 0;
    void set_observer(StepObserver obs) { observer_ = std::move(obs); }

protected:
    void observe(const State& s, std::size_t a) const {
        if (observer_) observer_(s, a);
    }

private:
    StepObserver observer_;
};

/// Indices of actions not restricted at `s` (all actions when no knowledge).
std::vector<std::size_t> allowed_actions(const Environment& env, const RLangKnowledge* k, const State& s);

}  // namespace rlang::agents
