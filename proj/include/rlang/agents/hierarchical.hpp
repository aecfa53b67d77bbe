#pragma once

#include <vector>

#include "rlang/agents/q_learning.hpp"

namespace rlang::agents {

/// Option with its learner state: fixed options follow their RLang policy,
/// learnable ones own an inner Q-learner trained on the pseudo-reward
/// 1 when `until` holds and 0 otherwise.
struct OptionLearner {
    const OptionSpec* spec = nullptr;
    std::unique_ptr<QTable> inner;  // learnable options only
};

struct HierarchicalAgentState {
    QTable over_options;
    std::vector<OptionLearner> options;
};

/// Builds the hierarchy: one inner learner per learnable option.
HierarchicalAgentState init_options(const SolutionKnowledge& k, std::size_t num_actions);

/// SMDP Q-learning over RLang options. When no option can start, one random
/// primitive action is taken.
class HierarchicalAgent : public Agent {
public:
    HierarchicalAgent(std::string id, const Environment& env, const RLangKnowledge& knowledge,
                      const Hyperparameters& hp, double gamma);
    std::string id() const override { return id_; }
    double run_episode(Rng& rng, int step_cap) override;
    const HierarchicalAgentState& state() const { return state_; }

private:
    std::vector<std::size_t> available_options(const State& s) const;

    std::string id_;
    const Environment& env_;
    const RLangKnowledge& knowledge_;
    HierarchicalAgentState state_;
    double epsilon_, alpha_, inner_epsilon_, inner_alpha_, gamma_;
    int timeout_;
};

}  // namespace rlang::agents
