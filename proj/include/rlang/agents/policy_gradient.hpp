#pragma once

#include <vector>

#include "rlang/agents/agent.hpp"

namespace rlang::agents {

/// pi(a|s) = softmax(W phi(s)) with phi(s) = [s, 1].
class LinearSoftmaxPolicy {
public:
    LinearSoftmaxPolicy(std::size_t state_dim, std::size_t num_actions);

    std::size_t num_params() const { return weights_.size(); }
    std::vector<double>& weights() { return weights_; }
    const std::vector<double>& weights() const { return weights_; }

    std::vector<double> probabilities(const State& s) const;
    double log_prob(const State& s, std::size_t a) const;
    /// d log pi(a|s) / dW, flattened row-major (action, feature).
    std::vector<double> grad_log_prob(const State& s, std::size_t a) const;
    std::size_t sample(const State& s, Rng& rng) const;

private:
    std::size_t features_, actions_;
    std::vector<double> weights_;
};

struct Transition {
    State s;
    std::size_t a = 0;
    double r = 0.0;
};
using Trajectory = std::vector<Transition>;

/// One batch of Bernoulli(beta)-gated rollouts: the RLang policy acts on
/// success (falling back to the learner where it is Unknown), the learner
/// otherwise. Returns the trajectories; beta itself is decayed by the caller.
std::vector<Trajectory> policy_mixing_rollout(const Environment& env, const LinearSoftmaxPolicy& learned,
                                              const SolutionKnowledge* advice, double beta, int episodes,
                                              int step_cap, Rng& rng, const StepObserver& observer = {});

/// REINFORCE with a batch-mean baseline on discounted returns-to-go.
void reinforce_update(LinearSoftmaxPolicy& policy, const std::vector<Trajectory>& batch, double learning_rate,
                      double gamma);

/// Episodes are gathered in batches of `batch_size`; the policy is updated and
/// beta multiplied by `decay` after every batch. With no advice this is plain
/// REINFORCE.
class PolicyMixingAgent : public Agent {
public:
    PolicyMixingAgent(std::string id, const Environment& env, const RLangKnowledge* knowledge,
                      const Hyperparameters& hp, double gamma);
    std::string id() const override { return id_; }
    double run_episode(Rng& rng, int step_cap) override;
    double beta() const { return beta_; }
    const LinearSoftmaxPolicy& policy() const { return policy_; }

private:
    std::string id_;
    const Environment& env_;
    const RLangKnowledge* knowledge_;
    LinearSoftmaxPolicy policy_;
    double beta_, decay_, lr_, gamma_;
    int batch_size_;
    std::vector<Trajectory> pending_;
};

/// Executes the RLang main policy directly (learner-free); Unknown steps take
/// a uniformly random action.
class RLangPolicyAgent : public Agent {
public:
    RLangPolicyAgent(std::string id, const Environment& env, const RLangKnowledge& knowledge);
    std::string id() const override { return id_; }
    double run_episode(Rng& rng, int step_cap) override;

private:
    std::string id_;
    const Environment& env_;
    const RLangKnowledge& knowledge_;
};

}  // namespace rlang::agents
