#pragma once

#include <unordered_map>
#include <vector>

#include "rlang/agents/agent.hpp"

namespace rlang::agents {

struct StateHash {
    std::size_t operator()(const State& s) const noexcept;
};

/// Sparse table of action values; missing entries read as 0.
class QTable {
public:
    explicit QTable(std::size_t num_actions = 0) : num_actions_(num_actions) {}

    std::size_t num_actions() const { return num_actions_; }
    double get(const State& s, std::size_t a) const;
    void set(const State& s, std::size_t a, double v);
    const std::vector<double>* row(const State& s) const;
    std::vector<double>& row_mut(const State& s);
    /// max over `allowed`, 0 for an empty list.
    double max(const State& s, const std::vector<std::size_t>& allowed) const;
    std::size_t size() const { return table_.size(); }

private:
    std::size_t num_actions_;
    std::unordered_map<State, std::vector<double>, StateHash> table_;
};

/// Greedy choice over `allowed` with uniform tie-breaking.
std::size_t greedy(const QTable& q, const State& s, const std::vector<std::size_t>& allowed, Rng& rng);
std::size_t epsilon_greedy(const QTable& q, const State& s, const std::vector<std::size_t>& allowed, double epsilon,
                           Rng& rng);

/// One Watkins update: Q += alpha * (r + gamma * max Q(s') - Q); the
/// bootstrap term is dropped when `terminal`.
void q_update(QTable& q, const State& s, std::size_t a, double r, const State& next, bool terminal,
              const std::vector<std::size_t>& next_allowed, double alpha, double gamma);

/// Tabular epsilon-greedy Q-learning, optionally informed by RLang knowledge
/// (Q-table initialization and action restrictions).
class QLearningAgent : public Agent {
public:
    QLearningAgent(std::string id, const Environment& env, const RLangKnowledge* knowledge, QTable init,
                   double epsilon, double alpha, double gamma);
    std::string id() const override { return id_; }
    double run_episode(Rng& rng, int step_cap) override;
    const QTable& q() const { return q_; }

private:
    std::string id_;
    const Environment& env_;
    const RLangKnowledge* knowledge_;
    QTable q_;
    double epsilon_, alpha_, gamma_;
};

}  // namespace rlang::agents
