#pragma once

#include <map>
#include <vector>

#include "rlang/agents/q_init.hpp"

namespace rlang::agents {

/// Tabular RMax model. A pair is known once its count reaches `m`. Pairs
/// seeded from RLang knowledge start at count K (< m) and become known after
/// m - K real observations; their estimate blends the seed (weight K) with the
/// real samples until m real observations arrive, after which the real
/// statistics replace the seed.
class RMaxModel {
public:
    RMaxModel(std::vector<State> states, std::size_t num_actions, int m, int k);

    std::size_t num_states() const { return states_.size(); }
    std::size_t num_actions() const { return num_actions_; }
    int m() const { return m_; }
    int k() const { return k_; }
    std::optional<std::size_t> index_of(const State& s) const;
    const State& state(std::size_t i) const { return states_[i]; }

    void observe(std::size_t s, std::size_t a, double r, std::size_t next, bool terminal);
    void seed(std::size_t s, std::size_t a, const std::map<std::size_t, double>& next, double reward);

    int real_count(std::size_t s, std::size_t a) const { return cell(s, a).real_n; }
    /// Real observations plus K for seeded pairs.
    int count(std::size_t s, std::size_t a) const;
    bool seeded(std::size_t s, std::size_t a) const { return cell(s, a).seeded; }
    bool known(std::size_t s, std::size_t a) const;
    /// Estimated reward and next-state distribution (terminal outcomes map to
    /// the absorbing index num_states()).
    double reward(std::size_t s, std::size_t a) const;
    std::map<std::size_t, double> transition(std::size_t s, std::size_t a) const;

private:
    struct Cell {
        int real_n = 0;
        double real_r = 0.0;
        std::map<std::size_t, double> real_next;
        bool seeded = false;
        double seed_r = 0.0;
        std::map<std::size_t, double> seed_next;
    };
    const Cell& cell(std::size_t s, std::size_t a) const { return cells_[s * num_actions_ + a]; }
    Cell& cell(std::size_t s, std::size_t a) { return cells_[s * num_actions_ + a]; }

    std::vector<State> states_;
    std::map<State, std::size_t> index_;
    std::size_t num_actions_;
    int m_, k_;
    std::vector<Cell> cells_;
};

/// Seeds every pair with a known transition and reward at count K. Predicted next states
/// outside the state list are dropped; entering a terminal state adds that
/// state's reward to the pair's reward. Throws ConfigError when K >= m.
/// Returns the number of seeded pairs.
std::size_t seed_rmax(const DynamicsTaskKnowledge& k, RMaxModel& model, const std::vector<ActionValue>& actions,
                      const TerminalTest& terminal);

class RMaxAgent : public Agent {
public:
    RMaxAgent(std::string id, const Environment& env, const RLangKnowledge* knowledge, const Hyperparameters& hp,
              double gamma);
    std::string id() const override { return id_; }
    double run_episode(Rng& rng, int step_cap) override;

    const RMaxModel& model() const { return model_; }
    std::size_t seeded_pairs() const { return seeded_; }
    /// Planning value of (s, a): solved from the model when known, the
    /// RLang-initialized value for seeded pairs not yet known, else r_max / (1 - gamma).
    double value(const State& s, std::size_t a) const;
    /// Greedy action under the current plan (ties broken by lowest index).
    std::size_t greedy_action(const State& s) const;
    void plan();

private:
    std::string id_;
    const Environment& env_;
    RMaxModel model_;
    double gamma_, vmax_;
    std::vector<double> q_;       // states x actions
    std::vector<double> q_seed_;  // RLang-initialized values, informed only
    std::size_t seeded_ = 0;
};

}  // namespace rlang::agents
