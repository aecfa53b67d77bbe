#pragma once

#include "rlang/env/environment.hpp"

namespace rlang::env {

/// 6x6 grid, coordinates 1..6. `up` increments x, `right` increments y.
/// Each move fails with probability 1/3 and then takes one of the other three
/// directions uniformly. Walls and the grid border block movement.
class LavaGap : public Environment {
public:
    static constexpr int kSize = 6;
    static constexpr double kFailure = 1.0 / 3.0;

    LavaGap();

    std::string name() const override { return "lava_gap"; }
    std::size_t state_dim() const override { return 2; }
    const std::vector<ActionValue>& actions() const override { return actions_; }
    double gamma() const override { return 0.95; }
    int step_cap() const override { return 200; }

    State reset(Rng& rng) const override;
    StepResult step(const State& s, std::size_t action, Rng& rng) const override;

    std::vector<State> states() const override;
    bool is_tabular() const override { return true; }
    bool is_terminal(const State& s) const override { return in_lava(s) || at_goal(s); }
    void register_groundings(VocabularyRegistry& reg) const override;

    static bool is_wall(int x, int y);
    static bool in_lava(const State& s);
    static bool at_goal(const State& s);
    static bool at_wall(const State& s);
    /// Cell reached by moving in `direction` (the action index), after
    /// blocking by walls and the border.
    static State move(const State& s, std::size_t direction);
    static double reward_of(const State& next);

private:
    std::vector<ActionValue> actions_;
};

}  // namespace rlang::env
