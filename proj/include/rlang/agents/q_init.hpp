#pragma once

#include <functional>
#include <vector>

#include "rlang/agents/q_learning.hpp"

namespace rlang::agents {

using TerminalTest = std::function<bool(const State&)>;

struct QInitStats {
    int sweeps = 0;
    double last_delta = 0.0;
    std::size_t known_rewards = 0;
    std::size_t known_transitions = 0;
};

/// Q-table initialization from partial RLang knowledge. First pass: Q(s,a)
/// takes the known reward. Then up to `iterations` synchronous sweeps of
///   Q(s,a) <- sum_{s'} T(s'|s,a) [R(s,a,s') + gamma max_a' Q(s',a')]
/// over pairs with a known transition. Partial predictions are completed by
/// identity; predicted states outside `states` are dropped; Unknown rewards
/// count as 0; terminal states get no bootstrap. Stops early once the largest
/// change falls below 1e-9.
QTable init_q_table(const DynamicsTaskKnowledge& k, const std::vector<State>& states,
                    const std::vector<ActionValue>& actions, double gamma, int iterations,
                    const TerminalTest& terminal, QInitStats* stats = nullptr);

}  // namespace rlang::agents
