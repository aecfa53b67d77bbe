#include "rlang/agents/q_init.hpp"

#include <algorithm>
#include <cmath>
#include <map>

namespace rlang::agents {

namespace {

struct KnownPair {
    std::size_t s, a;
    std::vector<std::pair<std::size_t, double>> next;  // (state index, probability)
    double reward;                                      // Unknown counts as 0
};

}  // namespace

QTable init_q_table(const DynamicsTaskKnowledge& k, const std::vector<State>& states,
                    const std::vector<ActionValue>& actions, double gamma, int iterations,
                    const TerminalTest& terminal, QInitStats* stats) {
    QTable q(actions.size());
    QInitStats st;
    std::map<State, std::size_t> index;
    for (std::size_t i = 0; i < states.size(); ++i) index.emplace(states[i], i);

    std::vector<double> table(states.size() * actions.size(), 0.0);
    std::vector<bool> is_terminal(states.size(), false);
    for (std::size_t i = 0; i < states.size(); ++i) is_terminal[i] = terminal && terminal(states[i]);

    std::vector<KnownPair> known;
    for (std::size_t si = 0; si < states.size(); ++si) {
        for (std::size_t ai = 0; ai < actions.size(); ++ai) {
            const std::optional<double> r = k.query_reward(states[si], actions[ai], std::nullopt);
            if (r) {
                table[si * actions.size() + ai] = *r;
                ++st.known_rewards;
            }
            const TransitionMeasure t = k.query_transition(states[si], actions[ai]);
            if (t.fully_unknown()) continue;
            KnownPair p{si, ai, {}, r.value_or(0.0)};
            for (const auto& e : t.entries) {
                auto it = index.find(e.next.complete(states[si]));
                if (it != index.end()) p.next.emplace_back(it->second, e.probability);
            }
            if (p.next.empty()) continue;
            ++st.known_transitions;
            known.push_back(std::move(p));
        }
    }

    const std::size_t na = actions.size();
    std::vector<double> vmax(states.size());
    for (int it = 0; it < iterations; ++it) {
        for (std::size_t si = 0; si < states.size(); ++si) {
            vmax[si] = *std::max_element(table.begin() + static_cast<std::ptrdiff_t>(si * na),
                                         table.begin() + static_cast<std::ptrdiff_t>((si + 1) * na));
        }
        double delta = 0.0;
        for (const auto& p : known) {
            double v = 0.0;
            for (const auto& [ni, prob] : p.next) {
                v += prob * (p.reward + (is_terminal[p.s] ? 0.0 : gamma * vmax[ni]));
            }
            double& cur = table[p.s * na + p.a];
            delta = std::max(delta, std::abs(v - cur));
            cur = v;
        }
        st.sweeps = it + 1;
        st.last_delta = delta;
        if (delta < 1e-9) break;
    }

    for (std::size_t si = 0; si < states.size(); ++si) {
        for (std::size_t ai = 0; ai < na; ++ai) {
            if (table[si * na + ai] != 0.0) q.set(states[si], ai, table[si * na + ai]);
        }
    }
    if (stats) *stats = st;
    return q;
}

}  // namespace rlang::agents
