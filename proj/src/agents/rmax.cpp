#include "rlang/agents/rmax.hpp"

#include <algorithm>
#include <cmath>

#include "rlang/diagnostics.hpp"

namespace rlang::agents {

RMaxModel::RMaxModel(std::vector<State> states, std::size_t num_actions, int m, int k)
    : states_(std::move(states)), num_actions_(num_actions), m_(m), k_(k), cells_(states_.size() * num_actions) {
    if (m <= 0) throw ConfigError("RMax threshold m must be positive");
    if (k < 0 || k >= m) throw ConfigError("RMax seed count K must satisfy 0 <= K < m");
    for (std::size_t i = 0; i < states_.size(); ++i) index_.emplace(states_[i], i);
}

std::optional<std::size_t> RMaxModel::index_of(const State& s) const {
    auto it = index_.find(s);
    if (it == index_.end()) return std::nullopt;
    return it->second;
}

void RMaxModel::observe(std::size_t s, std::size_t a, double r, std::size_t next, bool terminal) {
    Cell& c = cell(s, a);
    ++c.real_n;
    c.real_r += r;
    c.real_next[terminal ? states_.size() : next] += 1.0;
}

void RMaxModel::seed(std::size_t s, std::size_t a, const std::map<std::size_t, double>& next, double reward) {
    Cell& c = cell(s, a);
    c.seeded = true;
    c.seed_r = reward;
    c.seed_next = next;
}

int RMaxModel::count(std::size_t s, std::size_t a) const {
    const Cell& c = cell(s, a);
    return c.real_n + (c.seeded ? k_ : 0);
}

bool RMaxModel::known(std::size_t s, std::size_t a) const { return count(s, a) >= m_; }

double RMaxModel::reward(std::size_t s, std::size_t a) const {
    const Cell& c = cell(s, a);
    if (c.real_n >= m_ || !c.seeded) return c.real_n ? c.real_r / c.real_n : 0.0;
    return (k_ * c.seed_r + c.real_r) / (k_ + c.real_n);
}

std::map<std::size_t, double> RMaxModel::transition(std::size_t s, std::size_t a) const {
    const Cell& c = cell(s, a);
    std::map<std::size_t, double> out;
    const bool use_seed = c.seeded && c.real_n < m_;
    double total = 0.0;
    if (use_seed) {
        for (const auto& [n, p] : c.seed_next) {
            out[n] += k_ * p;
            total += k_ * p;
        }
    }
    for (const auto& [n, cnt] : c.real_next) {
        out[n] += cnt;
        total += cnt;
    }
    if (total > 0) {
        for (auto& [_, p] : out) p /= total;
    }
    return out;
}

std::size_t seed_rmax(const DynamicsTaskKnowledge& k, RMaxModel& model, const std::vector<ActionValue>& actions,
                      const TerminalTest& terminal) {
    std::size_t seeded = 0;
    const std::size_t absorbing = model.num_states();
    for (std::size_t si = 0; si < model.num_states(); ++si) {
        const State& s = model.state(si);
        for (std::size_t ai = 0; ai < actions.size(); ++ai) {
            const std::optional<double> r = k.query_reward(s, actions[ai], std::nullopt);
            const TransitionMeasure t = k.query_transition(s, actions[ai]);
            if (!r || t.fully_unknown()) continue;
            std::map<std::size_t, double> next;
            double reward = *r;
            for (const auto& e : t.entries) {
                const State ns = e.next.complete(s);
                auto ni = model.index_of(ns);
                if (!ni) continue;
                if (terminal && terminal(ns)) {
                    // Entering a terminal state earns that state's reward.
                    reward += e.probability * k.query_reward(ns, actions[ai], std::nullopt).value_or(0.0);
                    next[absorbing] += e.probability;
                } else {
                    next[*ni] += e.probability;
                }
            }
            // A pair whose predictions all leave the state list keeps only its reward.
            model.seed(si, ai, next, reward);
            ++seeded;
        }
    }
    return seeded;
}

RMaxAgent::RMaxAgent(std::string id, const Environment& env, const RLangKnowledge* knowledge,
                     const Hyperparameters& hp, double gamma)
    : id_(std::move(id)), env_(env), model_(env.states(), env.actions().size(), hp.rmax_m, hp.rmax_k), gamma_(gamma),
      vmax_(hp.rmax_reward / (1.0 - gamma)) {
    if (knowledge) {
        TerminalTest terminal = [&env, knowledge](const State& s) {
            return env.is_terminal(s) || knowledge->dynamics.is_goal(s);
        };
        seeded_ = seed_rmax(knowledge->dynamics, model_, env.actions(), terminal);
        const QTable init =
            init_q_table(knowledge->dynamics, env.states(), env.actions(), gamma, hp.vi_sweeps, terminal);
        const std::size_t na = model_.num_actions();
        q_seed_.assign(model_.num_states() * na, 0.0);
        for (std::size_t s = 0; s < model_.num_states(); ++s) {
            for (std::size_t a = 0; a < na; ++a) q_seed_[s * na + a] = init.get(model_.state(s), a);
        }
    }
    plan();
}

void RMaxAgent::plan() {
    const std::size_t ns = model_.num_states(), na = model_.num_actions();
    q_.assign(ns * na, vmax_);
    for (std::size_t i = 0; i < q_seed_.size(); ++i) {
        if (model_.seeded(i / na, i % na)) q_[i] = q_seed_[i];
    }
    std::vector<std::vector<std::pair<std::size_t, double>>> next(ns * na);
    std::vector<double> rew(ns * na, 0.0);
    std::vector<bool> known(ns * na, false);
    for (std::size_t s = 0; s < ns; ++s) {
        for (std::size_t a = 0; a < na; ++a) {
            if (!model_.known(s, a)) continue;
            known[s * na + a] = true;
            rew[s * na + a] = model_.reward(s, a);
            for (const auto& [n, p] : model_.transition(s, a)) next[s * na + a].emplace_back(n, p);
        }
    }
    std::vector<double> v(ns + 1, vmax_);
    v[ns] = 0.0;  // absorbing terminal
    for (int it = 0; it < 10000; ++it) {
        for (std::size_t s = 0; s < ns; ++s) {
            v[s] = *std::max_element(q_.begin() + static_cast<std::ptrdiff_t>(s * na),
                                     q_.begin() + static_cast<std::ptrdiff_t>((s + 1) * na));
        }
        double delta = 0.0;
        for (std::size_t i = 0; i < ns * na; ++i) {
            if (!known[i]) continue;
            double x = rew[i];
            for (const auto& [n, p] : next[i]) x += gamma_ * p * v[n];
            delta = std::max(delta, std::abs(x - q_[i]));
            q_[i] = x;
        }
        if (delta < 1e-10) break;
    }
}

double RMaxAgent::value(const State& s, std::size_t a) const {
    return q_[*model_.index_of(s) * model_.num_actions() + a];
}

std::size_t RMaxAgent::greedy_action(const State& s) const {
    const auto si = model_.index_of(s);
    if (!si) return 0;
    const std::size_t na = model_.num_actions();
    std::size_t best = 0;
    for (std::size_t a = 1; a < na; ++a) {
        if (q_[*si * na + a] > q_[*si * na + best] + 1e-12) best = a;
    }
    return best;
}

double RMaxAgent::run_episode(Rng& rng, int step_cap) {
    State s = env_.reset(rng);
    double total = 0.0;
    for (int t = 0; t < step_cap; ++t) {
        const std::size_t si = *model_.index_of(s);
        const std::size_t a = greedy_action(s);
        observe(s, a);
        env::StepResult r = env_.step(s, a, rng);
        total += r.reward;
        const std::size_t ni = *model_.index_of(r.next);
        const bool was_known = model_.known(si, a);
        const bool was_real = model_.real_count(si, a) >= model_.m();
        model_.observe(si, a, r.reward, ni, r.terminal);
        if (model_.known(si, a) != was_known || (model_.real_count(si, a) >= model_.m()) != was_real) plan();
        if (r.terminal) break;
        s = std::move(r.next);
    }
    plan();
    return total;
}

}  // namespace rlang::agents
