#include "rlang/agents/q_learning.hpp"

#include <algorithm>
#include <limits>

namespace rlang::agents {

std::vector<std::size_t> allowed_actions(const Environment& env, const RLangKnowledge* k, const State& s) {
    const auto& acts = env.actions();
    std::vector<std::size_t> out;
    if (!k || !k->solution.has_restrictions()) {
        for (std::size_t i = 0; i < acts.size(); ++i) out.push_back(i);
        return out;
    }
    const std::vector<ActionValue> restricted = k->solution.restricted_actions(s);
    for (std::size_t i = 0; i < acts.size(); ++i) {
        if (std::find(restricted.begin(), restricted.end(), acts[i]) == restricted.end()) out.push_back(i);
    }
    return out;
}

std::size_t StateHash::operator()(const State& s) const noexcept {
    std::size_t h = 0xcbf29ce484222325ULL;
    for (double x : s) h = (h ^ std::hash<double>{}(x)) * 0x100000001b3ULL;
    return h;
}

double QTable::get(const State& s, std::size_t a) const {
    auto it = table_.find(s);
    return it == table_.end() ? 0.0 : it->second[a];
}

void QTable::set(const State& s, std::size_t a, double v) { row_mut(s)[a] = v; }

const std::vector<double>* QTable::row(const State& s) const {
    auto it = table_.find(s);
    return it == table_.end() ? nullptr : &it->second;
}

std::vector<double>& QTable::row_mut(const State& s) {
    auto it = table_.find(s);
    if (it == table_.end()) it = table_.emplace(s, std::vector<double>(num_actions_, 0.0)).first;
    return it->second;
}

double QTable::max(const State& s, const std::vector<std::size_t>& allowed) const {
    if (allowed.empty()) return 0.0;
    const std::vector<double>* r = row(s);
    if (!r) return 0.0;
    double best = -std::numeric_limits<double>::infinity();
    for (std::size_t a : allowed) best = std::max(best, (*r)[a]);
    return best;
}

std::size_t greedy(const QTable& q, const State& s, const std::vector<std::size_t>& allowed, Rng& rng) {
    const std::vector<double>* r = q.row(s);
    std::vector<std::size_t> best;
    double best_v = -std::numeric_limits<double>::infinity();
    for (std::size_t a : allowed) {
        const double v = r ? (*r)[a] : 0.0;
        if (v > best_v) {
            best_v = v;
            best = {a};
        } else if (v == best_v) {
            best.push_back(a);
        }
    }
    if (best.size() == 1) return best[0];
    std::uniform_int_distribution<std::size_t> pick(0, best.size() - 1);
    return best[pick(rng)];
}

std::size_t epsilon_greedy(const QTable& q, const State& s, const std::vector<std::size_t>& allowed, double epsilon,
                           Rng& rng) {
    std::uniform_real_distribution<double> u(0.0, 1.0);
    if (u(rng) < epsilon) {
        std::uniform_int_distribution<std::size_t> pick(0, allowed.size() - 1);
        return allowed[pick(rng)];
    }
    return greedy(q, s, allowed, rng);
}

void q_update(QTable& q, const State& s, std::size_t a, double r, const State& next, bool terminal,
              const std::vector<std::size_t>& next_allowed, double alpha, double gamma) {
    const double target = r + (terminal ? 0.0 : gamma * q.max(next, next_allowed));
    double& cur = q.row_mut(s)[a];
    cur += alpha * (target - cur);
}

QLearningAgent::QLearningAgent(std::string id, const Environment& env, const RLangKnowledge* knowledge, QTable init,
                               double epsilon, double alpha, double gamma)
    : id_(std::move(id)), env_(env), knowledge_(knowledge), q_(std::move(init)), epsilon_(epsilon), alpha_(alpha),
      gamma_(gamma) {
    if (q_.num_actions() == 0) q_ = QTable(env.actions().size());
}

double QLearningAgent::run_episode(Rng& rng, int step_cap) {
    State s = env_.reset(rng);
    double total = 0.0;
    std::vector<std::size_t> allowed = allowed_actions(env_, knowledge_, s);
    for (int t = 0; t < step_cap; ++t) {
        const std::size_t a = epsilon_greedy(q_, s, allowed, epsilon_, rng);
        observe(s, a);
        env::StepResult r = env_.step(s, a, rng);
        total += r.reward;
        std::vector<std::size_t> next_allowed =
            r.terminal ? std::vector<std::size_t>{} : allowed_actions(env_, knowledge_, r.next);
        q_update(q_, s, a, r.reward, r.next, r.terminal, next_allowed, alpha_, gamma_);
        if (r.terminal) break;
        s = std::move(r.next);
        allowed = std::move(next_allowed);
    }
    return total;
}

}  // namespace rlang::agents
