#include "rlang/agents/policy_gradient.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace rlang::agents {

LinearSoftmaxPolicy::LinearSoftmaxPolicy(std::size_t state_dim, std::size_t num_actions)
    : features_(state_dim + 1), actions_(num_actions), weights_(features_ * num_actions, 0.0) {}

std::vector<double> LinearSoftmaxPolicy::probabilities(const State& s) const {
    std::vector<double> z(actions_, 0.0);
    for (std::size_t a = 0; a < actions_; ++a) {
        double v = weights_[a * features_ + features_ - 1];
        for (std::size_t f = 0; f + 1 < features_; ++f) v += weights_[a * features_ + f] * s[f];
        z[a] = v;
    }
    const double m = *std::max_element(z.begin(), z.end());
    double total = 0.0;
    for (double& v : z) {
        v = std::exp(v - m);
        total += v;
    }
    for (double& v : z) v /= total;
    return z;
}

double LinearSoftmaxPolicy::log_prob(const State& s, std::size_t a) const { return std::log(probabilities(s)[a]); }

std::vector<double> LinearSoftmaxPolicy::grad_log_prob(const State& s, std::size_t a) const {
    const std::vector<double> p = probabilities(s);
    std::vector<double> g(weights_.size(), 0.0);
    for (std::size_t b = 0; b < actions_; ++b) {
        const double coeff = (b == a ? 1.0 : 0.0) - p[b];
        for (std::size_t f = 0; f + 1 < features_; ++f) g[b * features_ + f] = coeff * s[f];
        g[b * features_ + features_ - 1] = coeff;
    }
    return g;
}

std::size_t LinearSoftmaxPolicy::sample(const State& s, Rng& rng) const {
    const std::vector<double> p = probabilities(s);
    std::discrete_distribution<std::size_t> d(p.begin(), p.end());
    return d(rng);
}

std::vector<Trajectory> policy_mixing_rollout(const Environment& env, const LinearSoftmaxPolicy& learned,
                                              const SolutionKnowledge* advice, double beta, int episodes,
                                              int step_cap, Rng& rng, const StepObserver& observer) {
    std::vector<Trajectory> out;
    std::bernoulli_distribution use_advice(std::clamp(beta, 0.0, 1.0));
    for (int e = 0; e < episodes; ++e) {
        Trajectory traj;
        State s = env.reset(rng);
        for (int t = 0; t < step_cap; ++t) {
            std::optional<std::size_t> a;
            if (advice && use_advice(rng)) {
                if (auto act = sample_policy(*advice, s, rng)) a = env.action_index(*act);
            }
            if (!a) a = learned.sample(s, rng);
            if (observer) observer(s, *a);
            env::StepResult r = env.step(s, *a, rng);
            traj.push_back({s, *a, r.reward});
            if (r.terminal) break;
            s = std::move(r.next);
        }
        out.push_back(std::move(traj));
    }
    return out;
}

void reinforce_update(LinearSoftmaxPolicy& policy, const std::vector<Trajectory>& batch, double learning_rate,
                      double gamma) {
    std::vector<std::vector<double>> returns;
    double sum = 0.0;
    std::size_t count = 0;
    for (const Trajectory& traj : batch) {
        std::vector<double> g(traj.size());
        double acc = 0.0;
        for (std::size_t t = traj.size(); t-- > 0;) {
            acc = traj[t].r + gamma * acc;
            g[t] = acc;
            sum += acc;
            ++count;
        }
        returns.push_back(std::move(g));
    }
    if (count == 0) return;
    const double baseline = sum / static_cast<double>(count);
    std::vector<double> grad(policy.num_params(), 0.0);
    for (std::size_t i = 0; i < batch.size(); ++i) {
        for (std::size_t t = 0; t < batch[i].size(); ++t) {
            const double adv = returns[i][t] - baseline;
            const std::vector<double> gl = policy.grad_log_prob(batch[i][t].s, batch[i][t].a);
            for (std::size_t j = 0; j < grad.size(); ++j) grad[j] += adv * gl[j];
        }
    }
    auto& w = policy.weights();
    const double scale = learning_rate / static_cast<double>(batch.size());
    for (std::size_t j = 0; j < w.size(); ++j) w[j] += scale * grad[j];
}

PolicyMixingAgent::PolicyMixingAgent(std::string id, const Environment& env, const RLangKnowledge* knowledge,
                                     const Hyperparameters& hp, double gamma)
    : id_(std::move(id)), env_(env), knowledge_(knowledge), policy_(env.state_dim(), env.actions().size()),
      beta_(knowledge ? hp.beta0 : 0.0), decay_(hp.decay), lr_(hp.learning_rate), gamma_(gamma),
      batch_size_(std::max(1, hp.batch_size)) {}

double PolicyMixingAgent::run_episode(Rng& rng, int step_cap) {
    const SolutionKnowledge* advice =
        knowledge_ && knowledge_->solution.has_main_policy() ? &knowledge_->solution : nullptr;
    StepObserver obs = [this](const State& s, std::size_t a) { observe(s, a); };
    auto trajs = policy_mixing_rollout(env_, policy_, advice, beta_, 1, step_cap, rng, obs);
    double total = 0.0;
    for (const Transition& t : trajs.front()) total += t.r;
    pending_.push_back(std::move(trajs.front()));
    if (static_cast<int>(pending_.size()) >= batch_size_) {
        reinforce_update(policy_, pending_, lr_, gamma_);
        pending_.clear();
        beta_ *= decay_;
    }
    return total;
}

RLangPolicyAgent::RLangPolicyAgent(std::string id, const Environment& env, const RLangKnowledge& knowledge)
    : id_(std::move(id)), env_(env), knowledge_(knowledge) {}

double RLangPolicyAgent::run_episode(Rng& rng, int step_cap) {
    State s = env_.reset(rng);
    double total = 0.0;
    for (int t = 0; t < step_cap; ++t) {
        std::size_t a;
        if (auto act = sample_policy(knowledge_.solution, s, rng)) {
            a = env_.action_index(*act);
        } else {
            std::uniform_int_distribution<std::size_t> pick(0, env_.actions().size() - 1);
            a = pick(rng);
        }
        observe(s, a);
        env::StepResult r = env_.step(s, a, rng);
        total += r.reward;
        if (r.terminal) break;
        s = std::move(r.next);
    }
    return total;
}

}  // namespace rlang::agents
