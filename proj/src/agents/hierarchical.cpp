#include "rlang/agents/hierarchical.hpp"

#include <cmath>

namespace rlang::agents {

HierarchicalAgentState init_options(const SolutionKnowledge& k, std::size_t num_actions) {
    HierarchicalAgentState st;
    st.over_options = QTable(k.options().size());
    for (const OptionSpec& o : k.options()) {
        OptionLearner l;
        l.spec = &o;
        if (o.is_learnable) l.inner = std::make_unique<QTable>(num_actions);
        st.options.push_back(std::move(l));
    }
    return st;
}

HierarchicalAgent::HierarchicalAgent(std::string id, const Environment& env, const RLangKnowledge& knowledge,
                                     const Hyperparameters& hp, double gamma)
    : id_(std::move(id)), env_(env), knowledge_(knowledge),
      state_(init_options(knowledge.solution, env.actions().size())), epsilon_(hp.epsilon), alpha_(hp.alpha),
      inner_epsilon_(hp.inner_epsilon), inner_alpha_(hp.inner_alpha), gamma_(gamma), timeout_(hp.option_timeout) {}

std::vector<std::size_t> HierarchicalAgent::available_options(const State& s) const {
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < state_.options.size(); ++i) {
        if (knowledge_.solution.option_can_start(*state_.options[i].spec, s).value_or(false)) out.push_back(i);
    }
    return out;
}

double HierarchicalAgent::run_episode(Rng& rng, int step_cap) {
    State s = env_.reset(rng);
    double total = 0.0;
    int steps = 0;
    bool done = false;
    auto primitive = [&](std::size_t a) {
        observe(s, a);
        env::StepResult r = env_.step(s, a, rng);
        ++steps;
        total += r.reward;
        return r;
    };

    while (!done && steps < step_cap) {
        const std::vector<std::size_t> avail = available_options(s);
        if (avail.empty()) {
            const auto allowed = allowed_actions(env_, &knowledge_, s);
            std::uniform_int_distribution<std::size_t> pick(0, allowed.size() - 1);
            env::StepResult r = primitive(allowed[pick(rng)]);
            done = r.terminal;
            s = std::move(r.next);
            continue;
        }

        const std::size_t o = epsilon_greedy(state_.over_options, s, avail, epsilon_, rng);
        OptionLearner& opt = state_.options[o];
        const State start = s;
        double discounted = 0.0, discount = 1.0;
        int k = 0;
        while (true) {
            const auto allowed = allowed_actions(env_, &knowledge_, s);
            std::optional<std::size_t> a;
            if (opt.inner) {
                a = epsilon_greedy(*opt.inner, s, allowed, inner_epsilon_, rng);
            } else if (auto act = sample_policy(knowledge_.solution.query_option_policy(*opt.spec, s), rng)) {
                a = env_.action_index(*act);
            }
            if (!a) {
                if (k > 0) break;
                // Unknown at the first step: keep the option from stalling.
                std::uniform_int_distribution<std::size_t> pick(0, allowed.size() - 1);
                a = allowed[pick(rng)];
            }
            env::StepResult r = primitive(*a);
            discounted += discount * r.reward;
            discount *= gamma_;
            ++k;
            const bool until = knowledge_.solution.option_terminates(*opt.spec, r.next).value_or(false);
            if (opt.inner) {
                const auto next_allowed = allowed_actions(env_, &knowledge_, r.next);
                q_update(*opt.inner, s, *a, until ? 1.0 : 0.0, r.next, until || r.terminal, next_allowed,
                         inner_alpha_, gamma_);
            }
            s = std::move(r.next);
            done = r.terminal;
            if (done || until || k >= timeout_ || steps >= step_cap) break;
        }

        double target = discounted;
        if (!done) target += discount * state_.over_options.max(s, available_options(s));
        std::vector<double>& row = state_.over_options.row_mut(start);
        row[o] += alpha_ * (target - row[o]);
    }
    return total;
}

}  // namespace rlang::agents
