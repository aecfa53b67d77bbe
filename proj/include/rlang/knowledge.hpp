#pragma once

#include <memory>
#include <optional>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "rlang/checker.hpp"
#include "rlang/eval_context.hpp"
#include "rlang/transition.hpp"

namespace rlang {

/// Distribution over primitive actions; the remaining mass is unknown.
struct PolicyQueryResult {
    std::vector<std::pair<ActionValue, double>> entries;
    double unknown_mass = 1.0;

    static PolicyQueryResult unknown() { return {}; }
    static PolicyQueryResult point(ActionValue a);
    double known_mass() const;
    void add(const ActionValue& a, double p);
    /// "up: 0.25; down: 0.25; unknown: 0.5" or "unknown".
    std::string str() const;
};

struct OptionSpec {
    std::string name;
    ExprPtr init;
    ExprPtr until;
    const Declaration* decl = nullptr;
    bool is_learnable = false;
    std::string learnable_policy;  // placeholder name when is_learnable
};

/// Partial transition/reward model plus goals, compiled from `Effect main`
/// and every Goal declaration.
class DynamicsTaskKnowledge {
public:
    DynamicsTaskKnowledge() = default;
    explicit DynamicsTaskKnowledge(std::shared_ptr<const CheckedProgram> program);

    bool has_main_effect() const { return main_ != nullptr || host_main_; }
    TransitionMeasure query_transition(const std::vector<double>& s, const ActionValue& a) const;
    /// Reward at (s, a[, s']); nullopt when no rule applies. Rewards that need
    /// S' are skipped when s_next is absent.
    std::optional<double> query_reward(const std::vector<double>& s, const ActionValue& a,
                                       const std::optional<std::vector<double>>& s_next) const;
    /// Transition and reward of any named effect at a context.
    EffectOutcome query_effect(const std::string& name, const EvalContext& ctx) const;

    const std::vector<std::string>& goals() const { return goals_; }
    /// True when any goal proposition holds at s (Unknown counts as false).
    bool is_goal(const std::vector<double>& s) const;

    const CheckedProgram& program() const { return *program_; }

private:
    EffectOutcome main_outcome(const EvalContext& ctx) const;

    std::shared_ptr<const CheckedProgram> program_;
    const Declaration* main_ = nullptr;
    bool host_main_ = false;
    std::vector<std::string> goals_;
};

/// Main policy, options and action restrictions.
class SolutionKnowledge {
public:
    SolutionKnowledge() = default;
    explicit SolutionKnowledge(std::shared_ptr<const CheckedProgram> program);

    bool has_main_policy() const { return has_main_policy_; }
    PolicyQueryResult query_policy(const std::vector<double>& s) const;
    PolicyQueryResult query_named_policy(const std::string& name, const std::vector<double>& s) const;
    PolicyQueryResult query_option_policy(const OptionSpec& option, const std::vector<double>& s) const;

    const std::vector<OptionSpec>& options() const { return options_; }
    std::optional<bool> option_can_start(const OptionSpec& option, const std::vector<double>& s) const;
    std::optional<bool> option_terminates(const OptionSpec& option, const std::vector<double>& s) const;

    /// Union of firing Restrict statements across every ActionRestriction.
    /// Throws FullRestriction when every action ends up restricted.
    std::vector<ActionValue> restricted_actions(const std::vector<double>& s) const;
    bool has_restrictions() const;

    const std::vector<ActionValue>& actions() const { return program_->actions; }
    const CheckedProgram& program() const { return *program_; }

private:
    std::shared_ptr<const CheckedProgram> program_;
    bool has_main_policy_ = false;
    std::vector<OptionSpec> options_;
};

struct RLangKnowledge {
    std::shared_ptr<const CheckedProgram> program;
    DynamicsTaskKnowledge dynamics;
    SolutionKnowledge solution;
    std::vector<std::string> warnings;
};

RLangKnowledge compile_knowledge(std::shared_ptr<const CheckedProgram> program);

inline TransitionMeasure query_transition(const DynamicsTaskKnowledge& k, const std::vector<double>& s,
                                          const ActionValue& a) {
    return k.query_transition(s, a);
}
inline std::optional<double> query_reward(const DynamicsTaskKnowledge& k, const std::vector<double>& s,
                                          const ActionValue& a, const std::optional<std::vector<double>>& s_next) {
    return k.query_reward(s, a, s_next);
}
inline PolicyQueryResult query_policy(const SolutionKnowledge& k, const std::vector<double>& s) {
    return k.query_policy(s);
}
inline std::vector<ActionValue> restricted_actions(const SolutionKnowledge& k, const std::vector<double>& s) {
    return k.restricted_actions(s);
}

/// Draws from a policy result; nullopt with probability unknown_mass.
std::optional<ActionValue> sample_policy(const PolicyQueryResult& result, std::mt19937_64& rng);
std::optional<ActionValue> sample_policy(const SolutionKnowledge& k, const std::vector<double>& s,
                                         std::mt19937_64& rng);

/// Deterministic text rendering of the compiled knowledge.
std::string dump_knowledge(const RLangKnowledge& k);

}  // namespace rlang
