#include "rlang/agents/selector.hpp"


namespace rlang::agents {

namespace {

CapabilityVector caps(std::initializer_list<Capability> cs) {
    CapabilityVector v{};
    for (Capability c : cs) v[static_cast<std::size_t>(c)] = true;
    return v;
}

}  // namespace

std::vector<AgentCapability> default_agent_registry() {
    return {
        {"informed_q", caps({Capability::Transition, Capability::Reward, Capability::Restrictions, Capability::Goals})},
        {"hierarchical_q", caps({Capability::Options})},
        {"policy_mixing", caps({Capability::Policy})},
        {"uninformed", {}},
    };
}

std::string select_agent(const CapabilityVector& p, const std::vector<AgentCapability>& registry) {
    const AgentCapability* best = nullptr;
    int best_match = 0, best_unused = 0;
    for (const AgentCapability& a : registry) {
        int match = 0, unused = 0;
        for (std::size_t i = 0; i < p.size(); ++i) {
            if (a.c[i] && p[i]) ++match;
            if (a.c[i] && !p[i]) ++unused;
        }
        if (match == 0) continue;
        if (!best || match > best_match || (match == best_match && unused < best_unused)) {
            best = &a;
            best_match = match;
            best_unused = unused;
        }
    }
    if (best) return best->id;
    for (const AgentCapability& a : registry) {
        bool zero = true;
        for (bool b : a.c) zero = zero && !b;
        if (zero) return a.id;
    }
    return registry.empty() ? std::string("uninformed") : registry.front().id;
}

}  // namespace rlang::agents
