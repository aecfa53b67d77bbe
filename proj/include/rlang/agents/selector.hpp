#pragma once

#include <string>
#include <vector>

#include "rlang/checker.hpp"

namespace rlang::agents {

struct AgentCapability {
    std::string id;
    CapabilityVector c{};
};

/// informed_q, hierarchical_q, policy_mixing, uninformed (in that order).
std::vector<AgentCapability> default_agent_registry();

/// Agent covering the most set bits of P; ties go to the fewest unused
/// capabilities, then to registration order. With no match, the first agent
/// with an all-zero vector.
std::string select_agent(const CapabilityVector& p, const std::vector<AgentCapability>& registry);

}  // namespace rlang::agents
