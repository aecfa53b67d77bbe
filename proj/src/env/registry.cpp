#include "rlang/env/registry.hpp"

#include "rlang/diagnostics.hpp"
#include "rlang/env/classic_control.hpp"
#include "rlang/env/lava_gap.hpp"
#include "rlang/env/taxi.hpp"

namespace rlang::env {

std::unique_ptr<Environment> make_environment(const std::string& name) {
    if (name == "lava_gap") return std::make_unique<LavaGap>();
    if (name == "taxi") return std::make_unique<Taxi>();
    if (name == "mountain_car") return std::make_unique<MountainCar>();
    if (name == "cart_pole") return std::make_unique<CartPole>();
    throw ConfigError("unknown environment '" + name + "'");
}

std::vector<std::string> environment_names() { return {"lava_gap", "taxi", "mountain_car", "cart_pole"}; }

}  // namespace rlang::env
