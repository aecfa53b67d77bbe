#pragma once

#include <memory>
#include <string>
#include <vector>

#include "rlang/env/environment.hpp"

namespace rlang::env {

std::unique_ptr<Environment> make_environment(const std::string& name);
std::vector<std::string> environment_names();

}  // namespace rlang::env
