#include "rlang/env/classic_control.hpp"

#include <algorithm>
#include <cmath>

namespace rlang::env {

MountainCar::MountainCar() : actions_{{"go_left", 0}, {"do_nothing", 1}, {"go_right", 2}} {}

State MountainCar::reset(Rng& rng) const {
    std::uniform_real_distribution<double> u(-0.6, -0.4);
    return {u(rng), 0.0};
}

StepResult MountainCar::step(const State& s, std::size_t action, Rng&) const {
    using namespace mountain_car_constants;
    double position = s[0], velocity = s[1];
    velocity += (static_cast<double>(action) - 1.0) * kForce + std::cos(3.0 * position) * (-kGravity);
    velocity = std::clamp(velocity, -kMaxSpeed, kMaxSpeed);
    position += velocity;
    position = std::clamp(position, kMinPosition, kMaxPosition);
    if (position == kMinPosition && velocity < 0) velocity = 0.0;
    StepResult r;
    r.next = {position, velocity};
    r.reward = -1.0;
    r.terminal = position >= kGoalPosition;
    return r;
}

void MountainCar::register_groundings(VocabularyRegistry&) const {}

CartPole::CartPole() : actions_{{"move_left", 0}, {"move_right", 1}} {}

State CartPole::reset(Rng& rng) const {
    std::uniform_real_distribution<double> u(-0.05, 0.05);
    State s(4);
    for (double& x : s) x = u(rng);
    return s;
}

StepResult CartPole::step(const State& s, std::size_t action, Rng&) const {
    using namespace cart_pole_constants;
    constexpr double total_mass = kMassCart + kMassPole;
    constexpr double polemass_length = kMassPole * kHalfLength;
    double x = s[0], x_dot = s[1], theta = s[2], theta_dot = s[3];
    const double force = action == 1 ? kForceMag : -kForceMag;
    const double cos_t = std::cos(theta), sin_t = std::sin(theta);
    const double temp = (force + polemass_length * theta_dot * theta_dot * sin_t) / total_mass;
    const double theta_acc =
        (kGravity * sin_t - cos_t * temp) / (kHalfLength * (4.0 / 3.0 - kMassPole * cos_t * cos_t / total_mass));
    const double x_acc = temp - polemass_length * theta_acc * cos_t / total_mass;
    x += kTau * x_dot;
    x_dot += kTau * x_acc;
    theta += kTau * theta_dot;
    theta_dot += kTau * theta_acc;
    StepResult r;
    r.next = {x, x_dot, theta, theta_dot};
    r.reward = 1.0;
    r.terminal = std::abs(x) > kPositionLimit || std::abs(theta) > kAngleLimit;
    return r;
}

void CartPole::register_groundings(VocabularyRegistry&) const {}

}  // namespace rlang::env
