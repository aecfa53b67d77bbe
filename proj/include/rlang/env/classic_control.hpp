#pragma once

#include "rlang/env/environment.hpp"

namespace rlang::env {

namespace mountain_car_constants {
inline constexpr double kMinPosition = -1.2;
inline constexpr double kMaxPosition = 0.6;
inline constexpr double kMaxSpeed = 0.07;
inline constexpr double kGoalPosition = 0.5;
inline constexpr double kForce = 0.001;
inline constexpr double kGravity = 0.0025;
}  // namespace mountain_car_constants

/// State: position, velocity. Actions: go_left, do_nothing, go_right.
class MountainCar : public Environment {
public:
    MountainCar();
    std::string name() const override { return "mountain_car"; }
    std::size_t state_dim() const override { return 2; }
    const std::vector<ActionValue>& actions() const override { return actions_; }
    double gamma() const override { return 1.0; }
    int step_cap() const override { return 200; }
    State reset(Rng& rng) const override;
    StepResult step(const State& s, std::size_t action, Rng& rng) const override;
    void register_groundings(VocabularyRegistry& reg) const override;

private:
    std::vector<ActionValue> actions_;
};

namespace cart_pole_constants {
inline constexpr double kGravity = 9.8;
inline constexpr double kMassCart = 1.0;
inline constexpr double kMassPole = 0.1;
inline constexpr double kHalfLength = 0.5;
inline constexpr double kForceMag = 10.0;
inline constexpr double kTau = 0.02;
inline constexpr double kAngleLimit = 15.0 * 3.14159265358979323846 / 180.0;
inline constexpr double kPositionLimit = 2.4;
}  // namespace cart_pole_constants

/// State: cart_position, cart_velocity, pole_angle, pole_angular_velocity.
/// Actions: move_left, move_right. Euler integration.
class CartPole : public Environment {
public:
    CartPole();
    std::string name() const override { return "cart_pole"; }
    std::size_t state_dim() const override { return 4; }
    const std::vector<ActionValue>& actions() const override { return actions_; }
    double gamma() const override { return 0.99; }
    int step_cap() const override { return 200; }
    State reset(Rng& rng) const override;
    StepResult step(const State& s, std::size_t action, Rng& rng) const override;
    void register_groundings(VocabularyRegistry& reg) const override;

private:
    std::vector<ActionValue> actions_;
};

}  // namespace rlang::env
