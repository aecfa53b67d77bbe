#pragma once

#include "rlang/env/environment.hpp"

namespace rlang::env {

/// Flat Taxi with two passengers on a 5x5 grid without interior walls.
/// State layout:
///   0 taxi_x, 1 taxi_y, 2 carrying,
///   3 p0_x, 4 p0_y, 5 d0_x, 6 d0_y, 7 p0_in_taxi,
///   8 p1_x, 9 p1_y, 10 d1_x, 11 d1_y, 12 p1_in_taxi
/// Reward 1 (and termination) once every passenger sits at its destination.
class Taxi : public Environment {
public:
    static constexpr int kSize = 5;
    static constexpr int kPassengers = 2;
    enum Action : std::size_t { North, South, East, West, Pickup, Dropoff };

    Taxi();

    std::string name() const override { return "taxi"; }
    std::size_t state_dim() const override { return 3 + 5 * kPassengers; }
    const std::vector<ActionValue>& actions() const override { return actions_; }
    double gamma() const override { return 0.95; }
    int step_cap() const override { return 500; }

    State reset(Rng& rng) const override;
    StepResult step(const State& s, std::size_t action, Rng& rng) const override;
    bool is_tabular() const override { return true; }
    bool is_terminal(const State& s) const override { return all_delivered(s); }
    void register_groundings(VocabularyRegistry& reg) const override;

    static std::size_t base(int passenger) { return 3 + 5 * static_cast<std::size_t>(passenger); }
    static bool in_taxi(const State& s, int p) { return s[base(p) + 4] != 0.0; }
    static bool in_destination(const State& s, int p);
    static bool all_delivered(const State& s);
    static const std::vector<std::pair<int, int>>& depots();
    /// Scripted option policies: drive to the passenger (or destination) and
    /// pick up (or drop off).
    static std::size_t pick_up_action(const State& s, int p);
    static std::size_t drop_off_action(const State& s, int p);

private:
    std::vector<ActionValue> actions_;
};

}  // namespace rlang::env
