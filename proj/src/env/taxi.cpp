#include "rlang/env/taxi.hpp"

#include <algorithm>

namespace rlang::env {

namespace {

std::size_t toward(const State& s, double tx, double ty) {
    if (s[0] < tx) return Taxi::East;
    if (s[0] > tx) return Taxi::West;
    if (s[1] < ty) return Taxi::North;
    return Taxi::South;
}

}  // namespace

Taxi::Taxi()
    : actions_{{"move_north", 0}, {"move_south", 1}, {"move_east", 2},
               {"move_west", 3},  {"pick_up", 4},    {"drop_off", 5}} {}

const std::vector<std::pair<int, int>>& Taxi::depots() {
    static const std::vector<std::pair<int, int>> d{{0, 0}, {0, 4}, {4, 0}, {3, 4}};
    return d;
}

bool Taxi::in_destination(const State& s, int p) {
    const std::size_t b = base(p);
    return !in_taxi(s, p) && s[b] == s[b + 2] && s[b + 1] == s[b + 3];
}

bool Taxi::all_delivered(const State& s) {
    for (int p = 0; p < kPassengers; ++p) {
        if (!in_destination(s, p)) return false;
    }
    return true;
}

State Taxi::reset(Rng& rng) const {
    State s(state_dim(), 0.0);
    std::uniform_int_distribution<int> cell(0, kSize - 1);
    s[0] = cell(rng);
    s[1] = cell(rng);
    std::vector<int> order{0, 1, 2, 3};
    std::shuffle(order.begin(), order.end(), rng);
    std::uniform_int_distribution<int> other(0, 2);
    for (int p = 0; p < kPassengers; ++p) {
        const int start = order[static_cast<std::size_t>(p)];
        int dest = other(rng);
        if (dest >= start) ++dest;
        const std::size_t b = base(p);
        s[b] = depots()[static_cast<std::size_t>(start)].first;
        s[b + 1] = depots()[static_cast<std::size_t>(start)].second;
        s[b + 2] = depots()[static_cast<std::size_t>(dest)].first;
        s[b + 3] = depots()[static_cast<std::size_t>(dest)].second;
    }
    return s;
}

StepResult Taxi::step(const State& s, std::size_t action, Rng&) const {
    State n = s;
    switch (action) {
    case North: n[1] = std::min<double>(kSize - 1, n[1] + 1); break;
    case South: n[1] = std::max<double>(0, n[1] - 1); break;
    case East: n[0] = std::min<double>(kSize - 1, n[0] + 1); break;
    case West: n[0] = std::max<double>(0, n[0] - 1); break;
    case Pickup:
        if (n[2] == 0.0) {
            for (int p = 0; p < kPassengers; ++p) {
                const std::size_t b = base(p);
                // Delivered passengers have left the taxi for good.
                if (in_destination(n, p)) continue;
                if (n[b] == n[0] && n[b + 1] == n[1]) {
                    n[b + 4] = 1.0;
                    n[2] = 1.0;
                    break;
                }
            }
        }
        break;
    case Dropoff:
        for (int p = 0; p < kPassengers; ++p) {
            if (in_taxi(n, p)) {
                n[base(p) + 4] = 0.0;
                n[2] = 0.0;
            }
        }
        break;
    default: break;
    }
    for (int p = 0; p < kPassengers; ++p) {
        if (in_taxi(n, p)) {
            n[base(p)] = n[0];
            n[base(p) + 1] = n[1];
        }
    }
    StepResult r;
    r.terminal = all_delivered(n);
    r.reward = r.terminal ? 1.0 : 0.0;
    r.next = std::move(n);
    return r;
}

std::size_t Taxi::pick_up_action(const State& s, int p) {
    const std::size_t b = base(p);
    if (s[0] == s[b] && s[1] == s[b + 1]) return Pickup;
    return toward(s, s[b], s[b + 1]);
}

std::size_t Taxi::drop_off_action(const State& s, int p) {
    const std::size_t b = base(p);
    if (s[0] == s[b + 2] && s[1] == s[b + 3]) return Dropoff;
    return toward(s, s[b + 2], s[b + 3]);
}

void Taxi::register_groundings(VocabularyRegistry& reg) const {
    auto prop = [](auto fn) {
        return [fn](const EvalContext& ctx) -> GroundedValue {
            if (!ctx.s) return GroundedValue::unknown();
            return GroundedValue::make_bool(fn(*ctx.s));
        };
    };
    reg.register_grounding("taxi.carrying", prop([](const State& s) { return s[2] != 0.0; }));
    for (int p = 0; p < kPassengers; ++p) {
        const std::string n = std::to_string(p);
        reg.register_grounding("taxi.passenger_" + n + "_in_taxi", prop([p](const State& s) { return in_taxi(s, p); }));
        reg.register_grounding("taxi.passenger_" + n + "_in_dest",
                               prop([p](const State& s) { return in_destination(s, p); }));
        const auto& acts = actions_;
        auto policy = [acts, p](std::size_t (*choose)(const State&, int)) {
            return [acts, p, choose](const EvalContext& ctx) -> GroundedValue {
                if (!ctx.s) return GroundedValue::unknown();
                return GroundedValue::make_action(acts[choose(*ctx.s, p)]);
            };
        };
        reg.register_grounding("taxi.pick_up_passenger_" + n, policy(&Taxi::pick_up_action));
        reg.register_grounding("taxi.drop_off_passenger_" + n, policy(&Taxi::drop_off_action));
    }
}

}  // namespace rlang::env
