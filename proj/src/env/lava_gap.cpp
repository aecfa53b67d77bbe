#include "rlang/env/lava_gap.hpp"

namespace rlang::env {

namespace {

bool is_lava(int x, int y) {
    return (x == 3 && y == 2) || (x == 1 && y == 4) || (x == 2 && y == 4) || (x == 2 && y == 5);
}

int ix(const State& s) { return static_cast<int>(s[0]); }
int iy(const State& s) { return static_cast<int>(s[1]); }

}  // namespace

LavaGap::LavaGap() : actions_{{"up", 0}, {"down", 1}, {"left", 2}, {"right", 3}} {}

bool LavaGap::is_wall(int x, int y) { return x == 3 && y == 1; }
bool LavaGap::in_lava(const State& s) { return is_lava(ix(s), iy(s)); }
bool LavaGap::at_goal(const State& s) { return ix(s) == 5 && iy(s) == 1; }
bool LavaGap::at_wall(const State& s) { return is_wall(ix(s), iy(s)); }

State LavaGap::move(const State& s, std::size_t direction) {
    static constexpr int dx[] = {1, -1, 0, 0};
    static constexpr int dy[] = {0, 0, -1, 1};
    const int x = ix(s) + dx[direction], y = iy(s) + dy[direction];
    if (x < 1 || x > kSize || y < 1 || y > kSize || is_wall(x, y)) return s;
    return {static_cast<double>(x), static_cast<double>(y)};
}

double LavaGap::reward_of(const State& next) {
    if (in_lava(next)) return -1.0;
    if (at_goal(next)) return 1.0;
    return 0.0;
}

State LavaGap::reset(Rng&) const { return {1.0, 1.0}; }

StepResult LavaGap::step(const State& s, std::size_t action, Rng& rng) const {
    std::uniform_real_distribution<double> u(0.0, 1.0);
    std::size_t direction = action;
    if (u(rng) < kFailure) {
        std::uniform_int_distribution<std::size_t> other(0, 2);
        direction = other(rng);
        if (direction >= action) ++direction;
    }
    StepResult r;
    r.next = move(s, direction);
    r.reward = reward_of(r.next);
    r.terminal = is_terminal(r.next);
    return r;
}

std::vector<State> LavaGap::states() const {
    std::vector<State> out;
    for (int x = 1; x <= kSize; ++x) {
        for (int y = 1; y <= kSize; ++y) out.push_back({static_cast<double>(x), static_cast<double>(y)});
    }
    return out;
}

void LavaGap::register_groundings(VocabularyRegistry& reg) const {
    auto prop = [](bool (*fn)(const State&)) {
        return [fn](const EvalContext& ctx) -> GroundedValue {
            if (!ctx.s) return GroundedValue::unknown();
            return GroundedValue::make_bool(fn(*ctx.s));
        };
    };
    reg.register_grounding("lava_gap.at_wall", prop(&LavaGap::at_wall));
    reg.register_grounding("lava_gap.in_lava", prop(&LavaGap::in_lava));
    reg.register_grounding("lava_gap.at_goal", prop(&LavaGap::at_goal));
}

}  // namespace rlang::env
