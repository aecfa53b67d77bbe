#include <gtest/gtest.h>

#include <cmath>
#include <map>

#include "rlang/agents/experiment.hpp"
#include "rlang/env/classic_control.hpp"
#include "rlang/env/lava_gap.hpp"
#include "rlang/env/registry.hpp"
#include "rlang/env/taxi.hpp"

using namespace rlang;
using namespace rlang::env;

namespace {

std::size_t index_of(const Environment& e, const std::string& name) {
    for (std::size_t i = 0; i < e.actions().size(); ++i) {
        if (e.actions()[i].name == name) return i;
    }
    throw std::runtime_error("no action " + name);
}

}  // namespace

TEST(LavaGap, ResetsToStart) {
    LavaGap env;
    Rng rng(3);
    EXPECT_EQ(env.reset(rng), (State{1, 1}));
}

TEST(LavaGap, LayoutAndRewards) {
    EXPECT_TRUE(LavaGap::is_wall(3, 1));
    for (State s : {State{3, 2}, State{1, 4}, State{2, 4}, State{2, 5}}) {
        EXPECT_TRUE(LavaGap::in_lava(s));
        EXPECT_EQ(LavaGap::reward_of(s), -1.0);
    }
    EXPECT_TRUE(LavaGap::at_goal({5, 1}));
    EXPECT_EQ(LavaGap::reward_of({5, 1}), 1.0);
    EXPECT_EQ(LavaGap::reward_of({4, 4}), 0.0);
    EXPECT_EQ(LavaGap{}.states().size(), 36u);
}

TEST(LavaGap, WallAndBorderBlockMovement) {
    // (2,1) up lands on the wall (3,1): stay.
    EXPECT_EQ(LavaGap::move({2, 1}, 0), (State{2, 1}));
    EXPECT_EQ(LavaGap::move({1, 1}, 1), (State{1, 1}));
    EXPECT_EQ(LavaGap::move({6, 6}, 3), (State{6, 6}));
    EXPECT_EQ(LavaGap::move({2, 2}, 0), (State{3, 2}));
}

TEST(LavaGap, StepIntoWallStays) {
    LavaGap env;
    Rng rng(11);
    int stays = 0;
    const int n = 3000;
    for (int i = 0; i < n; ++i) {
        auto r = env.step({2, 1}, 0, rng);
        if (r.next == State{2, 1}) ++stays;
    }
    // Success (2/3) stays; of the failures only `left` is blocked (border).
    const double p = 2.0 / 3.0 + 1.0 / 9.0, sigma = std::sqrt(p * (1 - p) / n);
    EXPECT_NEAR(static_cast<double>(stays) / n, p, 3 * sigma);
}

TEST(LavaGap, SuccessFrequencyIsTwoThirds) {
    LavaGap env;
    Rng rng(2024);
    const int n = 10000;
    int success = 0, other = 0;
    for (int i = 0; i < n; ++i) {
        auto r = env.step({3, 3}, 3, rng);
        if (r.next == State{3, 4}) ++success;
        else ++other;
    }
    EXPECT_EQ(success + other, n);
    const double p = 2.0 / 3.0, sigma = std::sqrt(p * (1 - p) / n);
    EXPECT_NEAR(static_cast<double>(success) / n, p, 3 * sigma);
}

TEST(LavaGap, FailureSpreadsOverTheOtherDirections) {
    LavaGap env;
    Rng rng(5);
    std::map<State, int> counts;
    const int n = 9000;
    for (int i = 0; i < n; ++i) counts[env.step({3, 3}, 0, rng).next]++;
    // Each of the three non-intended moves has probability 1/9.
    const double p = 1.0 / 9.0, sigma = std::sqrt(p * (1 - p) / n);
    for (State s : {State{2, 3}, State{3, 2}, State{3, 4}}) {
        EXPECT_NEAR(static_cast<double>(counts[s]) / n, p, 3 * sigma);
    }
    EXPECT_EQ(counts.size(), 4u);
}

TEST(LavaGap, TerminalOnLavaAndGoal) {
    LavaGap env;
    EXPECT_TRUE(env.is_terminal({3, 2}));
    EXPECT_TRUE(env.is_terminal({5, 1}));
    EXPECT_FALSE(env.is_terminal({1, 1}));
}

// The advice predicts the intended move without border or wall blocking, so it
// agrees with the success branch exactly where that move is unblocked.
TEST(LavaGap, ModelAuditAgainstSuccessBranch) {
    LavaGap env;
    auto k = agents::load_knowledge(env, env.advice_path());
    int matches = 0, blocked = 0;
    for (const State& s : env.states()) {
        if (LavaGap::at_wall(s)) continue;
        for (std::size_t a = 0; a < 4; ++a) {
            auto t = k->dynamics.query_transition(s, env.actions()[a]);
            ASSERT_EQ(t.entries.size(), 1u);
            EXPECT_DOUBLE_EQ(t.entries[0].probability, 1.0);
            const State predicted = t.entries[0].next.complete(s);
            const State intended = LavaGap::move(s, a);
            static constexpr int dx[] = {1, -1, 0, 0};
            static constexpr int dy[] = {0, 0, -1, 1};
            const State unblocked{s[0] + dx[a], s[1] + dy[a]};
            EXPECT_EQ(predicted, unblocked);
            if (intended == unblocked) {
                ++matches;
            } else {
                ++blocked;
                EXPECT_NE(predicted, intended);
            }
        }
    }
    // 35 non-wall cells x 4 moves: 24 border pushes and 2 moves into the wall.
    EXPECT_EQ(matches + blocked, 140);
    EXPECT_EQ(blocked, 26);
}

TEST(LavaGap, AdviceRewardMatchesEnv) {
    LavaGap env;
    auto k = agents::load_knowledge(env, env.advice_path());
    for (const State& s : env.states()) {
        auto r = k->dynamics.query_reward(s, env.actions()[0], std::nullopt);
        ASSERT_TRUE(r.has_value());
        EXPECT_EQ(*r, LavaGap::reward_of(s));
    }
}

TEST(LavaGap, AdviceQueryUpFromTwoThree) {
    LavaGap env;
    auto k = agents::load_knowledge(env, env.advice_path());
    auto t = k->dynamics.query_transition({2, 3}, env.actions()[0]);
    EXPECT_EQ(t.str(), "{x'=3, y'=3}: 1.0; unknown: 0.0");
}

TEST(Taxi, PickupAwayFromPassengerIsNoop) {
    Taxi env;
    Rng rng(1);
    State s = env.reset(rng);
    s[0] = 2;
    s[1] = 2;
    ASSERT_FALSE(s[3] == 2 && s[4] == 2);
    auto r = env.step(s, Taxi::Pickup, rng);
    EXPECT_EQ(r.next, s);
    EXPECT_EQ(r.reward, 0.0);
    EXPECT_FALSE(r.terminal);
}

TEST(Taxi, DeliveringBothPassengersEnds) {
    Taxi env;
    Rng rng(7);
    State s = env.reset(rng);
    double total = 0;
    bool done = false;
    int steps = 0;
    for (int p = 0; p < Taxi::kPassengers && !done; ++p) {
        while (!Taxi::in_taxi(s, p) && steps < 100) {
            auto r = env.step(s, Taxi::pick_up_action(s, p), rng);
            s = r.next, total += r.reward, done = r.terminal, ++steps;
        }
        while (!Taxi::in_destination(s, p) && steps < 100) {
            auto r = env.step(s, Taxi::drop_off_action(s, p), rng);
            s = r.next, total += r.reward, done = r.terminal, ++steps;
        }
    }
    EXPECT_TRUE(done);
    EXPECT_EQ(total, 1.0);
    EXPECT_TRUE(Taxi::all_delivered(s));
}

TEST(Taxi, DeliveredPassengerCannotBeRepicked) {
    Taxi env;
    Rng rng(0);
    State s = env.reset(rng);
    const std::size_t b = Taxi::base(0);
    s[b] = s[b + 2];
    s[b + 1] = s[b + 3];
    s[0] = s[b];
    s[1] = s[b + 1];
    s[Taxi::base(1)] = 2;
    s[Taxi::base(1) + 1] = 2;
    auto r = env.step(s, Taxi::Pickup, rng);
    EXPECT_FALSE(Taxi::in_taxi(r.next, 0));
    EXPECT_EQ(r.next[2], 0.0);
}

TEST(Taxi, ResetUsesDistinctDepots) {
    Taxi env;
    Rng rng(9);
    for (int i = 0; i < 50; ++i) {
        State s = env.reset(rng);
        for (int p = 0; p < Taxi::kPassengers; ++p) {
            const std::size_t b = Taxi::base(p);
            EXPECT_FALSE(s[b] == s[b + 2] && s[b + 1] == s[b + 3]);
            EXPECT_EQ(s[b + 4], 0.0);
        }
        EXPECT_FALSE(s[3] == s[8] && s[4] == s[9]);
    }
}

TEST(Taxi, RandomPolicyRarelyFinishes) {
    Taxi env;
    Rng rng(4);
    std::uniform_int_distribution<std::size_t> pick(0, 5);
    double total = 0;
    for (int ep = 0; ep < 100; ++ep) {
        State s = env.reset(rng);
        for (int t = 0; t < env.step_cap(); ++t) {
            auto r = env.step(s, pick(rng), rng);
            total += r.reward;
            s = r.next;
            if (r.terminal) break;
        }
    }
    EXPECT_LT(total / 100, 0.9);
}

TEST(MountainCar, DoNothingFromValleyNeverFinishes) {
    MountainCar env;
    const std::size_t idle = index_of(env, "do_nothing");
    State s{-0.5235987755982988, 0.0};  // cos(3 pos) = 0 at the valley floor
    Rng rng(0);
    double ret = 0;
    for (int t = 0; t < env.step_cap(); ++t) {
        auto r = env.step(s, idle, rng);
        ret += r.reward;
        s = r.next;
        ASSERT_FALSE(r.terminal);
    }
    EXPECT_EQ(ret, -200.0);
}

TEST(MountainCar, VelocityStaysClamped) {
    MountainCar env;
    Rng rng(42);
    std::uniform_int_distribution<std::size_t> pick(0, 2);
    for (int ep = 0; ep < 20; ++ep) {
        State s = env.reset(rng);
        EXPECT_GE(s[0], -0.6);
        EXPECT_LE(s[0], -0.4);
        EXPECT_EQ(s[1], 0.0);
        for (int t = 0; t < 200; ++t) {
            auto r = env.step(s, pick(rng), rng);
            EXPECT_LE(std::abs(r.next[1]), 0.07);
            EXPECT_GE(r.next[0], -1.2);
            EXPECT_LE(r.next[0], 0.6);
            s = r.next;
            if (r.terminal) break;
        }
    }
}

TEST(MountainCar, GoldenStep) {
    MountainCar env;
    Rng rng(0);
    const State s{-0.5, 0.01};
    auto r = env.step(s, 2, rng);
    const double v = 0.01 + 0.001 - 0.0025 * std::cos(-1.5);
    EXPECT_DOUBLE_EQ(r.next[1], v);
    EXPECT_DOUBLE_EQ(r.next[0], -0.5 + v);
    EXPECT_EQ(r.reward, -1.0);
}

TEST(CartPole, GoldenStep) {
    CartPole env;
    Rng rng(0);
    const State s{0.01, -0.02, 0.03, 0.04};
    auto r = env.step(s, 1, rng);
    // Euler step of the standard pole-on-cart equations, force +10.
    const double g = 9.8, mc = 1.0, mp = 0.1, l = 0.5, f = 10.0, tau = 0.02;
    const double temp = (f + mp * l * 0.04 * 0.04 * std::sin(0.03)) / (mc + mp);
    const double th_acc = (g * std::sin(0.03) - std::cos(0.03) * temp) /
                          (l * (4.0 / 3.0 - mp * std::cos(0.03) * std::cos(0.03) / (mc + mp)));
    const double x_acc = temp - mp * l * th_acc * std::cos(0.03) / (mc + mp);
    EXPECT_DOUBLE_EQ(r.next[0], 0.01 + tau * -0.02);
    EXPECT_DOUBLE_EQ(r.next[1], -0.02 + tau * x_acc);
    EXPECT_DOUBLE_EQ(r.next[2], 0.03 + tau * 0.04);
    EXPECT_DOUBLE_EQ(r.next[3], 0.04 + tau * th_acc);
    EXPECT_EQ(r.reward, 1.0);
}

// Alternating pushes cancel on average; the pole still falls under gravity.
TEST(CartPole, UprightPoleDriftsToTerminal) {
    CartPole env;
    Rng rng(0);
    State s{0.0, 0.0, 0.001, 0.0};
    int t = 0;
    bool done = false;
    double total = 0;
    for (; t < 1000 && !done; ++t) {
        auto r = env.step(s, static_cast<std::size_t>(t % 2), rng);
        total += r.reward;
        s = r.next;
        done = r.terminal;
    }
    EXPECT_TRUE(done);
    EXPECT_EQ(total, static_cast<double>(t));
}

TEST(CartPole, BalancePoleBeatsRandom) {
    CartPole env;
    auto k = agents::load_knowledge(env, env.advice_path());
    for (std::uint64_t seed = 0; seed < 5; ++seed) {
        Rng rng(seed);
        std::uniform_int_distribution<std::size_t> pick(0, 1);
        double advice = 0, random = 0;
        for (int ep = 0; ep < 100; ++ep) {
            State s = env.reset(rng);
            for (int t = 0; t < env.step_cap(); ++t) {
                auto a = sample_policy(k->solution, s, rng);
                ASSERT_TRUE(a.has_value());
                auto r = env.step(s, env.action_index(*a), rng);
                advice += r.reward;
                s = r.next;
                if (r.terminal) break;
            }
            s = env.reset(rng);
            for (int t = 0; t < env.step_cap(); ++t) {
                auto r = env.step(s, pick(rng), rng);
                random += r.reward;
                s = r.next;
                if (r.terminal) break;
            }
        }
        EXPECT_GT(advice, random) << "seed " << seed;
    }
}

TEST(Registry, EveryEnvironmentBuildsAndShipsAssets) {
    for (const auto& name : environment_names()) {
        auto e = make_environment(name);
        ASSERT_TRUE(e) << name;
        EXPECT_EQ(e->name(), name);
        EXPECT_TRUE(std::filesystem::exists(e->vocabulary_path())) << name;
        EXPECT_TRUE(std::filesystem::exists(e->advice_path())) << name;
        EXPECT_NO_THROW(agents::load_knowledge(*e, e->advice_path())) << name;
    }
}

TEST(Determinism, SameSeedSameTrajectory) {
    for (const auto& name : environment_names()) {
        auto e = make_environment(name);
        auto rollout = [&](std::uint64_t seed) {
            Rng rng(seed);
            std::uniform_int_distribution<std::size_t> pick(0, e->actions().size() - 1);
            std::vector<State> trace;
            State s = e->reset(rng);
            for (int t = 0; t < 100; ++t) {
                trace.push_back(s);
                auto r = e->step(s, pick(rng), rng);
                s = r.terminal ? e->reset(rng) : r.next;
            }
            return trace;
        };
        EXPECT_EQ(rollout(17), rollout(17)) << name;
    }
}
