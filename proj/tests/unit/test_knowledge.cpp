#include <gtest/gtest.h>

#include <cmath>
#include <map>
#include <random>

#include "rlang/env/lava_gap.hpp"
#include "rlang/loader.hpp"
#include "support.hpp"

using namespace rlang;

namespace {

ActionValue act(const RLangKnowledge& k, std::string_view name) { return *k.program->action_named(name); }

RLangKnowledge lava_gap() {
    env::LavaGap env;
    return compile_knowledge(load_and_check(env.advice_path(), env.make_registry(), false));
}

double total_mass(const TransitionMeasure& t) {
    double m = t.unknown_mass;
    for (const auto& e : t.entries) m += e.probability;
    return m;
}

const char* kGrid = R"({"state_dim": 2, "vocabulary": [
  {"name": "x", "kind": "factor", "indices": [0]},
  {"name": "y", "kind": "factor", "indices": [1]},
  {"name": "up", "kind": "action", "value": 0},
  {"name": "down", "kind": "action", "value": 1},
  {"name": "left", "kind": "action", "value": 2},
  {"name": "right", "kind": "action", "value": 3}]})";

}  // namespace

TEST(Dynamics, LavaGapMoveUp) {
    const RLangKnowledge k = lava_gap();
    const TransitionMeasure t = k.dynamics.query_transition({2, 3}, act(k, "up"));
    EXPECT_EQ(t.str(), "{x'=3, y'=3}: 1.0; unknown: 0.0");
    ASSERT_EQ(t.entries.size(), 1u);
    EXPECT_EQ(t.entries[0].next.complete({2, 3}), (std::vector<double>{3, 3}));
}

TEST(Dynamics, LavaGapWallIsNullEffect) {
    const RLangKnowledge k = lava_gap();
    for (const auto& a : k.solution.actions()) {
        const TransitionMeasure t = k.dynamics.query_transition({3, 1}, a);
        ASSERT_EQ(t.entries.size(), 1u);
        EXPECT_TRUE(t.entries[0].next.full);
        EXPECT_EQ(t.entries[0].next.state, (std::vector<double>{3, 1}));
        EXPECT_DOUBLE_EQ(t.entries[0].probability, 1.0);
    }
}

TEST(Dynamics, LavaGapKnownEverywhere) {
    const RLangKnowledge k = lava_gap();
    env::LavaGap env;
    for (const auto& s : env.states()) {
        for (const auto& a : env.actions()) {
            const TransitionMeasure t = k.dynamics.query_transition(s, a);
            EXPECT_NEAR(t.unknown_mass, 0.0, 1e-12);
            const auto r = k.dynamics.query_reward(s, a, std::nullopt);
            ASSERT_TRUE(r);
            EXPECT_EQ(*r, env::LavaGap::in_lava(s) ? -1.0 : env::LavaGap::at_goal(s) ? 1.0 : 0.0);
        }
    }
    EXPECT_FALSE(k.solution.has_main_policy());
    EXPECT_EQ(k.solution.query_policy({1, 1}).str(), "unknown");
}

TEST(Dynamics, ProbabilisticResidualGoesToUnknown) {
    auto k = test::compile_source("Effect main:\n    x' -> x with P(0.5)\n", kGrid);
    const TransitionMeasure t = k.dynamics.query_transition({1, 1}, act(k, "up"));
    ASSERT_EQ(t.entries.size(), 1u);
    EXPECT_DOUBLE_EQ(t.entries[0].probability, 0.5);
    EXPECT_DOUBLE_EQ(t.unknown_mass, 0.5);
}

TEST(Dynamics, OverlappingReferencesAreIllFormed) {
    auto k = test::compile_source(
        "Effect e1:\n    x' -> x + 1\nEffect e2:\n    x' -> x - 1\nEffect main:\n    -> e1\n    -> e2\n", kGrid);
    EXPECT_THROW(k.dynamics.query_transition({1, 1}, act(k, "up")), IllFormedComposition);
    EXPECT_FALSE(k.warnings.empty());
}

TEST(Dynamics, DisjointReferencesCompose) {
    auto k = test::compile_source(
        "Effect e1:\n    if A == up:\n        x' -> x + 1\nEffect e2:\n    if A == down:\n        x' -> x - 1\n"
        "Effect main:\n    -> e1\n    -> e2\n",
        kGrid);
    EXPECT_EQ(k.dynamics.query_transition({1, 1}, act(k, "up")).str(), "{x'=2}: 1.0; unknown: 0.0");
    EXPECT_EQ(k.dynamics.query_transition({1, 1}, act(k, "down")).str(), "{x'=0}: 1.0; unknown: 0.0");
    EXPECT_TRUE(k.dynamics.query_transition({1, 1}, act(k, "left")).fully_unknown());
}

TEST(Dynamics, RewardsAddAcrossReferences) {
    const char* vocab = R"({"vocabulary": [
      {"name": "wood", "kind": "factor", "indices": [0]},
      {"name": "use", "kind": "action", "value": 0}]})";
    auto k = test::compile_source(
        "Effect movement_effect:\n    Reward -0.1\nEffect crafting_effect:\n    Reward wood\n"
        "Effect main:\n    -> movement_effect\n    -> crafting_effect\n",
        vocab);
    const auto r = k.dynamics.query_reward({3}, act(k, "use"), std::vector<double>{3});
    ASSERT_TRUE(r);
    EXPECT_NEAR(*r, 2.9, 1e-12);
}

TEST(Dynamics, NoRuleMeansUnknownReward) {
    auto k = test::compile_source("Effect main:\n    if x > 5:\n        Reward 1\n", kGrid);
    EXPECT_FALSE(k.dynamics.query_reward({1, 1}, act(k, "up"), std::nullopt));
    EXPECT_EQ(k.dynamics.query_reward({6, 1}, act(k, "up"), std::nullopt), 1.0);
}

TEST(Dynamics, NextStateRewardNeedsNextState) {
    auto k = test::compile_source("Effect main:\n    Reward x' - x\n", kGrid);
    EXPECT_FALSE(k.dynamics.query_reward({1, 1}, act(k, "up"), std::nullopt));
    EXPECT_EQ(k.dynamics.query_reward({1, 1}, act(k, "up"), std::vector<double>{4, 1}), 3.0);
}

TEST(Dynamics, ProbabilisticRewardsAreExpectationWeighted) {
    auto k = test::compile_source("Effect main:\n    Reward 2 with P(0.25)\n    or Reward 4 with P(0.5)\n", kGrid);
    EXPECT_EQ(k.dynamics.query_reward({0, 0}, act(k, "up"), std::nullopt), 0.25 * 2 + 0.5 * 4);
}

TEST(Dynamics, NullEffectIdentity) {
    auto k = test::compile_source("Effect main:\n    S' -> S\n", kGrid);
    std::mt19937_64 rng(5);
    std::uniform_int_distribution<int> u(-3, 3);
    for (int i = 0; i < 50; ++i) {
        const std::vector<double> s{double(u(rng)), double(u(rng))};
        for (const auto& a : k.solution.actions()) {
            const TransitionMeasure t = k.dynamics.query_transition(s, a);
            ASSERT_EQ(t.entries.size(), 1u);
            EXPECT_EQ(t.entries[0].next.complete(s), s);
            EXPECT_DOUBLE_EQ(t.entries[0].probability, 1.0);
        }
    }
}

TEST(Dynamics, EmptyProgramKnowsNothing) {
    auto k = test::compile_source("", kGrid);
    EXPECT_FALSE(k.dynamics.has_main_effect());
    EXPECT_TRUE(k.dynamics.query_transition({0, 0}, act(k, "up")).fully_unknown());
    EXPECT_FALSE(k.dynamics.query_reward({0, 0}, act(k, "up"), std::nullopt));
    EXPECT_EQ(k.solution.query_policy({0, 0}).unknown_mass, 1.0);
    EXPECT_TRUE(k.dynamics.goals().empty());
    EXPECT_TRUE(k.solution.options().empty());
}

TEST(Dynamics, GoalsOnly) {
    auto k = test::compile_source("Goal get_gold := gold >= 1\n",
                                  R"({"vocabulary": [{"name": "gold", "kind": "factor", "indices": [0]}]})");
    EXPECT_EQ(k.dynamics.goals(), std::vector<std::string>{"get_gold"});
    EXPECT_TRUE(k.dynamics.is_goal({2}));
    EXPECT_FALSE(k.dynamics.is_goal({0}));
    EXPECT_FALSE(k.dynamics.has_main_effect());
}

TEST(Dynamics, UnknownGuardGivesNoKnowledge) {
    auto reg = test::registry_from(R"({"vocabulary": [
      {"name": "x", "kind": "factor", "indices": [0]}, {"name": "up", "kind": "action", "value": 0},
      {"name": "foggy", "kind": "proposition"}]})");
    reg->bind_stubs();
    auto k = test::compile_source("Effect main:\n    if foggy:\n        x' -> x\n        Reward 1\n    else:\n"
                                  "        x' -> x + 1\n        Reward 2\n",
                                  reg);
    EXPECT_TRUE(k.dynamics.query_transition({0}, act(k, "up")).fully_unknown());
    EXPECT_FALSE(k.dynamics.query_reward({0}, act(k, "up"), std::nullopt));
}

TEST(Dynamics, ObjectAttributePredictions) {
    auto k = test::compile_source(
        "Effect main:\n    if S.taxi.on_passenger and A == pick_up:\n        S'.passenger.in_taxi -> True\n",
        R"({"state_dim": 3, "vocabulary": [
          {"name": "taxi", "kind": "attribute_map", "attributes": {"on_passenger": {"type": "bool", "index": 0}}},
          {"name": "passenger", "kind": "attribute_map", "attributes": {"in_taxi": {"type": "bool", "index": 2}}},
          {"name": "pick_up", "kind": "action", "value": 4}]})");
    const TransitionMeasure t = k.dynamics.query_transition({1, 0, 0}, act(k, "pick_up"));
    ASSERT_EQ(t.entries.size(), 1u);
    EXPECT_EQ(t.entries[0].next.complete({1, 0, 0}), (std::vector<double>{1, 0, 1}));
    EXPECT_TRUE(k.warnings.empty());
}

TEST(Dynamics, UnmappedAttributeWarnsAndIsUnknown) {
    auto k = test::compile_source(
        "Effect main:\n    if A == pick_up:\n        S'.passenger.in_taxi -> True\n",
        R"({"vocabulary": [
          {"name": "passenger", "kind": "attribute_map", "attributes": {"in_taxi": {"type": "bool"}}},
          {"name": "pick_up", "kind": "action", "value": 4}]})");
    EXPECT_TRUE(k.dynamics.query_transition({0, 0, 0}, act(k, "pick_up")).fully_unknown());
    ASSERT_EQ(k.warnings.size(), 1u);
    EXPECT_NE(k.warnings[0].find("passenger.in_taxi"), std::string::npos);
}

TEST(Dynamics, OoTaxiListingCompiles) {
    for (const char* stem : {"18_oo_taxi_main", "20_oo_taxi_appendix"}) {
        auto reg = std::make_shared<VocabularyRegistry>();
        reg->add_document(load_vocabulary_document(test::fixture_dir() / "corpus" / (std::string(stem) + ".vocab.json")));
        auto k = compile_knowledge(load_and_check(test::fixture_dir() / "corpus" / (std::string(stem) + ".rlang"), reg, true));
        // taxi on passenger (index 4), passenger not yet in taxi, pick_up.
        const std::vector<double> s{0, 0, 0, 0, 1, 0, 0, 0};
        const TransitionMeasure t = k.dynamics.query_transition(s, act(k, "pick_up"));
        ASSERT_EQ(t.entries.size(), 1u) << stem;
        EXPECT_EQ(t.entries[0].next.complete(s)[6], 1.0);
        EXPECT_EQ(k.dynamics.query_reward(s, act(k, "pick_up"), std::nullopt), -10.0);
        EXPECT_EQ(k.dynamics.query_reward(s, act(k, "move_n"), std::nullopt), -1.0);
    }
}

TEST(Dynamics, NormalizationOnEnumeratedMdp) {
    auto k = test::compile_source(
        "Effect slip:\n    if A == up:\n        x' -> x + 1 with P(0.6)\n        or x' -> x with P(0.3)\n"
        "Effect side:\n    if A == right:\n        y' -> y + 1 with P(0.5)\n"
        "Effect main:\n    -> slip\n    -> side\n    Reward -1\n",
        kGrid);
    for (int x = 0; x < 4; ++x) {
        for (int y = 0; y < 4; ++y) {
            for (const auto& a : k.solution.actions()) {
                const TransitionMeasure t = k.dynamics.query_transition({double(x), double(y)}, a);
                EXPECT_NEAR(total_mass(t), 1.0, 1e-9);
                for (const auto& e : t.entries) EXPECT_GT(e.probability, 0.0);
            }
        }
    }
}

TEST(Policy, RandomMoveIsUniform) {
    auto k = test::compile_source(
        "Policy main:\n    Execute up with P(0.25)\n    or Execute down with P(0.25)\n"
        "    or Execute left with P(0.25)\n    or Execute right with P(0.25)\n",
        kGrid);
    const PolicyQueryResult r = k.solution.query_policy({0, 0});
    ASSERT_EQ(r.entries.size(), 4u);
    for (const auto& [a, p] : r.entries) EXPECT_DOUBLE_EQ(p, 0.25);
    EXPECT_DOUBLE_EQ(r.unknown_mass, 0.0);

    std::mt19937_64 rng(11);
    std::map<double, int> counts;
    const int n = 10000;
    for (int i = 0; i < n; ++i) counts[sample_policy(r, rng)->id]++;
    const double sigma = std::sqrt(n * 0.25 * 0.75);
    for (const auto& [id, c] : counts) EXPECT_LT(std::abs(c - n * 0.25), 3 * sigma) << id;
}

TEST(Policy, GainMomentum) {
    auto reg = std::make_shared<VocabularyRegistry>();
    reg->add_document(load_vocabulary_document(test::fixture_dir() / "corpus" / "16_mountain_car_policy.vocab.json"));
    auto k = compile_knowledge(check_program(
        parse_source("Policy gain_momentum:\n    if velocity < 0:\n        Execute go_left\n    else:\n"
                     "        Execute go_right\nPolicy main:\n    Execute gain_momentum\n"),
        reg));
    EXPECT_EQ(k.solution.query_policy({-0.5, -0.01}).str(), "go_left: 1.0; unknown: 0.0");
    EXPECT_EQ(k.solution.query_policy({-0.5, 0.01}).str(), "go_right: 1.0; unknown: 0.0");
    EXPECT_EQ(k.solution.query_named_policy("gain_momentum", {-0.5, -0.01}).str(), "go_left: 1.0; unknown: 0.0");
}

TEST(Policy, LearnablePlaceholderIsUnknown) {
    auto reg = test::registry_from(R"({"vocabulary": [{"name": "explore_learnable_policy", "kind": "learnable_policy"}]})");
    auto k = test::compile_source("Policy main:\n    Execute explore_learnable_policy\n", reg);
    EXPECT_DOUBLE_EQ(k.solution.query_policy({0}).unknown_mass, 1.0);
    std::mt19937_64 rng(1);
    for (int i = 0; i < 100; ++i) EXPECT_FALSE(sample_policy(k.solution, {0}, rng));
}

TEST(Policy, FirstReturnAndFallThrough) {
    auto k = test::compile_source(
        "Policy main:\n    if x > 2:\n        Execute up\n    Execute down\n", kGrid);
    EXPECT_EQ(k.solution.query_policy({3, 0}).str(), "up: 1.0; unknown: 0.0");
    EXPECT_EQ(k.solution.query_policy({1, 0}).str(), "down: 1.0; unknown: 0.0");
}

TEST(Policy, NestedPoliciesMix) {
    auto k = test::compile_source(
        "Policy wander:\n    Execute left with P(0.5)\n    or Execute right with P(0.5)\n"
        "Policy main:\n    Execute up with P(0.5)\n    or Execute wander with P(0.4)\n",
        kGrid);
    const PolicyQueryResult r = k.solution.query_policy({0, 0});
    EXPECT_EQ(r.str(), "up: 0.5; left: 0.2; right: 0.2; unknown: 0.1");
}

TEST(Policy, SingleEntryAlwaysSampled) {
    std::mt19937_64 rng(2);
    const PolicyQueryResult r = PolicyQueryResult::point({"up", 0});
    for (int i = 0; i < 100; ++i) EXPECT_EQ(sample_policy(r, rng)->name, "up");
    for (int i = 0; i < 100; ++i) EXPECT_FALSE(sample_policy(PolicyQueryResult::unknown(), rng));
}

TEST(Restrictions, DontGetBurned) {
    auto k = test::compile_source(
        "Factor position := S[0:2]\nConstant lava_locations := [[1, 2], [3, 4]]\n"
        "ActionRestriction dont_get_burned:\n    if (position + [0, 1]) in lava_locations:\n        Restrict up\n",
        R"({"vocabulary": [{"name": "up", "kind": "action", "value": 0}, {"name": "down", "kind": "action", "value": 1},
          {"name": "left", "kind": "action", "value": 2}]})");
    auto names = [&](const std::vector<double>& s) {
        std::vector<std::string> out;
        for (const auto& a : k.solution.restricted_actions(s)) out.push_back(a.name);
        return out;
    };
    EXPECT_EQ(names({1, 1}), std::vector<std::string>{"up"});
    EXPECT_TRUE(names({0, 0}).empty());
}

TEST(Restrictions, UnionOfFiringRestrictions) {
    auto k = test::compile_source(
        "ActionRestriction r1:\n    if x > 0:\n        Restrict up\nActionRestriction r2:\n    if y > 0:\n"
        "        Restrict left\n        Restrict up\n",
        kGrid);
    auto ids = [&](const std::vector<double>& s) {
        std::set<double> out;
        for (const auto& a : k.solution.restricted_actions(s)) out.insert(a.id);
        return out;
    };
    // Oracle: union of the guard-selected sets.
    for (int x = 0; x < 2; ++x) {
        for (int y = 0; y < 2; ++y) {
            std::set<double> want;
            if (x > 0) want.insert(0);
            if (y > 0) want.insert({0, 2});
            EXPECT_EQ(ids({double(x), double(y)}), want);
        }
    }
}

TEST(Restrictions, EverythingRestrictedAtRuntime) {
    auto k = test::compile_source(
        "ActionRestriction r:\n    if x > 0:\n        Restrict up\n        Restrict down\n        Restrict left\n"
        "        Restrict right\n",
        kGrid);
    EXPECT_NO_THROW(k.solution.restricted_actions({0, 0}));
    EXPECT_THROW(k.solution.restricted_actions({1, 0}), FullRestriction);
}

TEST(Options, MinecraftLearnableSplit) {
    auto reg = std::make_shared<VocabularyRegistry>();
    reg->add_document(load_vocabulary_document(test::fixture_dir() / "corpus" / "14_minecraft_options.vocab.json"));
    auto k = compile_knowledge(load_and_check(test::fixture_dir() / "corpus" / "14_minecraft_options.rlang", reg, true));
    ASSERT_EQ(k.solution.options().size(), 7u);
    int learnable = 0;
    for (const auto& o : k.solution.options()) learnable += o.is_learnable;
    EXPECT_EQ(learnable, 4);
}

TEST(Options, TaxiTriplesAreBooleanOnEnvStates) {
    auto k = test::compile_source(
        "Option go:\n    init x < 3\n        Execute up\n    until x >= 3\n", kGrid);
    ASSERT_EQ(k.solution.options().size(), 1u);
    const OptionSpec& o = k.solution.options()[0];
    EXPECT_FALSE(o.is_learnable);
    for (int x = 0; x < 6; ++x) {
        const std::vector<double> s{double(x), 0};
        ASSERT_TRUE(k.solution.option_can_start(o, s));
        ASSERT_TRUE(k.solution.option_terminates(o, s));
        EXPECT_EQ(*k.solution.option_can_start(o, s), x < 3);
        EXPECT_EQ(*k.solution.option_terminates(o, s), x >= 3);
    }
    EXPECT_EQ(k.solution.query_option_policy(o, {0, 0}).str(), "up: 1.0; unknown: 0.0");
}

TEST(Dump, DeterministicAndSectioned) {
    const RLangKnowledge a = lava_gap(), b = lava_gap();
    const std::string text = dump_knowledge(a);
    EXPECT_EQ(text, dump_knowledge(b));
    for (const char* section : {"[dynamics]", "[goals]", "[policy]", "[options]", "[restrictions]"}) {
        EXPECT_NE(text.find(section), std::string::npos) << section;
    }
    EXPECT_EQ(text.rfind("capabilities: transition=1 reward=1 policy=0 options=0 restrictions=0 goals=0\n", 0), 0u);
}
