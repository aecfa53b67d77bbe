#include <gtest/gtest.h>

#include <regex>
#include <set>

#include "rlang/loader.hpp"
#include "support.hpp"

using namespace rlang;

namespace {

const char* kCraftVocab = R"({"state_dim": 270, "vocabulary": [
  {"name": "inventory", "kind": "factor", "indices": [250, 251, 252]},
  {"name": "wood", "kind": "factor", "indices": [251]},
  {"name": "iron", "kind": "factor", "indices": [250]},
  {"name": "up", "kind": "action", "value": 0},
  {"name": "use", "kind": "action", "value": 1}
]})";

const ExprInfo& value_info(const CheckedProgram& cp, std::string_view name) {
    for (const auto& d : cp.program.declarations) {
        if (d.name == name && d.value) return cp.info_of(*d.value);
    }
    throw std::runtime_error("no declaration");
}

}  // namespace

TEST(Checker, FeatureOfScalarFactors) {
    auto cp = test::check_source("Feature number_of_axes := wood + iron", kCraftVocab);
    const ExprInfo& ei = value_info(*cp, "number_of_axes");
    EXPECT_EQ(ei.type, ValueType::real(1));
    EXPECT_TRUE(ei.sig.has_state());
    EXPECT_FALSE(ei.sig.has_action());
    EXPECT_FALSE(ei.sig.has_next_state());
}

TEST(Checker, PropositionOverNextStateIsDomainError) {
    EXPECT_THROW(test::check_source("Proposition p := S' == S", kCraftVocab), DomainError);
    EXPECT_THROW(test::check_source("Proposition p := S'", kCraftVocab), DomainError);
    EXPECT_THROW(test::check_source("Goal g := wood' > 1", kCraftVocab), DomainError);
}

TEST(Checker, MarkovFeatureSignature) {
    auto cp = test::check_source("Markov Feature inventory_change := inventory' - inventory", kCraftVocab);
    const ExprInfo& ei = value_info(*cp, "inventory_change");
    EXPECT_EQ(ei.type, ValueType::real(3));
    EXPECT_TRUE(ei.sig.has_state());
    EXPECT_TRUE(ei.sig.has_next_state());
    EXPECT_FALSE(ei.sig.has_action());
}

TEST(Checker, FactorAndFeatureMustBeStateOnly) {
    EXPECT_THROW(test::check_source("Feature f := wood'", kCraftVocab), DomainError);
    EXPECT_THROW(test::check_source("Feature f := wood > 1", kCraftVocab), TypeError);
    EXPECT_THROW(test::check_source("Factor f := wood + 1", kCraftVocab), TypeError);
}

TEST(Checker, DeclareBeforeUse) {
    EXPECT_THROW(test::check_source("Feature a := b\nFeature b := wood", kCraftVocab), UnresolvedName);
    EXPECT_NO_THROW(test::check_source("Feature b := wood\nFeature a := b", kCraftVocab));
}

TEST(Checker, DuplicatesAndShadowing) {
    EXPECT_THROW(test::check_source("Constant c := 1\nConstant c := 2"), DuplicateName);
    EXPECT_THROW(test::check_source("Constant wood := 1", kCraftVocab), DuplicateName);
    EXPECT_THROW(test::check_source("Effect main:\n    Reward 1\nEffect main:\n    Reward 2"), CompileError);
}

TEST(Checker, ActionComparisonNeedsAnAction) {
    EXPECT_NO_THROW(test::check_source("Effect e:\n    if A == up:\n        Reward 1", kCraftVocab));
    EXPECT_THROW(test::check_source("Effect e:\n    if A == wood:\n        Reward 1", kCraftVocab), TypeError);
    EXPECT_THROW(test::check_source("Effect e:\n    if A == nothing:\n        Reward 1", kCraftVocab),
                 UnresolvedName);
}

TEST(Checker, PolicyGuardsAreStateOnly) {
    EXPECT_THROW(test::check_source("Policy main:\n    if A == up:\n        Execute up", kCraftVocab), DomainError);
    EXPECT_THROW(test::check_source("Policy main:\n    if wood:\n        Execute up", kCraftVocab), TypeError);
}

TEST(Checker, BroadcastAndDimensionAgreement) {
    EXPECT_NO_THROW(test::check_source("Feature v := 5 * inventory", kCraftVocab));
    EXPECT_THROW(test::check_source("Factor two := S[0:2]\nFeature v := inventory + two", kCraftVocab), TypeError);
    EXPECT_THROW(test::check_source("Proposition p := inventory < 1", kCraftVocab), TypeError);
    EXPECT_NO_THROW(test::check_source("Proposition p := inventory == inventory", kCraftVocab));
}

TEST(Checker, SignatureIsUnionOfChildren) {
    auto cp = test::check_source("Markov Feature m := wood' + iron\nProposition p := wood > 0 and iron > 0",
                                 kCraftVocab);
    for (const auto& [expr, info] : cp->info) {
        for (const auto& child : expr->children) {
            if (!child) continue;
            const ExprInfo& ci = cp->info_of(*child);
            EXPECT_TRUE(ci.sig.subset_of(info.sig)) << print_expr(*expr);
        }
    }
}

TEST(Checker, RecursionIsRejected) {
    EXPECT_THROW(test::check_source("Effect e:\n    -> e"), RecursionError);
    EXPECT_THROW(test::check_source("Policy p:\n    Execute p", kCraftVocab), RecursionError);
}

TEST(Checker, LearnablePlaceholdersComeFromTheVocabulary) {
    const char* vocab = R"({"vocabulary": [
      {"name": "get_wood_learnable_policy", "kind": "learnable_policy"},
      {"name": "done", "kind": "proposition"}]})";
    auto reg = test::registry_from(vocab);
    reg->bind_stubs();
    auto cp = test::check_source("Option o:\n    init done\n        Execute get_wood_learnable_policy\n    until done",
                                 reg);
    const Symbol* s = cp->symbols.lookup("get_wood_learnable_policy");
    ASSERT_NE(s, nullptr);
    EXPECT_TRUE(s->learnable);
    auto reg2 = test::registry_from(R"({"vocabulary": [{"name": "done", "kind": "proposition"}]})");
    reg2->bind_stubs();
    EXPECT_THROW(
        test::check_source("Option o:\n    init done\n        Execute other_learnable_policy\n    until done", reg2),
        UnresolvedName);
}

TEST(Checker, UnboundGroundingIsUnresolved) {
    auto reg = test::registry_from(R"({"vocabulary": [{"name": "at_wall", "kind": "proposition"}]})");
    EXPECT_THROW(test::check_source("Proposition p := at_wall", reg), UnresolvedName);
    reg->register_grounding("at_wall", [](const EvalContext&) { return GroundedValue::make_bool(true); });
    EXPECT_NO_THROW(test::check_source("Proposition p := at_wall", reg));
}

TEST(Checker, NamespacesAreSeparate) {
    auto cp = test::check_source(
        "Effect move:\n    Reward 1\nOption move:\n    init True\n        Execute up\n    until True\n", kCraftVocab);
    EXPECT_NE(cp->symbols.lookup("move", Namespace::Effect), nullptr);
    EXPECT_NE(cp->symbols.lookup("move", Namespace::Option), nullptr);
    EXPECT_EQ(cp->symbols.lookup("move", Namespace::Value), nullptr);
}

TEST(Checker, ProbabilitiesMustFormASubDistribution) {
    EXPECT_THROW(test::check_source("Policy p:\n    Execute up with P(0.7)\n    or Execute use with P(0.4)",
                                    kCraftVocab),
                 IllFormedComposition);
    EXPECT_THROW(test::check_source("Policy p:\n    Execute up with P(1.5)", kCraftVocab), IllFormedComposition);
    EXPECT_NO_THROW(
        test::check_source("Policy p:\n    Execute up with P(0.7)\n    or Execute use with P(0.3)", kCraftVocab));
}

TEST(Checker, ClassHierarchyAttributes) {
    auto cp = test::check_source(
        "Class Thing:\n    id: int\nClass Tool(Thing):\n    sharp: bool\nObject axe := Tool(1, True)\n"
        "Constant k := axe.id + 1\n");
    const ClassInfo& tool = cp->classes.at("Tool");
    ASSERT_EQ(tool.attributes.size(), 2u);
    EXPECT_EQ(tool.attributes[0].first, "id");
    EXPECT_EQ(tool.attributes[1].first, "sharp");
    EXPECT_THROW(test::check_source("Class Thing:\n    id: int\nObject o := Thing(1, 2)"), TypeError);
    EXPECT_THROW(test::check_source("Class Thing:\n    id: int\nObject o := Thing(1)\nConstant k := o.nope"),
                 TypeError);
}

TEST(Capabilities, Vectors) {
    auto vec = [](const std::string& stem) {
        auto reg = std::make_shared<VocabularyRegistry>();
        reg->add_document(load_vocabulary_document(test::fixture_dir() / "corpus" / (stem + ".vocab.json")));
        reg->bind_stubs();
        auto cp = check_program(parse_source(read_text_file(test::fixture_dir() / "corpus" / (stem + ".rlang"))), reg);
        return capability_vector(*cp);
    };
    EXPECT_EQ(vec("17_lava_gap"), (CapabilityVector{true, true, false, false, false, false}));
    EXPECT_EQ(vec("14_minecraft_options"), (CapabilityVector{false, false, false, true, false, false}));
    EXPECT_EQ(vec("22_s31_goal"), (CapabilityVector{false, false, false, false, false, true}));
    EXPECT_EQ(vec("10_s31_action_restriction"), (CapabilityVector{false, false, false, false, true, false}));
    EXPECT_EQ(capability_vector(*test::check_source("")), CapabilityVector{});
}

TEST(Capabilities, OnlyMainCountsForPolicyAndEffect) {
    const char* vocab = R"({"vocabulary": [{"name": "up", "kind": "action", "value": 0}]})";
    EXPECT_EQ(capability_vector(*test::check_source("Policy p:\n    Execute up", vocab)), CapabilityVector{});
    EXPECT_EQ(capability_vector(*test::check_source("Policy main:\n    Execute up", vocab))[2], true);
    auto reward_only = capability_vector(*test::check_source("Effect main:\n    Reward 1", vocab));
    EXPECT_FALSE(reward_only[0]);
    EXPECT_TRUE(reward_only[1]);
}

TEST(Corpus, EveryListingChecksWithItsStubVocabulary) {
    for (const auto& c : test::corpus()) {
        auto reg = std::make_shared<VocabularyRegistry>();
        reg->add_document(load_vocabulary_document(c.vocab));
        EXPECT_NO_THROW(load_and_check(c.program, reg, true)) << c.program;
    }
}

TEST(Corpus, NearMissesAreRejectedWithTheExpectedKind) {
    const auto dir = test::fixture_dir() / "reject";
    std::set<std::string> seen_kinds;
    int count = 0;
    for (const auto& e : std::filesystem::directory_iterator(dir)) {
        if (e.path().extension() != ".rlang") continue;
        ++count;
        const std::string src = read_text_file(e.path());
        std::smatch m;
        ASSERT_TRUE(std::regex_search(src, m, std::regex("# expect: (\\w+)"))) << e.path();
        auto reg = std::make_shared<VocabularyRegistry>();
        reg->add_document(load_vocabulary_document(dir / "common.vocab.json"));
        try {
            load_and_check(e.path(), reg, true);
            ADD_FAILURE() << e.path() << " was accepted";
        } catch (const Error& err) {
            EXPECT_EQ(to_string(err.kind()), m[1].str()) << e.path() << ": " << err.what();
        }
    }
    EXPECT_GE(count, 13);
}
