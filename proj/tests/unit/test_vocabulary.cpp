#include <gtest/gtest.h>

#include <unistd.h>

#include <fstream>

#include "rlang/env/registry.hpp"
#include "rlang/evaluator.hpp"
#include "rlang/loader.hpp"
#include "support.hpp"

using namespace rlang;
namespace fs = std::filesystem;

TEST(Vocabulary, FactorEntry) {
    const auto doc = parse_vocabulary_document(R"({"vocabulary":[{"name":"velocity","kind":"factor","indices":[1]}]})");
    ASSERT_EQ(doc.entries.size(), 1u);
    EXPECT_EQ(doc.entries[0].kind, VocabularyKind::Factor);
    EXPECT_EQ(doc.entries[0].indices, std::vector<std::size_t>{1});
}

TEST(Vocabulary, EmptyDocument) { EXPECT_TRUE(parse_vocabulary_document(R"({"vocabulary":[]})").entries.empty()); }

TEST(Vocabulary, LearnablePlaceholder) {
    const auto doc =
        parse_vocabulary_document(R"({"vocabulary":[{"name":"get_wood_learnable_policy","kind":"learnable_policy"}]})");
    EXPECT_EQ(doc.entries.at(0).kind, VocabularyKind::LearnablePolicy);
    EXPECT_FALSE(doc.entries.at(0).needs_grounding());
}

TEST(Vocabulary, SchemaErrorsCarryJsonPointers) {
    auto pointer_of = [](const char* text) -> std::string {
        try {
            parse_vocabulary_document(text);
        } catch (const SchemaError& e) {
            return e.message();
        }
        return "accepted";
    };
    EXPECT_NE(pointer_of(R"({"vocabulary":[{"name":"v","kind":"factor"}]})").find("/vocabulary/0/indices"),
              std::string::npos);
    EXPECT_NE(pointer_of(R"({"vocabulary":[{"name":"v","kind":"bogus"}]})").find("/vocabulary/0/kind"),
              std::string::npos);
    EXPECT_NE(pointer_of(R"({"vocabulary":[{"name":"v","kind":"constant","value":1,"extra":2}]})")
                  .find("/vocabulary/0/extra"),
              std::string::npos);
    EXPECT_NE(pointer_of(R"({"vocab":[]})").find("/vocab"), std::string::npos);
    EXPECT_NE(pointer_of(R"({"vocabulary":[{"name":"9bad","kind":"proposition"}]})").find("/vocabulary/0/name"),
              std::string::npos);
    EXPECT_EQ(pointer_of("{not json").rfind("/: invalid JSON", 0), 0u);
}

TEST(Vocabulary, DuplicateNames) {
    EXPECT_THROW(parse_vocabulary_document(
                     R"({"vocabulary":[{"name":"a","kind":"proposition"},{"name":"a","kind":"feature"}]})"),
                 DuplicateName);
    VocabularyRegistry reg;
    reg.add_document(parse_vocabulary_document(R"({"vocabulary":[{"name":"a","kind":"proposition"}]})"));
    EXPECT_THROW(reg.add_document(parse_vocabulary_document(R"({"vocabulary":[{"name":"a","kind":"proposition"}]})")),
                 DuplicateName);
}

TEST(Vocabulary, OrderIndependentLoading) {
    const auto a = parse_vocabulary_document(
        R"({"vocabulary":[{"name":"x","kind":"factor","indices":[0]},{"name":"up","kind":"action","value":0}]})");
    const auto b = parse_vocabulary_document(
        R"({"vocabulary":[{"name":"up","kind":"action","value":0},{"name":"x","kind":"factor","indices":[0]}]})");
    auto ra = std::make_shared<VocabularyRegistry>(), rb = std::make_shared<VocabularyRegistry>();
    ra->add_document(a);
    rb->add_document(b);
    for (const char* name : {"x", "up"}) {
        ASSERT_NE(ra->find(name), nullptr);
        ASSERT_NE(rb->find(name), nullptr);
        EXPECT_EQ(ra->find(name)->kind, rb->find(name)->kind);
    }
    EXPECT_NO_THROW(test::check_source("Effect main:\n    if A == up:\n        x' -> x + 1", ra));
    EXPECT_NO_THROW(test::check_source("Effect main:\n    if A == up:\n        x' -> x + 1", rb));
}

TEST(Registry, DuplicateKey) {
    VocabularyRegistry reg;
    reg.register_grounding("at_wall", [](const EvalContext&) { return GroundedValue::make_bool(true); });
    EXPECT_THROW(reg.register_grounding("at_wall", [](const EvalContext&) { return GroundedValue::make_bool(true); }),
                 DuplicateKey);
    VocabularyRegistry copy = register_grounding(VocabularyRegistry{}, "k", [](const EvalContext&) {
        return GroundedValue::unknown();
    });
    EXPECT_NE(copy.value_grounding("k"), nullptr);
}

TEST(Registry, GroundingKeyDefaultsToName) {
    auto reg = test::registry_from(R"({"vocabulary":[
      {"name":"at_wall","kind":"proposition"},
      {"name":"wall","kind":"proposition","grounding":"env.at_wall"}]})");
    const auto unbound = reg->unbound_keys();
    EXPECT_EQ(unbound, (std::vector<std::string>{"at_wall", "env.at_wall"}));
}

TEST(Registry, StubsAnswerUnknown) {
    auto reg = test::registry_from(R"({"vocabulary":[{"name":"at_wall","kind":"proposition"}]})");
    reg->bind_stubs();
    auto cp = test::check_source("Proposition p := at_wall", reg);
    EXPECT_TRUE(evaluate(*cp, *cp->program.declarations[0].value, EvalContext::of_state({0})).is_unknown());
}

TEST(Registry, ShippedEnvironmentVocabulariesBindEveryKey) {
    for (const auto& name : env::environment_names()) {
        auto env = env::make_environment(name);
        auto reg = env->make_registry();
        EXPECT_TRUE(reg->unbound_keys().empty()) << name;
        EXPECT_EQ(reg->state_dim(), env->state_dim()) << name;
        // Shipped advice compiles against the bound registry.
        EXPECT_NO_THROW(load_and_check(env->advice_path(), reg, false)) << name;
    }
}

class Imports : public ::testing::Test {
protected:
    void SetUp() override {
        dir_ = fs::temp_directory_path() / ("rlang_imports_" + std::to_string(::getpid()));
        fs::create_directories(dir_ / "sub");
    }
    void TearDown() override { fs::remove_all(dir_); }
    void write(const fs::path& rel, const std::string& text) { std::ofstream(dir_ / rel) << text; }
    fs::path dir_;
};

TEST_F(Imports, RelativeImportsAreInlinedFirst) {
    write("sub/vocab.json", R"({"vocabulary":[{"name":"up","kind":"action","value":0}]})");
    write("sub/base.rlang", "import \"vocab.json\"\nConstant speed := 2\n");
    write("main.rlang", "import \"sub/base.rlang\"\nPolicy main:\n    if speed > 1:\n        Execute up\n");
    auto cp = load_and_check(dir_ / "main.rlang", std::make_shared<VocabularyRegistry>(), false);
    ASSERT_EQ(cp->program.declarations.size(), 2u);
    EXPECT_EQ(cp->program.declarations[0].name, "speed");
}

TEST_F(Imports, CyclesAreImportErrors) {
    write("a.rlang", "import \"b.rlang\"\nConstant a := 1\n");
    write("b.rlang", "import \"a.rlang\"\nConstant b := 1\n");
    EXPECT_THROW(load_program(dir_ / "a.rlang", std::make_shared<VocabularyRegistry>()), ImportError);
}

TEST_F(Imports, DiamondIsLoadedOnce) {
    write("shared.rlang", "Constant s := 1\n");
    write("l.rlang", "import \"shared.rlang\"\nConstant l := s\n");
    write("r.rlang", "import \"shared.rlang\"\nConstant r := s\n");
    write("top.rlang", "import \"l.rlang\"\nimport \"r.rlang\"\nConstant t := l + r\n");
    auto cp = load_and_check(dir_ / "top.rlang", std::make_shared<VocabularyRegistry>(), false);
    EXPECT_EQ(cp->program.declarations.size(), 4u);
}

TEST_F(Imports, MissingFile) {
    write("a.rlang", "import \"nope.rlang\"\n");
    std::string failing;
    EXPECT_THROW(load_program(dir_ / "a.rlang", std::make_shared<VocabularyRegistry>(), &failing), ImportError);
    EXPECT_NE(failing.find("a.rlang"), std::string::npos);
}
