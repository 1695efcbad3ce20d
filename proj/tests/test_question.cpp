#include "support.hpp"

#include "enigmatom/error.hpp"
#include "enigmatom/nkb.hpp"
#include "enigmatom/question.hpp"
#include "enigmatom/rule_backend.hpp"
#include "enigmatom/worldgen.hpp"

#include <doctest.h>

using namespace enigmatom;

namespace {

std::vector<std::string> chain_names(const ToMQuestion& q) {
    std::vector<std::string> out;
    for (const auto& c : q.chain.characters()) out.push_back(c.name());
    return out;
}

std::vector<EntityStateRecord> rule_records(const Story& s) {
    std::vector<EntityAttribute> targets{{"any", "location"}};
    RuleBackend backend;
    return generate_states(s, targets, backend).records;
}

}  // namespace

TEST_SUITE("question") {

TEST_CASE("third-order melon question") {
    auto q = parse_question("Where does Emma think Lily thinks William thinks the melon is?", testing::melon());
    CHECK(chain_names(q) == std::vector<std::string>{"Emma", "Lily", "William"});
    CHECK(q.target_entity == "melon");
    CHECK(q.target_attribute == "location");
    CHECK(q.order() == 3);
    CHECK(q.form == QuestionForm::Belief);
}

TEST_CASE("ToMi question shapes") {
    auto s = testing::tomi();
    auto q0 = parse_question("Where is the t-shirt in the begining?", s);
    CHECK(q0.order() == 0);
    CHECK(q0.target_entity == "t-shirt");
    CHECK(q0.form == QuestionForm::Initial);
    auto q1 = parse_question("Where will Abigail search for the t-shirt?", s);
    CHECK(chain_names(q1) == std::vector<std::string>{"Abigail"});
    CHECK(q1.form == QuestionForm::Search);
    auto q2 = parse_question("Where does Benjamin think that Abigail search for the t-shirt?", s);
    CHECK(chain_names(q2) == std::vector<std::string>{"Benjamin", "Abigail"});
    CHECK(q2.target_entity == "t-shirt");
}

TEST_CASE("order-zero reality question") {
    auto q = parse_question("Where is the melon really?", testing::melon());
    CHECK(q.order() == 0);
    CHECK(q.form == QuestionForm::Reality);
    CHECK(q.chain.empty());
}

TEST_CASE("other accepted surface variants") {
    auto s = testing::melon();
    CHECK(parse_question("where will lily look for the melon", s).order() == 1);
    CHECK(parse_question("Where does Lily believe the melon is?", s).order() == 1);
    CHECK(parse_question("Where does Emma think Lily will search for the melon?", s).order() == 2);
    CHECK(parse_question("Where is the melon in the beginning?", s).form == QuestionForm::Initial);
}

TEST_CASE("unknown characters and templates") {
    auto s = testing::melon();
    CHECK_THROWS_AS(parse_question("Where does Zed think the melon is?", s), ValidationError);
    CHECK_THROWS_AS(parse_question("Why did Lily leave?", s), ParseError);
    try {
        parse_question("How does Emma feel?", s);
    } catch (const ParseError& e) {
        CHECK(std::string(e.what()).find("Where does A think") != std::string::npos);
    }
}

TEST_CASE("belief chains reject adjacent repeats") {
    CHECK_THROWS_AS(BeliefChain({CharacterId("A"), CharacterId("a")}), ValidationError);
    CHECK_NOTHROW(BeliefChain({CharacterId("A"), CharacterId("B"), CharacterId("A")}));
    BeliefChain c({CharacterId("Lily"), CharacterId("Zed")});
    CHECK_THROWS_AS(c.check_members(testing::melon()), ValidationError);
}

TEST_CASE("question text falls back to the chat model") {
    auto s = testing::melon();
    testing::FakeChat llm([](const std::string&) {
        return R"(Sure: {"chain": ["Emma", "Lily"], "entity": "melon", "attribute": "location"})";
    });
    auto q = parse_question("In Emma's view, what does Lily believe about the melon's whereabouts?", s, &llm);
    CHECK(chain_names(q) == std::vector<std::string>{"Emma", "Lily"});
    CHECK(q.target_entity == "melon");
    CHECK(llm.prompts.size() == 1);

    testing::FakeChat bad([](const std::string&) { return std::string("no json here"); });
    CHECK_THROWS_AS(parse_question("Whatever?", s, &bad), BackendError);
}

TEST_CASE("order reduction keeps the innermost believer") {
    auto s = testing::melon();
    auto q3 = parse_question("Where does Emma think Lily thinks William thinks the melon is?", s);
    auto r = reduce_order(q3);
    CHECK(r.raw == "Where does William think the melon is?");
    CHECK(chain_names(r) == std::vector<std::string>{"William"});
    auto q2 = parse_question("Where does Lily think William thinks the melon is?", s);
    CHECK(reduce_order(q2).raw == "Where does William think the melon is?");
    CHECK(chain_names(parse_question(reduce_order(q2).raw, s)) == std::vector<std::string>{"William"});
    auto q1 = parse_question("Where does William think the melon is?", s);
    CHECK(reduce_order(q1).raw == q1.raw);
    CHECK_THROWS_AS(reduce_order(parse_question("Where is the melon really?", s)), ValidationError);
}

TEST_CASE("search questions reduce to search questions") {
    auto s = testing::tomi();
    auto q = parse_question("Where does Benjamin think that Abigail search for the t-shirt?", s);
    CHECK(reduce_order(q).raw == "Where will Abigail search for the t-shirt?");
}

TEST_CASE("model-based reduction is checked by re-parsing") {
    auto s = testing::melon();
    auto q = parse_question("Where does Emma think Lily thinks William thinks the melon is?", s);
    testing::FakeChat good([](const std::string&) { return std::string("First-order: Where does William think the melon is?"); });
    auto r = reduce_order_llm(q, s, good, "Original: x\nFirst-order: y\n");
    CHECK(chain_names(r) == std::vector<std::string>{"William"});
    CHECK(good.prompts.front().find("Original: x") != std::string::npos);
    testing::FakeChat wrong([](const std::string&) { return std::string("Where does Lily think the melon is?"); });
    CHECK_THROWS(reduce_order_llm(q, s, wrong, ""));
}

TEST_CASE("reduction round trip and target preservation over generated questions") {
    for (std::uint64_t seed = 0; seed < 150; ++seed) {
        GrammarConfig cfg;
        cfg.seed = seed;
        cfg.num_characters = 2 + static_cast<int>(seed % 4);
        cfg.max_order = std::min(cfg.num_characters, 4);
        cfg.allow_reentry = seed % 3 == 0;
        auto gs = generate_story(cfg);
        for (const auto& g : gs.questions) {
            // Every generated question parses without a backend.
            auto q = parse_question(g.question.raw, gs.story);
            CHECK(q.chain == g.question.chain);
            CHECK(q.target_entity == g.question.target_entity);
            if (q.order() == 0) continue;
            auto r = reduce_order(q);
            CHECK(r.target_entity == q.target_entity);
            CHECK(r.target_attribute == q.target_attribute);
            auto back = parse_question(r.raw, gs.story);
            REQUIRE(back.order() == 1);
            CHECK(back.chain.characters().front() == q.chain.innermost());
        }
    }
}

TEST_CASE("answer spaces") {
    auto m = testing::melon();
    auto qm = parse_question("Where is the melon really?", m);
    CHECK(answer_space_for(qm, m, rule_records(m)) ==
          std::vector<std::string>{"green bathtub", "blue pantry", "green bucket", "red bucket"});
    auto t = testing::tomi();
    auto qt = parse_question("Where will Abigail search for the t-shirt?", t);
    CHECK(answer_space_for(qt, t, rule_records(t)) == std::vector<std::string>{"cupboard", "basket"});
    auto still = make_story({"Tom entered the den.", "The ball is in the box.", "Tom exited the den."});
    auto qs = parse_question("Where will Tom look for the ball?", still);
    CHECK(answer_space_for(qs, still, rule_records(still)) == std::vector<std::string>{"box"});
}

TEST_CASE("answer space falls back to every container") {
    auto t = testing::tomi();
    ToMQuestion q;
    q.target_entity = "coat";
    auto space = answer_space_for(q, t, rule_records(t));
    CHECK(std::find(space.begin(), space.end(), "cupboard") != space.end());
    CHECK(std::find(space.begin(), space.end(), "basket") != space.end());
    CHECK(std::find(space.begin(), space.end(), "crawlspace") == space.end());
}

}
