#include "support.hpp"

#include "enigmatom/dataset.hpp"
#include "enigmatom/error.hpp"
#include "enigmatom/story.hpp"
#include "enigmatom/worldgen.hpp"

#include <doctest.h>

#include <sstream>

using namespace enigmatom;

namespace {

std::vector<std::string> names(const std::vector<CharacterId>& cs) {
    std::vector<std::string> out;
    for (const auto& c : cs) out.push_back(c.name());
    return out;
}

}  // namespace

TEST_SUITE("story") {

TEST_CASE("ToMi block parses into eleven events and three characters") {
    auto s = testing::tomi();
    CHECK(s.size() == 11);
    CHECK(s.kind == StoryKind::EventBased);
    CHECK(names(s.characters) == std::vector<std::string>{"Benjamin", "Abigail", "Emily"});
    for (int i = 1; i <= 11; ++i) CHECK(s.event(i).index == i);
    CHECK(s.event(7).text == "Emily moved the t-shirt to the basket.");
}

TEST_CASE("single event story") {
    auto s = parse_story("Mia entered the kitchen.\n");
    REQUIRE(s.size() == 1);
    CHECK(names(s.characters) == std::vector<std::string>{"Mia"});
}

TEST_CASE("melon story characters in first-appearance order") {
    auto s = testing::melon();
    CHECK(s.size() == 14);
    CHECK(names(s.characters) == std::vector<std::string>{"William", "Lily", "Aiden", "Emma", "Isla"});
}

TEST_CASE("declared characters override the heuristic") {
    auto s = parse_story(R"({"kind":"event","characters":["Sally","Anne"],
        "events":[{"text":"Sally entered the kitchen."},{"text":"Bob entered the kitchen."}]})");
    CHECK(s.characters_declared);
    CHECK(names(s.characters) == std::vector<std::string>{"Sally", "Anne"});
}

TEST_CASE("heuristic ignores capitalized words that are not agentive subjects") {
    auto s = make_story({"The Red box is in the Kitchen.", "Tom entered the Kitchen.", "Tom likes the Red box."});
    CHECK(names(s.characters) == std::vector<std::string>{"Tom"});
}

TEST_CASE("dialogue characters are the speakers") {
    auto s = parse_story("Gina: Hi there.\nLiam: Hello Gina!\nGina: How was the trip?\n");
    CHECK(s.kind == StoryKind::DialogueBased);
    CHECK(names(s.characters) == std::vector<std::string>{"Gina", "Liam"});
    CHECK(s.event(2).speaker == std::optional<std::string>("Liam"));
    CHECK(s.event(2).text == "Hello Gina!");
}

TEST_CASE("indexed plain text is accepted when the numbering is contiguous") {
    auto s = parse_story("1: Mia entered the kitchen.\n2: Mia exited the kitchen.\n");
    CHECK(s.size() == 2);
    CHECK_THROWS_AS(parse_story("1: Mia entered the kitchen.\n3: Mia exited the kitchen.\n"), FormatError);
}

TEST_CASE("format errors name the line") {
    try {
        parse_story("Mia entered the kitchen.\n- a bullet\n");
        FAIL("expected FormatError");
    } catch (const FormatError& e) {
        CHECK(e.line() == 2);
    }
    CHECK_THROWS_AS(parse_story("{\"events\": [1, 2"), FormatError);
    CHECK_THROWS_AS(parse_story(R"({"events": [{"speaker": "A"}]})"), FormatError);
}

TEST_CASE("empty stories are validation errors") {
    CHECK_THROWS_AS(parse_story(""), ValidationError);
    CHECK_THROWS_AS(parse_story("{\"events\": []}"), ValidationError);
    CHECK_THROWS_AS(parse_story("   \n\n"), ValidationError);
}

TEST_CASE("story without any character is rejected") {
    CHECK_THROWS_AS(parse_story("The ball is in the box.\n"), ValidationError);
}

TEST_CASE("validation catches broken invariants") {
    auto s = testing::tomi();
    s.events[3].index = 9;
    CHECK_THROWS_AS(s.validate(), ValidationError);
    s = testing::tomi();
    s.characters.emplace_back("abigail");
    CHECK_THROWS_AS(s.validate(), ValidationError);
    s = testing::tomi();
    s.events[0].text = "   ";
    CHECK_THROWS_AS(s.validate(), ValidationError);
    s = parse_story("Gina: Hi.\nLiam: Hello.\n");
    s.events[1].speaker = "Zoe";
    CHECK_THROWS_AS(s.validate(), ValidationError);
}

TEST_CASE("character identity folds case") {
    CHECK(CharacterId("Abigail") == CharacterId("ABIGAIL"));
    auto s = testing::tomi();
    CHECK(s.has_character("emily"));
    CHECK(s.find_character("EMILY")->name() == "Emily");
    CHECK_FALSE(s.has_character("coat"));
}

TEST_CASE("round trip through the serialized form") {
    std::vector<Story> stories{testing::tomi(), testing::melon(),
                               parse_story("Gina: Hi.\nLiam joined the conversation.\nLiam: Hello.\n")};
    for (std::uint64_t seed = 0; seed < 200; ++seed) {
        GrammarConfig cfg;
        cfg.seed = seed;
        cfg.num_characters = 2 + static_cast<int>(seed % 4);
        cfg.max_order = 1;
        cfg.allow_reentry = seed % 2 == 1;
        cfg.num_rooms = 1 + static_cast<int>(seed % 2);
        cfg.num_objects = cfg.num_rooms;
        stories.push_back(generate_story(cfg).story);
    }
    for (const auto& s : stories) {
        CHECK(parse_story(serialize_story(s)) == s);
        if (s.kind == StoryKind::EventBased) CHECK(parse_story(to_plain_text(s)).events == s.events);
    }
}

TEST_CASE("character identification is deterministic") {
    auto s = testing::melon();
    auto a = identify_characters(s);
    for (int i = 0; i < 5; ++i) CHECK(identify_characters(s) == a);
}

TEST_CASE("leading subjects of group events") {
    const auto& verbs = default_agentive_verbs();
    CHECK(leading_subjects("William, Lily, Aiden, Emma, and Isla entered the waiting room.", verbs) ==
          std::vector<std::string>{"William", "Lily", "Aiden", "Emma", "Isla"});
    CHECK(leading_subjects("The melon is in the green bathtub.", verbs).empty());
}

TEST_CASE("dataset lines round trip with questions") {
    DatasetItem item{testing::tomi(), {{"Where will Abigail search for the t-shirt?", 1, "cupboard"},
                                       {"Where is the t-shirt in the begining?", std::nullopt, std::nullopt}}};
    std::stringstream ss;
    write_dataset(ss, {item, item});
    auto back = read_dataset(ss);
    REQUIRE(back.size() == 2);
    CHECK(back[1].story == item.story);
    CHECK(back[1].questions == item.questions);
}

TEST_CASE("dataset errors carry the line number") {
    std::stringstream ss;
    ss << dataset_line({testing::tomi(), {}}) << "\n" << "{\"events\": []}\n";
    try {
        read_dataset(ss);
        FAIL("expected FormatError");
    } catch (const FormatError& e) {
        CHECK(e.line() == 2);
    }
}

}
