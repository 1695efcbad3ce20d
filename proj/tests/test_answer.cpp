#include "support.hpp"

#include "enigmatom/answer.hpp"
#include "enigmatom/remote_backend.hpp"

#include <doctest.h>
#include <nlohmann/json.hpp>

#include <random>

using namespace enigmatom;

namespace {

ParsedAnswer parse_case(const nlohmann::json& c) {
    if (!c.contains("candidates")) return parse_answer(c["input"].get<std::string>());
    auto cands = c["candidates"].get<std::vector<std::string>>();
    return parse_answer(c["input"].get<std::string>(), std::span<const std::string>(cands));
}

}  // namespace

TEST_SUITE("answer") {

TEST_CASE("fixture cases") {
    auto cases = nlohmann::json::parse(read_text_file(testing::fixture("answer_parsing.json")));
    REQUIRE(cases.size() == 30);
    for (const auto& c : cases) {
        CAPTURE(c["name"].get<std::string>());
        auto got = parse_case(c);
        const auto& e = c["expected"];
        CHECK(got.text == e["text"].get<std::string>());
        CHECK(got.tagged == e["tagged"].get<bool>());
        CHECK(got.unclosed == e["unclosed"].get<bool>());
        CHECK(got.no_tags == e["no_tags"].get<bool>());
        CHECK(got.matched == e["matched"].get<bool>());
        CHECK(got.ambiguous == e["ambiguous"].get<bool>());
    }
}

TEST_CASE("scoring") {
    std::vector<std::string> space{"green bucket", "red bucket"};
    CHECK(answer_correct(parse_answer("<answer>Red bucket.</answer>", std::span<const std::string>(space)), "red bucket"));
    CHECK_FALSE(answer_correct(parse_answer("<answer>bucket</answer>", std::span<const std::string>(space)), "red bucket"));
    CHECK_FALSE(answer_correct(parse_answer("<answer>green bucket</answer>"), "red bucket"));
    CHECK(parse_answer("no tags").flagged());
    CHECK_FALSE(parse_answer("<answer>x</answer>").flagged());
}

TEST_CASE("parsing never throws") {
    std::mt19937_64 rng(11);
    const std::string alphabet = "<>/answerANSWER \n\t.-_!?abc\x01\xff";
    std::vector<std::string> space{"a", "b c", ""};
    for (int t = 0; t < 5000; ++t) {
        std::string s;
        for (int i = 0, n = static_cast<int>(rng() % 60); i < n; ++i) s += alphabet[rng() % alphabet.size()];
        if (rng() % 3 == 0) s.insert(rng() % (s.size() + 1), rng() % 2 ? "<answer>" : "</answer>");
        CHECK_NOTHROW(parse_answer(s));
        CHECK_NOTHROW(parse_answer(s, std::span<const std::string>(space)));
    }
}

}
