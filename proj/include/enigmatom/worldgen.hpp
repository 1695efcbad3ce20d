#pragma once
// Grammar-driven generator of false-belief stories with oracle gold answers.

#include "enigmatom/dataset.hpp"
#include "enigmatom/question.hpp"
#include "enigmatom/story.hpp"

#include <nlohmann/json.hpp>

#include <cstdint>
#include <vector>

namespace enigmatom {

struct GrammarConfig {
    int num_characters = 3;           // 2..5
    int num_rooms = 1;                // room episodes, each followed by a regroup
    int num_objects = 1;              // spread over the episodes; >= num_rooms
    int num_containers_per_room = 3;  // >= 2
    int moves_per_room = 1;           // >= 1
    int max_order = 2;                // 1..4, <= num_characters
    std::uint64_t seed = 0;
    // ToMi-style episodes (single entries, container declarations, exits
    // followed by re-entries) instead of HiToM-style group scenes.
    bool allow_reentry = false;
    double distractor_rate = 0.25;
    int questions_per_order = 1;

    void validate() const;
    nlohmann::json to_json() const;
    static GrammarConfig from_json(const nlohmann::json& j);
};

struct GeneratedQuestion {
    ToMQuestion question;
    std::string gold;
};

struct GeneratedStory {
    Story story;
    std::vector<GeneratedQuestion> questions;

    DatasetItem to_item() const;
};

inline constexpr const char* kRegroupRoom = "waiting room";

// Deterministic in the config (seed included).
GeneratedStory generate_story(const GrammarConfig& config);

// `count` stories using seeds seed, seed+1, ...
std::vector<GeneratedStory> generate_batch(GrammarConfig config, int count);

}  // namespace enigmatom
