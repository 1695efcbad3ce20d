#pragma once
// Event/story/dialogue data model, its serialized forms, and character
// identification.

#include <nlohmann/json.hpp>

#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace enigmatom {

// Character name with case-insensitive identity. Stored in first-seen casing.
class CharacterId {
public:
    explicit CharacterId(std::string name);

    const std::string& name() const noexcept { return name_; }
    // Case-folded key for maps and comparisons.
    const std::string& key() const noexcept { return key_; }

    friend bool operator==(const CharacterId& a, const CharacterId& b) { return a.key_ == b.key_; }
    friend auto operator<=>(const CharacterId& a, const CharacterId& b) { return a.key_ <=> b.key_; }

private:
    std::string name_;
    std::string key_;
};

struct Event {
    int index = 0;  // 1-based position in the story
    std::string text;
    std::optional<std::string> speaker;

    friend bool operator==(const Event&, const Event&) = default;
};

enum class StoryKind { EventBased, DialogueBased };

std::string_view to_string(StoryKind kind);

struct Story {
    std::vector<Event> events;
    std::vector<CharacterId> characters;
    StoryKind kind = StoryKind::EventBased;
    nlohmann::json metadata = nlohmann::json::object();
    // True when `characters` came from the document rather than the heuristic.
    bool characters_declared = false;

    std::size_t size() const noexcept { return events.size(); }
    const Event& event(int index) const { return events.at(static_cast<std::size_t>(index - 1)); }
    bool has_character(std::string_view name) const;
    std::optional<CharacterId> find_character(std::string_view name) const;

    // Throws ValidationError when any Story/Event invariant is broken.
    void validate() const;

    friend bool operator==(const Story& a, const Story& b) {
        return a.events == b.events && a.characters == b.characters && a.kind == b.kind &&
               a.metadata == b.metadata;
    }
};

// Builds a validated story from raw event texts; characters are identified.
Story make_story(const std::vector<std::string>& texts,
                 StoryKind kind = StoryKind::EventBased,
                 std::vector<std::string> declared_characters = {});

// Accepts the story JSON document or the one-event-per-line text format.
Story parse_story(std::string_view raw);
Story story_from_json(const nlohmann::json& doc, int line = 1);

nlohmann::json story_to_json(const Story& story);
std::string serialize_story(const Story& story);

// Plain-text rendering: "Name: utterance" for speakers, else the bare text.
std::string to_plain_text(const Story& story);

// "1: text" lines, the form handed to backends.
std::string indexed_narrative(const Story& story, int prefix_len = -1);

// Verbs that mark a capitalized subject as an agent.
const std::vector<std::string>& default_agentive_verbs();

// Capitalized leading subjects of events whose first verb is agentive.
// Returns the story's declared characters unchanged when present.
std::vector<CharacterId> identify_characters(
    const Story& story,
    const std::vector<std::string>& agentive_verbs = default_agentive_verbs());

// Names in the leading subject of `text` ("A, B and C entered ...") when
// followed by a verb from `verbs`. Empty otherwise.
std::vector<std::string> leading_subjects(std::string_view text,
                                          const std::vector<std::string>& verbs);

}  // namespace enigmatom
