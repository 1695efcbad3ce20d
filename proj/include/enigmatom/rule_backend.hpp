#pragma once
// Deterministic NKB backend over the synthetic story grammar.

#include "enigmatom/nkb.hpp"

#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace enigmatom {

// Ground facts the rule engine has read so far. Keys are lowercased names.
struct RuleWorldState {
    std::map<std::string, std::optional<std::string>> char_room;
    std::map<std::string, std::string> obj_container;
    std::map<std::string, std::string> container_room;
    std::map<std::string, std::vector<std::string>> container_contents;
    std::vector<std::string> rooms;  // first-seen order

    bool is_room(const std::string& name) const;
    bool is_container(const std::string& name) const;

    friend bool operator==(const RuleWorldState&, const RuleWorldState&) = default;
};

inline constexpr const char* kConversationRoom = "conversation";

// Production of the story grammar an event text matches.
enum class EventShape { Enter, Exit, Move, Stay, Declare, Distractor, Join, Leave, Utterance, Other };

struct ParsedEvent {
    EventShape shape = EventShape::Other;
    std::vector<std::string> actors;
    std::string place;   // room for Enter/Exit/Stay, container for Move/Declare
    std::string object;  // Move/Declare subject
};

ParsedEvent parse_event(const Event& event);

// Applies one event. Unrecognised text leaves the world unchanged.
std::pair<RuleWorldState, std::vector<EntityStateRecord>> rule_backend_apply(RuleWorldState world,
                                                                             const Event& event);

class RuleBackend : public StateBackend {
public:
    BackendInfo info() const override { return {true, "rule"}; }

    std::vector<EntityAttribute> propose_entities(const Story& story,
                                                  std::span<const ToMQuestion> questions) override;
    std::vector<std::string> propose_locations(const Story& story) override;
    PrefixStates states_after(const Story& story, int prefix_len,
                              std::span<const EntityAttribute> targets) override;
};

}  // namespace enigmatom
