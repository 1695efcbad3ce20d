#pragma once
// Neural-knowledge-base abstraction: key entity identification, cumulative
// per-event state generation, and location anchors.

#include "enigmatom/question.hpp"
#include "enigmatom/records.hpp"
#include "enigmatom/story.hpp"

#include <optional>
#include <span>
#include <string>
#include <vector>

namespace enigmatom {

struct PrefixStates {
    std::vector<EntityStateRecord> records;
    std::vector<std::string> skipped_lines;  // unparseable backend output
};

struct BackendInfo {
    bool deterministic = false;
    std::string name;
};

// A backend answers three kinds of queries. The free functions below wrap
// them with the filtering, ordering, and validation rules.
class StateBackend {
public:
    virtual ~StateBackend() = default;
    virtual BackendInfo info() const = 0;

    // Candidate (entity, attribute) pairs, in the backend's preferred order.
    virtual std::vector<EntityAttribute> propose_entities(const Story& story,
                                                          std::span<const ToMQuestion> questions) = 0;

    // Room names mentioned in the story.
    virtual std::vector<std::string> propose_locations(const Story& story) = 0;

    // Records for event `prefix_len`, given events 1..prefix_len. Records for
    // earlier events are ignored by the caller.
    virtual PrefixStates states_after(const Story& story, int prefix_len,
                                      std::span<const EntityAttribute> targets) = 0;
};

inline constexpr std::size_t kMaxKeyEntities = 5;

// Question-mandated pairs first: each question's target, then each chain
// member's location. Backend proposals fill the rest up to five.
std::vector<EntityAttribute> identify_key_entities(const Story& story,
                                                   std::span<const ToMQuestion> questions,
                                                   StateBackend& backend);

struct StateGeneration {
    std::vector<EntityStateRecord> records;
    std::vector<std::string> skipped_lines;
};

// Runs the cumulative-prefix protocol over every event. Records are sorted by
// (event_index, entity, attribute); later duplicates of a key replace earlier
// ones. `max_in_flight` > 1 issues prefix calls concurrently.
StateGeneration generate_states(const Story& story, std::span<const EntityAttribute> targets,
                                StateBackend& backend, int max_in_flight = 1);

// Rooms only; at least one.
std::vector<LocationAnchor> extract_locations(const Story& story, StateBackend& backend);

// Tokens that map a location phrase to the null node.
const std::vector<std::string>& negation_tokens();

// Maps a free-text location to an anchor. The null node is nullopt.
std::optional<LocationAnchor> canonicalize_location(std::string_view raw,
                                                    std::span<const LocationAnchor> anchors);

// Per-event resolved location of `entity` after each event (index 0 is the
// state before event 1, i.e. unknown). Size story.size() + 1.
std::vector<std::optional<std::string>> resolve_locations(
    std::string_view entity, std::span<const EntityStateRecord> records,
    std::span<const LocationAnchor> anchors, int num_events);

}  // namespace enigmatom
