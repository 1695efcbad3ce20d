#pragma once
// Knowledge injection: entity-state bullets appended to their events.

#include "enigmatom/records.hpp"
#include "enigmatom/story.hpp"

#include <span>
#include <string>
#include <vector>

namespace enigmatom {

struct AugmentedEvent {
    int index = 0;
    std::string base_text;              // speaker prefix included for utterances
    std::vector<std::string> injected;  // rendered records

    // base_text, then one "- " bullet line per injected record.
    std::string render() const;
};

// Every event once, in order. Character location records are left out;
// they drive the scene graphs instead.
std::vector<AugmentedEvent> inject(const Story& story, std::span<const EntityStateRecord> records);

// Events rendered without bullets; the input to masking with injection off.
std::vector<AugmentedEvent> plain_events(const Story& story);

std::vector<std::string> render_all(std::span<const AugmentedEvent> events);

// "i: " numbered block with bullets under each event.
std::string render_augmented(std::span<const AugmentedEvent> events);

// Drops every bullet line and index prefix, leaving one event per line.
std::string strip_bullets(std::string_view augmented);

}  // namespace enigmatom
