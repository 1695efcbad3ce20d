#pragma once
// Brute-force epistemic simulator over grammar stories. Reads event text
// directly and shares no code with the NKB or scene-graph path.

#include "enigmatom/question.hpp"
#include "enigmatom/story.hpp"

#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

namespace enigmatom::oracle {

struct WorldState {
    std::map<std::string, std::optional<std::string>> char_room;  // lowercased keys
    std::map<std::string, std::string> obj_container;
    std::map<std::string, std::string> container_room;
};

// Per event: the room it happens in (nullopt if none) and who witnesses it.
struct EventTrace {
    std::optional<std::string> room;
    std::set<std::string> observers;  // lowercased character names
};

std::vector<EventTrace> trace_story(const Story& story);

// Final ground-truth world after every event.
WorldState simulate_world(const Story& story);

std::set<int> observed_set(const Story& story, const CharacterId& c);

// store_at[j] is the object->container belief at chain prefix c_1..c_j;
// updates[j] lists the events applied at that prefix.
struct BeliefStore {
    std::vector<std::map<std::string, std::string>> store_at;
    std::vector<std::vector<int>> updates;
};

BeliefStore simulate_belief_store(const Story& story, const BeliefChain& chain);

// Container the innermost believer of `chain` (as seen through the outer
// believers) holds for `entity`; its initial container if never updated.
std::string simulate_beliefs(const Story& story, const BeliefChain& chain, const std::string& entity);

// Container named by the first declaration of `entity`.
std::optional<std::string> initial_container(const Story& story, const std::string& entity);

}  // namespace enigmatom::oracle
