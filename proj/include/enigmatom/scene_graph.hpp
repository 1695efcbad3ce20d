#pragma once
// Spatial scene graphs (omniscient and character-centric), the masking
// operator, and masked-event retrieval.

#include "enigmatom/question.hpp"
#include "enigmatom/records.hpp"
#include "enigmatom/story.hpp"

#include <nlohmann/json.hpp>

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace enigmatom {

// An anchor name, or nullopt for the null node.
using LocationNode = std::optional<std::string>;

class SceneGraph {
public:
    SceneGraph() = default;
    // assignment[i] is the node of event i + 1.
    explicit SceneGraph(std::vector<LocationNode> assignment);

    int size() const noexcept { return static_cast<int>(assignment_.size()); }
    const LocationNode& at(int event_index) const;
    const std::vector<LocationNode>& assignment() const noexcept { return assignment_; }
    // Anchors in use, first-seen order. Never contains the null node.
    const std::vector<std::string>& location_set() const noexcept { return locations_; }
    // Event indices with a non-null node, increasing.
    std::vector<int> surviving() const;

    // {"assignment": {"<index>": "<anchor>" | null}}
    nlohmann::json to_json() const;
    static SceneGraph from_json(const nlohmann::json& j);

    friend bool operator==(const SceneGraph& a, const SceneGraph& b) { return a.assignment_ == b.assignment_; }

private:
    std::vector<LocationNode> assignment_;
    std::vector<std::string> locations_;
};

struct MaskedView {
    std::vector<int> surviving;
    BeliefChain chain;
    std::vector<std::string> texts;  // aligned with `surviving`
};

SceneGraph build_omniscient_graph(const Story& story, std::span<const EntityStateRecord> records,
                                  std::span<const LocationAnchor> anchors);

SceneGraph build_character_graph(const Story& story, std::span<const EntityStateRecord> records,
                                 std::span<const LocationAnchor> anchors, const CharacterId& c,
                                 const SceneGraph& omniscient);

// result(i) = g(i) when both g(i) and gc(i) are non-null, else the null node.
SceneGraph mask(const SceneGraph& g, const SceneGraph& gc);
// Left fold of mask; an empty chain returns g.
SceneGraph mask_chain(const SceneGraph& g, std::span<const SceneGraph> chain);

MaskedView retrieve_events(const SceneGraph& masked, std::span<const std::string> augmented,
                           BeliefChain chain = {});

// The omniscient graph plus one graph per character, built once per story.
struct SceneGraphSet {
    SceneGraph omniscient;
    std::map<std::string, SceneGraph> by_character;  // keyed by CharacterId::key()

    static SceneGraphSet build(const Story& story, std::span<const EntityStateRecord> records,
                               std::span<const LocationAnchor> anchors);
    std::vector<SceneGraph> chain_graphs(const BeliefChain& chain) const;
    SceneGraph masked(const BeliefChain& chain) const;
    nlohmann::json to_json(const Story& story) const;
};

struct GraphCounts {
    std::uint64_t enigma = 0;
    std::uint64_t symbolic_tom = 0;
    friend bool operator==(const GraphCounts&, const GraphCounts&) = default;
};

// Graphs to build for m characters and ToM orders up to k: one omniscient
// plus m character graphs, against sum_{i=1..k} m!/(m-i)! belief graphs.
GraphCounts graph_build_counts(int m, int k);

}  // namespace enigmatom
