#include "enigmatom/scene_graph.hpp"

#include "enigmatom/error.hpp"
#include "enigmatom/nkb.hpp"
#include "enigmatom/text.hpp"

#include <algorithm>
#include <limits>

namespace enigmatom {

SceneGraph::SceneGraph(std::vector<LocationNode> assignment) : assignment_(std::move(assignment)) {
    for (const auto& node : assignment_) {
        if (node && std::find(locations_.begin(), locations_.end(), *node) == locations_.end()) {
            locations_.push_back(*node);
        }
    }
}

const LocationNode& SceneGraph::at(int event_index) const {
    if (event_index < 1 || event_index > size()) {
        throw ValidationError("event index " + std::to_string(event_index) + " outside scene graph");
    }
    return assignment_[static_cast<std::size_t>(event_index - 1)];
}

std::vector<int> SceneGraph::surviving() const {
    std::vector<int> out;
    for (int i = 1; i <= size(); ++i) {
        if (at(i)) out.push_back(i);
    }
    return out;
}

nlohmann::json SceneGraph::to_json() const {
    nlohmann::json a = nlohmann::json::object();
    for (int i = 1; i <= size(); ++i) {
        const auto& n = at(i);
        a[std::to_string(i)] = n ? nlohmann::json(*n) : nlohmann::json(nullptr);
    }
    return {{"assignment", a}};
}

SceneGraph SceneGraph::from_json(const nlohmann::json& j) {
    const auto& a = j.at("assignment");
    std::vector<LocationNode> nodes(a.size());
    for (const auto& [k, v] : a.items()) {
        int idx = std::stoi(k);
        if (idx < 1 || idx > static_cast<int>(a.size())) throw ValidationError("scene graph index " + k + " out of range");
        nodes[static_cast<std::size_t>(idx - 1)] = v.is_null() ? LocationNode{} : LocationNode{v.get<std::string>()};
    }
    return SceneGraph(std::move(nodes));
}

namespace {

// Characters acting in an event: the speaker, or the leading subjects.
std::vector<CharacterId> event_actors(const Story& story, const Event& e) {
    std::vector<CharacterId> out;
    if (e.speaker) {
        if (auto c = story.find_character(*e.speaker)) out.push_back(*c);
        return out;
    }
    for (const auto& n : leading_subjects(e.text, default_agentive_verbs())) {
        if (auto c = story.find_character(n)) out.push_back(*c);
    }
    return out;
}

struct Tracks {
    // resolved[c][i]: c's node after event i; has_record[c][i]: a location
    // record for c exists at i.
    std::map<std::string, std::vector<LocationNode>> resolved;
    std::map<std::string, std::vector<bool>> has_record;
};

Tracks track_characters(const Story& story, std::span<const EntityStateRecord> records,
                        std::span<const LocationAnchor> anchors) {
    const int n = static_cast<int>(story.size());
    Tracks t;
    for (const auto& c : story.characters) {
        t.resolved[c.key()] = resolve_locations(c.name(), records, anchors, n);
        t.has_record[c.key()] = std::vector<bool>(static_cast<std::size_t>(n) + 1, false);
    }
    for (const auto& r : records) {
        if (!text::iequals(r.attribute, "location") || r.event_index < 1 || r.event_index > n) continue;
        if (auto c = story.find_character(r.entity)) t.has_record[c->key()][static_cast<std::size_t>(r.event_index)] = true;
    }
    return t;
}

// Where c stands while witnessing event i. A character whose record at i
// takes it to the null node witnessed that departure from its prior room.
LocationNode observation_node(const Tracks& t, const CharacterId& c, int i) {
    const auto& res = t.resolved.at(c.key());
    const auto idx = static_cast<std::size_t>(i);
    if (res[idx]) return res[idx];
    if (t.has_record.at(c.key())[idx]) return res[idx - 1];
    return std::nullopt;
}

}  // namespace

SceneGraph build_omniscient_graph(const Story& story, std::span<const EntityStateRecord> records,
                                  std::span<const LocationAnchor> anchors) {
    if (anchors.empty()) throw ConfigError("scene graph construction needs at least one location anchor");
    const int n = static_cast<int>(story.size());
    const Tracks tracks = track_characters(story, records, anchors);

    std::vector<std::vector<CharacterId>> actors(static_cast<std::size_t>(n) + 1);
    std::vector<LocationNode> actor_room(static_cast<std::size_t>(n) + 1);
    for (int i = 1; i <= n; ++i) {
        actors[static_cast<std::size_t>(i)] = event_actors(story, story.event(i));
        for (const auto& a : actors[static_cast<std::size_t>(i)]) {
            if (auto node = observation_node(tracks, a, i)) {
                actor_room[static_cast<std::size_t>(i)] = node;
                break;
            }
        }
    }

    // Rooms of containers: explicit "location of <container> becomes in <room>"
    // records anywhere in the story win over rooms inferred from an actor
    // placing something in the container.
    std::map<std::string, std::string> declared_room;
    std::map<std::string, std::string> inferred_room;
    for (const auto& r : records) {
        if (!text::iequals(r.attribute, "location") || story.has_character(r.entity)) continue;
        if (r.event_index < 1 || r.event_index > n) continue;
        if (auto room = canonicalize_location(r.state, anchors)) {
            declared_room.try_emplace(text::normalize_phrase(r.entity), room->name);
        } else if (auto ar = actor_room[static_cast<std::size_t>(r.event_index)]) {
            inferred_room.try_emplace(text::normalize_place(r.state), *ar);
        }
    }
    auto container_room = [&](const std::string& container) -> LocationNode {
        if (auto it = declared_room.find(container); it != declared_room.end()) return it->second;
        if (auto it = inferred_room.find(container); it != inferred_room.end()) return it->second;
        return std::nullopt;
    };

    std::vector<LocationNode> assignment(static_cast<std::size_t>(n));
    for (int i = 1; i <= n; ++i) {
        const auto idx = static_cast<std::size_t>(i);
        LocationNode node;
        if (!actors[idx].empty()) {
            node = actor_room[idx];
        } else {
            bool declaration = false;
            for (const auto& r : records) {
                if (r.event_index != i || !text::iequals(r.attribute, "location") || story.has_character(r.entity)) {
                    continue;
                }
                declaration = true;
                if (auto room = canonicalize_location(r.state, anchors)) {
                    node = room->name;
                } else {
                    node = container_room(text::normalize_place(r.state));
                }
                if (node) break;
            }
            // An undeclared container is taken to be in the current scene.
            if (declaration && !node && i > 1) node = assignment[idx - 2];
        }
        assignment[idx - 1] = node;
    }
    return SceneGraph(std::move(assignment));
}

SceneGraph build_character_graph(const Story& story, std::span<const EntityStateRecord> records,
                                 std::span<const LocationAnchor> anchors, const CharacterId& c,
                                 const SceneGraph& omniscient) {
    if (!story.has_character(c.name())) {
        throw ValidationError("'" + c.name() + "' is not a character of the story");
    }
    if (omniscient.size() != static_cast<int>(story.size())) {
        throw ValidationError("omniscient graph does not cover the story");
    }
    const Tracks tracks = track_characters(story, records, anchors);
    std::vector<LocationNode> assignment(story.size());
    for (int i = 1; i <= omniscient.size(); ++i) {
        const auto& room = omniscient.at(i);
        if (room && observation_node(tracks, c, i) == room) assignment[static_cast<std::size_t>(i - 1)] = room;
    }
    return SceneGraph(std::move(assignment));
}

SceneGraph mask(const SceneGraph& g, const SceneGraph& gc) {
    if (g.size() != gc.size()) {
        throw ValidationError("cannot mask graphs over different event sets (" + std::to_string(g.size()) +
                              " vs " + std::to_string(gc.size()) + ")");
    }
    std::vector<LocationNode> out(static_cast<std::size_t>(g.size()));
    for (int i = 1; i <= g.size(); ++i) {
        if (g.at(i) && gc.at(i)) out[static_cast<std::size_t>(i - 1)] = g.at(i);
    }
    return SceneGraph(std::move(out));
}

SceneGraph mask_chain(const SceneGraph& g, std::span<const SceneGraph> chain) {
    SceneGraph acc = g;
    for (const auto& gc : chain) acc = mask(acc, gc);
    return acc;
}

MaskedView retrieve_events(const SceneGraph& masked, std::span<const std::string> augmented, BeliefChain chain) {
    MaskedView v;
    v.chain = std::move(chain);
    for (int i : masked.surviving()) {
        v.surviving.push_back(i);
        if (static_cast<std::size_t>(i) <= augmented.size()) v.texts.push_back(augmented[static_cast<std::size_t>(i - 1)]);
    }
    return v;
}

SceneGraphSet SceneGraphSet::build(const Story& story, std::span<const EntityStateRecord> records,
                                   std::span<const LocationAnchor> anchors) {
    SceneGraphSet s;
    s.omniscient = build_omniscient_graph(story, records, anchors);
    for (const auto& c : story.characters) {
        s.by_character.emplace(c.key(), build_character_graph(story, records, anchors, c, s.omniscient));
    }
    return s;
}

std::vector<SceneGraph> SceneGraphSet::chain_graphs(const BeliefChain& chain) const {
    std::vector<SceneGraph> out;
    for (const auto& c : chain.characters()) {
        auto it = by_character.find(c.key());
        if (it == by_character.end()) throw ValidationError("no scene graph for '" + c.name() + "'");
        out.push_back(it->second);
    }
    return out;
}

SceneGraph SceneGraphSet::masked(const BeliefChain& chain) const {
    auto graphs = chain_graphs(chain);
    return mask_chain(omniscient, graphs);
}

nlohmann::json SceneGraphSet::to_json(const Story& story) const {
    nlohmann::json chars = nlohmann::json::object();
    for (const auto& c : story.characters) chars[c.name()] = by_character.at(c.key()).to_json();
    return {{"omniscient", omniscient.to_json()}, {"characters", chars}};
}

GraphCounts graph_build_counts(int m, int k) {
    if (m < 1) throw ValidationError("graph counts need at least one character");
    if (k < 0) throw ValidationError("ToM order must be non-negative");
    if (k > m) {
        throw ValidationError("ToM order " + std::to_string(k) + " exceeds the " + std::to_string(m) +
                              " characters available to an acyclic chain");
    }
    GraphCounts out;
    out.enigma = static_cast<std::uint64_t>(m) + 1;
    std::uint64_t perms = 1;
    for (int i = 1; i <= k; ++i) {
        const auto factor = static_cast<std::uint64_t>(m - i + 1);
        if (perms > std::numeric_limits<std::uint64_t>::max() / factor) throw ValidationError("graph count overflows 64 bits");
        perms *= factor;
        if (out.symbolic_tom > std::numeric_limits<std::uint64_t>::max() - perms) {
            throw ValidationError("graph count overflows 64 bits");
        }
        out.symbolic_tom += perms;
    }
    return out;
}

}  // namespace enigmatom
