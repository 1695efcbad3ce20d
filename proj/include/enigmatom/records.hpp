#pragma once
// Entity-state records: the unit of NKB output.

#include <nlohmann/json.hpp>

#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

namespace enigmatom {

struct EntityAttribute {
    std::string entity;
    std::string attribute;

    // "location of melon"
    std::string render() const { return attribute + " of " + entity; }

    friend bool operator==(const EntityAttribute& a, const EntityAttribute& b);
};

// Parses "location of melon". Entity/attribute are trimmed; attribute lowercased.
std::optional<EntityAttribute> parse_entity_attribute(std::string_view s);

struct EntityStateRecord {
    int event_index = 0;
    std::string entity;
    std::string attribute;
    std::string state;

    // "[attribute] of [entity] becomes [state]"
    std::string render() const;

    bool is_about(std::string_view ent, std::string_view attr) const;

    friend bool operator==(const EntityStateRecord&, const EntityStateRecord&) = default;
};

// Sort key (event_index, entity, attribute), case-insensitive on names.
bool record_less(const EntityStateRecord& a, const EntityStateRecord& b);

// Parses "- 7: location of t-shirt becomes in basket" (leading dash and
// "Event" prefix optional).
std::optional<EntityStateRecord> parse_record_line(std::string_view line);

nlohmann::json record_to_json(const EntityStateRecord& r);
EntityStateRecord record_from_json(const nlohmann::json& j, int line = 1);

struct LocationAnchor {
    std::string name;
    std::set<std::string> aliases;  // normalized surface forms

    friend bool operator==(const LocationAnchor&, const LocationAnchor&) = default;
};

LocationAnchor make_anchor(std::string_view name);

}  // namespace enigmatom
