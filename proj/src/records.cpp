#include "enigmatom/records.hpp"

#include "enigmatom/error.hpp"
#include "enigmatom/text.hpp"

#include <cctype>
#include <regex>
#include <tuple>

namespace enigmatom {

bool operator==(const EntityAttribute& a, const EntityAttribute& b) {
    return text::iequals(a.entity, b.entity) && text::iequals(a.attribute, b.attribute);
}

std::optional<EntityAttribute> parse_entity_attribute(std::string_view s) {
    std::string line = text::trim(s);
    while (!line.empty() && (line.back() == '.' || line.back() == ',')) line.pop_back();
    auto pos = text::to_lower(line).find(" of ");
    if (pos == std::string::npos) return std::nullopt;
    EntityAttribute ea{text::trim(line.substr(pos + 4)), text::to_lower(text::trim(line.substr(0, pos)))};
    if (ea.entity.empty() || ea.attribute.empty()) return std::nullopt;
    return ea;
}

std::string EntityStateRecord::render() const {
    return attribute + " of " + entity + " becomes " + state;
}

bool EntityStateRecord::is_about(std::string_view ent, std::string_view attr) const {
    return text::iequals(entity, ent) && text::iequals(attribute, attr);
}

bool record_less(const EntityStateRecord& a, const EntityStateRecord& b) {
    return std::forward_as_tuple(a.event_index, text::to_lower(a.entity), text::to_lower(a.attribute)) <
           std::forward_as_tuple(b.event_index, text::to_lower(b.entity), text::to_lower(b.attribute));
}

std::optional<EntityStateRecord> parse_record_line(std::string_view raw) {
    static const std::regex re(
        R"(^\s*(?:[-*]\s*)?(?:\[\s*)?(?:event\s*)?(\d+)\s*\]?\s*:\s*(.+?)\s+of\s+(.+?)\s+becomes\s+(.+?)\s*\.?\s*$)",
        std::regex::icase);
    std::string line(raw);
    std::smatch m;
    if (!std::regex_match(line, m, re)) return std::nullopt;
    EntityStateRecord r;
    r.event_index = std::stoi(m[1].str());
    r.attribute = text::to_lower(text::trim(m[2].str()));
    r.entity = text::trim(m[3].str());
    r.state = text::trim(m[4].str());
    if (r.attribute.empty() || r.entity.empty() || r.state.empty()) return std::nullopt;
    return r;
}

nlohmann::json record_to_json(const EntityStateRecord& r) {
    return {{"event_index", r.event_index}, {"entity", r.entity}, {"attribute", r.attribute},
            {"state", r.state}};
}

EntityStateRecord record_from_json(const nlohmann::json& j, int line) {
    try {
        EntityStateRecord r;
        r.event_index = j.at("event_index").get<int>();
        r.entity = j.at("entity").get<std::string>();
        r.attribute = j.at("attribute").get<std::string>();
        r.state = j.at("state").get<std::string>();
        return r;
    } catch (const nlohmann::json::exception& e) {
        throw FormatError(std::string("bad record: ") + e.what(), line);
    }
}

LocationAnchor make_anchor(std::string_view name) {
    LocationAnchor a;
    a.name = text::trim(name);
    a.aliases.insert(text::normalize_place(name));
    return a;
}

}  // namespace enigmatom
