#include "enigmatom/nkb.hpp"

#include "enigmatom/error.hpp"
#include "enigmatom/log.hpp"
#include "enigmatom/rule_backend.hpp"
#include "enigmatom/text.hpp"

#include <algorithm>
#include <future>
#include <map>
#include <set>
#include <tuple>

namespace enigmatom {

namespace {

bool is_time_entity(const std::string& entity) {
    static const std::vector<std::string> time_words = {
        "time", "minute", "minutes", "hour", "hours", "day", "days", "moment", "second",
        "seconds", "beginning", "end", "now", "today", "yesterday", "tomorrow"};
    for (const auto& w : text::words(text::normalize_phrase(entity))) {
        if (std::find(time_words.begin(), time_words.end(), w) != time_words.end()) return true;
    }
    return false;
}

void push_unique(std::vector<EntityAttribute>& out, EntityAttribute ea) {
    ea.entity = text::trim(ea.entity);
    ea.attribute = text::to_lower(text::trim(ea.attribute));
    if (ea.entity.empty() || ea.attribute.empty()) return;
    if (std::find(out.begin(), out.end(), ea) == out.end()) out.push_back(std::move(ea));
}

}  // namespace

std::vector<EntityAttribute> identify_key_entities(const Story& story,
                                                   std::span<const ToMQuestion> questions,
                                                   StateBackend& backend) {
    if (story.events.empty()) throw ValidationError("story has no events");
    if (questions.empty()) throw ValidationError("key entity identification needs questions");

    std::vector<EntityAttribute> mandated;
    for (const auto& q : questions) {
        push_unique(mandated, {q.target_entity, q.target_attribute});
        for (const auto& c : q.chain.characters()) push_unique(mandated, {c.name(), "location"});
    }
    std::vector<EntityAttribute> out;
    for (auto& ea : mandated) {
        if (out.size() == kMaxKeyEntities) break;
        push_unique(out, ea);
    }
    for (auto& ea : backend.propose_entities(story, questions)) {
        if (out.size() == kMaxKeyEntities) break;
        if (is_time_entity(ea.entity)) continue;
        push_unique(out, std::move(ea));
    }
    if (out.empty()) throw ExtractionError("no entities of interest after filtering");
    bool has_object = std::any_of(out.begin(), out.end(),
                                  [&](const EntityAttribute& ea) { return !story.has_character(ea.entity); });
    if (!has_object) throw ExtractionError("entities of interest must include a non-person entity");
    return out;
}

StateGeneration generate_states(const Story& story, std::span<const EntityAttribute> targets,
                                StateBackend& backend, int max_in_flight) {
    if (targets.empty()) throw ValidationError("state generation needs at least one target");
    const int n = static_cast<int>(story.size());
    std::vector<PrefixStates> per_event(static_cast<std::size_t>(n));

    auto run = [&](int i) { return backend.states_after(story, i, targets); };
    if (max_in_flight <= 1) {
        for (int i = 1; i <= n; ++i) per_event[static_cast<std::size_t>(i - 1)] = run(i);
    } else {
        for (int start = 1; start <= n; start += max_in_flight) {
            std::vector<std::future<PrefixStates>> batch;
            int end = std::min(n, start + max_in_flight - 1);
            for (int i = start; i <= end; ++i) batch.push_back(std::async(std::launch::async, run, i));
            for (int i = start; i <= end; ++i) {
                per_event[static_cast<std::size_t>(i - 1)] = batch[static_cast<std::size_t>(i - start)].get();
            }
        }
    }

    StateGeneration out;
    using Key = std::tuple<int, std::string, std::string>;
    std::map<Key, EntityStateRecord> latest;
    for (int i = 1; i <= n; ++i) {
        auto& ps = per_event[static_cast<std::size_t>(i - 1)];
        for (auto& line : ps.skipped_lines) {
            log::warn("skipped unparseable backend line at event " + std::to_string(i) + ": " + line);
            out.skipped_lines.push_back(std::move(line));
        }
        for (auto& r : ps.records) {
            if (r.event_index < 1 || r.event_index > i) {
                throw ProtocolError("backend returned a record for unknown event index " +
                                        std::to_string(r.event_index) + " (prefix " +
                                        std::to_string(i) + ")",
                                    r.render());
            }
            if (r.event_index != i) continue;
            Key k{r.event_index, text::to_lower(r.entity), text::to_lower(r.attribute)};
            latest.insert_or_assign(std::move(k), std::move(r));
        }
    }
    for (auto& [k, r] : latest) out.records.push_back(std::move(r));
    std::stable_sort(out.records.begin(), out.records.end(), record_less);
    return out;
}

std::vector<LocationAnchor> extract_locations(const Story& story, StateBackend& backend) {
    if (story.events.empty()) throw ValidationError("story has no events");
    // Containers nobody enters are not locations.
    std::set<std::string> entered, containers;
    for (const auto& ev : story.events) {
        const ParsedEvent p = parse_event(ev);
        const std::string place = text::normalize_place(p.place);
        if (p.shape == EventShape::Enter || p.shape == EventShape::Exit || p.shape == EventShape::Stay) {
            entered.insert(place);
        } else if (p.shape == EventShape::Move || p.shape == EventShape::Declare) {
            containers.insert(place);
        }
    }
    std::vector<LocationAnchor> out;
    for (const auto& name : backend.propose_locations(story)) {
        auto anchor = make_anchor(name);
        if (anchor.name.empty() || anchor.aliases.begin()->empty()) continue;
        const std::string norm = text::normalize_place(name);
        if (containers.contains(norm) && !entered.contains(norm)) continue;
        bool clash = std::any_of(out.begin(), out.end(), [&](const LocationAnchor& a) {
            for (const auto& al : anchor.aliases) {
                if (a.aliases.contains(al)) return true;
            }
            return false;
        });
        if (!clash) out.push_back(std::move(anchor));
    }
    if (out.empty()) throw ExtractionError("no room found in the story");
    return out;
}

const std::vector<std::string>& negation_tokens() {
    static const std::vector<std::string> t = {"outside", "absent", "left", "not in", "away"};
    return t;
}

std::optional<LocationAnchor> canonicalize_location(std::string_view raw,
                                                    std::span<const LocationAnchor> anchors) {
    std::string phrase = text::normalize_phrase(raw);
    for (const auto& neg : negation_tokens()) {
        if (text::contains_words(phrase, neg)) return std::nullopt;
    }
    std::string place = text::normalize_place(raw);
    if (place.empty()) return std::nullopt;
    for (const auto& a : anchors) {
        if (a.aliases.contains(place)) return a;
    }
    const LocationAnchor* found = nullptr;
    int hits = 0;
    for (const auto& a : anchors) {
        bool hit = std::any_of(a.aliases.begin(), a.aliases.end(), [&](const std::string& al) {
            return text::contains_words(place, al) || text::contains_words(al, place);
        });
        if (hit) {
            ++hits;
            found = &a;
        }
    }
    if (hits == 1) return *found;
    if (hits > 1) log::warn("location '" + std::string(raw) + "' matches several anchors; using null node");
    return std::nullopt;
}

std::vector<std::optional<std::string>> resolve_locations(std::string_view entity,
                                                          std::span<const EntityStateRecord> records,
                                                          std::span<const LocationAnchor> anchors,
                                                          int num_events) {
    std::vector<std::optional<std::string>> at(static_cast<std::size_t>(num_events) + 1);
    std::vector<const EntityStateRecord*> by_event(static_cast<std::size_t>(num_events) + 1, nullptr);
    for (const auto& r : records) {
        if (r.event_index >= 1 && r.event_index <= num_events && r.is_about(entity, "location")) {
            by_event[static_cast<std::size_t>(r.event_index)] = &r;
        }
    }
    for (int i = 1; i <= num_events; ++i) {
        auto idx = static_cast<std::size_t>(i);
        if (by_event[idx]) {
            auto a = canonicalize_location(by_event[idx]->state, anchors);
            at[idx] = a ? std::optional<std::string>(a->name) : std::nullopt;
        } else {
            at[idx] = at[idx - 1];
        }
    }
    return at;
}

}  // namespace enigmatom
