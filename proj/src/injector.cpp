#include "enigmatom/injector.hpp"

#include "enigmatom/text.hpp"

#include <algorithm>
#include <cctype>
#include <tuple>

namespace enigmatom {

namespace {

std::string base_of(const Event& e) { return e.speaker ? *e.speaker + ": " + e.text : e.text; }

}  // namespace

std::string AugmentedEvent::render() const {
    std::string out = base_text;
    for (const auto& b : injected) out += "\n- " + b;
    return out;
}

std::vector<AugmentedEvent> plain_events(const Story& story) {
    std::vector<AugmentedEvent> out;
    for (const auto& e : story.events) out.push_back({e.index, base_of(e), {}});
    return out;
}

std::vector<AugmentedEvent> inject(const Story& story, std::span<const EntityStateRecord> records) {
    auto out = plain_events(story);
    std::vector<const EntityStateRecord*> kept;
    for (const auto& r : records) {
        if (r.event_index < 1 || r.event_index > static_cast<int>(story.size())) continue;
        if (text::iequals(r.attribute, "location") && story.has_character(r.entity)) continue;
        kept.push_back(&r);
    }
    std::stable_sort(kept.begin(), kept.end(), [](const EntityStateRecord* a, const EntityStateRecord* b) {
        return std::forward_as_tuple(a->event_index, text::to_lower(a->entity), text::to_lower(a->attribute)) <
               std::forward_as_tuple(b->event_index, text::to_lower(b->entity), text::to_lower(b->attribute));
    });
    for (const auto* r : kept) out[static_cast<std::size_t>(r->event_index - 1)].injected.push_back(r->render());
    return out;
}

std::vector<std::string> render_all(std::span<const AugmentedEvent> events) {
    std::vector<std::string> out;
    out.reserve(events.size());
    for (const auto& e : events) out.push_back(e.render());
    return out;
}

std::string render_augmented(std::span<const AugmentedEvent> events) {
    std::string out;
    for (const auto& e : events) {
        out += std::to_string(e.index) + ": " + e.render() + "\n";
    }
    return out;
}

std::string strip_bullets(std::string_view augmented) {
    std::string out;
    for (const auto& raw : text::split_lines(augmented)) {
        if (raw.rfind("- ", 0) == 0) continue;
        std::string line = raw;
        std::size_t i = 0;
        while (i < line.size() && std::isdigit(static_cast<unsigned char>(line[i]))) ++i;
        if (i > 0 && i + 1 < line.size() && line[i] == ':' && line[i + 1] == ' ') line = line.substr(i + 2);
        out += line + "\n";
    }
    return out;
}

}  // namespace enigmatom
