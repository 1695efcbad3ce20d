#include "enigmatom/story.hpp"

#include "enigmatom/error.hpp"
#include "enigmatom/text.hpp"

#include <algorithm>
#include <cctype>
#include <set>

namespace enigmatom {

using nlohmann::json;

CharacterId::CharacterId(std::string name) : name_(text::trim(name)), key_(text::to_lower(name_)) {
    if (name_.empty()) throw ValidationError("character name must be non-empty");
}

std::string_view to_string(StoryKind kind) {
    return kind == StoryKind::DialogueBased ? "dialogue" : "event";
}

bool Story::has_character(std::string_view name) const { return find_character(name).has_value(); }

std::optional<CharacterId> Story::find_character(std::string_view name) const {
    for (const auto& c : characters) {
        if (text::iequals(c.name(), name)) return c;
    }
    return std::nullopt;
}

void Story::validate() const {
    if (events.empty()) throw ValidationError("story has no events");
    for (std::size_t i = 0; i < events.size(); ++i) {
        const auto& e = events[i];
        if (e.index != static_cast<int>(i) + 1) {
            throw ValidationError("event indices must be contiguous from 1; found " +
                                  std::to_string(e.index) + " at position " + std::to_string(i + 1));
        }
        if (text::trim(e.text).empty()) {
            throw ValidationError("event " + std::to_string(e.index) + " has empty text");
        }
        if (e.speaker && !has_character(*e.speaker)) {
            throw ValidationError("speaker '" + *e.speaker + "' of event " +
                                  std::to_string(e.index) + " is not a story character");
        }
    }
    std::set<std::string> seen;
    for (const auto& c : characters) {
        if (!seen.insert(c.key()).second) {
            throw ValidationError("duplicate character '" + c.name() + "'");
        }
    }
}

const std::vector<std::string>& default_agentive_verbs() {
    static const std::vector<std::string> verbs = {
        "entered", "exited", "moved", "said", "likes", "hates", "made", "stayed",
        "joined", "left"};
    return verbs;
}

namespace {

bool is_article(std::string_view w) {
    return text::iequals(w, "the") || text::iequals(w, "a") || text::iequals(w, "an");
}

bool is_name_token(std::string_view w) {
    if (!text::is_capitalized(w) || is_article(w)) return false;
    return std::all_of(w.begin(), w.end(), [](char c) {
        return std::isalpha(static_cast<unsigned char>(c)) || c == '\'' || c == '-';
    });
}

void add_unique(std::vector<CharacterId>& out, const std::string& name) {
    CharacterId id(name);
    if (std::find(out.begin(), out.end(), id) == out.end()) out.push_back(std::move(id));
}

// Splits "Name: utterance". Returns nullopt when the line has no speaker prefix.
std::optional<std::pair<std::string, std::string>> split_speaker(const std::string& line) {
    auto colon = line.find(':');
    if (colon == std::string::npos || colon == 0) return std::nullopt;
    std::string head = line.substr(0, colon);
    auto ws = text::words(head);
    if (ws.empty() || ws.size() > 3) return std::nullopt;
    for (const auto& w : ws) {
        if (!is_name_token(w)) return std::nullopt;
    }
    return std::make_pair(text::join(ws, " "), text::trim(line.substr(colon + 1)));
}

// Strips a leading "12:" index; returns the index or nullopt.
std::optional<int> strip_index(std::string& line) {
    std::size_t i = 0;
    while (i < line.size() && std::isdigit(static_cast<unsigned char>(line[i]))) ++i;
    if (i == 0 || i >= line.size() || line[i] != ':') return std::nullopt;
    int idx = std::stoi(line.substr(0, i));
    line = text::trim(line.substr(i + 1));
    return idx;
}

Story assemble(std::vector<Event> events, StoryKind kind, json metadata,
               const std::vector<std::string>& declared) {
    Story story;
    story.events = std::move(events);
    story.kind = kind;
    story.metadata = std::move(metadata);
    if (story.events.empty()) throw ValidationError("story has no events");
    if (!declared.empty()) {
        for (const auto& name : declared) {
            CharacterId id(name);
            if (std::find(story.characters.begin(), story.characters.end(), id) !=
                story.characters.end()) {
                throw ValidationError("duplicate character '" + name + "'");
            }
            story.characters.push_back(std::move(id));
        }
        story.characters_declared = true;
    } else {
        story.characters = identify_characters(story);
    }
    story.validate();
    return story;
}

Story parse_plain_text(std::string_view raw) {
    std::vector<Event> events;
    bool any_speaker = false;
    int line_no = 0;
    for (auto line : text::split_lines(raw)) {
        ++line_no;
        line = text::trim(line);
        if (line.empty()) continue;
        if (line.rfind("- ", 0) == 0 || line == "-") {
            throw FormatError("bullet line is not an event", line_no);
        }
        if (auto idx = strip_index(line)) {
            if (*idx != static_cast<int>(events.size()) + 1) {
                throw FormatError("event index " + std::to_string(*idx) + " out of sequence",
                                  line_no);
            }
        }
        Event e;
        e.index = static_cast<int>(events.size()) + 1;
        if (auto sp = split_speaker(line)) {
            if (sp->second.empty()) throw FormatError("speaker with empty utterance", line_no);
            e.speaker = sp->first;
            e.text = sp->second;
            any_speaker = true;
        } else {
            e.text = line;
        }
        if (e.text.empty()) throw FormatError("empty event text", line_no);
        events.push_back(std::move(e));
    }
    return assemble(std::move(events),
                    any_speaker ? StoryKind::DialogueBased : StoryKind::EventBased,
                    json::object(), {});
}

int line_of_offset(std::string_view raw, std::size_t byte) {
    byte = std::min(byte, raw.size());
    return 1 + static_cast<int>(std::count(raw.begin(), raw.begin() + static_cast<long>(byte), '\n'));
}

}  // namespace

std::vector<std::string> leading_subjects(std::string_view line, const std::vector<std::string>& verbs) {
    std::vector<std::string> names;
    auto ws = text::words(line);
    std::size_t i = 0;
    bool expect_name = true;
    for (; i < ws.size(); ++i) {
        std::string w = ws[i];
        bool comma = !w.empty() && w.back() == ',';
        if (comma) w.pop_back();
        if (w == "and" && !names.empty()) {
            expect_name = true;
            continue;
        }
        if (!expect_name || !is_name_token(w)) break;
        names.push_back(w);
        expect_name = comma;
    }
    if (names.empty() || i >= ws.size()) return {};
    std::string verb = text::to_lower(ws[i]);
    while (!verb.empty() && std::ispunct(static_cast<unsigned char>(verb.back()))) verb.pop_back();
    if (std::find(verbs.begin(), verbs.end(), verb) == verbs.end()) return {};
    return names;
}

std::vector<CharacterId> identify_characters(const Story& story,
                                             const std::vector<std::string>& agentive_verbs) {
    if (story.characters_declared) return story.characters;
    std::vector<CharacterId> out;
    for (const auto& e : story.events) {
        if (e.speaker) add_unique(out, *e.speaker);
        if (story.kind == StoryKind::DialogueBased && e.speaker) continue;
        for (const auto& n : leading_subjects(e.text, agentive_verbs)) add_unique(out, n);
    }
    if (out.empty()) throw ValidationError("no character found in story");
    return out;
}

Story make_story(const std::vector<std::string>& texts, StoryKind kind,
                 std::vector<std::string> declared_characters) {
    std::vector<Event> events;
    for (const auto& t : texts) {
        Event e;
        e.index = static_cast<int>(events.size()) + 1;
        e.text = text::trim(t);
        events.push_back(std::move(e));
    }
    return assemble(std::move(events), kind, json::object(), declared_characters);
}

Story story_from_json(const json& doc, int line) {
    if (!doc.is_object()) throw FormatError("story document must be a JSON object", line);
    StoryKind kind = StoryKind::EventBased;
    if (doc.contains("kind")) {
        if (!doc["kind"].is_string()) throw FormatError("\"kind\" must be a string", line);
        auto k = doc["kind"].get<std::string>();
        if (k == "dialogue") {
            kind = StoryKind::DialogueBased;
        } else if (k != "event") {
            throw FormatError("unknown story kind '" + k + "'", line);
        }
    }
    if (!doc.contains("events") || !doc["events"].is_array()) {
        throw FormatError("\"events\" must be an array", line);
    }
    std::vector<Event> events;
    for (const auto& ev : doc["events"]) {
        Event e;
        e.index = static_cast<int>(events.size()) + 1;
        if (ev.is_string()) {
            e.text = text::trim(ev.get<std::string>());
        } else if (ev.is_object() && ev.contains("text") && ev["text"].is_string()) {
            e.text = text::trim(ev["text"].get<std::string>());
            if (ev.contains("speaker") && !ev["speaker"].is_null()) {
                if (!ev["speaker"].is_string()) {
                    throw FormatError("event " + std::to_string(e.index) + ": speaker must be a string",
                                      line);
                }
                e.speaker = text::trim(ev["speaker"].get<std::string>());
            }
        } else {
            throw FormatError("event " + std::to_string(e.index) + " lacks a \"text\" string", line);
        }
        if (e.text.empty()) throw FormatError("event " + std::to_string(e.index) + " is empty", line);
        events.push_back(std::move(e));
    }
    std::vector<std::string> declared;
    if (doc.contains("characters") && !doc["characters"].is_null()) {
        if (!doc["characters"].is_array()) throw FormatError("\"characters\" must be an array", line);
        for (const auto& c : doc["characters"]) {
            if (!c.is_string()) throw FormatError("character names must be strings", line);
            declared.push_back(c.get<std::string>());
        }
    }
    json metadata = doc.value("metadata", json::object());
    return assemble(std::move(events), kind, std::move(metadata), declared);
}

Story parse_story(std::string_view raw) {
    std::string trimmed = text::trim(raw);
    if (trimmed.empty()) throw ValidationError("story has no events");
    if (trimmed.front() != '{') return parse_plain_text(raw);
    json doc;
    try {
        doc = json::parse(raw);
    } catch (const json::parse_error& e) {
        throw FormatError(std::string("malformed JSON: ") + e.what(), line_of_offset(raw, e.byte));
    }
    return story_from_json(doc, 1);
}

json story_to_json(const Story& story) {
    json events = json::array();
    for (const auto& e : story.events) {
        json ev = {{"text", e.text}};
        if (e.speaker) ev["speaker"] = *e.speaker;
        events.push_back(std::move(ev));
    }
    json chars = json::array();
    for (const auto& c : story.characters) chars.push_back(c.name());
    json doc = {{"kind", std::string(to_string(story.kind))}, {"characters", chars}, {"events", events}};
    if (!story.metadata.empty()) doc["metadata"] = story.metadata;
    return doc;
}

std::string serialize_story(const Story& story) { return story_to_json(story).dump(); }

std::string to_plain_text(const Story& story) {
    std::string out;
    for (const auto& e : story.events) {
        if (e.speaker) out += *e.speaker + ": ";
        out += e.text;
        out += '\n';
    }
    return out;
}

std::string indexed_narrative(const Story& story, int prefix_len) {
    std::string out;
    int n = prefix_len < 0 ? static_cast<int>(story.events.size()) : prefix_len;
    for (int i = 1; i <= n; ++i) {
        const auto& e = story.event(i);
        out += std::to_string(i) + ": ";
        if (e.speaker) out += *e.speaker + ": ";
        out += e.text;
        out += '\n';
    }
    return out;
}

}  // namespace enigmatom
