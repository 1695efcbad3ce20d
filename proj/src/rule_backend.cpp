#include "enigmatom/rule_backend.hpp"

#include "enigmatom/text.hpp"

#include <algorithm>
#include <regex>

namespace enigmatom {

namespace {

std::string key(const std::string& s) { return text::to_lower(s); }

void note_room(RuleWorldState& w, const std::string& room) {
    if (std::find_if(w.rooms.begin(), w.rooms.end(), [&](const std::string& r) {
            return text::iequals(r, room);
        }) == w.rooms.end()) {
        w.rooms.push_back(room);
    }
}

std::string contents_state(const std::vector<std::string>& items) {
    return items.empty() ? "empty" : text::join_names(items);
}

void remove_item(std::vector<std::string>& items, const std::string& item) {
    items.erase(std::remove_if(items.begin(), items.end(),
                               [&](const std::string& s) { return text::iequals(s, item); }),
                items.end());
}

}  // namespace

bool RuleWorldState::is_room(const std::string& name) const {
    return std::any_of(rooms.begin(), rooms.end(), [&](const std::string& r) { return text::iequals(r, name); });
}

bool RuleWorldState::is_container(const std::string& name) const {
    if (container_contents.contains(key(name)) || container_room.contains(key(name))) return true;
    return std::any_of(obj_container.begin(), obj_container.end(),
                       [&](const auto& kv) { return text::iequals(kv.second, name); });
}

ParsedEvent parse_event(const Event& event) {
    static const std::string names = R"(([A-Z][A-Za-z'-]*(?:(?:,\s*|,?\s+and\s+)[A-Z][A-Za-z'-]*)*))";
    static const std::string name = R"(([A-Z][A-Za-z'-]*))";
    static const std::regex enter("^" + names + R"(\s+entered\s+the\s+(.+?)\.?$)");
    static const std::regex exit("^" + name + R"(\s+exited\s+the\s+(.+?)\.?$)");
    static const std::regex move("^" + name + R"(\s+moved\s+the\s+(.+?)\s+to\s+the\s+(.+?)\.?$)");
    static const std::regex stay("^" + name + R"(\s+made\s+no\s+movements?\s+and\s+stayed\s+in\s+the\s+(.+?)\s+for\s+.+$)");
    static const std::regex declare(R"(^The\s+(.+?)\s+(?:is|are)\s+in\s+the\s+(.+?)\.?$)");
    static const std::regex distract("^" + name + R"(\s+(?:likes|hates|loves|dislikes)\s+the\s+(.+?)\.?$)");
    static const std::regex join("^" + name + R"(\s+joined\s+the\s+conversation\.?$)");
    static const std::regex leave("^" + name + R"(\s+left\s+the\s+conversation\.?$)");

    ParsedEvent p;
    if (event.speaker) {
        p.shape = EventShape::Utterance;
        p.actors = {*event.speaker};
        p.place = kConversationRoom;
        return p;
    }
    const std::string t = text::trim(event.text);
    std::smatch m;
    if (std::regex_match(t, m, enter)) {
        p.shape = EventShape::Enter;
        p.actors = text::split_names(m[1].str());
        p.place = m[2].str();
    } else if (std::regex_match(t, m, exit)) {
        p.shape = EventShape::Exit;
        p.actors = {m[1].str()};
        p.place = m[2].str();
    } else if (std::regex_match(t, m, move)) {
        p.shape = EventShape::Move;
        p.actors = {m[1].str()};
        p.object = m[2].str();
        p.place = m[3].str();
    } else if (std::regex_match(t, m, stay)) {
        p.shape = EventShape::Stay;
        p.actors = {m[1].str()};
        p.place = m[2].str();
    } else if (std::regex_match(t, m, declare)) {
        p.shape = EventShape::Declare;
        p.object = m[1].str();
        p.place = m[2].str();
    } else if (std::regex_match(t, m, join)) {
        p.shape = EventShape::Join;
        p.actors = {m[1].str()};
        p.place = kConversationRoom;
    } else if (std::regex_match(t, m, leave)) {
        p.shape = EventShape::Leave;
        p.actors = {m[1].str()};
        p.place = kConversationRoom;
    } else if (std::regex_match(t, m, distract)) {
        p.shape = EventShape::Distractor;
        p.actors = {m[1].str()};
        p.object = m[2].str();
    }
    return p;
}

std::pair<RuleWorldState, std::vector<EntityStateRecord>> rule_backend_apply(RuleWorldState w,
                                                                             const Event& event) {
    std::vector<EntityStateRecord> out;
    auto emit = [&](const std::string& entity, const std::string& attribute, const std::string& state) {
        out.push_back({event.index, entity, attribute, state});
    };
    auto enter = [&](const std::string& who, const std::string& room) {
        auto& cur = w.char_room[key(who)];
        if (cur && text::iequals(*cur, room)) return;
        cur = room;
        emit(who, "location", "in the " + room);
    };
    auto leave = [&](const std::string& who, const std::string& room) {
        w.char_room[key(who)] = std::nullopt;
        emit(who, "location", "outside the " + room);
    };

    const ParsedEvent p = parse_event(event);
    switch (p.shape) {
        case EventShape::Enter:
            note_room(w, p.place);
            for (const auto& a : p.actors) enter(a, p.place);
            break;
        case EventShape::Exit:
            note_room(w, p.place);
            leave(p.actors.front(), p.place);
            break;
        case EventShape::Stay: {
            note_room(w, p.place);
            // Location persists; only an unseen character gains a record.
            auto it = w.char_room.find(key(p.actors.front()));
            if (it == w.char_room.end() || !it->second) enter(p.actors.front(), p.place);
            break;
        }
        case EventShape::Move: {
            const std::string obj = p.object;
            const std::string dst = p.place;
            auto prev = w.obj_container.find(key(obj));
            std::optional<std::string> src;
            if (prev != w.obj_container.end()) src = prev->second;
            w.obj_container[key(obj)] = dst;
            emit(obj, "location", "in " + dst);
            if (src && !text::iequals(*src, dst)) {
                auto& items = w.container_contents[key(*src)];
                remove_item(items, obj);
                emit(*src, "content", contents_state(items));
            }
            auto& items = w.container_contents[key(dst)];
            if (std::none_of(items.begin(), items.end(), [&](const std::string& s) { return text::iequals(s, obj); })) {
                items.push_back(obj);
            }
            emit(dst, "content", contents_state(items));
            // A container receiving an object is in the mover's room.
            if (auto r = w.char_room.find(key(p.actors.front()));
                r != w.char_room.end() && r->second && !w.container_room.contains(key(dst))) {
                w.container_room[key(dst)] = *r->second;
            }
            break;
        }
        case EventShape::Declare: {
            if (w.is_room(p.place) || w.is_container(p.object)) {
                w.container_room[key(p.object)] = p.place;
                emit(p.object, "location", "in " + p.place);
            } else {
                if (auto prev = w.obj_container.find(key(p.object)); prev != w.obj_container.end()) {
                    remove_item(w.container_contents[key(prev->second)], p.object);
                }
                w.obj_container[key(p.object)] = p.place;
                auto& items = w.container_contents[key(p.place)];
                items.push_back(p.object);
                emit(p.object, "location", "in " + p.place);
            }
            break;
        }
        case EventShape::Join:
            note_room(w, kConversationRoom);
            enter(p.actors.front(), kConversationRoom);
            break;
        case EventShape::Leave:
            note_room(w, kConversationRoom);
            leave(p.actors.front(), kConversationRoom);
            break;
        case EventShape::Utterance:
            note_room(w, kConversationRoom);
            enter(p.actors.front(), kConversationRoom);
            break;
        case EventShape::Distractor:
        case EventShape::Other:
            break;
    }
    return {std::move(w), std::move(out)};
}

std::vector<EntityAttribute> RuleBackend::propose_entities(const Story& story,
                                                           std::span<const ToMQuestion>) {
    std::vector<EntityAttribute> out;
    auto add = [&](const std::string& e, const std::string& a) {
        EntityAttribute ea{e, a};
        if (std::find(out.begin(), out.end(), ea) == out.end()) out.push_back(std::move(ea));
    };
    RuleWorldState w;
    for (const auto& ev : story.events) {
        const ParsedEvent p = parse_event(ev);
        bool container_decl = p.shape == EventShape::Declare && (w.is_room(p.place) || w.is_container(p.object));
        for (const auto& a : p.actors) add(a, "location");
        switch (p.shape) {
            case EventShape::Move:
                add(p.object, "location");
                add(p.place, "content");
                break;
            case EventShape::Declare:
                if (container_decl) {
                    add(p.object, "content");
                } else {
                    add(p.object, "location");
                    add(p.place, "content");
                }
                break;
            default:
                break;
        }
        w = rule_backend_apply(std::move(w), ev).first;
    }
    return out;
}

std::vector<std::string> RuleBackend::propose_locations(const Story& story) {
    RuleWorldState w;
    for (const auto& ev : story.events) w = rule_backend_apply(std::move(w), ev).first;
    return w.rooms;
}

PrefixStates RuleBackend::states_after(const Story& story, int prefix_len,
                                       std::span<const EntityAttribute>) {
    RuleWorldState w;
    for (int i = 1; i < prefix_len; ++i) w = rule_backend_apply(std::move(w), story.event(i)).first;
    PrefixStates ps;
    ps.records = rule_backend_apply(std::move(w), story.event(prefix_len)).second;
    return ps;
}

}  // namespace enigmatom
