#include "enigmatom/oracle.hpp"

#include "enigmatom/error.hpp"
#include "enigmatom/text.hpp"

#include <algorithm>

namespace enigmatom::oracle {

namespace {

enum class Kind { Enter, Exit, Move, Stay, Declare, Mention, Join, Leave, Speak, Narration };

struct Step {
    Kind kind = Kind::Narration;
    std::vector<std::string> who;  // lowercased
    std::string a;                 // room / object
    std::string b;                 // container / place
};

std::string low(std::string s) { return text::to_lower(text::trim(s)); }

std::string drop_period(std::string s) {
    while (!s.empty() && (s.back() == '.' || s.back() == ' ')) s.pop_back();
    return s;
}

std::vector<std::string> lowered_names(const std::string& s) {
    std::vector<std::string> out;
    for (auto& n : text::split_names(s)) out.push_back(low(n));
    return out;
}

Step classify(const Event& e) {
    Step s;
    if (e.speaker) {
        s.kind = Kind::Speak;
        s.who = {low(*e.speaker)};
        return s;
    }
    const std::string t = drop_period(text::trim(e.text));
    auto cut = [&](const std::string& marker) -> std::optional<std::pair<std::string, std::string>> {
        auto pos = t.find(marker);
        if (pos == std::string::npos) return std::nullopt;
        return std::make_pair(t.substr(0, pos), t.substr(pos + marker.size()));
    };
    if (t.rfind("The ", 0) == 0) {
        if (auto p = cut(" is in the ")) {
            s.kind = Kind::Declare;
            s.a = low(p->first.substr(4));
            s.b = low(p->second);
            return s;
        }
    }
    if (auto p = cut(" made no movements and stayed in the ")) {
        s.kind = Kind::Stay;
        s.who = {low(p->first)};
        auto f = p->second.rfind(" for ");
        s.a = low(p->second.substr(0, f));
        return s;
    }
    if (auto p = cut(" joined the conversation")) {
        s.kind = Kind::Join;
        s.who = {low(p->first)};
        return s;
    }
    if (auto p = cut(" left the conversation")) {
        s.kind = Kind::Leave;
        s.who = {low(p->first)};
        return s;
    }
    if (auto p = cut(" entered the ")) {
        s.kind = Kind::Enter;
        s.who = lowered_names(p->first);
        s.a = low(p->second);
        return s;
    }
    if (auto p = cut(" exited the ")) {
        s.kind = Kind::Exit;
        s.who = {low(p->first)};
        s.a = low(p->second);
        return s;
    }
    if (auto p = cut(" moved the ")) {
        auto to = p->second.find(" to the ");
        if (to != std::string::npos) {
            s.kind = Kind::Move;
            s.who = {low(p->first)};
            s.a = low(p->second.substr(0, to));
            s.b = low(p->second.substr(to + 8));
            return s;
        }
    }
    for (const char* verb : {" likes the ", " hates the ", " loves the ", " dislikes the "}) {
        if (auto p = cut(verb)) {
            s.kind = Kind::Mention;
            s.who = {low(p->first)};
            return s;
        }
    }
    return s;
}

constexpr const char* kTalk = "conversation";

}  // namespace

std::vector<EventTrace> trace_story(const Story& story) {
    std::vector<Step> steps;
    for (const auto& e : story.events) steps.push_back(classify(e));

    std::set<std::string> rooms;
    for (const auto& s : steps) {
        if (s.kind == Kind::Enter || s.kind == Kind::Exit || s.kind == Kind::Stay) rooms.insert(s.a);
    }
    std::map<std::string, std::string> container_room;
    for (const auto& s : steps) {
        if (s.kind == Kind::Declare && rooms.contains(s.b)) container_room.emplace(s.a, s.b);
    }

    std::map<std::string, std::optional<std::string>> where;
    std::optional<std::string> current_scene;
    std::vector<EventTrace> out;
    for (const auto& s : steps) {
        EventTrace tr;
        std::optional<std::string> leaver;
        switch (s.kind) {
            case Kind::Enter:
                for (const auto& w : s.who) where[w] = s.a;
                tr.room = s.a;
                current_scene = s.a;
                break;
            case Kind::Exit:
                tr.room = s.a;
                where[s.who.front()] = std::nullopt;
                leaver = s.who.front();
                break;
            case Kind::Move:
            case Kind::Stay:
            case Kind::Mention:
                tr.room = where[s.who.front()];
                break;
            case Kind::Declare:
                if (rooms.contains(s.b)) {
                    tr.room = s.b;
                } else if (auto it = container_room.find(s.b); it != container_room.end()) {
                    tr.room = it->second;
                } else {
                    tr.room = current_scene;
                }
                break;
            case Kind::Join:
            case Kind::Speak:
                where[s.who.front()] = std::string(kTalk);
                tr.room = std::string(kTalk);
                break;
            case Kind::Leave:
                where[s.who.front()] = std::nullopt;
                tr.room = std::string(kTalk);
                leaver = s.who.front();
                break;
            case Kind::Narration:
                break;
        }
        if (tr.room) {
            for (const auto& [who, room] : where) {
                if (room == tr.room) tr.observers.insert(who);
            }
            if (leaver) tr.observers.insert(*leaver);
        }
        out.push_back(std::move(tr));
    }
    return out;
}

WorldState simulate_world(const Story& story) {
    WorldState w;
    std::set<std::string> rooms;
    std::vector<Step> steps;
    for (const auto& e : story.events) steps.push_back(classify(e));
    for (const auto& s : steps) {
        if (s.kind == Kind::Enter || s.kind == Kind::Exit || s.kind == Kind::Stay) rooms.insert(s.a);
    }
    for (const auto& s : steps) {
        switch (s.kind) {
            case Kind::Enter:
                for (const auto& who : s.who) w.char_room[who] = s.a;
                break;
            case Kind::Exit:
            case Kind::Leave:
                w.char_room[s.who.front()] = std::nullopt;
                break;
            case Kind::Join:
            case Kind::Speak:
                w.char_room[s.who.front()] = std::string(kTalk);
                break;
            case Kind::Move:
                w.obj_container[s.a] = s.b;
                break;
            case Kind::Declare:
                if (rooms.contains(s.b)) {
                    w.container_room[s.a] = s.b;
                } else {
                    w.obj_container[s.a] = s.b;
                }
                break;
            default:
                break;
        }
    }
    return w;
}

std::set<int> observed_set(const Story& story, const CharacterId& c) {
    if (!story.has_character(c.name())) {
        throw ValidationError("'" + c.name() + "' is not a character of the story");
    }
    std::set<int> out;
    auto tr = trace_story(story);
    for (std::size_t i = 0; i < tr.size(); ++i) {
        if (tr[i].observers.contains(c.key())) out.insert(static_cast<int>(i) + 1);
    }
    return out;
}

std::optional<std::string> initial_container(const Story& story, const std::string& entity) {
    const std::string key = low(entity);
    std::set<std::string> rooms;
    std::vector<Step> steps;
    for (const auto& e : story.events) steps.push_back(classify(e));
    for (const auto& s : steps) {
        if (s.kind == Kind::Enter || s.kind == Kind::Exit || s.kind == Kind::Stay) rooms.insert(s.a);
    }
    for (const auto& s : steps) {
        if (s.kind == Kind::Declare && s.a == key && !rooms.contains(s.b)) return s.b;
    }
    return std::nullopt;
}

BeliefStore simulate_belief_store(const Story& story, const BeliefChain& chain) {
    chain.check_members(story);
    const auto trace = trace_story(story);
    std::set<std::string> rooms;
    std::vector<Step> steps;
    for (const auto& e : story.events) steps.push_back(classify(e));
    for (const auto& s : steps) {
        if (s.kind == Kind::Enter || s.kind == Kind::Exit || s.kind == Kind::Stay) rooms.insert(s.a);
    }

    const auto k = static_cast<std::size_t>(chain.order());
    BeliefStore bs;
    bs.store_at.resize(k + 1);
    bs.updates.resize(k + 1);
    for (std::size_t i = 0; i < steps.size(); ++i) {
        const Step& s = steps[i];
        std::optional<std::pair<std::string, std::string>> effect;
        if (s.kind == Kind::Move) effect = {s.a, s.b};
        if (s.kind == Kind::Declare && !rooms.contains(s.b)) effect = {s.a, s.b};
        if (!effect) continue;
        for (std::size_t j = 0; j <= k; ++j) {
            bool seen = true;
            for (std::size_t m = 0; m < j && seen; ++m) {
                seen = trace[i].observers.contains(chain.characters()[m].key());
            }
            if (!seen) break;  // longer prefixes include this member too
            bs.store_at[j][effect->first] = effect->second;
            bs.updates[j].push_back(static_cast<int>(i) + 1);
        }
    }
    return bs;
}

std::string simulate_beliefs(const Story& story, const BeliefChain& chain, const std::string& entity) {
    auto init = initial_container(story, entity);
    if (!init) throw ValidationError("entity '" + entity + "' is never declared in the story");
    auto bs = simulate_belief_store(story, chain);
    const auto& store = bs.store_at.back();
    if (auto it = store.find(low(entity)); it != store.end()) return it->second;
    return *init;
}

}  // namespace enigmatom::oracle
