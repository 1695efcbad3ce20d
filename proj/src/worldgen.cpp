#include "enigmatom/worldgen.hpp"

#include "enigmatom/error.hpp"
#include "enigmatom/oracle.hpp"
#include "enigmatom/text.hpp"

#include <algorithm>
#include <map>
#include <random>
#include <set>

namespace enigmatom {

using nlohmann::json;

void GrammarConfig::validate() const {
    auto fail = [](const std::string& m) { throw ValidationError("grammar config: " + m); };
    if (num_characters < 2 || num_characters > 5) fail("num_characters must be in 2..5");
    if (num_rooms < 1) fail("num_rooms must be >= 1");
    if (num_objects < 1) fail("num_objects must be >= 1");
    if (num_objects < num_rooms) fail("every room episode needs an object (num_objects >= num_rooms)");
    if (num_containers_per_room < 2) fail("num_containers_per_room must be >= 2");
    if (moves_per_room < 1) fail("moves_per_room must be >= 1");
    if (max_order < 1 || max_order > 4) fail("max_order must be in 1..4");
    if (max_order > num_characters) fail("max_order cannot exceed num_characters");
    if (distractor_rate < 0.0 || distractor_rate > 1.0) fail("distractor_rate must be in [0, 1]");
    if (questions_per_order < 1) fail("questions_per_order must be >= 1");
}

json GrammarConfig::to_json() const {
    return {{"num_characters", num_characters},
            {"num_rooms", num_rooms},
            {"num_objects", num_objects},
            {"num_containers_per_room", num_containers_per_room},
            {"moves_per_room", moves_per_room},
            {"max_order", max_order},
            {"seed", seed},
            {"allow_reentry", allow_reentry},
            {"distractor_rate", distractor_rate},
            {"questions_per_order", questions_per_order}};
}

GrammarConfig GrammarConfig::from_json(const json& j) {
    GrammarConfig c;
    c.num_characters = j.value("num_characters", c.num_characters);
    c.num_rooms = j.value("num_rooms", c.num_rooms);
    c.num_objects = j.value("num_objects", c.num_objects);
    c.num_containers_per_room = j.value("num_containers_per_room", c.num_containers_per_room);
    c.moves_per_room = j.value("moves_per_room", c.moves_per_room);
    c.max_order = j.value("max_order", c.max_order);
    c.seed = j.value("seed", c.seed);
    c.allow_reentry = j.value("allow_reentry", c.allow_reentry);
    c.distractor_rate = j.value("distractor_rate", c.distractor_rate);
    c.questions_per_order = j.value("questions_per_order", c.questions_per_order);
    return c;
}

DatasetItem GeneratedStory::to_item() const {
    DatasetItem item{story, {}};
    for (const auto& q : questions) item.questions.push_back({q.question.raw, q.question.order(), q.gold});
    return item;
}

namespace {

const std::vector<std::string> kNames = {
    "William", "Lily", "Aiden", "Emma", "Isla", "Sally", "Anne", "Benjamin", "Abigail", "Emily",
    "Jack", "Mia", "Noah", "Olivia", "Lucas", "Chloe", "Owen", "Ava", "Ethan", "Sophia"};
const std::vector<std::string> kRooms = {
    "porch", "basement", "front yard", "crawlspace", "kitchen", "garden", "attic", "patio",
    "cellar", "hallway", "study", "lounge", "garage", "bedroom", "sunroom", "back yard"};
const std::vector<std::string> kObjects = {
    "melon", "t-shirt", "banana", "apple", "ball", "scarf", "orange", "lettuce", "pumpkin",
    "sweater", "carrot", "cabbage", "belt", "hat", "peach", "onion"};
const std::vector<std::string> kColors = {"green", "blue", "red"};
const std::vector<std::string> kContainerNouns = {
    "bathtub", "pantry", "bucket", "suitcase", "bottle", "cupboard", "box", "basket",
    "crate", "drawer", "envelope", "treasure chest", "bag", "container"};
const std::vector<std::string> kDistractorItems = {"coat", "umbrella", "lamp", "painting", "clock", "rug"};

class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}
    std::size_t below(std::size_t n) { return n == 0 ? 0 : static_cast<std::size_t>(engine_() % n); }
    bool chance(double p) { return static_cast<double>(engine_() >> 11) * 0x1.0p-53 < p; }
    template <class T>
    void shuffle(std::vector<T>& v) {
        for (std::size_t i = v.size(); i > 1; --i) std::swap(v[i - 1], v[below(i)]);
    }
    template <class T>
    const T& pick(const std::vector<T>& v) { return v[below(v.size())]; }

private:
    std::mt19937_64 engine_;
};

struct Writer {
    std::vector<std::string> lines;
    void add(std::string s) { lines.push_back(std::move(s)); }
};

struct Episode {
    const GrammarConfig& cfg;
    Rng& rng;
    Writer& out;
    std::string room;
    std::vector<std::string> containers;
    std::vector<std::string> objects;
    std::map<std::string, std::string>& where;  // object -> container
    std::set<std::string> placed;               // containers already declared in the room

    void declare_container(const std::string& c) {
        if (!cfg.allow_reentry || placed.contains(c)) return;
        placed.insert(c);
        out.add("The " + c + " is in the " + room + ".");
    }

    void move(const std::string& actor) {
        const std::string& obj = rng.pick(objects);
        std::vector<std::string> choices;
        for (const auto& c : containers) {
            if (c != where[obj]) choices.push_back(c);
        }
        const std::string& dst = rng.pick(choices);
        where[obj] = dst;
        out.add(actor + " moved the " + obj + " to the " + dst + ".");
        declare_container(dst);
    }

    void distractor(const std::vector<std::string>& present) {
        if (present.empty() || !rng.chance(cfg.distractor_rate)) return;
        const std::string& who = rng.pick(present);
        if (rng.chance(0.5)) {
            out.add(who + " likes the " + rng.pick(containers) + ".");
        } else {
            out.add(who + " hates the " + rng.pick(kDistractorItems) + ".");
        }
    }

    void run(std::vector<std::string> participants) {
        std::vector<std::string> listing = participants;
        rng.shuffle(listing);
        if (cfg.allow_reentry) {
            for (const auto& p : listing) out.add(p + " entered the " + room + ".");
        } else {
            out.add(text::join_names(listing) + " entered the " + room + ".");
        }
        for (const auto& obj : objects) {
            where[obj] = rng.pick(containers);
            out.add("The " + obj + " is in the " + where[obj] + ".");
            declare_container(where[obj]);
        }

        std::vector<std::string> turns = participants;
        rng.shuffle(turns);
        const std::size_t n = turns.size();
        std::vector<int> moves_at(n, 0);
        if (static_cast<std::size_t>(cfg.moves_per_room) <= n) {
            std::vector<std::size_t> idx(n);
            for (std::size_t i = 0; i < n; ++i) idx[i] = i;
            rng.shuffle(idx);
            for (int m = 0; m < cfg.moves_per_room; ++m) moves_at[idx[static_cast<std::size_t>(m)]] = 1;
        } else {
            std::fill(moves_at.begin(), moves_at.end(), 1);
            for (std::size_t m = n; m < static_cast<std::size_t>(cfg.moves_per_room); ++m) ++moves_at[rng.below(n)];
        }
        // Someone must miss a move: not every move may precede the first exit.
        if (n >= 2 && std::all_of(moves_at.begin() + 1, moves_at.end(), [](int m) { return m == 0; })) {
            std::size_t target = 1 + rng.below(n - 1);
            moves_at[target] = moves_at[0];
            moves_at[0] = 0;
        }

        std::vector<std::string> present = participants;
        auto drop = [&](const std::string& who) {
            present.erase(std::remove(present.begin(), present.end(), who), present.end());
        };
        // Re-entries: back before turn `u`, out again after turn `v` (n = end).
        std::map<std::size_t, std::vector<std::string>> back_before, out_after;
        std::set<std::string> reentered;

        auto exit_now = [&](const std::string& who) {
            out.add(who + " exited the " + room + ".");
            drop(who);
        };
        for (std::size_t t = 0; t <= n; ++t) {
            for (const auto& who : back_before[t]) {
                out.add(who + " entered the " + room + ".");
                present.push_back(who);
            }
            if (t == n) break;
            const std::string& actor = turns[t];
            if (moves_at[t] == 0) {
                if (!cfg.allow_reentry) {
                    out.add(actor + " made no movements and stayed in the " + room + " for 1 minute.");
                }
            } else {
                for (int m = 0; m < moves_at[t]; ++m) move(actor);
            }
            distractor(present);
            exit_now(actor);
            if (cfg.allow_reentry && !reentered.contains(actor) && rng.chance(0.4)) {
                reentered.insert(actor);
                std::size_t u = t + 1 + rng.below(n - t);
                std::size_t v = u + rng.below(n - u + 1);
                back_before[u].push_back(actor);
                out_after[v].push_back(actor);
            }
            for (const auto& who : out_after[t]) exit_now(who);
        }
        for (const auto& who : out_after[n]) exit_now(who);
    }
};

}  // namespace

GeneratedStory generate_story(const GrammarConfig& cfg) {
    cfg.validate();
    Rng rng(cfg.seed * 0x9E3779B97F4A7C15ULL + 0x632BE59BD9B4E019ULL);

    std::vector<std::string> names = kNames;
    rng.shuffle(names);
    names.resize(static_cast<std::size_t>(cfg.num_characters));
    std::vector<std::string> rooms = kRooms;
    rng.shuffle(rooms);
    if (static_cast<std::size_t>(cfg.num_rooms) > rooms.size()) throw ValidationError("grammar config: too many rooms");
    rooms.resize(static_cast<std::size_t>(cfg.num_rooms));
    std::vector<std::string> objects = kObjects;
    rng.shuffle(objects);
    if (static_cast<std::size_t>(cfg.num_objects) > objects.size()) throw ValidationError("grammar config: too many objects");
    objects.resize(static_cast<std::size_t>(cfg.num_objects));
    std::vector<std::string> containers;
    for (const auto& c : kColors) {
        for (const auto& n : kContainerNouns) containers.push_back(c + " " + n);
    }
    rng.shuffle(containers);
    const auto needed = static_cast<std::size_t>(cfg.num_rooms * cfg.num_containers_per_room);
    if (needed > containers.size()) throw ValidationError("grammar config: too many containers");

    Writer out;
    std::map<std::string, std::string> where;
    std::size_t next_obj = 0;
    std::map<std::string, std::vector<std::string>> witnesses;  // object -> its episode's participants
    for (int r = 0; r < cfg.num_rooms; ++r) {
        Episode ep{cfg, rng, out, rooms[static_cast<std::size_t>(r)], {}, {}, where, {}};
        for (int c = 0; c < cfg.num_containers_per_room; ++c) {
            ep.containers.push_back(containers[static_cast<std::size_t>(r * cfg.num_containers_per_room + c)]);
        }
        // Objects are split as evenly as possible, earlier rooms first.
        std::size_t share = static_cast<std::size_t>(cfg.num_objects / cfg.num_rooms) +
                            (r < cfg.num_objects % cfg.num_rooms ? 1 : 0);
        for (std::size_t k = 0; k < share; ++k) ep.objects.push_back(objects[next_obj++]);

        std::vector<std::string> participants = names;
        if (r > 0) {
            rng.shuffle(participants);
            std::size_t size = 2 + rng.below(names.size() - 1);
            participants.resize(std::min(size, names.size()));
        }
        for (const auto& o : ep.objects) witnesses[o] = participants;
        ep.run(participants);
        std::vector<std::string> listing = participants;
        rng.shuffle(listing);
        out.add(text::join_names(listing) + " entered the " + kRegroupRoom + ".");
    }

    GeneratedStory gs;
    gs.story = make_story(out.lines, StoryKind::EventBased, names);
    gs.story.metadata = {{"generator", "grammar"}, {"config", cfg.to_json()}};

    for (int k = 0; k <= cfg.max_order; ++k) {
        for (int rep = 0; rep < cfg.questions_per_order; ++rep) {
            ToMQuestion q;
            q.target_entity = rng.pick(objects);
            // Chains come from the object's episode when it has enough participants.
            const auto& local = witnesses[q.target_entity];
            std::string gold;
            if (k == 0) {
                q.form = (cfg.allow_reentry && rng.chance(0.3)) ? QuestionForm::Initial : QuestionForm::Reality;
                gold = q.form == QuestionForm::Initial ? *oracle::initial_container(gs.story, q.target_entity)
                                                       : oracle::simulate_beliefs(gs.story, {}, q.target_entity);
            } else {
                std::vector<std::string> pool = static_cast<int>(local.size()) >= k ? local : names;
                rng.shuffle(pool);
                std::vector<CharacterId> chain;
                for (int i = 0; i < k; ++i) chain.emplace_back(pool[static_cast<std::size_t>(i)]);
                q.chain = BeliefChain(std::move(chain));
                q.form = (cfg.allow_reentry && rng.chance(0.5)) ? QuestionForm::Search : QuestionForm::Belief;
                gold = oracle::simulate_beliefs(gs.story, q.chain, q.target_entity);
            }
            q.raw = render_question(q);
            gs.questions.push_back({std::move(q), std::move(gold)});
        }
    }
    return gs;
}

std::vector<GeneratedStory> generate_batch(GrammarConfig config, int count) {
    std::vector<GeneratedStory> out;
    out.reserve(static_cast<std::size_t>(std::max(count, 0)));
    const auto base = config.seed;
    for (int i = 0; i < count; ++i) {
        config.seed = base + static_cast<std::uint64_t>(i);
        out.push_back(generate_story(config));
    }
    return out;
}

}  // namespace enigmatom
