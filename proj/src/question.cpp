#include "enigmatom/question.hpp"

#include "enigmatom/chat_client.hpp"
#include "enigmatom/error.hpp"
#include "enigmatom/text.hpp"

#include <algorithm>
#include <set>

namespace enigmatom {

BeliefChain::BeliefChain(std::vector<CharacterId> characters) : chars_(std::move(characters)) {
    for (std::size_t i = 1; i < chars_.size(); ++i) {
        if (chars_[i] == chars_[i - 1]) {
            throw ValidationError("belief chain repeats '" + chars_[i].name() + "' adjacently");
        }
    }
}

void BeliefChain::check_members(const Story& story) const {
    for (const auto& c : chars_) {
        if (!story.has_character(c.name())) {
            throw ValidationError("'" + c.name() + "' is not a character of the story");
        }
    }
}

const std::vector<std::string>& supported_question_templates() {
    static const std::vector<std::string> t = {
        "Where does A think [B thinks]* the X is?",
        "Where will A search/look for the X?",
        "Where does A think [B thinks]* C will search for the X?",
        "Where is the X really?",
        "Where is the X in the beginning?",
    };
    return t;
}

std::string render_question(const ToMQuestion& q) {
    const auto& cs = q.chain.characters();
    switch (q.form) {
        case QuestionForm::Reality:
            return "Where is the " + q.target_entity + " really?";
        case QuestionForm::Initial:
            return "Where is the " + q.target_entity + " in the beginning?";
        case QuestionForm::Search: {
            if (cs.size() == 1) return "Where will " + cs[0].name() + " search for the " + q.target_entity + "?";
            std::string s = "Where does " + cs[0].name() + " think";
            for (std::size_t i = 1; i + 1 < cs.size(); ++i) s += " " + cs[i].name() + " thinks";
            return s + " " + cs.back().name() + " will search for the " + q.target_entity + "?";
        }
        case QuestionForm::Belief:
            break;
    }
    if (cs.empty()) return "Where is the " + q.target_entity + " really?";
    std::string s = "Where does " + cs[0].name() + " think";
    for (std::size_t i = 1; i < cs.size(); ++i) s += " " + cs[i].name() + " thinks";
    return s + " the " + q.target_entity + " is?";
}

namespace {

std::string strip_article(std::vector<std::string> ws) {
    if (!ws.empty() && (text::iequals(ws.front(), "the") || text::iequals(ws.front(), "a") ||
                        text::iequals(ws.front(), "an"))) {
        ws.erase(ws.begin());
    }
    return text::join(ws, " ");
}

ParseError unsupported(std::string_view text) {
    return ParseError("unsupported question '" + std::string(text) + "'; supported templates: " +
                      text::join(supported_question_templates(), " | "));
}

bool is_one_of(const std::string& w, std::initializer_list<const char*> options) {
    return std::any_of(options.begin(), options.end(), [&](const char* o) { return text::iequals(w, o); });
}

std::optional<ToMQuestion> rule_parse(std::string_view raw, const Story& story) {
    std::string t = text::trim(raw);
    while (!t.empty() && (t.back() == '?' || t.back() == '.' || t.back() == ' ')) t.pop_back();
    auto ws = text::words(t);
    if (ws.size() < 3 || !text::iequals(ws[0], "where")) return std::nullopt;

    ToMQuestion q;
    q.raw = std::string(raw);
    if (text::iequals(ws[1], "is")) {
        std::vector<std::string> rest(ws.begin() + 2, ws.end());
        if (!rest.empty() && text::iequals(rest.back(), "really")) {
            rest.pop_back();
            q.form = QuestionForm::Reality;
        } else if (rest.size() >= 3 && text::iequals(rest[rest.size() - 3], "in") &&
                   text::iequals(rest[rest.size() - 2], "the") &&
                   is_one_of(rest.back(), {"beginning", "begining", "start"})) {
            rest.resize(rest.size() - 3);
            q.form = QuestionForm::Initial;
        } else {
            q.form = QuestionForm::Reality;
        }
        q.target_entity = strip_article(rest);
        if (q.target_entity.empty()) return std::nullopt;
        return q;
    }
    if (!is_one_of(ws[1], {"does", "will", "do", "would"})) return std::nullopt;

    std::vector<CharacterId> chain;
    std::size_t i = 2;
    auto take_name = [&]() -> bool {
        if (i >= ws.size()) return false;
        auto c = story.find_character(ws[i]);
        if (!c) {
            if (text::is_capitalized(ws[i])) {
                throw ValidationError("'" + ws[i] + "' is not a character of the story");
            }
            return false;
        }
        chain.push_back(*c);
        ++i;
        return true;
    };
    if (!take_name()) return std::nullopt;
    while (i < ws.size()) {
        if (text::iequals(ws[i], "really")) ++i;
        if (i >= ws.size()) return std::nullopt;
        if (is_one_of(ws[i], {"think", "thinks", "believe", "believes"})) {
            ++i;
            if (i < ws.size() && text::iequals(ws[i], "that")) ++i;
            if (i < ws.size() && story.find_character(ws[i])) {
                take_name();
                continue;
            }
            if (i < ws.size() && text::is_capitalized(ws[i]) && !text::iequals(ws[i], "the")) {
                throw ValidationError("'" + ws[i] + "' is not a character of the story");
            }
            // "... the X is"
            if (ws.size() - i < 2 || !text::iequals(ws.back(), "is")) return std::nullopt;
            q.form = QuestionForm::Belief;
            q.target_entity = strip_article({ws.begin() + static_cast<long>(i), ws.end() - 1});
            break;
        }
        if (text::iequals(ws[i], "will")) ++i;
        if (i + 1 < ws.size() && is_one_of(ws[i], {"search", "searches", "look", "looks"}) &&
            text::iequals(ws[i + 1], "for")) {
            q.form = QuestionForm::Search;
            q.target_entity = strip_article({ws.begin() + static_cast<long>(i + 2), ws.end()});
            break;
        }
        return std::nullopt;
    }
    if (q.target_entity.empty()) return std::nullopt;
    q.chain = BeliefChain(std::move(chain));
    return q;
}

std::optional<ToMQuestion> llm_parse(std::string_view raw, const Story& story, ChatModel& llm) {
    std::string prompt =
        "<Characters>\n";
    for (const auto& c : story.characters) prompt += "- " + c.name() + "\n";
    prompt +=
        "\n<Question>\n" + std::string(raw) +
        "\n\nIdentify the belief chain of the question (outermost believer first; empty for a "
        "factual question), the entity asked about and its attribute. Respond with a single JSON "
        "object and nothing else, for example:\n"
        "{\"chain\": [\"Emma\", \"Lily\"], \"entity\": \"melon\", \"attribute\": \"location\"}\n";
    std::string reply = llm.complete(prompt);
    auto b = reply.find('{');
    auto e = reply.rfind('}');
    if (b == std::string::npos || e == std::string::npos || e < b) {
        throw BackendError("question parser reply has no JSON object", reply);
    }
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(reply.substr(b, e - b + 1));
    } catch (const nlohmann::json::exception&) {
        throw BackendError("question parser reply is not valid JSON", reply);
    }
    ToMQuestion q;
    q.raw = std::string(raw);
    std::vector<CharacterId> chain;
    for (const auto& n : j.value("chain", nlohmann::json::array())) {
        auto c = story.find_character(n.get<std::string>());
        if (!c) throw ValidationError("'" + n.get<std::string>() + "' is not a character of the story");
        chain.push_back(*c);
    }
    q.chain = BeliefChain(std::move(chain));
    q.target_entity = j.value("entity", "");
    q.target_attribute = text::to_lower(j.value("attribute", "location"));
    q.form = q.chain.empty() ? QuestionForm::Reality : QuestionForm::Belief;
    if (q.target_entity.empty()) throw BackendError("question parser reply lacks an entity", reply);
    return q;
}

}  // namespace

ToMQuestion parse_question(std::string_view text, const Story& story, ChatModel* llm) {
    if (auto q = rule_parse(text, story)) return *q;
    if (llm) {
        if (auto q = llm_parse(text, story, *llm)) return *q;
    }
    throw unsupported(text);
}

ToMQuestion reduce_order(const ToMQuestion& q) {
    if (q.order() == 0) throw ValidationError("cannot reduce a factual (order-0) question");
    if (q.order() == 1) return q;
    ToMQuestion out = q;
    out.chain = BeliefChain({q.chain.innermost()});
    out.raw = render_question(out);
    return out;
}

ToMQuestion reduce_order_llm(const ToMQuestion& q, const Story& story, ChatModel& llm,
                             std::string_view demonstrations) {
    if (q.order() == 0) throw ValidationError("cannot reduce a factual (order-0) question");
    if (q.order() == 1) return q;
    std::string prompt = std::string(demonstrations);
    if (!prompt.empty() && prompt.back() != '\n') prompt += '\n';
    prompt += "\nOriginal: " + q.raw + "\nFirst-order:";
    std::string reply = text::trim(llm.complete(prompt));
    auto lines = text::split_lines(reply);
    std::string candidate = lines.empty() ? reply : text::trim(lines.front());
    if (text::starts_with_ci(candidate, "first-order:")) candidate = text::trim(candidate.substr(12));
    ToMQuestion out = parse_question(candidate, story);
    if (out.order() != 1 || !(out.chain.innermost() == q.chain.innermost()) ||
        !text::iequals(out.target_entity, q.target_entity)) {
        throw BackendError("question rewrite did not keep the innermost believer and target", reply);
    }
    out.target_attribute = q.target_attribute;
    out.answer_space = q.answer_space;
    return out;
}

std::vector<std::string> answer_space_for(const ToMQuestion& q, const Story& story,
                                          const std::vector<EntityStateRecord>& records) {
    std::vector<std::string> out;
    auto add = [&](const std::string& s) {
        if (!s.empty() && std::find(out.begin(), out.end(), s) == out.end()) out.push_back(s);
    };
    bool location = text::iequals(q.target_attribute, "location");
    for (const auto& r : records) {
        if (r.is_about(q.target_entity, q.target_attribute)) {
            add(location ? text::normalize_place(r.state) : text::normalize_phrase(r.state));
        }
    }
    if (!out.empty()) return out;

    std::set<std::string> containers;
    for (const auto& r : records) {
        if (text::iequals(r.attribute, "content")) containers.insert(text::normalize_phrase(r.entity));
    }
    for (const auto& r : records) {
        if (!text::iequals(r.attribute, "location") || story.has_character(r.entity)) continue;
        if (text::iequals(r.attribute, "content")) continue;
        if (containers.contains(text::normalize_phrase(r.entity))) continue;
        add(text::normalize_place(r.state));
    }
    for (const auto& r : records) {
        if (text::iequals(r.attribute, "content")) add(text::normalize_phrase(r.entity));
    }
    return out;
}

}  // namespace enigmatom
