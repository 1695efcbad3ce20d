#include "enigmatom/pipeline.hpp"

#include "enigmatom/error.hpp"
#include "enigmatom/log.hpp"
#include "enigmatom/rule_backend.hpp"
#include "enigmatom/text.hpp"

#include <algorithm>
#include <regex>

namespace enigmatom {

using nlohmann::json;

void PipelineConfig::validate() const {
    const bool remote = nkb == NkbKind::Remote || answerer == AnswererKind::Remote || !reduction_demos.empty();
    if (remote) {
        if (chat.model.empty()) throw ConfigError("a remote stage needs a model name");
        if (chat.base_url.empty()) throw ConfigError("a remote stage needs a base URL");
    }
    if (max_in_flight < 1) throw ConfigError("max_in_flight must be >= 1");
}

json PipelineConfig::to_json() const {
    return {{"nkb", nkb == NkbKind::Rule ? "rule" : "remote"},
            {"answerer", answerer == AnswererKind::Symbolic ? "symbolic" : "remote"},
            {"inject_knowledge", inject_knowledge},
            {"apply_masking", apply_masking},
            {"reduce_orders", reduce_orders},
            {"model", (nkb == NkbKind::Remote || answerer == AnswererKind::Remote) ? chat.model : ""}};
}

std::optional<std::string> declared_container(const Story& story, std::string_view entity) {
    static const std::regex decl(R"(^\s*the\s+(.+?)\s+(?:is|are)\s+in\s+(?:the\s+)?(.+?)\s*\.?\s*$)",
                                 std::regex::icase);
    const std::string want = text::normalize_phrase(entity);
    for (const auto& e : story.events) {
        std::smatch m;
        if (std::regex_match(e.text, m, decl) && text::normalize_phrase(m[1].str()) == want) {
            return text::normalize_place(m[2].str());
        }
    }
    return std::nullopt;
}

namespace {

std::string match_space(const std::string& state, const std::vector<std::string>& space) {
    const std::string norm = text::normalize_place(state);
    for (const auto& c : space) {
        if (text::normalize_place(c) == norm) return c;
    }
    return norm;
}

std::optional<std::string> first_record_state(std::span<const EntityStateRecord> records, const ToMQuestion& q) {
    for (const auto& r : records) {
        if (r.is_about(q.target_entity, q.target_attribute)) return r.state;
    }
    return std::nullopt;
}

}  // namespace

ReaderResult symbolic_reader(const MaskedView& view, const ToMQuestion& q, const Story& story,
                             std::span<const EntityStateRecord> records) {
    ReaderResult out;
    auto fallback = [&]() -> std::optional<std::string> {
        if (text::iequals(q.target_attribute, "location")) {
            if (auto d = declared_container(story, q.target_entity)) return d;
        }
        return first_record_state(records, q);
    };

    std::optional<std::string> state;
    if (q.form != QuestionForm::Initial) {
        for (const auto& r : records) {
            if (!r.is_about(q.target_entity, q.target_attribute)) continue;
            if (std::binary_search(view.surviving.begin(), view.surviving.end(), r.event_index)) state = r.state;
        }
    }
    if (!state) {
        state = fallback();
        out.from_declaration = state.has_value();
    }
    if (!state) {
        out.abstained = true;
        out.answer = kAbstain;
        return out;
    }
    out.answer = match_space(*state, q.answer_space);
    return out;
}

Pipeline::Pipeline(PipelineConfig config) : Pipeline(std::move(config), nullptr) {}

Pipeline::Pipeline(PipelineConfig config, ChatModel* model) : config_(std::move(config)), model_(model) {
    config_.validate();
    const bool remote = config_.nkb == NkbKind::Remote || config_.answerer == AnswererKind::Remote ||
                        !config_.reduction_demos.empty();
    if (remote) {
        if (!model_) {
            owned_model_ = std::make_unique<HttpChatClient>(config_.chat);
            model_ = owned_model_.get();
        }
        prompts_ = PromptSet::load(config_.prompt_dir.empty() ? PromptSet::default_dir() : config_.prompt_dir);
    }
    if (config_.nkb == NkbKind::Remote) {
        backend_ = std::make_unique<RemoteBackend>(*model_, prompts_);
    } else {
        backend_ = std::make_unique<RuleBackend>();
    }
    if (!config_.record_cache.empty()) cache_.emplace(config_.record_cache);
}

StateBackend& Pipeline::backend() const { return *backend_; }

StoryAnalysis Pipeline::analyze(const Story& story, std::span<const ToMQuestion> questions) const {
    StoryAnalysis a;
    if (questions.empty()) {
        for (auto& ea : backend().propose_entities(story, questions)) {
            if (a.key_entities.size() == kMaxKeyEntities) break;
            if (std::find(a.key_entities.begin(), a.key_entities.end(), ea) == a.key_entities.end()) {
                a.key_entities.push_back(std::move(ea));
            }
        }
    } else {
        a.key_entities = identify_key_entities(story, questions, backend());
    }
    a.targets = a.key_entities;
    for (const auto& c : story.characters) {
        EntityAttribute loc{c.name(), "location"};
        if (std::find(a.targets.begin(), a.targets.end(), loc) == a.targets.end()) a.targets.push_back(loc);
    }
    auto gen = generate_states_cached(story, a.targets, backend(), cache_ ? &*cache_ : nullptr,
                                      config_.max_in_flight, true);
    a.records = std::move(gen.records);
    a.skipped_lines = std::move(gen.skipped_lines);
    a.anchors = extract_locations(story, backend());
    a.events = config_.inject_knowledge ? inject(story, a.records) : plain_events(story);
    a.graphs = SceneGraphSet::build(story, a.records, a.anchors);
    return a;
}

PipelineResult Pipeline::answer(const Story& story, const ToMQuestion& question, const StoryAnalysis& a) const {
    PipelineResult out;
    ToMQuestion q = question;
    if (q.answer_space.empty()) q.answer_space = answer_space_for(q, story, a.records);
    q.chain.check_members(story);

    const auto texts = render_all(a.events);
    if (q.order() == 0 || !config_.apply_masking) {
        out.view.chain = q.chain;
        out.view.texts = texts;
        for (std::size_t i = 1; i <= texts.size(); ++i) out.view.surviving.push_back(static_cast<int>(i));
    } else {
        out.view = retrieve_events(a.graphs.masked(q.chain), texts, q.chain);
    }
    out.empty_view = out.view.surviving.empty();
    if (out.empty_view) log::warn("question '" + q.raw + "': every event is masked");

    out.asked = q;
    if (config_.reduce_orders && q.order() >= 2) {
        if (!config_.reduction_demos.empty() && model_) {
            out.asked = reduce_order_llm(q, story, *model_, config_.reduction_demos);
        } else {
            out.asked = reduce_order(q);
        }
        out.asked.answer_space = q.answer_space;
    }

    if (config_.answerer == AnswererKind::Symbolic) {
        auto r = symbolic_reader(out.view, out.asked, story, a.records);
        out.predicted = r.answer;
        out.from_declaration = r.from_declaration;
        out.abstained = r.abstained;
        return out;
    }

    std::vector<AugmentedEvent> shown;
    for (int idx : out.view.surviving) shown.push_back(a.events[static_cast<std::size_t>(idx - 1)]);
    std::string options;
    if (!out.asked.answer_space.empty()) options = "Options: " + text::join(out.asked.answer_space, "; ");
    const std::string prompt = fill_template(prompts_.answer, {{"events", render_augmented(shown)},
                                                               {"question", out.asked.raw},
                                                               {"options", options}});
    const std::string reply = model_->complete(prompt);
    auto parsed = out.asked.answer_space.empty()
                      ? parse_answer(reply)
                      : parse_answer(reply, std::span<const std::string>(out.asked.answer_space));
    out.predicted = parsed.text;
    out.parsed = std::move(parsed);
    return out;
}

PipelineResult Pipeline::run(const Story& story, const ToMQuestion& q) const {
    const std::vector<ToMQuestion> qs{q};
    const auto analysis = analyze(story, qs);
    return answer(story, q, analysis);
}

PipelineResult run_pipeline(const Story& story, const ToMQuestion& q, const PipelineConfig& cfg) {
    return Pipeline(cfg).run(story, q);
}

}  // namespace enigmatom
