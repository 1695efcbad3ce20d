#pragma once
// End-to-end pipeline: extraction, state generation, injection, scene graphs,
// masking, order reduction, and the answer readers.

#include "enigmatom/answer.hpp"
#include "enigmatom/chat_client.hpp"
#include "enigmatom/injector.hpp"
#include "enigmatom/nkb.hpp"
#include "enigmatom/question.hpp"
#include "enigmatom/record_cache.hpp"
#include "enigmatom/remote_backend.hpp"
#include "enigmatom/scene_graph.hpp"
#include "enigmatom/story.hpp"

#include <filesystem>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace enigmatom {

enum class NkbKind { Rule, Remote };
enum class AnswererKind { Symbolic, Remote };

struct PipelineConfig {
    NkbKind nkb = NkbKind::Rule;
    AnswererKind answerer = AnswererKind::Symbolic;
    bool inject_knowledge = true;  // off: "w/o KI"
    bool apply_masking = true;     // off: "w/o IM"
    bool reduce_orders = true;
    ChatConfig chat;
    std::filesystem::path prompt_dir;     // empty: shipped prompts
    std::filesystem::path record_cache;   // empty: no record cache
    std::string reduction_demos;          // non-empty: rewrite questions through the chat model
    int max_in_flight = 1;

    void validate() const;
    nlohmann::json to_json() const;
};

inline constexpr const char* kAbstain = "<abstain>";

// Everything computed once per story and shared by its questions.
struct StoryAnalysis {
    std::vector<EntityAttribute> key_entities;
    std::vector<EntityAttribute> targets;  // key entities plus every character's location
    std::vector<EntityStateRecord> records;
    std::vector<std::string> skipped_lines;
    std::vector<LocationAnchor> anchors;
    std::vector<AugmentedEvent> events;  // augmented, or plain with injection off
    SceneGraphSet graphs;
};

struct ReaderResult {
    std::string answer;
    bool from_declaration = false;
    bool abstained = false;
};

// Last (entity, attribute) record among the surviving events; else the
// story's initial declaration of the entity; else kAbstain. "In the
// beginning" questions read the declaration directly.
ReaderResult symbolic_reader(const MaskedView& view, const ToMQuestion& q, const Story& story,
                             std::span<const EntityStateRecord> records);

// Container named by the first "The X is in the Y." sentence, if any.
std::optional<std::string> declared_container(const Story& story, std::string_view entity);

struct PipelineResult {
    std::string predicted;
    ToMQuestion asked;  // after order reduction
    MaskedView view;
    bool empty_view = false;
    bool from_declaration = false;
    bool abstained = false;
    std::optional<ParsedAnswer> parsed;  // remote answerer only

    bool flagged() const { return empty_view || abstained || (parsed && parsed->flagged()); }
};

class Pipeline {
public:
    // Builds the HTTP client when a remote stage is configured.
    explicit Pipeline(PipelineConfig config);
    // Uses `model` for every remote stage instead of building a client.
    Pipeline(PipelineConfig config, ChatModel* model);

    const PipelineConfig& config() const noexcept { return config_; }

    // Without questions the key entities are the backend's own proposals.
    StoryAnalysis analyze(const Story& story, std::span<const ToMQuestion> questions) const;
    PipelineResult answer(const Story& story, const ToMQuestion& q, const StoryAnalysis& analysis) const;

    // Parses the question against the story if needed and runs every stage.
    PipelineResult run(const Story& story, const ToMQuestion& q) const;

private:
    StateBackend& backend() const;

    PipelineConfig config_;
    std::unique_ptr<ChatModel> owned_model_;
    ChatModel* model_ = nullptr;
    std::unique_ptr<StateBackend> backend_;
    std::optional<RecordCache> cache_;
    PromptSet prompts_;
};

// One-shot convenience wrapper.
PipelineResult run_pipeline(const Story& story, const ToMQuestion& q, const PipelineConfig& cfg);

}  // namespace enigmatom
