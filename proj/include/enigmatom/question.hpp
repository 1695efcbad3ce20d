#pragma once
// ToM questions: parsing into belief chains, order reduction, answer spaces.

#include "enigmatom/records.hpp"
#include "enigmatom/story.hpp"

#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace enigmatom {

class ChatModel;

// Outermost believer first. Empty for factual questions.
class BeliefChain {
public:
    BeliefChain() = default;
    explicit BeliefChain(std::vector<CharacterId> characters);

    const std::vector<CharacterId>& characters() const noexcept { return chars_; }
    int order() const noexcept { return static_cast<int>(chars_.size()); }
    bool empty() const noexcept { return chars_.empty(); }
    const CharacterId& innermost() const { return chars_.back(); }

    // Throws ValidationError if a member is not a story character.
    void check_members(const Story& story) const;

    friend bool operator==(const BeliefChain&, const BeliefChain&) = default;

private:
    std::vector<CharacterId> chars_;
};

enum class QuestionForm {
    Belief,   // "Where does A think ... the X is?"
    Search,   // "Where will A search for the X?"
    Reality,  // "Where is the X really?"
    Initial,  // "Where is the X in the beginning?"
};

struct ToMQuestion {
    std::string raw;
    BeliefChain chain;
    std::string target_entity;
    std::string target_attribute = "location";
    QuestionForm form = QuestionForm::Belief;
    std::vector<std::string> answer_space;

    int order() const noexcept { return chain.order(); }
};

// Rendering of the supported templates.
std::string render_question(const ToMQuestion& q);

// Rule parser over the supported templates. Falls back to `llm` (when
// given) for anything else; throws ParseError otherwise.
ToMQuestion parse_question(std::string_view text, const Story& story,
                           ChatModel* llm = nullptr);

const std::vector<std::string>& supported_question_templates();

// First-order question about the innermost believer.
ToMQuestion reduce_order(const ToMQuestion& q);

// Question rewriting through a chat model with few-shot demonstrations.
// The result is re-parsed with the rule parser and must be first-order.
ToMQuestion reduce_order_llm(const ToMQuestion& q, const Story& story, ChatModel& llm,
                             std::string_view demonstrations);

// Candidate answers for a location question: every container the target is
// recorded in, first-seen order. Falls back to every container in the story.
std::vector<std::string> answer_space_for(const ToMQuestion& q, const Story& story,
                                          const std::vector<EntityStateRecord>& records);

}  // namespace enigmatom
