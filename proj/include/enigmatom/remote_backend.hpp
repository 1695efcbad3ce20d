#pragma once
// NKB backend driven by a chat model through the shipped prompt templates.

#include "enigmatom/chat_client.hpp"
#include "enigmatom/nkb.hpp"

#include <filesystem>
#include <map>
#include <string>

namespace enigmatom {

struct PromptSet {
    std::string key_entities;
    std::string locations;
    std::string entity_states;
    std::string answer;

    // Reads key_entities.txt, locations.txt, entity_states.txt, answer.txt.
    static PromptSet load(const std::filesystem::path& dir);
    static std::filesystem::path default_dir();
};

// Replaces every "{{name}}" placeholder. Unknown placeholders are left as-is.
std::string fill_template(std::string tmpl, const std::map<std::string, std::string>& values);

std::string read_text_file(const std::filesystem::path& path);

// Items of the last <entities>...</entities> block (bullets "- x").
std::vector<EntityAttribute> parse_entities_reply(const std::string& reply);
std::vector<std::string> parse_bullets(const std::string& reply);
PrefixStates parse_states_reply(const std::string& reply);

class RemoteBackend : public StateBackend {
public:
    RemoteBackend(ChatModel& model, PromptSet prompts);

    BackendInfo info() const override { return {false, "remote:" + model_.name()}; }

    std::vector<EntityAttribute> propose_entities(const Story& story,
                                                  std::span<const ToMQuestion> questions) override;
    std::vector<std::string> propose_locations(const Story& story) override;
    PrefixStates states_after(const Story& story, int prefix_len,
                              std::span<const EntityAttribute> targets) override;

private:
    ChatModel& model_;
    PromptSet prompts_;
};

}  // namespace enigmatom
