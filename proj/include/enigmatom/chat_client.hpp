#pragma once
// Chat-completion client for the remote NKB and answer backends.

#include <nlohmann/json.hpp>

#include <filesystem>
#include <mutex>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace enigmatom {

struct ChatMessage {
    std::string role;
    std::string content;
};

// Anything that turns a message list into a completion.
class ChatModel {
public:
    virtual ~ChatModel() = default;
    virtual std::string complete(const std::vector<ChatMessage>& messages) = 0;
    virtual std::string name() const = 0;

    std::string complete(std::string_view user_prompt) {
        return complete(std::vector<ChatMessage>{{"user", std::string(user_prompt)}});
    }
};

struct ChatConfig {
    std::string base_url = "https://api.openai.com/v1";
    std::string model = "gpt-4o-mini";
    // Name of the environment variable holding the bearer token.
    std::string api_key_env = "OPENAI_API_KEY";
    int max_tokens = 1024;
    int timeout_seconds = 120;
    int max_retries = 2;
    int retry_backoff_ms = 250;  // doubled per attempt
    // Responses are cached here by request hash when non-empty.
    std::filesystem::path cache_dir;
};

// OpenAI-compatible POST {base_url}/chat/completions. Greedy decoding:
// temperature is always sent as 0.
class HttpChatClient : public ChatModel {
public:
    explicit HttpChatClient(ChatConfig config);

    using ChatModel::complete;
    std::string complete(const std::vector<ChatMessage>& messages) override;
    std::string name() const override { return config_.model; }

    nlohmann::json build_request(const std::vector<ChatMessage>& messages) const;
    // choices[0].message.content; throws BackendError otherwise.
    static std::string extract_content(const nlohmann::json& response, const std::string& raw);

    const ChatConfig& config() const noexcept { return config_; }

private:
    std::optional<std::string> cache_lookup(const std::string& key) const;
    void cache_store(const std::string& key, const std::string& content) const;

    ChatConfig config_;
    std::string scheme_host_;
    std::string path_prefix_;
    mutable std::mutex cache_mutex_;
};

}  // namespace enigmatom
