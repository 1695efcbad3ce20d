#pragma once

#include "enigmatom/chat_client.hpp"
#include "enigmatom/remote_backend.hpp"
#include "enigmatom/story.hpp"

#include <deque>
#include <filesystem>
#include <functional>
#include <mutex>
#include <string>
#include <vector>

namespace testing {

inline std::filesystem::path fixture(const std::string& name) {
    return std::filesystem::path(ENIGMATOM_FIXTURES) / name;
}

inline enigmatom::Story load_story(const std::string& name) {
    return enigmatom::parse_story(enigmatom::read_text_file(fixture(name)));
}

inline enigmatom::Story melon() { return load_story("melon.txt"); }
inline enigmatom::Story tomi() { return load_story("tomi.txt"); }

// Replies come from `respond`, or from the queue in order.
class FakeChat : public enigmatom::ChatModel {
public:
    using Responder = std::function<std::string(const std::string& prompt)>;

    FakeChat() = default;
    explicit FakeChat(Responder r) : respond_(std::move(r)) {}

    void push(std::string reply) { queue_.push_back(std::move(reply)); }

    using enigmatom::ChatModel::complete;
    std::string complete(const std::vector<enigmatom::ChatMessage>& messages) override {
        std::lock_guard lock(mutex_);
        prompts.push_back(messages.empty() ? std::string{} : messages.back().content);
        if (respond_) return respond_(prompts.back());
        if (queue_.empty()) return {};
        auto r = queue_.front();
        queue_.pop_front();
        return r;
    }
    std::string name() const override { return "fake"; }

    std::vector<std::string> prompts;

private:
    Responder respond_;
    std::deque<std::string> queue_;
    std::mutex mutex_;
};

}  // namespace testing
