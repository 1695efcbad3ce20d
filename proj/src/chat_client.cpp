#include "enigmatom/chat_client.hpp"

#include "enigmatom/error.hpp"
#include "enigmatom/log.hpp"
#include "enigmatom/text.hpp"

#include <httplib.h>

#include <chrono>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <thread>

namespace enigmatom {

using nlohmann::json;

HttpChatClient::HttpChatClient(ChatConfig config) : config_(std::move(config)) {
    std::string url = config_.base_url;
    while (!url.empty() && url.back() == '/') url.pop_back();
    auto scheme_end = url.find("://");
    if (scheme_end == std::string::npos) throw ConfigError("base URL needs a scheme: " + url);
    auto path_start = url.find('/', scheme_end + 3);
    if (path_start == std::string::npos) {
        scheme_host_ = url;
    } else {
        scheme_host_ = url.substr(0, path_start);
        path_prefix_ = url.substr(path_start);
    }
#ifndef CPPHTTPLIB_OPENSSL_SUPPORT
    if (url.rfind("https://", 0) == 0) {
        throw ConfigError("built without TLS support; use an http:// base URL");
    }
#endif
    if (!config_.cache_dir.empty()) std::filesystem::create_directories(config_.cache_dir);
}

json HttpChatClient::build_request(const std::vector<ChatMessage>& messages) const {
    json msgs = json::array();
    for (const auto& m : messages) msgs.push_back({{"role", m.role}, {"content", m.content}});
    return {{"model", config_.model},
            {"messages", msgs},
            {"temperature", 0},
            {"max_tokens", config_.max_tokens}};
}

std::string HttpChatClient::extract_content(const json& response, const std::string& raw) {
    if (response.contains("error")) {
        throw BackendError("chat backend returned an error: " + response["error"].dump(), raw);
    }
    try {
        const auto& msg = response.at("choices").at(0).at("message");
        const auto& content = msg.at("content");
        if (content.is_string()) return content.get<std::string>();
        // Some servers return content as a list of parts.
        std::string out;
        for (const auto& part : content) {
            if (part.contains("text")) out += part["text"].get<std::string>();
        }
        return out;
    } catch (const json::exception&) {
        throw BackendError("chat response lacks choices[0].message.content", raw);
    }
}

std::optional<std::string> HttpChatClient::cache_lookup(const std::string& key) const {
    if (config_.cache_dir.empty()) return std::nullopt;
    std::lock_guard lock(cache_mutex_);
    std::ifstream in(config_.cache_dir / (key + ".json"));
    if (!in) return std::nullopt;
    try {
        json j = json::parse(in);
        return j.at("content").get<std::string>();
    } catch (const json::exception&) {
        log::warn("ignoring corrupt response cache entry " + key);
        return std::nullopt;
    }
}

void HttpChatClient::cache_store(const std::string& key, const std::string& content) const {
    if (config_.cache_dir.empty()) return;
    std::lock_guard lock(cache_mutex_);
    auto tmp = config_.cache_dir / (key + ".json.tmp");
    {
        std::ofstream out(tmp);
        out << json{{"content", content}}.dump();
    }
    std::filesystem::rename(tmp, config_.cache_dir / (key + ".json"));
}

std::string HttpChatClient::complete(const std::vector<ChatMessage>& messages) {
    json body = build_request(messages);
    std::string payload = body.dump();
    std::string key = text::hex64(text::fnv1a64(scheme_host_ + path_prefix_ + "\n" + payload));
    if (auto hit = cache_lookup(key)) return *hit;

    httplib::Headers headers;
    if (const char* token = std::getenv(config_.api_key_env.c_str()); token && *token) {
        headers.emplace("Authorization", std::string("Bearer ") + token);
    }

    std::string last_error;
    for (int attempt = 0; attempt <= config_.max_retries; ++attempt) {
        if (attempt > 0) std::this_thread::sleep_for(std::chrono::milliseconds(config_.retry_backoff_ms << (attempt - 1)));
        httplib::Client cli(scheme_host_);
        cli.set_connection_timeout(config_.timeout_seconds, 0);
        cli.set_read_timeout(config_.timeout_seconds, 0);
        auto res = cli.Post(path_prefix_ + "/chat/completions", headers, payload, "application/json");
        if (!res) {
            last_error = "transport error: " + httplib::to_string(res.error());
            continue;
        }
        if (res->status == 429 || res->status >= 500) {
            last_error = "HTTP " + std::to_string(res->status);
            continue;
        }
        if (res->status != 200) {
            throw BackendError("chat backend HTTP " + std::to_string(res->status), res->body);
        }
        json parsed;
        try {
            parsed = json::parse(res->body);
        } catch (const json::parse_error&) {
            throw BackendError("chat backend returned non-JSON body", res->body);
        }
        std::string content = extract_content(parsed, res->body);
        cache_store(key, content);
        return content;
    }
    throw BackendError("chat backend unreachable after retries (" + last_error + ")");
}

}  // namespace enigmatom
