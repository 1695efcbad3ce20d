#include "enigmatom/chat_client.hpp"
#include "enigmatom/error.hpp"

#include <doctest.h>
#include <httplib.h>

#include <atomic>
#include <cstdlib>
#include <thread>

using namespace enigmatom;
using nlohmann::json;

namespace {

json reply_with(const std::string& content) {
    return {{"choices", json::array({{{"message", {{"role", "assistant"}, {"content", content}}}}})}};
}

class LocalServer {
public:
    LocalServer() { port = server.bind_to_any_port("127.0.0.1"); }
    ~LocalServer() {
        server.stop();
        if (thread.joinable()) thread.join();
    }
    // Call after registering routes.
    void start() {
        thread = std::thread([this] { server.listen_after_bind(); });
        server.wait_until_ready();
    }
    std::string url() const { return "http://127.0.0.1:" + std::to_string(port) + "/v1"; }

    httplib::Server server;
    int port = 0;
    std::thread thread;
};

ChatConfig config_for(LocalServer& s) {
    if (!s.thread.joinable()) s.start();
    ChatConfig c;
    c.base_url = s.url();
    c.model = "test-model";
    c.api_key_env = "ENIGMATOM_TEST_KEY";
    c.max_retries = 2;
    c.retry_backoff_ms = 1;
    c.timeout_seconds = 5;
    return c;
}

}  // namespace

TEST_SUITE("chat-client") {

TEST_CASE("request shape and bearer token") {
    LocalServer srv;
    json seen;
    std::string auth;
    srv.server.Post("/v1/chat/completions", [&](const httplib::Request& req, httplib::Response& res) {
        seen = json::parse(req.body);
        auth = req.get_header_value("Authorization");
        res.set_content(reply_with("<answer>box</answer>").dump(), "application/json");
    });
    setenv("ENIGMATOM_TEST_KEY", "secret-token", 1);
    HttpChatClient client(config_for(srv));
    CHECK(client.complete("Where is the ball?") == "<answer>box</answer>");
    CHECK(seen["model"] == "test-model");
    CHECK(seen["temperature"] == 0);
    CHECK(seen["messages"][0]["role"] == "user");
    CHECK(seen["messages"][0]["content"] == "Where is the ball?");
    CHECK(auth == "Bearer secret-token");
    unsetenv("ENIGMATOM_TEST_KEY");
}

TEST_CASE("server errors are retried") {
    LocalServer srv;
    std::atomic<int> calls{0};
    srv.server.Post("/v1/chat/completions", [&](const httplib::Request&, httplib::Response& res) {
        if (++calls < 3) {
            res.status = calls == 1 ? 503 : 429;
            return;
        }
        res.set_content(reply_with("ok").dump(), "application/json");
    });
    HttpChatClient client(config_for(srv));
    CHECK(client.complete("hi") == "ok");
    CHECK(calls == 3);
}

TEST_CASE("retries run out") {
    LocalServer srv;
    std::atomic<int> calls{0};
    srv.server.Post("/v1/chat/completions", [&](const httplib::Request&, httplib::Response& res) {
        ++calls;
        res.status = 500;
    });
    HttpChatClient client(config_for(srv));
    CHECK_THROWS_AS(client.complete("hi"), BackendError);
    CHECK(calls == 3);
}

TEST_CASE("client errors carry the body") {
    LocalServer srv;
    srv.server.Post("/v1/chat/completions", [&](const httplib::Request&, httplib::Response& res) {
        res.status = 401;
        res.set_content(R"({"error": "bad key"})", "application/json");
    });
    HttpChatClient client(config_for(srv));
    try {
        client.complete("hi");
        FAIL("expected BackendError");
    } catch (const BackendError& e) {
        CHECK(e.raw_response().find("bad key") != std::string::npos);
    }
}

TEST_CASE("malformed responses") {
    LocalServer srv;
    std::atomic<int> mode{0};
    srv.server.Post("/v1/chat/completions", [&](const httplib::Request&, httplib::Response& res) {
        if (mode == 0) res.set_content("not json", "text/plain");
        else res.set_content(R"({"choices": []})", "application/json");
    });
    HttpChatClient client(config_for(srv));
    CHECK_THROWS_AS(client.complete("a"), BackendError);
    mode = 1;
    CHECK_THROWS_AS(client.complete("b"), BackendError);
}

TEST_CASE("content given as parts") {
    json r = {{"choices", json::array({{{"message", {{"content", json::array({{{"type", "text"}, {"text", "a"}},
                                                                              {{"type", "text"}, {"text", "b"}}})}}}}})}};
    CHECK(HttpChatClient::extract_content(r, r.dump()) == "ab");
}

TEST_CASE("responses are cached by request") {
    LocalServer srv;
    std::atomic<int> calls{0};
    srv.server.Post("/v1/chat/completions", [&](const httplib::Request& req, httplib::Response& res) {
        ++calls;
        res.set_content(reply_with("echo " + json::parse(req.body)["messages"][0]["content"].get<std::string>()).dump(),
                        "application/json");
    });
    auto dir = std::filesystem::temp_directory_path() / "enigmatom_chat_cache_test";
    std::filesystem::remove_all(dir);
    auto cfg = config_for(srv);
    cfg.cache_dir = dir;
    {
        HttpChatClient client(cfg);
        CHECK(client.complete("one") == "echo one");
        CHECK(client.complete("one") == "echo one");
        CHECK(client.complete("two") == "echo two");
    }
    HttpChatClient again(cfg);
    CHECK(again.complete("one") == "echo one");
    CHECK(calls == 2);
    std::filesystem::remove_all(dir);
}

TEST_CASE("unreachable server") {
    ChatConfig c;
    c.base_url = "http://127.0.0.1:9/v1";
    c.max_retries = 0;
    c.timeout_seconds = 1;
    HttpChatClient client(c);
    CHECK_THROWS_AS(client.complete("hi"), BackendError);
}

TEST_CASE("bad base URLs") {
    ChatConfig c;
    c.base_url = "localhost:8080";
    CHECK_THROWS_AS(HttpChatClient{c}, ConfigError);
}

}
