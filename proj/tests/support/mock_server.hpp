#pragma once

// In-process chat-completions endpoint for tests. The handler sees the
// parsed request body and returns a reply; requests are counted.

#include <atomic>
#include <functional>
#include <mutex>
#include <string>
#include <thread>
#include <vector>

#include <httplib.h>
#include <json.hpp>

namespace mock {

struct Reply {
  int status = 200;
  std::string body;
};

inline Reply chat(const std::string& content, std::uint64_t prompt_tokens,
                  std::uint64_t completion_tokens, const std::string& finish = "stop") {
  nlohmann::json j = {
      {"id", "mock"},
      {"object", "chat.completion"},
      {"choices",
       {{{"index", 0},
         {"message", {{"role", "assistant"}, {"content", content}}},
         {"finish_reason", finish}}}},
      {"usage",
       {{"prompt_tokens", prompt_tokens},
        {"completion_tokens", completion_tokens},
        {"total_tokens", prompt_tokens + completion_tokens}}}};
  return {200, j.dump()};
}

inline Reply status(int code) { return {code, R"({"error":"scripted"})"}; }

// Text of the single user message.
inline std::string prompt_of(const nlohmann::json& request) {
  return request.at("messages").at(0).at("content").get<std::string>();
}

class Server {
 public:
  using Handler = std::function<Reply(const nlohmann::json&)>;

  explicit Server(Handler handler) : handler_(std::move(handler)) {
    server_.Post("/v1/chat/completions", [this](const httplib::Request& req,
                                                httplib::Response& res) {
      ++requests_;
      nlohmann::json body;
      try {
        body = nlohmann::json::parse(req.body);
      } catch (const nlohmann::json::exception&) {
        res.status = 400;
        return;
      }
      {
        std::lock_guard lock(mu_);
        seen_.push_back(body);
      }
      Reply r = handler_(body);
      res.status = r.status;
      res.set_content(r.body, "application/json");
    });
    port_ = server_.bind_to_any_port("127.0.0.1");
    thread_ = std::thread([this] { server_.listen_after_bind(); });
    server_.wait_until_ready();
  }

  ~Server() {
    server_.stop();
    if (thread_.joinable()) thread_.join();
  }

  Server(const Server&) = delete;
  Server& operator=(const Server&) = delete;

  std::string url() const { return "http://127.0.0.1:" + std::to_string(port_); }
  std::size_t requests() const { return requests_.load(); }
  std::vector<nlohmann::json> seen() const {
    std::lock_guard lock(mu_);
    return seen_;
  }

 private:
  Handler handler_;
  httplib::Server server_;
  int port_ = 0;
  std::thread thread_;
  std::atomic<std::size_t> requests_{0};
  mutable std::mutex mu_;
  std::vector<nlohmann::json> seen_;
};

}  // namespace mock
