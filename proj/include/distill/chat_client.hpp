#pragma once

#include <chrono>
#include <cstdint>
#include <stdexcept>
#include <string>

namespace distill {

// Sampling parameters for one request. Named presets live with the
// generation settings.
struct SamplingParams {
  double temperature = 1.0;
  double top_p = 1.0;
  std::uint64_t max_tokens = 16384;
};

struct Endpoint {
  // "http://host:port", "http://host:port/v1" or a full
  // ".../chat/completions" URL. Plain http only.
  std::string url;
  std::string model;
  std::string api_key;  // sent as a bearer token when non-empty
  std::chrono::seconds timeout{600};
};

struct ChatResponse {
  std::string content;
  std::uint64_t prompt_tokens = 0;
  std::uint64_t completion_tokens = 0;
  std::string finish_reason;
};

enum class ChatFailure { unreachable, http_status, malformed };

class ChatError : public std::runtime_error {
 public:
  ChatError(ChatFailure kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}
  ChatFailure kind() const noexcept { return kind_; }

 private:
  ChatFailure kind_;
};

// Minimal chat-completions client: one user message per request, token
// counts read from the response's usage block.
class ChatClient {
 public:
  explicit ChatClient(Endpoint endpoint);

  const Endpoint& endpoint() const { return endpoint_; }

  // Thread-safe; each call opens its own connection. Throws ChatError.
  ChatResponse complete(const std::string& prompt, const SamplingParams& params) const;

 private:
  Endpoint endpoint_;
  std::string host_;  // scheme://host:port
  std::string path_;
};

// Calls complete() up to 1 + max_retries times. Returns the first success
// and adds the number of failed attempts to *retries. Rethrows the last
// ChatError once attempts are exhausted.
ChatResponse complete_with_retries(const ChatClient& client, const std::string& prompt,
                                   const SamplingParams& params, std::uint32_t max_retries,
                                   std::uint32_t* retries = nullptr);

}  // namespace distill
