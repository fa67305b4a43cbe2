#include "distill/chat_client.hpp"

#include "httplib.h"
#include "json.hpp"

#include "distill/error.hpp"

namespace distill {

ChatClient::ChatClient(Endpoint endpoint) : endpoint_(std::move(endpoint)) {
  const std::string& url = endpoint_.url;
  const auto scheme_end = url.find("://");
  if (scheme_end == std::string::npos || url.substr(0, scheme_end) != "http") {
    throw Error(Errc::InvalidArgument, "endpoint must be an http:// URL: " + url);
  }
  const auto path_begin = url.find('/', scheme_end + 3);
  host_ = url.substr(0, path_begin);
  std::string path = path_begin == std::string::npos ? "" : url.substr(path_begin);
  while (!path.empty() && path.back() == '/') path.pop_back();
  if (path.empty()) {
    path_ = "/v1/chat/completions";
  } else if (path.ends_with("/chat/completions")) {
    path_ = path;
  } else {
    path_ = path + "/chat/completions";
  }
}

ChatResponse ChatClient::complete(const std::string& prompt,
                                  const SamplingParams& params) const {
  nlohmann::json body;
  body["model"] = endpoint_.model;
  body["messages"] = nlohmann::json::array({{{"role", "user"}, {"content", prompt}}});
  body["temperature"] = params.temperature;
  body["top_p"] = params.top_p;
  body["max_tokens"] = params.max_tokens;

  httplib::Client cli(host_);
  const auto secs = static_cast<time_t>(endpoint_.timeout.count());
  cli.set_connection_timeout(std::min<time_t>(secs, 30), 0);
  cli.set_read_timeout(secs, 0);
  cli.set_write_timeout(secs, 0);
  httplib::Headers headers;
  if (!endpoint_.api_key.empty()) {
    headers.emplace("Authorization", "Bearer " + endpoint_.api_key);
  }

  auto res = cli.Post(path_, headers, body.dump(), "application/json");
  if (!res) {
    throw ChatError(ChatFailure::unreachable,
                    host_ + ": " + httplib::to_string(res.error()));
  }
  if (res->status != 200) {
    throw ChatError(ChatFailure::http_status,
                    "HTTP " + std::to_string(res->status) + " from " + host_ + path_);
  }

  try {
    const auto j = nlohmann::json::parse(res->body);
    const auto& choice = j.at("choices").at(0);
    ChatResponse out;
    const auto& content = choice.at("message").at("content");
    out.content = content.is_null() ? std::string() : content.get<std::string>();
    if (choice.contains("finish_reason") && choice["finish_reason"].is_string()) {
      out.finish_reason = choice["finish_reason"].get<std::string>();
    }
    const auto& usage = j.at("usage");
    out.prompt_tokens = usage.at("prompt_tokens").get<std::uint64_t>();
    out.completion_tokens = usage.at("completion_tokens").get<std::uint64_t>();
    return out;
  } catch (const nlohmann::json::exception& e) {
    throw ChatError(ChatFailure::malformed, std::string("malformed response: ") + e.what());
  }
}

ChatResponse complete_with_retries(const ChatClient& client, const std::string& prompt,
                                   const SamplingParams& params, std::uint32_t max_retries,
                                   std::uint32_t* retries) {
  for (std::uint32_t attempt = 0;; ++attempt) {
    try {
      return client.complete(prompt, params);
    } catch (const ChatError&) {
      if (attempt >= max_retries) throw;
      if (retries != nullptr) ++*retries;
    }
  }
}

}  // namespace distill
