#pragma once

// Remote chat-completion provider:
//   POST {url} {"model", "messages": [{"role": "user", "content"}],
//               "temperature", "top_p", "max_tokens", ["top_k"], ["seed"]}
//   -> {"choices": [{"message": {"content", ["refusal"]}, "finish_reason"}]}
// finish_reason "content_filter" or a non-null refusal is a refusal.

#include <string>

#include "hhgen/llm/provider.hpp"
#include "hhgen/util/http.hpp"

namespace hhgen::llm {

struct RemoteConfig {
  std::string url;
  std::string model;
  std::string token_env = "HHGEN_LLM_TOKEN";
  double timeout_seconds = 60.0;
};

class RemoteChatProvider : public Provider {
 public:
  explicit RemoteChatProvider(RemoteConfig cfg) : cfg_(std::move(cfg)) {
    if (cfg_.url.empty()) fail(ErrorCode::config, "remote provider needs a URL");
  }

  std::string id() const override { return "remote:" + cfg_.model + "@" + cfg_.url; }

  static json request_body(const std::string& model, const std::string& prompt, const GenParams& p) {
    json body{{"model", model},
              {"messages", json::array({{{"role", "user"}, {"content", prompt}}})},
              {"temperature", p.temperature},
              {"top_p", p.top_p},
              {"max_tokens", p.max_tokens}};
    if (p.top_k > 0) body["top_k"] = p.top_k;
    if (p.seed) body["seed"] = *p.seed;
    return body;
  }

  std::string complete(const std::string& prompt, const GenParams& params) override {
    require(!prompt.empty(), "prompt must be non-empty");
    const json reply = http::post_json(cfg_.url, request_body(cfg_.model, prompt, params),
                                       http::token_from_env(cfg_.token_env), cfg_.timeout_seconds);
    try {
      const auto& choice = reply.at("choices").at(0);
      const auto& message = choice.at("message");
      if (choice.value("finish_reason", std::string{}) == "content_filter")
        fail(ErrorCode::provider_refused, "completion stopped by content filter");
      if (auto r = message.find("refusal"); r != message.end() && !r->is_null())
        fail(ErrorCode::provider_refused, r->is_string() ? r->get<std::string>() : r->dump());
      const auto& content = message.at("content");
      if (content.is_null()) fail(ErrorCode::provider_refused, "empty completion");
      return content.get<std::string>();
    } catch (const json::exception& e) {
      fail(ErrorCode::provider_unavailable, std::string("unexpected completion response: ") + e.what());
    }
  }

 private:
  RemoteConfig cfg_;
};

}  // namespace hhgen::llm
