#pragma once

#include <deque>
#include <functional>
#include <map>
#include <mutex>
#include <string>
#include <vector>

#include "hhgen/llm/prompt.hpp"
#include "hhgen/llm/provider.hpp"
#include "hhgen/util/hash.hpp"

namespace hhgen::llm {

/// Replies keyed by task. A handler receives the parsed INPUT block and an
/// Rng seeded from hash(prompt) ^ seed, and returns the JSON payload.
using TemplateHandler = std::function<json(const json& input, Rng& rng)>;

/// Offline provider that fills per-task templates deterministically: the
/// reply is a pure function of (prompt, params.seed).
class TemplateProvider : public Provider {
 public:
  std::string id() const override { return "stub-template"; }

  void on(const std::string& task, TemplateHandler handler) { handlers_[task] = std::move(handler); }
  bool handles(const std::string& task) const { return handlers_.count(task) > 0; }

  std::string complete(const std::string& prompt, const GenParams& params) override {
    require(!prompt.empty(), "prompt must be non-empty");
    Rng rng(fnv1a64(prompt) ^ mix64(params.seed.value_or(0)));
    const auto task = prompt_task(prompt);
    if (task) {
      if (auto it = handlers_.find(*task); it != handlers_.end())
        return fence_json(it->second(prompt_input(prompt).value_or(json::object()), rng));
    }
    return "stub reply " + hex64(rng.next());
  }

 private:
  std::map<std::string, TemplateHandler> handlers_;
};

/// Provider that replays exact replies. Per-task queues are consulted
/// first, then the global queue, then the optional fallback. Every prompt
/// it sees is kept for inspection.
class ScriptedProvider : public Provider {
 public:
  explicit ScriptedProvider(std::vector<std::string> replies = {}, ProviderPtr fallback = nullptr)
      : global_(replies.begin(), replies.end()), fallback_(std::move(fallback)) {}

  std::string id() const override { return "stub-scripted"; }

  void push(const std::string& reply) {
    std::lock_guard lock(mu_);
    global_.push_back(reply);
  }
  void push(const std::string& task, const std::string& reply) {
    std::lock_guard lock(mu_);
    per_task_[task].push_back(reply);
  }
  void push_json(const std::string& task, const json& value) { push(task, fence_json(value)); }

  std::string complete(const std::string& prompt, const GenParams& params) override {
    require(!prompt.empty(), "prompt must be non-empty");
    {
      std::lock_guard lock(mu_);
      prompts_.push_back(prompt);
      const auto task = prompt_task(prompt).value_or("");
      if (auto it = per_task_.find(task); it != per_task_.end() && !it->second.empty()) {
        auto reply = it->second.front();
        it->second.pop_front();
        return reply;
      }
      if (!global_.empty()) {
        auto reply = global_.front();
        global_.pop_front();
        return reply;
      }
    }
    if (fallback_) return fallback_->complete(prompt, params);
    fail(ErrorCode::precondition, "scripted provider ran out of replies");
  }

  std::vector<std::string> prompts() const {
    std::lock_guard lock(mu_);
    return prompts_;
  }

 private:
  mutable std::mutex mu_;
  std::deque<std::string> global_;
  std::map<std::string, std::deque<std::string>> per_task_;
  ProviderPtr fallback_;
  std::vector<std::string> prompts_;
};

}  // namespace hhgen::llm
