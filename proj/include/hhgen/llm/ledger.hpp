#pragma once

#include <map>
#include <mutex>
#include <string>

#include <json.hpp>

namespace hhgen::llm {

/// Who made a gateway call: the pipeline module ("environment", "hri",
/// "controller") and the step within it.
struct CallTag {
  std::string module = "misc";
  std::string step = "generate";
};

struct CallCounters {
  long calls = 0;
  double seconds = 0.0;
  long prompt_tokens = 0;
  long response_tokens = 0;

  CallCounters& operator+=(const CallCounters& o) {
    calls += o.calls;
    seconds += o.seconds;
    prompt_tokens += o.prompt_tokens;
    response_tokens += o.response_tokens;
    return *this;
  }
};

/// Whitespace-delimited word count; a provider-neutral token estimate.
inline long approx_tokens(const std::string& text) {
  long n = 0;
  bool in_word = false;
  for (unsigned char c : text) {
    const bool space = c == ' ' || c == '\n' || c == '\t' || c == '\r';
    if (!space && !in_word) ++n;
    in_word = !space;
  }
  return n;
}

/// Per-module and per-step call accounting, safe to update from several
/// threads. Counters only ever grow.
class CallLedger {
 public:
  void record(const CallTag& tag, double seconds, long prompt_tokens, long response_tokens) {
    const CallCounters c{1, seconds, prompt_tokens, response_tokens};
    std::lock_guard lock(mu_);
    modules_[tag.module] += c;
    steps_[tag.module + "/" + tag.step] += c;
  }

  std::map<std::string, CallCounters> by_module() const {
    std::lock_guard lock(mu_);
    return modules_;
  }

  std::map<std::string, CallCounters> by_step() const {
    std::lock_guard lock(mu_);
    return steps_;
  }

  CallCounters module(const std::string& name) const {
    std::lock_guard lock(mu_);
    auto it = modules_.find(name);
    return it == modules_.end() ? CallCounters{} : it->second;
  }

  long total_calls() const {
    std::lock_guard lock(mu_);
    long n = 0;
    for (const auto& [_, c] : modules_) n += c.calls;
    return n;
  }

  /// Call and token counts only; wall-clock time is excluded so the result
  /// is reproducible.
  nlohmann::json counts_json() const { return to_json_impl(false); }
  nlohmann::json timing_json() const { return to_json_impl(true); }

  static std::map<std::string, CallCounters> modules_from_json(const nlohmann::json& j) {
    std::map<std::string, CallCounters> out;
    if (!j.contains("modules")) return out;
    for (const auto& [name, v] : j.at("modules").items()) {
      CallCounters c;
      c.calls = v.value("calls", 0L);
      c.seconds = v.value("seconds", 0.0);
      c.prompt_tokens = v.value("prompt_tokens", 0L);
      c.response_tokens = v.value("response_tokens", 0L);
      out[name] = c;
    }
    return out;
  }

 private:
  nlohmann::json to_json_impl(bool timing) const {
    std::lock_guard lock(mu_);
    auto dump = [timing](const std::map<std::string, CallCounters>& m) {
      nlohmann::json j = nlohmann::json::object();
      for (const auto& [k, c] : m) {
        if (timing) j[k] = {{"calls", c.calls}, {"seconds", c.seconds}};
        else j[k] = {{"calls", c.calls}, {"prompt_tokens", c.prompt_tokens}, {"response_tokens", c.response_tokens}};
      }
      return j;
    };
    return {{"modules", dump(modules_)}, {"steps", dump(steps_)}};
  }

  mutable std::mutex mu_;
  std::map<std::string, CallCounters> modules_;
  std::map<std::string, CallCounters> steps_;
};

}  // namespace hhgen::llm
