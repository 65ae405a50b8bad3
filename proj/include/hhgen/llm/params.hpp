#pragma once

#include <cstdint>
#include <optional>

#include <json.hpp>

#include "hhgen/error.hpp"

namespace hhgen::llm {

struct GenParams {
  double temperature = 0.7;
  double top_p = 1.0;
  int top_k = 0;  // 0 means unlimited
  int max_tokens = 2048;
  std::optional<std::uint64_t> seed;

  void validate() const {
    require(temperature >= 0.0 && temperature <= 2.0, "temperature must lie in [0, 2]");
    require(top_p > 0.0 && top_p <= 1.0, "top_p must lie in (0, 1]");
    require(top_k >= 0, "top_k must be positive or 0 (unlimited)");
    require(max_tokens > 0, "max_tokens must be positive");
  }

  bool operator==(const GenParams&) const = default;
};

inline void to_json(nlohmann::json& j, const GenParams& p) {
  j = {{"temperature", p.temperature}, {"top_p", p.top_p}, {"top_k", p.top_k}, {"max_tokens", p.max_tokens}};
  j["seed"] = p.seed ? nlohmann::json(*p.seed) : nlohmann::json(nullptr);
}

inline void from_json(const nlohmann::json& j, GenParams& p) {
  p.temperature = j.value("temperature", 0.7);
  p.top_p = j.value("top_p", 1.0);
  p.top_k = j.value("top_k", 0);
  p.max_tokens = j.value("max_tokens", 2048);
  if (auto it = j.find("seed"); it != j.end() && !it->is_null()) p.seed = it->get<std::uint64_t>();
  else p.seed.reset();
}

}  // namespace hhgen::llm
