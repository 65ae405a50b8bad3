#pragma once

// Structured prompt layout shared by the pipeline and the template stub:
//
//   <context preamble>
//   ### TASK: <task id>
//   <instructions>
//   ### INPUT
//   ```json
//   {...}
//   ```
//
// The gateway appends an OUTPUT FORMAT section and, on repair, the previous
// reply and its validation error.

#include <optional>
#include <string>

#include <json.hpp>

#include "hhgen/util/text.hpp"

namespace hhgen::llm {

using nlohmann::json;

inline std::string render_task_prompt(const std::string& preamble, const std::string& task,
                                      const std::string& instructions, const json& input) {
  std::string out = preamble;
  if (!out.empty() && out.back() != '\n') out += "\n";
  out += "### TASK: " + task + "\n" + instructions + "\n### INPUT\n```json\n" + input.dump() + "\n```\n";
  return out;
}

inline std::optional<std::string> prompt_task(const std::string& prompt) {
  const std::string tag = "### TASK: ";
  const auto p = prompt.find(tag);
  if (p == std::string::npos) return std::nullopt;
  const auto e = prompt.find('\n', p);
  return trim(prompt.substr(p + tag.size(), e == std::string::npos ? std::string::npos : e - p - tag.size()));
}

/// Contents of the first fenced block after `marker`, or of the first
/// fenced block anywhere when marker is empty.
inline std::optional<std::string> fenced_block(const std::string& text, const std::string& marker = {}) {
  std::size_t from = 0;
  if (!marker.empty()) {
    from = text.find(marker);
    if (from == std::string::npos) return std::nullopt;
  }
  const auto open = text.find("```", from);
  if (open == std::string::npos) return std::nullopt;
  const auto body = text.find('\n', open);
  if (body == std::string::npos) return std::nullopt;
  const auto close = text.find("```", body + 1);
  if (close == std::string::npos) return std::nullopt;
  return text.substr(body + 1, close - body - 1);
}

inline std::optional<json> prompt_input(const std::string& prompt) {
  auto block = fenced_block(prompt, "### INPUT");
  if (!block) return std::nullopt;
  try {
    return json::parse(*block);
  } catch (const json::exception&) {
    return std::nullopt;
  }
}

/// JSON payload of a reply: the first fenced block if any, else the whole
/// reply. Throws json::parse_error on malformed text.
inline json parse_reply_json(const std::string& reply) {
  auto block = fenced_block(reply);
  return json::parse(block ? *block : reply);
}

inline std::string fence_json(const json& value) { return "```json\n" + value.dump(2) + "\n```"; }

}  // namespace hhgen::llm
