#pragma once

#include <algorithm>
#include <string>

#include "hhgen/core/types.hpp"

namespace hhgen::llm {

/// Renders task, step list, completed summaries and current requirements,
/// in that order. Pure.
inline std::string build_context_preamble(const ContextualMemory& mem) {
  std::string out = "## Task\n" + mem.task_description + "\n## Pipeline steps\n";
  for (std::size_t i = 0; i < mem.pipeline_steps.size(); ++i)
    out += std::to_string(i + 1) + ". " + mem.pipeline_steps[i] + "\n";
  out += "## Completed steps\n";
  for (const auto& [step, summary] : mem.completed) out += "- " + step + ": " + summary + "\n";
  out += "## Current step requirements\n" + mem.current_requirements + "\n";
  return out;
}

/// Returns a copy of `mem` with (step, summary) appended. Steps must be
/// completed in pipeline order.
inline ContextualMemory record_step(const ContextualMemory& mem, const std::string& step, const std::string& summary) {
  const auto& steps = mem.pipeline_steps;
  const auto pos = std::find(steps.begin(), steps.end(), step);
  if (pos == steps.end()) fail(ErrorCode::unknown_step, "'" + step + "' is not a pipeline step");
  for (const auto& [done, _] : mem.completed)
    if (done == step) fail(ErrorCode::duplicate_step, "'" + step + "' already completed");
  if (!mem.completed.empty()) {
    const auto last = std::find(steps.begin(), steps.end(), mem.completed.back().first);
    if (pos < last) fail(ErrorCode::precondition, "'" + step + "' would complete out of pipeline order");
  }
  ContextualMemory next = mem;
  next.completed.emplace_back(step, summary);
  return next;
}

inline ContextualMemory with_requirements(ContextualMemory mem, std::string requirements) {
  mem.current_requirements = std::move(requirements);
  return mem;
}

}  // namespace hhgen::llm
