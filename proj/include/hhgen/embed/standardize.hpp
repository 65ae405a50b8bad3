#pragma once

#include <algorithm>
#include <map>
#include <set>
#include <string>
#include <utility>
#include <vector>

namespace hhgen::embed {

inline std::string role_token(std::size_t index) { return "resident-" + std::to_string(index + 1); }

/// Replaces member names with role tokens ("resident-1" for the first name,
/// and so on) and specific room labels with generic names. Matching is
/// case-sensitive and single-pass, longest key first, so replacements are
/// never re-scanned. Room-label chains (a -> b -> c) resolve to their end.
/// Names that occur inside a role token are not supported.
inline std::string standardize_description(const std::string& text, const std::vector<std::string>& member_names,
                                           const std::map<std::string, std::string>& room_label_map) {
  std::vector<std::pair<std::string, std::string>> rules;
  for (std::size_t i = 0; i < member_names.size(); ++i)
    if (!member_names[i].empty()) rules.emplace_back(member_names[i], role_token(i));
  for (const auto& [from, to] : room_label_map) {
    if (from.empty()) continue;
    std::string target = to;
    std::set<std::string> seen{from};
    for (auto it = room_label_map.find(target); it != room_label_map.end() && seen.insert(target).second;
         it = room_label_map.find(target))
      target = it->second;
    if (target != from) rules.emplace_back(from, target);
  }
  std::stable_sort(rules.begin(), rules.end(),
                   [](const auto& a, const auto& b) { return a.first.size() > b.first.size(); });

  std::string out;
  out.reserve(text.size());
  std::size_t i = 0;
  while (i < text.size()) {
    bool hit = false;
    for (const auto& [from, to] : rules) {
      if (text.compare(i, from.size(), from) == 0) {
        out += to;
        i += from.size();
        hit = true;
        break;
      }
    }
    if (!hit) out.push_back(text[i++]);
  }
  return out;
}

}  // namespace hhgen::embed
