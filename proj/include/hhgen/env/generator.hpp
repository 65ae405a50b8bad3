#pragma once

#include <map>
#include <set>
#include <string>
#include <vector>

#include "hhgen/env/assets.hpp"
#include "hhgen/env/doors.hpp"
#include "hhgen/env/placement.hpp"
#include "hhgen/env/repair.hpp"
#include "hhgen/llm/stub.hpp"

namespace hhgen::env {

struct EnvGenOptions {
  std::uint64_t seed = 0;
  std::size_t candidates = 12;      // top-k catalog records offered per room
  double min_similarity = 0.05;     // candidates below this cosine are not offered
  std::size_t max_items_per_room = 8;
};

struct EnvGeneration {
  EnvironmentSchema env;
  RoomProgram program;
  std::vector<Unplaced> unplaced;
  ContextualMemory memory;
};

inline const std::vector<std::string>& environment_steps() {
  static const std::vector<std::string> steps = {"room_program", "layout",      "nested_repair", "doors",
                                                 "connectivity", "furnishing", "placement"};
  return steps;
}

inline json furnish_schema() {
  return json::parse(R"({
    "type": "object", "required": ["assets"],
    "properties": {"assets": {"type": "array", "items": {"type": "string"}}}})");
}

/// One model call per room choosing furniture among the ranked candidates.
inline std::vector<AssetRecord> furnish_room(const Room& room, const std::vector<Persona>& personas,
                                             const AssetCatalog& catalog, const embed::EmbeddingProvider& embed,
                                             llm::Gateway& gw, const EnvGenOptions& opts, const ContextualMemory& mem) {
  if (!gw.schemas().has("furnish_room")) gw.schemas().add("furnish_room", furnish_schema());
  std::set<std::string> offered;
  json cands = json::array();
  for (const auto& s : rank_assets(room, personas, catalog, embed, opts.candidates)) {
    if (s.score < opts.min_similarity) continue;
    offered.insert(s.record.id);
    cands.push_back({{"id", s.record.id}, {"description", s.record.description}});
  }
  if (cands.empty()) return {};
  std::string owner_text;
  if (room.owner)
    for (const auto& p : personas)
      if (p.id == *room.owner) owner_text = p.free_text;
  const std::string prompt = llm::render_task_prompt(
      llm::build_context_preamble(mem), "furnish_room",
      "Pick the furniture for this room from the candidate assets, in placement priority order. Use only candidate ids.",
      {{"room", {{"id", room.id}, {"label", room.label}, {"function", room.function}, {"owner_text", owner_text}}},
       {"candidates", cands}});
  const json reply = gw.generate_structured(
      prompt, "furnish_room", gw.defaults(), {"environment", "furnish_room"}, llm::kDefaultMaxRepairs,
      [&](const json& v) -> std::optional<std::string> {
        for (const auto& id : v.at("assets"))
          if (!offered.count(id.get<std::string>())) return "asset '" + id.get<std::string>() + "' is not a candidate";
        return std::nullopt;
      });
  std::vector<AssetRecord> out;
  for (const auto& id : reply.at("assets")) {
    if (out.size() >= opts.max_items_per_room) break;
    out.push_back(*catalog.find(id.get<std::string>()));
  }
  return out;
}

/// Keyword groups the template furnisher tries to cover per room function;
/// each group takes the best-ranked candidate matching any of its phrases.
inline const std::vector<std::vector<std::string>>& furnishing_groups(RoomFunction f) {
  static const std::map<RoomFunction, std::vector<std::vector<std::string>>> table = {
      {RoomFunction::sleeping, {{"bed"}, {"wardrobe", "dresser"}, {"nightstand"}, {"lamp"}}},
      {RoomFunction::office, {{"office desk"}, {"office chair"}, {"bookshelf"}, {"computer"}}},
      {RoomFunction::kitchen, {{"stove"}, {"refrigerator"}, {"counter"}, {"kitchen sink"}, {"coffee"}}},
      {RoomFunction::dining, {{"dining table"}, {"dining chair"}, {"dining chair"}}},
      {RoomFunction::living, {{"sofa"}, {"television"}, {"coffee table"}, {"armchair"}}},
      {RoomFunction::bath, {{"toilet"}, {"shower", "bathtub"}, {"bathroom sink"}}},
      {RoomFunction::hobby, {}},
      {RoomFunction::other, {}},
  };
  return table.at(f);
}

inline json template_furnish_room(const json& input, Rng& rng) {
  const auto& cands = input.value("candidates", json::array());
  const auto f = parse_enum<RoomFunction>(input.value("room", json::object()).value("function", std::string("other")))
                     .value_or(RoomFunction::other);
  json picked = json::array();
  std::set<std::size_t> used;
  for (const auto& group : furnishing_groups(f)) {
    for (std::size_t i = 0; i < cands.size(); ++i) {
      const auto desc = cands[i].value("description", std::string{});
      bool hit = false;
      for (const auto& k : group) hit = hit || contains_phrase(desc, k);
      if (hit && (!used.count(i) || group.front() == "dining chair")) {
        picked.push_back(cands[i].at("id"));
        used.insert(i);
        break;
      }
    }
  }
  // A few extra pieces from the top of the ranking, none of them a second
  // copy of a grouped piece.
  auto grouped = [&](const std::string& desc) {
    for (const auto& group : furnishing_groups(f))
      for (const auto& k : group)
        if (contains_phrase(desc, k)) return true;
    return false;
  };
  const std::size_t extras = (f == RoomFunction::hobby || f == RoomFunction::other) ? 3 : rng.index(2);
  for (std::size_t i = 0, added = 0; i < cands.size() && added < extras; ++i) {
    if (used.count(i) || grouped(cands[i].value("description", std::string{})) || !rng.chance(0.6)) continue;
    picked.push_back(cands[i].at("id"));
    used.insert(i);
    ++added;
  }
  return {{"assets", picked}};
}

/// Room program -> layout -> nested-room repair -> doors -> connectivity ->
/// furnishing -> placement. The result always validates; anything else is
/// an error.
inline EnvGeneration generate_environment(const std::vector<Persona>& personas, const EnvironmentConstraints& constraints,
                                          llm::Gateway& gw, const AssetCatalog& catalog,
                                          const embed::EmbeddingProvider& embed, const EnvGenOptions& opts = {}) {
  require(!personas.empty(), "environment generation needs at least one persona");
  EnvGeneration out;
  ContextualMemory mem;
  mem.task_description = "Design the floor plan and furnishing of a " +
                         (constraints.house_type.empty() ? std::string("home") : constraints.house_type) + " for " +
                         std::to_string(personas.size()) + " residents.";
  mem.pipeline_steps = environment_steps();

  mem.current_requirements = "One sleeping room per resident; all required rooms present.";
  out.program = generate_room_program(personas, constraints, gw, mem);
  mem = llm::record_step(mem, "room_program", std::to_string(out.program.entries.size()) + " rooms planned");

  EnvironmentSchema env;
  env.bounds = constraints.bounds;
  env.rooms = layout_rooms(out.program, constraints.bounds, opts.seed);
  mem = llm::record_step(mem, "layout", "rooms laid out on a 0.1 m grid");
  env = fix_nested_rooms(std::move(env));
  mem = llm::record_step(mem, "nested_repair", "no nested rooms");

  mem.current_requirements = "Doors only between rooms that share a wall.";
  env = generate_doors(std::move(env), gw, mem);
  mem = llm::record_step(mem, "doors", std::to_string(env.doors.size()) + " doors proposed");
  env = ensure_connectivity(std::move(env));
  mem = llm::record_step(mem, "connectivity", std::to_string(env.doors.size()) + " doors after repair");

  mem.current_requirements = "Furniture that matches each room and its residents.";
  Selections selections;
  for (const auto& room : env.rooms)
    selections.emplace_back(room.id, furnish_room(room, personas, catalog, embed, gw, opts, mem));
  mem = llm::record_step(mem, "furnishing", "assets chosen for " + std::to_string(env.rooms.size()) + " rooms");

  auto placed = place_objects(std::move(env), selections, opts.seed);
  mem = llm::record_step(mem, "placement", std::to_string(placed.placed.size()) + " objects placed");
  out.env = std::move(placed.env);
  out.unplaced = std::move(placed.unplaced);
  out.memory = std::move(mem);

  const auto problems = validate_environment(out.env);
  if (!problems.empty()) fail(ErrorCode::unrepairable, "generated environment is invalid: " + to_string(problems.front()));
  return out;
}

inline void register_environment_templates(llm::TemplateProvider& stub) {
  stub.on("room_program", template_room_program);
  stub.on("door_kinds", template_door_kinds);
  stub.on("furnish_room", template_furnish_room);
}

}  // namespace hhgen::env
