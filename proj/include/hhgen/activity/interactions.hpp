#pragma once

#include <map>
#include <set>
#include <string>
#include <vector>

#include "hhgen/activity/day.hpp"

namespace hhgen::activity {

// ---------------------------------------------------------------------------
// Robot involvement.

inline json robot_tasks_schema() {
  return json::parse(R"({
    "type": "object", "required": ["assignments"],
    "properties": {"assignments": {"type": "array", "items": {
      "type": "object", "required": ["index", "capability"],
      "properties": {"index": {"type": "integer", "minimum": 0}, "capability": {"type": "string"}}}}}})");
}

/// Indices of activities the robot could assist with: a lexicon capability
/// the robot has, inside its availability window.
inline std::vector<std::size_t> robot_candidates(const std::vector<Activity>& acts, const RobotProfile& robot) {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < acts.size(); ++i) {
    const auto* k = find_kind(acts[i].label);
    if (k && !k->capability.empty() && robot.has(k->capability) && robot.availability.contains(acts[i].start, acts[i].end()))
      out.push_back(i);
  }
  return out;
}

/// Marks the activities the model assigns to the robot. No call is made
/// when nothing qualifies.
inline void assign_robot(std::vector<Activity>& acts, const RobotProfile& robot, const ContextualMemory& mem,
                         llm::Gateway& gw) {
  const auto cands = robot_candidates(acts, robot);
  if (cands.empty()) return;
  if (!gw.schemas().has("robot_tasks")) gw.schemas().add("robot_tasks", robot_tasks_schema());
  json list = json::array();
  for (std::size_t i = 0; i < cands.size(); ++i) {
    const auto& a = acts[cands[i]];
    list.push_back({{"index", i},
                    {"member", a.member},
                    {"label", a.label},
                    {"start", format_hhmm(a.start)},
                    {"end", format_hhmm(a.end())},
                    {"capability", find_kind(a.label)->capability}});
  }
  const json input{{"robot", robot}, {"candidates", list}};
  const auto prompt = llm::render_task_prompt(llm::build_context_preamble(mem), "robot_tasks",
                                              "Choose which of these activities the household robot helps with.",
                                              input);
  const json reply = gw.generate_structured(
      prompt, "robot_tasks", gw.defaults(), {"hri", "robot_tasks"}, llm::kDefaultMaxRepairs,
      [&](const json& v) -> std::optional<std::string> {
        for (const auto& a : v.at("assignments")) {
          if (a.at("index").get<std::size_t>() >= cands.size()) return "index " + a.at("index").dump() + " is not a candidate";
          if (!robot.has(a.at("capability").get<std::string>()))
            return "robot lacks capability '" + a.at("capability").get<std::string>() + "'";
        }
        return std::nullopt;
      });
  for (const auto& a : reply.at("assignments")) acts[cands[a.at("index").get<std::size_t>()]].involves_robot = true;
}

inline json template_robot_tasks(const json& input, Rng& rng) {
  json out = json::array();
  for (const auto& c : input.at("candidates"))
    if (rng.chance(0.6)) out.push_back({{"index", c.at("index")}, {"capability", c.at("capability")}});
  return {{"assignments", out}};
}

// ---------------------------------------------------------------------------
// End-of-day carryover.

inline json day_summary_schema() {
  return json::parse(R"({
    "type": "object", "required": ["summaries"],
    "properties": {"summaries": {"type": "array", "items": {
      "type": "object", "required": ["member", "summary"],
      "properties": {"member": {"type": "string"}, "summary": {"type": "string", "minLength": 1}}}}}})");
}

/// One carryover line per member: the model's summary followed by the
/// sleep facts the next day must respect.
inline std::map<std::string, std::string> summarize_day(const std::vector<Activity>& day_acts,
                                                        const std::vector<Persona>& personas, int day,
                                                        const ContextualMemory& mem, llm::Gateway& gw) {
  if (!gw.schemas().has("day_summary")) gw.schemas().add("day_summary", day_summary_schema());
  json members = json::array();
  for (const auto& p : personas) {
    json acts = json::array();
    for (const auto& a : day_acts)
      if (a.member == p.id) acts.push_back(interval_json(a));
    members.push_back({{"id", p.id}, {"name", p.name}, {"activities", acts}});
  }
  const auto prompt = llm::render_task_prompt(llm::build_context_preamble(mem), "day_summary",
                                              "Summarize each member's day in one sentence for tomorrow's planning.",
                                              {{"day", day}, {"members", members}});
  const json reply = gw.generate_structured(prompt, "day_summary", gw.defaults(), {"hri", "day_summary"},
                                            llm::kDefaultMaxRepairs, [&](const json& v) -> std::optional<std::string> {
                                              std::set<std::string> got;
                                              for (const auto& s : v.at("summaries")) got.insert(s.at("member").get<std::string>());
                                              for (const auto& p : personas)
                                                if (!got.count(p.id)) return "missing summary for " + p.id;
                                              return std::nullopt;
                                            });
  std::map<std::string, std::string> out;
  for (const auto& p : personas) {
    std::string text;
    for (const auto& s : reply.at("summaries"))
      if (s.at("member") == p.id) text = s.at("summary").get<std::string>();
    for (const auto& a : day_acts)
      if (a.member == p.id && a.label == "sleep")
        text += " Went to sleep at " + format_hhmm(a.start) + "; earliest wake tomorrow " +
                format_hhmm(std::max(0, a.start + kMinNightSleep - kMinutesPerDay)) + ".";
    out[p.id] = text;
  }
  return out;
}

inline json template_day_summary(const json& input, Rng&) {
  json out = json::array();
  for (const auto& m : input.at("members")) {
    std::map<std::string, int> minutes;
    for (const auto& a : m.at("activities"))
      if (a.at("label") != "sleep")
        minutes[a.at("label").get<std::string>()] +=
            *parse_hhmm(a.at("end").get<std::string>()) - *parse_hhmm(a.at("start").get<std::string>());
    std::string top = "resting";
    int best = -1;
    for (const auto& [label, m2] : minutes)
      if (m2 > best) {
        best = m2;
        top = label;
      }
    out.push_back({{"member", m.at("id")}, {"summary", m.value("name", std::string("Member")) + " spent most of the day on " + top + "."}});
  }
  return {{"summaries", out}};
}

// ---------------------------------------------------------------------------
// Dialogue transcripts.

inline json interactions_schema() {
  return json::parse(R"({
    "type": "object", "required": ["transcripts"],
    "properties": {"transcripts": {"type": "array", "items": {
      "type": "object", "required": ["member", "start", "turns"],
      "properties": {
        "member": {"type": "string"},
        "start": {"type": "string", "format": "hh:mm"},
        "turns": {"type": "array", "minItems": 2, "items": {
          "type": "object", "required": ["speaker", "utterance"],
          "properties": {"speaker": {"type": "string"}, "utterance": {"type": "string", "minLength": 1}}}}}}}}})");
}

/// One transcript per robot activity, one model call per day that has any.
/// Speakers are household member ids or the robot.
inline std::vector<InteractionTranscript> synthesize_interactions(const ActivitySchedule& sched,
                                                                  const std::vector<Persona>& personas,
                                                                  const RobotProfile& robot, llm::Gateway& gw) {
  if (!gw.schemas().has("interactions")) gw.schemas().add("interactions", interactions_schema());
  std::set<std::string> speakers{std::string(kRobotSpeaker)};
  json household = json::array();
  for (const auto& p : personas) {
    speakers.insert(p.id);
    household.push_back({{"id", p.id}, {"name", p.name}, {"age", p.age}});
  }
  std::map<int, std::vector<const Activity*>> by_day;
  for (const auto& a : sched.activities)
    if (a.involves_robot) by_day[a.day].push_back(&a);

  std::vector<InteractionTranscript> out;
  for (const auto& [day, acts] : by_day) {
    json list = json::array();
    for (const auto* a : acts)
      list.push_back({{"member", a->member}, {"start", format_hhmm(a->start)}, {"label", a->label},
                      {"description", a->description}});
    ContextualMemory mem{"Write short dialogues between household members and the robot " + robot.name + ".",
                         {"interactions"}, {}, "Speakers must be member ids or \"robot\"."};
    const auto prompt = llm::render_task_prompt(
        llm::build_context_preamble(mem), "interactions",
        "Write one dialogue per listed activity. Use member ids and \"robot\" as speakers.",
        {{"day", day}, {"robot", robot}, {"household", household}, {"activities", list}});
    const json reply = gw.generate_structured(
        prompt, "interactions", gw.defaults(), {"hri", "interactions"}, llm::kDefaultMaxRepairs,
        [&](const json& v) -> std::optional<std::string> {
          std::set<std::pair<std::string, int>> want, got;
          for (const auto* a : acts) want.insert({a->member, a->start});
          for (const auto& t : v.at("transcripts")) {
            got.insert({t.at("member").get<std::string>(), *parse_hhmm(t.at("start").get<std::string>())});
            for (const auto& turn : t.at("turns"))
              if (!speakers.count(turn.at("speaker").get<std::string>()))
                return "speaker '" + turn.at("speaker").get<std::string>() + "' is not in the household";
          }
          if (got != want || v.at("transcripts").size() != acts.size())
            return "need exactly one transcript per listed activity";
          return std::nullopt;
        });
    for (const auto& t : reply.at("transcripts")) {
      InteractionTranscript tr;
      tr.activity = {t.at("member").get<std::string>(), day, *parse_hhmm(t.at("start").get<std::string>())};
      for (const auto& turn : t.at("turns")) tr.turns.push_back({turn.at("speaker"), turn.at("utterance")});
      out.push_back(std::move(tr));
    }
  }
  std::stable_sort(out.begin(), out.end(), [](const InteractionTranscript& a, const InteractionTranscript& b) {
    return std::tie(a.activity.day, a.activity.start, a.activity.member) <
           std::tie(b.activity.day, b.activity.start, b.activity.member);
  });
  return out;
}

inline json template_interactions(const json& input, Rng& rng) {
  static const std::map<std::string, std::vector<std::pair<std::string, std::string>>> lines = {
      {"fetch", {{"Could you bring me what I need for this?", "Of course, I will bring it over now."},
                 {"Can you fetch that for me?", "On my way. Anything else?"}}},
      {"vacuum", {{"Please vacuum this room while I work on it.", "Starting now. I will avoid the cables."},
                  {"Could you do the floors?", "Sure, I will begin near the door."}}},
      {"converse", {{"Want to keep me company for a bit?", "Gladly. How was your day so far?"},
                    {"What do you think we should do next?", "We could take a short break first."}}},
      {"tidy", {{"Help me put these things away?", "Yes. I will sort them into the cabinet."},
                {"Can you tidy up with me?", "Let us start with the floor."}}},
  };
  json out = json::array();
  for (const auto& a : input.at("activities")) {
    const auto* k = find_kind(a.value("label", std::string{}));
    const auto it = lines.find(k ? k->capability : "converse");
    const auto& options = it != lines.end() ? it->second : lines.at("converse");
    const auto& [ask, reply] = rng.pick(options);
    json turns = json::array({{{"speaker", a.at("member")}, {"utterance", ask}}, {{"speaker", "robot"}, {"utterance", reply}}});
    if (rng.chance(0.5)) turns.push_back({{"speaker", a.at("member")}, {"utterance", "Thank you."}});
    out.push_back({{"member", a.at("member")}, {"start", a.at("start")}, {"turns", turns}});
  }
  return {{"transcripts", out}};
}

}  // namespace hhgen::activity
