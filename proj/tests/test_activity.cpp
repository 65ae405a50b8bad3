#include <gtest/gtest.h>

#include "fixtures.hpp"
#include "hhgen/activity/generator.hpp"
#include "hhgen/embed/mock.hpp"
#include "hhgen/env/generator.hpp"

using namespace hhgen;
using namespace hhgen::activity;
using fixture::code_of;

namespace {

std::shared_ptr<llm::TemplateProvider> templates() {
  auto stub = std::make_shared<llm::TemplateProvider>();
  env::register_environment_templates(*stub);
  register_activity_templates(*stub);
  return stub;
}

llm::Gateway gateway(llm::ProviderPtr p, std::uint64_t seed) {
  llm::GenParams params;
  params.seed = seed;
  return llm::Gateway(std::move(p), params);
}

RobotProfile robot() { return {"Robo", {"vacuum", "fetch", "converse", "tidy"}, {}}; }

Activity act(std::string member, std::string label, int day, int start, int duration) {
  Activity a;
  a.member = std::move(member);
  a.label = std::move(label);
  a.day = day;
  a.start = start;
  a.duration = duration;
  return a;
}

/// Exactly one sleep per (member, day), and it ends the day.
void expect_sleep_anchors(const ActivitySchedule& s, const std::vector<Persona>& ps) {
  for (const auto& p : ps) {
    for (int d = 0; d < s.horizon_days; ++d) {
      int sleeps = 0;
      for (const auto& a : s.activities)
        if (a.member == p.id && a.day == d && a.label == "sleep") {
          ++sleeps;
          EXPECT_EQ(a.end(), kMinutesPerDay);
        }
      EXPECT_EQ(sleeps, 1) << p.id << " day " << d;
    }
  }
}

}  // namespace

TEST(Window, ContextRendering) {
  std::vector<Activity> prior = {act("p2", "lunch", 0, 720, 30), act("p1", "breakfast", 0, 420, 20),
                                 act("p1", "sleep", 0, 1320, 120)};
  EXPECT_EQ(make_window_context(prior, 0), "");
  const auto all = make_window_context(prior, 10);
  EXPECT_EQ(all, "day 0 07:00-07:20 p1 breakfast\nday 0 12:00-12:30 p2 lunch\nday 0 22:00-24:00 p1 sleep\n");
  EXPECT_EQ(make_window_context(prior, 1), "day 0 22:00-24:00 p1 sleep\n");
  EXPECT_EQ(make_window_context(prior, 10), all);
  EXPECT_EQ(code_of([&] { make_window_context(prior, -1); }), ErrorCode::precondition);
}

TEST(Window, TimeHelpers) {
  const std::vector<Activity> prior = {act("p1", "sleep", 0, 1320, 120)};
  EXPECT_EQ(earliest_wake(prior, "p1", 1), 240);
  EXPECT_EQ(earliest_wake(prior, "p2", 1), 0);
  EXPECT_EQ(free_gaps({{60, 120}, {100, 200}, {300, 400}}, 0, 350),
            (std::vector<TimeWindow>{{0, 60}, {200, 300}}));
  EXPECT_EQ(first_fit(50, 30, {{60, 120}}, 0, 1440), 120);
  EXPECT_EQ(first_fit(50, 30, {{60, 120}}, 0, 1440, 30), std::nullopt);
}

TEST(Lexicon, HobbyLabels) {
  EXPECT_EQ(hobby_label("piano"), "piano practice");
  EXPECT_EQ(hobby_label("Video Gaming"), "video gaming");
  EXPECT_EQ(hobby_label("knitting"), "knitting");
  ASSERT_NE(find_kind("laundry"), nullptr);
  EXPECT_TRUE(supports(*find_kind("laundry"), "laundry basket for dirty clothes and laundry"));
}

TEST(Binding, PrefersOwnBedroomAndSupportingObjects) {
  const auto env = fixture::three_rooms();
  const auto sleep = bind_activity(act("p1", "sleep", 0, 1320, 120), env, nullptr);
  EXPECT_EQ(sleep.room, "r0");
  EXPECT_EQ(sleep.objects, std::vector<std::string>{"o1"});
  EXPECT_EQ(bind_activity(act("p2", "sleep", 0, 1320, 120), env, nullptr).room, kUnbound);  // r0 belongs to p1
  const auto tv = bind_activity(act("p1", "tv watching", 0, 1200, 60), env, nullptr);
  EXPECT_EQ(tv.room, "r1");
  EXPECT_TRUE(tv.missing_objects);
  EXPECT_EQ(bind_activity(act("p1", "school", 0, 480, 300), env, nullptr).room, kUnbound);
  embed::MockEmbedder e;
  const auto couch = bind_activity(act("p1", "couch", 0, 600, 30), env, &e);
  EXPECT_EQ(couch.room, "r1");
  EXPECT_EQ(couch.objects, std::vector<std::string>{"o2"});
  EXPECT_EQ(bind_activity(act("p1", "knitting", 0, 600, 30), env, &e).room, kUnbound);
}

TEST(Binding, StrictDropsWhatTheHomeCannotHost) {
  auto env = fixture::three_rooms();
  env.rooms[2].function = RoomFunction::other;  // no kitchen any more
  env.rooms[2].label = "storage";
  env.objects.pop_back();
  env = with_description(env);
  ActivitySchedule s;
  s.activities = {act("p1", "cooking", 0, 1080, 40), act("p1", "sleep", 0, 1320, 120)};
  const auto strict = bind_schedule(s, env, nullptr, BindingMode::strict);
  ASSERT_EQ(strict.schedule.activities.size(), 1u);
  EXPECT_EQ(strict.schedule.activities[0].label, "sleep");
  ASSERT_EQ(strict.dropped.size(), 1u);
  const auto lenient = bind_schedule(s, env, nullptr, BindingMode::lenient);
  ASSERT_EQ(lenient.schedule.activities.size(), 2u);
  EXPECT_TRUE(lenient.schedule.activities[0].unbound());
  EXPECT_EQ(lenient.missing.size(), 1u);
}

TEST(Generation, EnvironmentFreeSchedule) {
  const auto ps = fixture::household();
  auto gw = gateway(templates(), 3);
  ActivityOptions o;
  o.days = 2;
  const auto s = generate_activities(ps, gw, o);
  EXPECT_TRUE(validate_schedule_temporal(s).empty());
  for (const auto& a : s.activities) EXPECT_TRUE(a.unbound());
  expect_sleep_anchors(s, ps);
  for (const auto& p : ps) {
    bool meal = false;
    for (const auto& a : s.activities) meal = meal || (a.member == p.id && a.day == 0 && is_meal(a.label));
    EXPECT_TRUE(meal) << p.id;
  }
  auto gw2 = gateway(templates(), 3);
  EXPECT_EQ(generate_activities(ps, gw2, o), s);
}

TEST(Generation, EarlySleeperProposalsAfterBedtimeAreFiltered) {
  auto ps = fixture::household();
  ps.resize(1);
  auto scripted = std::make_shared<llm::ScriptedProvider>(std::vector<std::string>{}, templates());
  scripted->push_json("day_fill", {{"activities", {{{"label", "reading"}, {"start", "22:30"}, {"duration", 30}},
                                                   {{"label", "tv watching"}, {"start", "23:10"}, {"duration", 40}}}}});
  auto gw = gateway(scripted, 1);
  const auto h = generate_horizon(ps, nullptr, {}, gw);
  EXPECT_EQ(h.filtered.size(), 2u);
  for (const auto& a : h.schedule.activities)
    if (a.label != "sleep") EXPECT_LE(a.start, 22 * 60) << a.label;
  for (const auto& a : h.schedule.activities)
    if (a.label == "sleep") EXPECT_LE(a.start, 22 * 60);
}

TEST(Generation, OverlapIsRepairedByReprompt) {
  auto ps = fixture::household();
  ps.resize(1);
  auto scripted = std::make_shared<llm::ScriptedProvider>(std::vector<std::string>{}, templates());
  const json overlapping = {{"activities", {{{"label", "reading"}, {"start", "14:00"}, {"duration", 60}},
                                            {{"label", "painting"}, {"start", "14:30"}, {"duration", 60}}}}};
  scripted->push_json("day_fill", overlapping);
  scripted->push_json("day_fill", {{"activities", json::array()}});
  auto gw = gateway(scripted, 2);
  const auto h = generate_horizon(ps, nullptr, {}, gw);
  EXPECT_EQ(gw.ledger().by_step().at("hri/day_fill").calls, 2);
  const auto& prompts = scripted->prompts();
  bool named = false;
  for (const auto& p : prompts) named = named || (p.find("### CONFLICTS") != std::string::npos && p.find("overlaps") != std::string::npos);
  EXPECT_TRUE(named);
  EXPECT_TRUE(validate_schedule_temporal(h.schedule).empty());
}

TEST(Generation, PersistentOverlapIsConsistencyFailure) {
  auto ps = fixture::household();
  ps.resize(1);
  auto scripted = std::make_shared<llm::ScriptedProvider>(std::vector<std::string>{}, templates());
  const json overlapping = {{"activities", {{{"label", "reading"}, {"start", "14:00"}, {"duration", 60}},
                                            {{"label", "painting"}, {"start", "14:30"}, {"duration", 60}}}}};
  for (int i = 0; i < 4; ++i) scripted->push_json("day_fill", overlapping);
  auto gw = gateway(scripted, 2);
  EXPECT_EQ(code_of([&] { generate_horizon(ps, nullptr, {}, gw); }), ErrorCode::consistency_failure);
  EXPECT_EQ(gw.ledger().by_step().at("hri/day_fill").calls, 4);
}

TEST(Generation, PinsAreInviolable) {
  const auto ps = fixture::household();
  ActivityOptions o;
  o.pins = {act("p3", "piano lesson", 0, 16 * 60, 60)};
  auto gw = gateway(templates(), 4);
  const auto s = generate_activities(ps, gw, o);
  const auto it = std::find_if(s.activities.begin(), s.activities.end(),
                               [](const Activity& a) { return a.label == "piano lesson"; });
  ASSERT_NE(it, s.activities.end());
  EXPECT_EQ(it->start, 960);
  EXPECT_EQ(it->duration, 60);
  EXPECT_TRUE(validate_schedule_temporal(s).empty());
  o.pins.push_back(act("p3", "chess", 0, 16 * 60 + 30, 60));
  EXPECT_EQ(code_of([&] { generate_activities(ps, gw, o); }), ErrorCode::precondition);
}

TEST(Interactions, OneTranscriptPerRobotActivity) {
  const auto ps = fixture::household();
  ActivitySchedule s;
  s.activities = {act("p1", "dinner", 0, 1100, 45), act("p2", "cleaning", 0, 700, 30), act("p3", "reading", 0, 1200, 30)};
  auto gw = gateway(templates(), 1);
  EXPECT_TRUE(synthesize_interactions(s, ps, robot(), gw).empty());
  EXPECT_EQ(gw.ledger().total_calls(), 0);
  s.activities[0].involves_robot = s.activities[1].involves_robot = true;
  const auto ts = synthesize_interactions(s, ps, robot(), gw);
  ASSERT_EQ(ts.size(), 2u);
  EXPECT_EQ(ts[0].activity, (ActivityRef{"p2", 0, 700}));
  for (const auto& t : ts) {
    EXPECT_GE(t.turns.size(), 2u);
    for (const auto& turn : t.turns) EXPECT_TRUE(turn.speaker == "robot" || turn.speaker == t.activity.member);
  }
}

TEST(Interactions, OutsideSpeakerIsReprompted) {
  const auto ps = fixture::household();
  ActivitySchedule s;
  s.activities = {act("p1", "dinner", 0, 1100, 45)};
  s.activities[0].involves_robot = true;
  auto scripted = std::make_shared<llm::ScriptedProvider>(std::vector<std::string>{}, templates());
  scripted->push_json("interactions",
                      {{"transcripts", {{{"member", "p1"}, {"start", "18:20"},
                                         {"turns", {{{"speaker", "p1"}, {"utterance", "hi"}},
                                                    {{"speaker", "stranger"}, {"utterance", "hello"}}}}}}}});
  auto gw = gateway(scripted, 1);
  const auto ts = synthesize_interactions(s, ps, robot(), gw);
  ASSERT_EQ(ts.size(), 1u);
  EXPECT_EQ(gw.ledger().total_calls(), 2);
  EXPECT_NE(scripted->prompts()[1].find("stranger"), std::string::npos);
}

TEST(Horizon, EnvironmentBoundAndCarriedOver) {
  const auto ps = fixture::household();
  embed::MockEmbedder e;
  const auto catalog = env::load_catalog(std::string(HHGEN_DATA_DIR) + "/catalog.json");
  auto gw = gateway(templates(), 8);
  const auto g = env::generate_environment(ps, fixture::apartment(), gw, catalog, e, {8});
  ActivityOptions o;
  o.days = 7;
  o.robot = robot();
  const auto h = generate_horizon(ps, &g.env, o, gw, &e);
  EXPECT_TRUE(validate_schedule(h.schedule, g.env).empty());
  expect_sleep_anchors(h.schedule, ps);
  for (const auto& p : ps) {
    for (int d = 0; d < o.days; ++d) {
      int total = 0, first = kMinutesPerDay, sleep_prev = -1;
      for (const auto& a : h.schedule.activities) {
        if (a.member != p.id) continue;
        if (a.day == d) {
          total += a.duration;
          first = std::min(first, a.start);
        }
        if (a.day == d - 1 && a.label == "sleep") sleep_prev = a.start;
      }
      EXPECT_LE(total, kMinutesPerDay);
      if (sleep_prev >= 0) EXPECT_GE(first, sleep_prev + kMinNightSleep - kMinutesPerDay);
    }
  }
  std::size_t robot_acts = 0;
  for (const auto& a : h.schedule.activities) robot_acts += a.involves_robot;
  EXPECT_EQ(h.transcripts.size(), robot_acts);
  EXPECT_EQ(gw.ledger().module("hri").calls, 7 * o.days);
}
