#include <gtest/gtest.h>

#include "fixtures.hpp"
#include "hhgen/embed/mock.hpp"
#include "hhgen/env/floorplan.hpp"
#include "hhgen/env/generator.hpp"

using namespace hhgen;
using namespace hhgen::env;
using fixture::code_of;
using fixture::has_kind;

namespace {

const AssetCatalog& catalog() {
  static const AssetCatalog c = load_catalog(std::string(HHGEN_DATA_DIR) + "/catalog.json");
  return c;
}

llm::Gateway template_gateway(std::uint64_t seed) {
  auto stub = std::make_shared<llm::TemplateProvider>();
  register_environment_templates(*stub);
  llm::GenParams p;
  p.seed = seed;
  return llm::Gateway(stub, p);
}

RoomProgram program_of(std::initializer_list<std::pair<RoomFunction, double>> rooms) {
  RoomProgram p;
  int i = 0;
  for (const auto& [f, area] : rooms) p.entries.push_back({"room " + std::to_string(i++), f, std::nullopt, area});
  return p;
}

}  // namespace

TEST(Catalog, LoadsBundledCatalog) {
  EXPECT_GE(catalog().size(), 50u);
  ASSERT_NE(catalog().find("double_bed"), nullptr);
  EXPECT_EQ(catalog().find("nope"), nullptr);
}

TEST(Catalog, CsvAndErrors) {
  const auto c = catalog_from_csv(
      "id,description,w,d,h,pivot_x,pivot_y,pivot_z,image_ref\n"
      "desk,\"office desk, oak\",1.4,0.7,0.75,0.7,0.35,0,\n");
  ASSERT_EQ(c.size(), 1u);
  EXPECT_EQ(c.find("desk")->description, "office desk, oak");
  EXPECT_FALSE(c.find("desk")->image_ref.has_value());
  AssetCatalog dup;
  dup.add(fixture::box_asset("a", "x", 1, 1));
  EXPECT_EQ(code_of([&] { dup.add(fixture::box_asset("a", "y", 1, 1)); }), ErrorCode::config);
  EXPECT_EQ(code_of([&] { dup.add(fixture::box_asset("b", "y", 0, 1)); }), ErrorCode::config);
}

TEST(Program, NormalizationEnforcesContract) {
  auto ps = fixture::household();
  auto cons = fixture::apartment();
  cons.required_rooms = {"laundry room"};
  RoomProgram proposed = program_of({{RoomFunction::sleeping, 12}, {RoomFunction::living, 500}});
  proposed.entries[0].owner = "p2";
  const auto p = normalize_program(proposed, ps, cons);
  EXPECT_EQ(p.count(RoomFunction::sleeping), 3u);
  EXPECT_EQ(p.count(RoomFunction::office), 1u);  // Ana works from home
  EXPECT_EQ(p.count(RoomFunction::kitchen), 1u);
  EXPECT_EQ(p.count(RoomFunction::bath), 1u);
  bool laundry = false;
  for (const auto& e : p.entries) {
    laundry = laundry || e.label == "laundry room";
    EXPECT_GE(e.target_area, kMinRoomArea);
    EXPECT_LE(e.target_area, 40.0);
  }
  EXPECT_TRUE(laundry);
  EXPECT_LE(p.total_area(), kLayoutFill * cons.bounds.area());
  for (std::size_t i = 0; i < 3; ++i) EXPECT_EQ(p.entries[i].function, RoomFunction::sleeping);
}

TEST(Program, NoOfficeWithoutRemoteWork) {
  auto ps = fixture::household();
  ps[0].works_from_home = false;
  const auto p = normalize_program(program_of({{RoomFunction::office, 9}}), ps, fixture::apartment());
  EXPECT_EQ(p.count(RoomFunction::office), 0u);
  EXPECT_EQ(p.count(RoomFunction::other), 1u);
}

TEST(Layout, RandomProgramsYieldValidLayouts) {
  const Bounds bounds{14, 10};
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    Rng rng(seed);
    RoomProgram p;
    const int n = rng.between(3, 9);
    for (int i = 0; i < n; ++i) p.entries.push_back({"r", RoomFunction::other, std::nullopt, rng.uniform(4.0, 14.0)});
    if (p.total_area() > kLayoutFill * bounds.area()) continue;
    const auto rooms = layout_rooms(p, bounds, seed);
    ASSERT_EQ(rooms.size(), p.entries.size());
    std::vector<Rect> rects;
    for (std::size_t i = 0; i < rooms.size(); ++i) {
      const auto& r = rooms[i].rect;
      rects.push_back(r);
      EXPECT_TRUE(contains(bounds.rect(), r)) << "seed " << seed;
      EXPECT_GE(std::min(r.w, r.h), kMinRoomSide - 1e-9);
      EXPECT_NEAR(r.area(), p.entries[i].target_area, kAreaTolerance * p.entries[i].target_area + 1e-9);
      for (std::size_t j = 0; j < i; ++j) EXPECT_FALSE(interiors_intersect(r, rooms[j].rect)) << "seed " << seed;
    }
    const auto comp = adjacency_components(rects);
    for (int c : comp) EXPECT_EQ(c, comp.front()) << "seed " << seed;
  }
}

TEST(Layout, InfeasibleProgram) {
  const auto p = program_of({{RoomFunction::living, 40}, {RoomFunction::kitchen, 40}});
  EXPECT_EQ(code_of([&] { layout_rooms(p, {8, 8}, 1); }), ErrorCode::layout_infeasible);
}

TEST(Repair, ConnectsRoomsInARow) {
  auto env = fixture::three_rooms();
  env.doors.clear();
  env = with_description(ensure_connectivity(env));
  EXPECT_EQ(env.doors.size(), 2u);
  EXPECT_TRUE(validate_environment(env).empty());
  for (const auto& d : env.doors) {
    EXPECT_EQ(d.kind, DoorKind::standard);
    EXPECT_GE(d.segment.length(), kMinDoorWidth);
  }
}

TEST(Repair, UnrepairableWithoutSharedWalls) {
  EnvironmentSchema env;
  env.bounds = {10, 4};
  env.rooms = {{"a", "a", RoomFunction::other, {0, 0, 3, 3}, std::nullopt},
               {"b", "b", RoomFunction::other, {5, 0, 3, 3}, std::nullopt}};
  EXPECT_EQ(code_of([&] { ensure_connectivity(env); }), ErrorCode::unrepairable);
}

TEST(Repair, RelocatesNestedRoomWithItsObjects) {
  auto env = fixture::three_rooms();
  env.bounds = {12, 8};
  env.rooms.push_back({"r3", "closet", RoomFunction::other, {5, 1, 2, 2}, std::nullopt});
  env.assets.push_back(fixture::box_asset("shelf", "shelf", 0.5, 0.5));
  env.objects.push_back({"o4", "shelf", "r3", {6, 2, 0}, {}});
  env.objects[1].pose = {6.0, 3.5, 0};  // keep the sofa clear of the closet
  ASSERT_TRUE(has_kind(validate_environment(env), ViolationKind::nested_room));
  env = fix_nested_rooms(env);
  env = with_description(ensure_connectivity(env));
  EXPECT_TRUE(validate_environment(env).empty());
  const auto* closet = env.find_room("r3");
  ASSERT_NE(closet, nullptr);
  EXPECT_DOUBLE_EQ(closet->rect.area(), 4.0);
  const auto* shelf = env.find_object("o4");
  ASSERT_NE(shelf, nullptr);
  EXPECT_TRUE(contains(closet->rect, *env.object_footprint(*shelf)));
}

TEST(Assets, RankingFollowsRoomFunction) {
  embed::MockEmbedder e;
  const auto ps = fixture::household();
  auto rank_of = [&](const Room& room, const std::string& id) {
    const auto ranked = rank_assets(room, ps, catalog(), e, catalog().size());
    for (std::size_t i = 0; i < ranked.size(); ++i)
      if (ranked[i].record.id == id) return i;
    return ranked.size();
  };
  const Room bedroom{"r0", "bedroom", RoomFunction::sleeping, {0, 0, 3, 4}, std::nullopt};
  const Room office{"r1", "home office", RoomFunction::office, {0, 0, 3, 3}, std::nullopt};
  EXPECT_LT(rank_of(bedroom, "double_bed"), rank_of(bedroom, "office_desk"));
  EXPECT_LT(rank_of(office, "office_desk"), rank_of(office, "double_bed"));
  const auto a = rank_assets(bedroom, ps, catalog(), e, 5);
  const auto b = rank_assets(bedroom, ps, catalog(), e, 5);
  ASSERT_EQ(a.size(), 5u);
  for (std::size_t i = 0; i < a.size(); ++i) EXPECT_EQ(a[i].record.id, b[i].record.id);
}

TEST(Placement, LargeItemsHugWallsAndTabletopsFindHosts) {
  EnvironmentSchema env;
  env.bounds = {4, 4};
  env.rooms = {{"r0", "bedroom", RoomFunction::sleeping, {0, 0, 4, 4}, std::nullopt}};
  env = with_description(env);
  const Selections sel{{"r0",
                        {*catalog().find("bedside_lamp"), *catalog().find("double_bed"),
                         *catalog().find("nightstand"), *catalog().find("wall_clock")}}};
  const auto res = place_objects(env, sel, 3);
  EXPECT_TRUE(res.unplaced.empty());
  EXPECT_TRUE(validate_environment(res.env).empty());
  const PlacedObject* bed = nullptr;
  const PlacedObject* lamp = nullptr;
  const PlacedObject* clock = nullptr;
  for (const auto& o : res.env.objects) {
    if (o.asset == "double_bed") bed = &o;
    if (o.asset == "bedside_lamp") lamp = &o;
    if (o.asset == "wall_clock") clock = &o;
  }
  ASSERT_TRUE(bed && lamp && clock);
  const Rect fp = *res.env.object_footprint(*bed);
  EXPECT_TRUE(near(fp.x, 0) || near(fp.y, 0) || near(fp.right(), 4) || near(fp.top(), 4));
  EXPECT_EQ(lamp->support.kind, SupportKind::surface_of);
  EXPECT_EQ(res.env.find_object(lamp->support.host)->asset, "nightstand");
  EXPECT_EQ(clock->support.kind, SupportKind::wall);
  EXPECT_EQ(place_objects(env, sel, 3).env, res.env);
}

TEST(Placement, ReportsItemsThatDoNotFit) {
  EnvironmentSchema env;
  env.bounds = {1.8, 1.8};
  env.rooms = {{"r0", "closet", RoomFunction::other, {0, 0, 1.8, 1.8}, std::nullopt}};
  const auto res = place_objects(env, {{"r0", {*catalog().find("double_bed")}}}, 1);
  ASSERT_EQ(res.unplaced.size(), 1u);
  EXPECT_EQ(res.unplaced[0].asset, "double_bed");
  EXPECT_TRUE(res.env.objects.empty());
}

TEST(Floorplan, LegendListsEveryRoom) {
  const auto env = fixture::three_rooms();
  const auto plan = render_floorplan(env);
  EXPECT_EQ(plan.rfind("# floorplan 12.0 x 4.0 m", 0), 0u);
  EXPECT_EQ(embed::floorplan_room_labels(plan), (std::vector<std::string>{"bedroom", "living room", "kitchen"}));
  EXPECT_NE(plan.find("r0-r1 standard"), std::string::npos);
}

TEST(Generator, ValidAcrossSeeds) {
  embed::MockEmbedder e;
  const auto ps = fixture::household();
  for (std::uint64_t seed = 0; seed < 30; ++seed) {
    auto gw = template_gateway(seed);
    const auto g = generate_environment(ps, fixture::apartment(), gw, catalog(), e, {seed});
    ASSERT_TRUE(validate_environment(g.env).empty()) << "seed " << seed;
    EXPECT_LE(gw.ledger().module("environment").calls, 12) << "seed " << seed;
    std::size_t sleeping = 0;
    for (const auto& r : g.env.rooms) sleeping += r.function == RoomFunction::sleeping;
    EXPECT_EQ(sleeping, ps.size());
    EXPECT_GT(g.env.objects.size(), g.env.rooms.size());
    EXPECT_EQ(g.memory.completed.size(), environment_steps().size());
  }
}

TEST(Generator, ReplaysExactly) {
  embed::MockEmbedder e;
  auto gw1 = template_gateway(5);
  auto gw2 = template_gateway(5);
  const auto a = generate_environment(fixture::household(), fixture::apartment(), gw1, catalog(), e, {5});
  const auto b = generate_environment(fixture::household(), fixture::apartment(), gw2, catalog(), e, {5});
  EXPECT_EQ(canonical_dump(a.env), canonical_dump(b.env));
}

TEST(Generator, FurnishingRejectsUnknownAssets) {
  embed::MockEmbedder e;
  auto stub = std::make_shared<llm::ScriptedProvider>();
  stub->push_json("furnish_room", {{"assets", {"spaceship"}}});
  stub->push_json("furnish_room", {{"assets", {"double_bed"}}});
  llm::Gateway gw(stub);
  const Room room{"r0", "Ana's bedroom", RoomFunction::sleeping, {0, 0, 4, 4}, std::string("p1")};
  ContextualMemory mem{"t", environment_steps(), {}, ""};
  const auto picked = furnish_room(room, fixture::household(), catalog(), e, gw, {}, mem);
  ASSERT_EQ(picked.size(), 1u);
  EXPECT_EQ(picked[0].id, "double_bed");
  EXPECT_EQ(gw.ledger().by_step().at("environment/furnish_room").calls, 2);
}

TEST(Generator, ProviderFailurePropagates) {
  embed::MockEmbedder e;
  llm::Gateway gw(std::make_shared<llm::ScriptedProvider>());
  EXPECT_EQ(code_of([&] { generate_environment(fixture::household(), fixture::apartment(), gw, catalog(), e); }),
            ErrorCode::precondition);
}
