#pragma once

#include <functional>
#include <memory>
#include <string>
#include <vector>

#include <gtest/gtest.h>

#include "hhgen/core/json.hpp"
#include "hhgen/core/validate.hpp"
#include "hhgen/error.hpp"

namespace fixture {

using namespace hhgen;

inline ErrorCode code_of(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "expected an hhgen::Error";
  return ErrorCode::io;
}

inline std::vector<Persona> household() {
  std::vector<Persona> ps(3);
  ps[0] = {"p1", "Ana", 41, "architect", true, OrganizationLevel::organized, SleepHabit::early, {"painting"},
           "Architect who works from home and paints watercolors on weekends."};
  ps[1] = {"p2", "Ben", 43, "nurse", false, OrganizationLevel::typical, SleepHabit::late, {"video gaming"},
           "Nurse on late shifts who unwinds with video gaming."};
  ps[2] = {"p3", "Cleo", 12, "student", false, OrganizationLevel::messy, SleepHabit::typical, {"piano"},
           "Student who does homework and piano practice after school."};
  return ps;
}

inline EnvironmentConstraints apartment() {
  EnvironmentConstraints c;
  c.house_type = "apartment";
  c.bounds = {14.0, 10.0};
  return c;
}

inline AssetRecord box_asset(std::string id, std::string description, double w, double d) {
  AssetRecord a;
  a.id = std::move(id);
  a.description = std::move(description);
  a.dims = {w, d, 0.8};
  a.pivot = {w / 2, d / 2, 0.0};
  return a;
}

/// Three rooms in a row along x, 4 m deep, with doors r0-r1 and r1-r2.
inline EnvironmentSchema three_rooms() {
  EnvironmentSchema env;
  env.bounds = {12.0, 4.0};
  env.rooms = {{"r0", "bedroom", RoomFunction::sleeping, {0, 0, 4, 4}, std::string("p1")},
               {"r1", "living room", RoomFunction::living, {4, 0, 4, 4}, std::nullopt},
               {"r2", "kitchen", RoomFunction::kitchen, {8, 0, 4, 4}, std::nullopt}};
  env.doors = {{"r0", "r1", {{4, 1.5}, {4, 2.4}}, DoorKind::standard},
               {"r1", "r2", {{8, 1.5}, {8, 2.4}}, DoorKind::standard}};
  env.assets = {box_asset("bed", "double bed for sleeping", 1.6, 2.0),
                box_asset("sofa", "sofa couch for tv watching", 2.0, 0.9),
                box_asset("stove", "kitchen stove for cooking", 0.6, 0.6)};
  env.objects = {{"o1", "bed", "r0", {1.0, 1.1, 0}, {}},
                 {"o2", "sofa", "r1", {6.0, 0.5, 0}, {}},
                 {"o3", "stove", "r2", {11.6, 3.6, 0}, {}}};
  return with_description(env);
}

inline bool has_kind(const std::vector<Violation>& vs, ViolationKind k) {
  for (const auto& v : vs)
    if (v.kind == k) return true;
  return false;
}

}  // namespace fixture
