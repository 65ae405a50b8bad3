#pragma once

#include <string>
#include <vector>

#include "hhgen/core/types.hpp"
#include "hhgen/util/text.hpp"

namespace hhgen::activity {

/// What an activity label needs from the home and when it usually happens.
struct ActivityKind {
  std::string label;
  std::vector<RoomFunction> rooms;  // in order of preference
  std::vector<std::string> assets;  // description phrases of supporting objects
  int duration = 30;                // typical minutes
  TimeWindow window;                // usual time of day
  std::string capability;           // robot capability that can assist
  bool offsite = false;             // happens outside the home; never bound
  bool afforded = false;            // may be proposed when a matching asset sits unused
};

inline const std::vector<ActivityKind>& lexicon() {
  using F = RoomFunction;
  static const std::vector<ActivityKind> kinds = {
      {"sleep", {F::sleeping}, {"bed"}, 480, {1230, 1440}, "", false, false},
      {"breakfast", {F::dining, F::kitchen}, {"dining table", "kitchen table"}, 25, {300, 630}, "", false, false},
      {"lunch", {F::dining, F::kitchen}, {"dining table", "kitchen table"}, 40, {690, 840}, "", false, false},
      {"dinner", {F::dining, F::kitchen}, {"dining table", "kitchen table"}, 45, {1050, 1260}, "fetch", false, false},
      {"cooking", {F::kitchen}, {"stove"}, 40, {990, 1110}, "", false, false},
      {"dishwasher loading", {F::kitchen}, {"dishwasher"}, 15, {1110, 1320}, "", false, true},
      {"work", {F::office}, {"office desk"}, 180, {510, 1080}, "", false, false},
      {"away at work", {}, {}, 480, {450, 1110}, "", true, false},
      {"school", {}, {}, 390, {450, 960}, "", true, false},
      {"shower", {F::bath}, {"shower", "bathtub"}, 15, {300, 660}, "", false, false},
      {"tv watching", {F::living}, {"television"}, 60, {1080, 1380}, "converse", false, true},
      {"video gaming", {F::living, F::hobby, F::sleeping}, {"gaming console"}, 60, {960, 1380}, "", false, true},
      {"reading", {F::living, F::sleeping, F::office}, {"bookshelf", "armchair", "bedside lamp"}, 45, {1140, 1380}, "",
       false, true},
      {"laundry", {F::other, F::bath, F::kitchen}, {"washing machine", "laundry basket"}, 45, {600, 1200}, "fetch",
       false, true},
      {"cleaning", {F::living, F::kitchen}, {"vacuum cleaner", "robot vacuum"}, 30, {600, 1140}, "vacuum", false, true},
      {"tidying", {F::sleeping, F::living}, {"storage cabinet", "toy chest"}, 20, {1020, 1260}, "tidy", false, true},
      {"exercise", {F::hobby, F::other, F::living}, {"exercise bike", "yoga mat", "treadmill"}, 40, {360, 1200}, "",
       false, true},
      {"painting", {F::hobby, F::living, F::office}, {"easel"}, 90, {600, 1260}, "", false, true},
      {"sketching", {F::hobby, F::office, F::living}, {"drawing table"}, 60, {600, 1260}, "", false, true},
      {"piano practice", {F::living, F::hobby}, {"piano"}, 45, {900, 1200}, "", false, true},
      {"music practice", {F::living, F::hobby}, {"guitar"}, 45, {900, 1260}, "", false, true},
      {"woodworking", {F::hobby, F::other}, {"workbench"}, 90, {600, 1200}, "", false, true},
      {"sewing", {F::hobby, F::other}, {"sewing machine"}, 60, {600, 1200}, "", false, true},
      {"homework", {F::sleeping, F::office, F::dining}, {"study desk"}, 60, {900, 1200}, "", false, false},
      {"watering plants", {F::living, F::other}, {"potted plant"}, 10, {420, 1200}, "", false, true},
      {"conversation", {F::living, F::dining}, {"lounge chairs"}, 30, {1020, 1320}, "converse", false, true},
      {"snack", {F::kitchen}, {"refrigerator"}, 10, {840, 1320}, "fetch", false, false},
      {"coffee", {F::kitchen}, {"coffee machine"}, 10, {330, 960}, "", false, true},
  };
  return kinds;
}

inline const ActivityKind* find_kind(std::string_view label) {
  const std::string l = to_lower(trim(label));
  for (const auto& k : lexicon())
    if (k.label == l) return &k;
  return nullptr;
}

inline bool is_meal(std::string_view label) { return label == "breakfast" || label == "lunch" || label == "dinner"; }

inline bool is_offsite(std::string_view label) {
  const auto* k = find_kind(label);
  return k && k->offsite;
}

/// Lexicon label for a free-form hobby ("piano" -> "piano practice"); the
/// hobby text itself when nothing matches.
inline std::string hobby_label(const std::string& hobby) {
  const std::string h = to_lower(trim(hobby));
  for (const auto& k : lexicon())
    if (!k.offsite && (k.label == h || contains_phrase(k.label, h) || contains_phrase(h, k.label))) return k.label;
  return h;
}

/// True when the asset description names one of the kind's supporting objects.
inline bool supports(const ActivityKind& kind, const std::string& asset_description) {
  for (const auto& phrase : kind.assets)
    if (contains_phrase(asset_description, phrase)) return true;
  return false;
}

}  // namespace hhgen::activity
