#pragma once

#include <algorithm>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "hhgen/core/types.hpp"
#include "hhgen/util/text.hpp"

namespace hhgen::activity {

constexpr int kMinNightSleep = 360;  // minutes between bedtime and the next wake

/// Trailing activities shown to the model plus one carryover line per
/// member summarizing the previous day.
struct RollingWindow {
  int size = 12;
  std::map<std::string, std::string> carryover;
};

/// The last `w` activities across all members in chronological order, one
/// line each. Pure.
inline std::string make_window_context(std::vector<Activity> prior, int w) {
  require(w >= 0, "window size must be non-negative");
  std::stable_sort(prior.begin(), prior.end(), [](const Activity& a, const Activity& b) {
    return std::tie(a.day, a.start, a.member, a.label) < std::tie(b.day, b.start, b.member, b.label);
  });
  const std::size_t n = std::min(prior.size(), static_cast<std::size_t>(w));
  std::string out;
  for (std::size_t i = prior.size() - n; i < prior.size(); ++i) {
    const auto& a = prior[i];
    out += "day " + std::to_string(a.day) + " " + format_hhmm(a.start) + "-" + format_hhmm(a.end()) + " " + a.member +
           " " + a.label + (a.unbound() ? "" : " @" + a.room) + "\n";
  }
  return out;
}

/// Earliest wake on `day` implied by the member's sleep on the day before.
inline int earliest_wake(const std::vector<Activity>& prior, const std::string& member, int day) {
  for (const auto& a : prior)
    if (a.member == member && a.day == day - 1 && a.label == "sleep")
      return std::max(0, a.start + kMinNightSleep - kMinutesPerDay);
  return 0;
}

struct SleepWindows {
  TimeWindow bedtime;
  TimeWindow wake;
};

inline SleepWindows sleep_windows(SleepHabit h) {
  switch (h) {
    case SleepHabit::early: return {{1230, 1320}, {300, 390}};
    case SleepHabit::late: return {{1380, 1425}, {480, 600}};
    case SleepHabit::typical: break;
  }
  return {{1320, 1380}, {390, 450}};
}

inline int snap5(int minutes) { return (minutes + 2) / 5 * 5; }

/// Free sub-intervals of [lo, hi) not covered by `busy`.
inline std::vector<TimeWindow> free_gaps(std::vector<TimeWindow> busy, int lo, int hi) {
  std::sort(busy.begin(), busy.end(), [](const TimeWindow& a, const TimeWindow& b) { return a.start < b.start; });
  std::vector<TimeWindow> out;
  int t = lo;
  for (const auto& b : busy) {
    if (b.end <= t) continue;
    if (b.start >= hi) break;
    if (b.start > t) out.push_back({t, b.start});
    t = std::max(t, b.end);
  }
  if (t < hi) out.push_back({t, hi});
  return out;
}

inline bool overlaps_any(const TimeWindow& w, const std::vector<TimeWindow>& busy) {
  for (const auto& b : busy)
    if (w.start < b.end && b.start < w.end) return true;
  return false;
}

/// First start at or after `preferred` (in 5-minute steps, at most `slack`
/// minutes later) where [start, start+duration) fits in [lo, hi) clear of busy.
inline std::optional<int> first_fit(int preferred, int duration, const std::vector<TimeWindow>& busy, int lo, int hi,
                                    int slack = 120) {
  for (int s = std::max(preferred, lo); s <= preferred + slack && s + duration <= hi; s += 5)
    if (!overlaps_any({s, s + duration}, busy)) return s;
  return std::nullopt;
}

}  // namespace hhgen::activity
