#pragma once

#include <algorithm>
#include <array>
#include <charconv>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "hhgen/core/types.hpp"
#include "hhgen/stats/cosine.hpp"
#include "hhgen/util/csv.hpp"
#include "hhgen/util/text.hpp"

namespace hhgen::eval {

constexpr int kFirstHour = 6;
constexpr int kHourlyDims = 18;

using HourlyVector = std::array<double, kHourlyDims>;

/// Entry h is the fraction of days on which an activity with `label`
/// touches hour 6+h. Hours outside 06:00-23:59 are ignored.
inline HourlyVector hourly_vector(const std::vector<Activity>& activities, const std::string& label, int horizon_days) {
  require(horizon_days >= 1, "hourly vector needs horizon_days >= 1");
  std::array<std::set<int>, kHourlyDims> days;
  for (const auto& a : activities) {
    if (a.label != label || a.duration <= 0) continue;
    for (int h = 0; h < kHourlyDims; ++h) {
      const int lo = (kFirstHour + h) * 60, hi = lo + 60;
      if (a.start < hi && a.end() > lo) days[h].insert(a.day);
    }
  }
  HourlyVector v{};
  for (int h = 0; h < kHourlyDims; ++h) v[h] = static_cast<double>(days[h].size()) / horizon_days;
  return v;
}

/// One person's trace: their activities over `horizon_days` days.
struct PersonTrace {
  std::string id;
  int horizon_days = 1;
  std::vector<Activity> activities;
};

using TraceDataset = std::vector<PersonTrace>;

/// Splits each schedule by member. Ids are prefixed with the schedule index
/// so members of different households stay distinct.
inline TraceDataset traces_from_schedules(const std::vector<ActivitySchedule>& schedules) {
  TraceDataset out;
  for (std::size_t s = 0; s < schedules.size(); ++s) {
    std::map<std::string, PersonTrace> by_member;
    for (const auto& a : schedules[s].activities) {
      auto& t = by_member[a.member];
      t.id = std::to_string(s) + ":" + a.member;
      t.horizon_days = schedules[s].horizon_days;
      t.activities.push_back(a);
    }
    for (auto& [_, t] : by_member) out.push_back(std::move(t));
  }
  return out;
}

namespace detail {

inline int parse_int_field(const std::string& s, const std::string& what) {
  const std::string t = trim(s);
  int v = 0;
  const auto r = std::from_chars(t.data(), t.data() + t.size(), v);
  if (r.ec != std::errc{} || r.ptr != t.data() + t.size()) fail(ErrorCode::io, what + " '" + s + "' is not an integer");
  return v;
}

}  // namespace detail

/// Reads persona_id, activity_label, day, start_minute, duration_minute
/// rows. Each persona's horizon is its largest day index plus one.
inline TraceDataset parse_trace_csv(const std::string& text) {
  const csv::Table t(csv::parse(text));
  const auto cp = t.column("persona_id"), cl = t.column("activity_label"), cd = t.column("day"),
             cs = t.column("start_minute"), cu = t.column("duration_minute");
  std::map<std::string, PersonTrace> by_person;
  for (const auto& row : t.rows()) {
    if (row.size() == 1 && trim(row[0]).empty()) continue;
    Activity a;
    a.member = trim(t.at(row, cp));
    a.label = trim(t.at(row, cl));
    a.day = detail::parse_int_field(t.at(row, cd), "day");
    a.start = detail::parse_int_field(t.at(row, cs), "start_minute");
    a.duration = detail::parse_int_field(t.at(row, cu), "duration_minute");
    if (a.member.empty() || a.label.empty()) fail(ErrorCode::io, "trace row has an empty persona or label");
    if (a.day < 0 || a.start < 0 || a.start >= kMinutesPerDay || a.duration <= 0)
      fail(ErrorCode::io, "trace row for '" + a.member + "' has an out-of-range time");
    auto& p = by_person[a.member];
    p.id = a.member;
    p.horizon_days = std::max(p.horizon_days, a.day + 1);
    p.activities.push_back(std::move(a));
  }
  TraceDataset out;
  for (auto& [_, p] : by_person) out.push_back(std::move(p));
  return out;
}

inline TraceDataset load_trace_csv(const std::string& path) { return parse_trace_csv(csv::read_file(path)); }

inline std::string trace_csv(const TraceDataset& ds) {
  std::vector<csv::Row> rows = {{"persona_id", "activity_label", "day", "start_minute", "duration_minute"}};
  for (const auto& p : ds)
    for (const auto& a : p.activities)
      rows.push_back({p.id, a.label, std::to_string(a.day), std::to_string(a.start), std::to_string(a.duration)});
  return csv::write(rows);
}

/// source_label -> canonical_label. An empty map keeps labels as they are.
using Taxonomy = std::map<std::string, std::string>;

inline Taxonomy parse_taxonomy_csv(const std::string& text) {
  Taxonomy out;
  const auto rows = csv::parse(text);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const auto& r = rows[i];
    if (r.size() == 1 && trim(r[0]).empty()) continue;
    if (r.size() != 2) fail(ErrorCode::io, "taxonomy row " + std::to_string(i + 1) + " needs two columns");
    const auto src = trim(r[0]), dst = trim(r[1]);
    if (i == 0 && src == "source_label") continue;
    if (src.empty() || dst.empty()) fail(ErrorCode::io, "taxonomy row " + std::to_string(i + 1) + " has an empty label");
    out[src] = dst;
  }
  return out;
}

inline Taxonomy load_taxonomy_csv(const std::string& path) { return parse_taxonomy_csv(csv::read_file(path)); }

/// Mean over persons who have the label of their hourly vectors.
using LabelProfiles = std::map<std::string, HourlyVector>;

inline LabelProfiles label_profiles(const TraceDataset& ds, const Taxonomy& taxonomy,
                                    std::vector<std::string>* warnings = nullptr) {
  std::map<std::string, std::pair<HourlyVector, int>> acc;
  std::set<std::string> unmapped;
  for (const auto& p : ds) {
    std::vector<Activity> mapped;
    for (auto a : p.activities) {
      if (!taxonomy.empty()) {
        const auto it = taxonomy.find(a.label);
        if (it == taxonomy.end()) {
          unmapped.insert(a.label);
          continue;
        }
        a.label = it->second;
      }
      mapped.push_back(std::move(a));
    }
    std::set<std::string> labels;
    for (const auto& a : mapped) labels.insert(a.label);
    for (const auto& l : labels) {
      const auto v = hourly_vector(mapped, l, p.horizon_days);
      auto& [sum, count] = acc[l];
      for (int h = 0; h < kHourlyDims; ++h) sum[h] += v[h];
      ++count;
    }
  }
  if (warnings)
    for (const auto& l : unmapped) warnings->push_back("label '" + l + "' has no taxonomy entry and was dropped");
  LabelProfiles out;
  for (auto& [l, sc] : acc) {
    HourlyVector v = sc.first;
    for (double& x : v) x /= sc.second;
    out[l] = v;
  }
  return out;
}

struct LabelCosine {
  std::string label;
  double cosine = 0.0;
};

struct DatasetAlignment {
  std::vector<LabelCosine> per_label;  // sorted by label
  double mean_cosine = 0.0;
  std::vector<std::string> warnings;
};

/// Per shared label, cosine between the two datasets' mean hourly vectors;
/// the result is their unweighted mean. Labels whose profile is zero in
/// either dataset (only night-time occurrences) are skipped with a warning.
inline DatasetAlignment dataset_alignment(const TraceDataset& a, const TraceDataset& b, const Taxonomy& taxonomy = {}) {
  DatasetAlignment out;
  const auto pa = label_profiles(a, taxonomy, &out.warnings);
  const auto pb = label_profiles(b, taxonomy, &out.warnings);
  auto is_zero = [](const HourlyVector& v) { return std::all_of(v.begin(), v.end(), [](double x) { return x == 0.0; }); };
  double total = 0.0;
  for (const auto& [label, va] : pa) {
    const auto it = pb.find(label);
    if (it == pb.end()) continue;
    if (is_zero(va) || is_zero(it->second)) {
      out.warnings.push_back("label '" + label + "' never occurs between 06:00 and 23:59 and was skipped");
      continue;
    }
    const double c = stats::cosine(std::span<const double>(va), std::span<const double>(it->second));
    out.per_label.push_back({label, c});
    total += c;
  }
  if (out.per_label.empty()) fail(ErrorCode::no_shared_labels, "the datasets share no comparable activity labels");
  out.mean_cosine = total / static_cast<double>(out.per_label.size());
  return out;
}

inline std::string alignment_csv(const DatasetAlignment& r) {
  std::vector<csv::Row> rows = {{"label", "cosine"}};
  for (const auto& l : r.per_label) rows.push_back({l.label, fmt_fixed(l.cosine, 6)});
  rows.push_back({"mean", fmt_fixed(r.mean_cosine, 6)});
  return csv::write(rows);
}

inline std::string profiles_csv(const LabelProfiles& profiles) {
  csv::Row header = {"label"};
  for (int h = 0; h < kHourlyDims; ++h) header.push_back("h" + std::to_string(kFirstHour + h));
  std::vector<csv::Row> rows = {header};
  for (const auto& [label, v] : profiles) {
    csv::Row r = {label};
    for (double x : v) r.push_back(fmt_fixed(x, 6));
    rows.push_back(std::move(r));
  }
  return csv::write(rows);
}

}  // namespace hhgen::eval
