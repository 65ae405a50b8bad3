#pragma once

#include <map>
#include <string>
#include <vector>

#include "hhgen/core/json.hpp"
#include "hhgen/util/csv.hpp"
#include "hhgen/util/fs.hpp"

namespace hhgen::env {

inline std::vector<std::string> asset_record_problems(const AssetRecord& a) {
  std::vector<std::string> out;
  if (a.id.empty()) out.push_back("empty id");
  if (a.dims.w <= 0 || a.dims.d <= 0 || a.dims.h <= 0) out.push_back(a.id + ": dims must be positive");
  if (a.pivot.x < 0 || a.pivot.x > a.dims.w || a.pivot.y < 0 || a.pivot.y > a.dims.d || a.pivot.z < 0 ||
      a.pivot.z > a.dims.h)
    out.push_back(a.id + ": pivot outside bounding box");
  return out;
}

/// Asset records indexed by id.
class AssetCatalog {
 public:
  AssetCatalog() = default;
  explicit AssetCatalog(std::vector<AssetRecord> records) {
    for (auto& r : records) add(std::move(r));
  }

  void add(AssetRecord r) {
    const auto problems = asset_record_problems(r);
    if (!problems.empty()) fail(ErrorCode::config, "invalid asset record: " + problems.front());
    if (index_.count(r.id)) fail(ErrorCode::config, "duplicate asset id '" + r.id + "'");
    index_[r.id] = records_.size();
    records_.push_back(std::move(r));
  }

  const AssetRecord* find(const std::string& id) const {
    auto it = index_.find(id);
    return it == index_.end() ? nullptr : &records_[it->second];
  }

  const std::vector<AssetRecord>& records() const { return records_; }
  bool empty() const { return records_.empty(); }
  std::size_t size() const { return records_.size(); }

 private:
  std::vector<AssetRecord> records_;
  std::map<std::string, std::size_t> index_;
};

/// JSON: an array of records or {"assets": [...]}.
inline AssetCatalog catalog_from_json(const json& j) {
  try {
    const json& arr = j.is_array() ? j : j.at("assets");
    return AssetCatalog(arr.get<std::vector<AssetRecord>>());
  } catch (const json::exception& e) {
    fail(ErrorCode::config, std::string("invalid catalog JSON: ") + e.what());
  }
}

/// CSV columns: id, description, w, d, h, pivot_x, pivot_y, pivot_z, image_ref.
inline AssetCatalog catalog_from_csv(const std::string& text) {
  csv::Table t(csv::parse(text));
  const auto num = [&](const csv::Row& row, const char* col) {
    const auto& s = t.at(row, t.column(col));
    try {
      return std::stod(s);
    } catch (const std::exception&) {
      fail(ErrorCode::config, std::string("catalog column ") + col + " is not a number: '" + s + "'");
    }
  };
  const bool has_image = t.has_column("image_ref");
  AssetCatalog cat;
  for (const auto& row : t.rows()) {
    AssetRecord a;
    a.id = t.at(row, t.column("id"));
    a.description = t.at(row, t.column("description"));
    a.dims = {num(row, "w"), num(row, "d"), num(row, "h")};
    a.pivot = {num(row, "pivot_x"), num(row, "pivot_y"), num(row, "pivot_z")};
    if (has_image && row.size() > t.column("image_ref") && !row[t.column("image_ref")].empty())
      a.image_ref = row[t.column("image_ref")];
    cat.add(std::move(a));
  }
  return cat;
}

inline AssetCatalog load_catalog(const std::string& path) {
  const std::string text = read_text_file(path);
  if (path.size() >= 4 && path.substr(path.size() - 4) == ".csv") return catalog_from_csv(text);
  try {
    return catalog_from_json(json::parse(text));
  } catch (const json::parse_error& e) {
    fail(ErrorCode::config, "cannot parse catalog " + path + ": " + e.what());
  }
}

}  // namespace hhgen::env
