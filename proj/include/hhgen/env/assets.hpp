#pragma once

#include <algorithm>
#include <string>
#include <vector>

#include "hhgen/embed/provider.hpp"
#include "hhgen/env/catalog.hpp"

namespace hhgen::env {

struct ScoredAsset {
  AssetRecord record;
  double score = 0.0;
};

inline std::string room_query(const Room& room, const std::vector<Persona>& personas, const std::string& hint = {}) {
  std::string q = room.label + " " + std::string(to_string(room.function));
  if (room.owner)
    for (const auto& p : personas)
      if (p.id == *room.owner && !p.free_text.empty()) q += " " + p.free_text;
  if (!hint.empty()) q += " " + hint;
  return q;
}

/// Catalog records ranked by cosine between the room query (label,
/// function, owner's free text, optional hint) and each description;
/// ties by ascending id. Returns the top k with their scores.
inline std::vector<ScoredAsset> rank_assets(const Room& room, const std::vector<Persona>& personas,
                                            const AssetCatalog& catalog, const embed::EmbeddingProvider& embed,
                                            std::size_t k, const std::string& hint = {}) {
  require(!catalog.empty(), "asset catalog is empty");
  const auto q = embed.embed_text(room_query(room, personas, hint));
  std::vector<ScoredAsset> scored;
  for (const auto& r : catalog.records()) scored.push_back({r, stats::cosine(q, embed.embed_text(r.description))});
  std::stable_sort(scored.begin(), scored.end(), [](const ScoredAsset& a, const ScoredAsset& b) {
    if (a.score != b.score) return a.score > b.score;
    return a.record.id < b.record.id;
  });
  if (scored.size() > k) scored.resize(k);
  return scored;
}

inline std::vector<AssetRecord> select_assets(const Room& room, const std::vector<Persona>& personas,
                                              const AssetCatalog& catalog, const embed::EmbeddingProvider& embed,
                                              std::size_t k, const std::string& hint = {}) {
  std::vector<AssetRecord> out;
  for (auto& s : rank_assets(room, personas, catalog, embed, k, hint)) out.push_back(std::move(s.record));
  return out;
}

}  // namespace hhgen::env
