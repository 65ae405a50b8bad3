#pragma once

#include <algorithm>
#include <atomic>
#include <filesystem>
#include <string>
#include <thread>
#include <vector>

#include "hhgen/io/manifest.hpp"

namespace hhgen::io {

struct VariationOutcome {
  int variation = 0;
  std::uint64_t seed = 0;
  std::string dir;
  bool ok = false;
  std::string error;
  std::string manifest_id;
};

/// Runs fn(0..n-1) on at most `workers` threads (0 = hardware concurrency).
template <typename Fn>
void parallel_for(int n, int workers, Fn fn) {
  const int hw = static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
  const int w = std::max(1, std::min(n, workers > 0 ? workers : hw));
  std::atomic<int> next{0};
  auto loop = [&] {
    for (int i = next++; i < n; i = next++) fn(i);
  };
  if (w == 1) {
    loop();
    return;
  }
  std::vector<std::thread> pool;
  for (int t = 0; t < w; ++t) pool.emplace_back(loop);
  for (auto& t : pool) t.join();
}

inline std::string variation_dir_name(int v, std::uint64_t seed) {
  return "variation-" + std::to_string(v) + "-seed-" + std::to_string(seed);
}

/// Runs every variation into <out_dir>/<variation dir>/. A failing variation
/// leaves an error.json in its own directory and does not stop the others.
inline std::vector<VariationOutcome> generate_batch(const RunConfig& cfg, const std::string& out_dir,
                                                   const embed::EmbeddingProvider& embed) {
  cfg.validate();
  std::vector<VariationOutcome> outcomes(static_cast<std::size_t>(cfg.variations));
  parallel_for(cfg.variations, cfg.workers, [&](int v) {
    const auto params = variation_params(cfg, v);
    auto& o = outcomes[static_cast<std::size_t>(v)];
    o.variation = v;
    o.seed = params.seed.value_or(0);
    const auto dir = std::filesystem::path(out_dir) / variation_dir_name(v, o.seed);
    o.dir = dir.string();
    try {
      const auto run = run_variation(cfg, cfg.personas, params, embed, v);
      const auto manifest = manifest_json(cfg, run, embed.id());
      write_text_file((dir / kManifestFile).string(), canonical_dump(manifest));
      write_text_file((dir / kTimingFile).string(), canonical_dump(timing_json(run)));
      o.manifest_id = manifest.at("manifest_id").get<std::string>();
      o.ok = true;
    } catch (const std::exception& e) {
      o.error = e.what();
      std::string code = "unknown";
      if (const auto* he = dynamic_cast<const Error*>(&e)) code = std::string(to_string(he->code()));
      try {
        write_text_file((dir / "error.json").string(),
                        canonical_dump({{"variation", v}, {"seed", o.seed}, {"code", code}, {"error", o.error}}));
      } catch (const std::exception&) {
      }
    }
  });
  json summary = json::array();
  for (const auto& o : outcomes)
    summary.push_back({{"variation", o.variation}, {"seed", o.seed}, {"ok", o.ok}, {"error", o.error},
                       {"manifest_id", o.manifest_id}, {"dir", std::filesystem::path(o.dir).filename().string()}});
  write_text_file((std::filesystem::path(out_dir) / "batch.json").string(), canonical_dump(summary));
  return outcomes;
}

}  // namespace hhgen::io
