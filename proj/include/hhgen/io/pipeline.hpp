#pragma once

#include <chrono>
#include <memory>
#include <string>

#include "hhgen/controller/controller.hpp"
#include "hhgen/embed/cache.hpp"
#include "hhgen/embed/mock.hpp"
#include "hhgen/embed/remote.hpp"
#include "hhgen/io/config.hpp"
#include "hhgen/llm/remote.hpp"

namespace hhgen::io {

/// Offline provider answering every pipeline task from templates.
inline std::shared_ptr<llm::TemplateProvider> stub_provider() {
  auto stub = std::make_shared<llm::TemplateProvider>();
  env::register_environment_templates(*stub);
  activity::register_activity_templates(*stub);
  controller::register_controller_templates(*stub);
  return stub;
}

inline llm::ProviderPtr make_provider(const ProviderConfig& p) {
  if (p.stub()) return stub_provider();
  llm::RemoteConfig rc;
  rc.url = p.llm_url;
  rc.model = p.llm_model;
  return std::make_shared<llm::RetryingProvider>(std::make_shared<llm::RemoteChatProvider>(rc), llm::RetryPolicy{});
}

inline std::shared_ptr<const embed::EmbeddingProvider> make_embedder(const ProviderConfig& p) {
  if (p.embed_url.empty()) return std::make_shared<embed::MockEmbedder>();
  embed::RemoteEmbedderConfig rc;
  rc.url = p.embed_url;
  rc.model = p.embed_model;
  return std::make_shared<embed::CachedEmbedder>(std::make_shared<embed::RemoteEmbedder>(rc));
}

/// One controller run plus the accounting around it.
struct VariationRun {
  int variation = 0;
  llm::GenParams params;
  std::vector<Persona> personas;
  controller::RunResult result;
  std::shared_ptr<llm::CallLedger> ledger;
  long provider_calls = 0;  // as seen by a counting wrapper around the provider
  double seconds = 0.0;
};

inline VariationRun run_variation(const RunConfig& cfg, const std::vector<Persona>& personas,
                                 const llm::GenParams& params, const embed::EmbeddingProvider& embed,
                                 int variation = 0) {
  VariationRun out;
  out.variation = variation;
  out.params = params;
  out.personas = personas;
  const auto t0 = std::chrono::steady_clock::now();
  auto counting = std::make_shared<llm::CountingProvider>(make_provider(cfg.provider));
  auto ledger = std::make_shared<llm::CallLedger>();
  llm::Gateway gw(counting, params, ledger);
  controller::ControllerDeps deps;
  deps.gateway = &gw;
  deps.catalog = &cfg.catalog;
  deps.embed = &embed;
  deps.env_options.seed = params.seed.value_or(0);
  deps.activity_options.days = cfg.horizon_days;
  deps.activity_options.window = cfg.window;
  deps.activity_options.mode = cfg.binding_mode;
  deps.activity_options.robot = cfg.robot;
  out.result = controller::run(personas, cfg.constraints, cfg.convergence, deps);
  out.provider_calls = counting->count();
  out.ledger = ledger;
  out.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return out;
}

}  // namespace hhgen::io
