#include <CLI11.hpp>

#include <iostream>
#include <string>
#include <vector>

#include "hhgen/io/adapters.hpp"
#include "hhgen/io/batch.hpp"
#include "hhgen/io/evaluate.hpp"

namespace {

using namespace hhgen;

io::ProviderConfig embed_config_from_env() {
  io::ProviderConfig p;
  p.embed_url = io::detail::env_or("HHGEN_EMBED_URL", "");
  p.embed_model = io::detail::env_or("HHGEN_EMBED_MODEL", "");
  return p;
}

int cmd_generate(const std::string& config, int variations, const std::string& provider, const std::string& out,
                 int workers) {
  auto cfg = io::load_config(config);
  if (variations > 0) cfg.variations = variations;
  if (!provider.empty()) cfg.provider.kind = provider;
  if (workers >= 0) cfg.workers = workers;
  cfg.validate();
  const auto embed = io::make_embedder(cfg.provider);
  const auto outcomes = io::generate_batch(cfg, out, *embed);
  int failed = 0;
  for (const auto& o : outcomes) {
    if (o.ok) {
      std::cout << "variation " << o.variation << " seed " << o.seed << ": " << o.dir << " (" << o.manifest_id << ")\n";
    } else {
      ++failed;
      std::cerr << "variation " << o.variation << " seed " << o.seed << " failed: " << o.error << "\n";
    }
  }
  return failed == 0 ? 0 : 1;
}

int cmd_evaluate(const io::EvaluateOptions& opts) {
  const auto embed = io::make_embedder(embed_config_from_env());
  const auto out = io::evaluate(opts, *embed);
  std::cout << out.summary;
  for (const auto& f : out.files) std::cout << "wrote " << f << "\n";
  return 0;
}

int cmd_export(const std::string& adapter, const std::string& kind, const std::string& manifest, const std::string& out) {
  const auto m = io::load_manifest(manifest);
  const std::string text = kind == "scene" ? io::export_scene(m.env, adapter) : io::export_trace(m.schedule, m.transcripts, adapter);
  if (out.empty()) std::cout << text;
  else write_text_file(out, text);
  return 0;
}

int cmd_report_calls(const std::string& manifest, bool as_csv) {
  const auto rows = io::report_calls(manifest);
  std::cout << (as_csv ? io::call_report_csv(rows) : io::call_report_table(rows));
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Household environment and behavior generator"};
  app.set_version_flag("--version", HHGEN_VERSION);
  app.require_subcommand(1);

  std::string config, provider, out = "runs";
  int variations = 0, workers = -1;
  auto* gen = app.add_subcommand("generate", "Run the generation pipeline for every variation of a config");
  gen->add_option("--config", config, "Run config (JSON)")->required()->check(CLI::ExistingFile);
  gen->add_option("--variations", variations, "Number of variations (seed, seed+1, ...)")->check(CLI::PositiveNumber);
  gen->add_option("--provider", provider, "LLM provider")->check(CLI::IsMember({"stub", "remote"}));
  gen->add_option("--out", out, "Output directory")->capture_default_str();
  gen->add_option("--workers", workers, "Parallel variations (0 = all cores)")->check(CLI::NonNegativeNumber);

  io::EvaluateOptions eo;
  auto* ev = app.add_subcommand("evaluate", "Evaluate stored manifests");
  ev->add_option("--mode", eo.mode, "Evaluation mode")->required()->check(CLI::IsMember(io::evaluation_modes()));
  ev->add_option("--in", eo.inputs, "Manifest files, run directories or glob patterns")->required();
  ev->add_option("--out", eo.out_dir, "Report directory")->required();
  ev->add_option("--seed", eo.seed, "Seed for clustering and permutations")->capture_default_str();
  ev->add_option("--clusters", eo.clusters, "Clusters for mutual information (0 = default)");
  ev->add_option("--pca", eo.n_pca, "Principal components kept")->capture_default_str();
  ev->add_option("--config", eo.config_path, "Config to rerun for interventions")->check(CLI::ExistingFile);
  ev->add_option("--catalog", eo.catalog_path, "Catalog for rerunning a manifest config")->check(CLI::ExistingFile);
  ev->add_option("--samples", eo.intervention_n, "Runs per intervention group")->capture_default_str();
  ev->add_option("--permutations", eo.permutations, "Permutations per test")->capture_default_str();
  ev->add_flag("--parallel", eo.parallel, "Generate intervention samples in parallel");
  ev->add_option("--reference", eo.reference_csv, "Reference trace CSV for compare")->check(CLI::ExistingFile);
  ev->add_option("--taxonomy", eo.taxonomy_csv, "Label taxonomy CSV for compare")->check(CLI::ExistingFile);
  ev->add_option("--feature-clusters", eo.feature_clusters, "Clusters for the activity feature diagnostic")
      ->capture_default_str();

  std::string adapter, kind = "scene", manifest, export_out;
  auto* ex = app.add_subcommand("export", "Export a manifest's scene or event trace");
  ex->add_option("--adapter", adapter, "Adapter id")->required();
  ex->add_option("--kind", kind, "What to export")->check(CLI::IsMember({"scene", "trace"}))->capture_default_str();
  ex->add_option("--manifest", manifest, "Manifest file")->required()->check(CLI::ExistingFile);
  ex->add_option("--out", export_out, "Output file (default: stdout)");

  std::string report_manifest;
  bool as_csv = false;
  auto* rc = app.add_subcommand("report-calls", "Per-module LLM calls and time of a run");
  rc->add_option("--manifest", report_manifest, "Manifest file")->required()->check(CLI::ExistingFile);
  rc->add_flag("--csv", as_csv, "Print CSV instead of a table");

  CLI11_PARSE(app, argc, argv);

  try {
    if (gen->parsed()) return cmd_generate(config, variations, provider, out, workers);
    if (ev->parsed()) return cmd_evaluate(eo);
    if (ex->parsed()) return cmd_export(adapter, kind, manifest, export_out);
    if (rc->parsed()) return cmd_report_calls(report_manifest, as_csv);
  } catch (const hhgen::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
