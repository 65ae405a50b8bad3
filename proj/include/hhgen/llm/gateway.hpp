#pragma once

#include <chrono>
#include <functional>
#include <memory>
#include <optional>
#include <string>

#include "hhgen/llm/ledger.hpp"
#include "hhgen/llm/prompt.hpp"
#include "hhgen/llm/provider.hpp"
#include "hhgen/llm/schema.hpp"

namespace hhgen::llm {

/// Extra validation beyond the schema; returns an error message or nullopt.
using SemanticCheck = std::function<std::optional<std::string>(const json&)>;

constexpr int kDefaultMaxRepairs = 2;

/// Single entry point for every LLM call in the pipeline: applies default
/// parameters, accounts calls in the ledger and runs the structured-output
/// repair loop.
class Gateway {
 public:
  explicit Gateway(ProviderPtr provider, GenParams defaults = {},
                   std::shared_ptr<CallLedger> ledger = std::make_shared<CallLedger>())
      : provider_(std::move(provider)), defaults_(defaults), ledger_(std::move(ledger)) {
    defaults_.validate();
  }

  const GenParams& defaults() const { return defaults_; }
  CallLedger& ledger() { return *ledger_; }
  std::shared_ptr<CallLedger> ledger_ptr() const { return ledger_; }
  SchemaRegistry& schemas() { return schemas_; }
  const Provider& provider() const { return *provider_; }

  std::string generate(const std::string& prompt, const GenParams& params, const CallTag& tag) {
    require(!prompt.empty(), "prompt must be non-empty");
    params.validate();
    const auto t0 = std::chrono::steady_clock::now();
    std::string reply;
    try {
      reply = provider_->complete(prompt, params);
    } catch (...) {
      ledger_->record(tag, seconds_since(t0), approx_tokens(prompt), 0);
      throw;
    }
    ledger_->record(tag, seconds_since(t0), approx_tokens(prompt), approx_tokens(reply));
    return reply;
  }

  std::string generate(const std::string& prompt, const CallTag& tag) { return generate(prompt, defaults_, tag); }

  /// Asks for a fenced JSON block matching the named schema. Invalid
  /// replies are re-prompted with the validation error, at most
  /// `max_repairs` times, before StructureFailure.
  json generate_structured(const std::string& prompt, const std::string& schema_name, const GenParams& params,
                           const CallTag& tag, int max_repairs = kDefaultMaxRepairs,
                           const SemanticCheck& check = {}) {
    require(max_repairs >= 0, "max_repairs must be non-negative");
    const json& schema = schemas_.get(schema_name);
    const std::string base = prompt + "### OUTPUT FORMAT\nReply with exactly one ```json fenced block matching this schema:\n" +
                             schema.dump() + "\n";
    std::string current = base;
    std::string last_error;
    for (int attempt = 0; attempt <= max_repairs; ++attempt) {
      const std::string reply = generate(current, params, tag);
      std::optional<std::string> error;
      json value;
      try {
        value = parse_reply_json(reply);
        error = validate_against(value, schema);
        if (!error && check) error = check(value);
      } catch (const json::exception& e) {
        error = std::string("reply is not valid JSON: ") + e.what();
      }
      if (!error) return value;
      last_error = *error;
      current = base + "### PREVIOUS REPLY\n" + reply + "\n### VALIDATION ERROR\n" + *error +
                "\nFix the error and reply again.\n";
    }
    fail(ErrorCode::structure_failure, schema_name + " still invalid after " + std::to_string(max_repairs + 1) +
                                           " attempts: " + last_error);
  }

  json generate_structured(const std::string& prompt, const std::string& schema_name, const CallTag& tag,
                           const SemanticCheck& check = {}) {
    return generate_structured(prompt, schema_name, defaults_, tag, kDefaultMaxRepairs, check);
  }

 private:
  static double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  }

  ProviderPtr provider_;
  GenParams defaults_;
  std::shared_ptr<CallLedger> ledger_;
  SchemaRegistry schemas_;
};

}  // namespace hhgen::llm
