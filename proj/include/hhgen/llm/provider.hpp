#pragma once

#include <atomic>
#include <chrono>
#include <functional>
#include <memory>
#include <string>
#include <thread>

#include "hhgen/error.hpp"
#include "hhgen/llm/params.hpp"
#include "hhgen/util/rng.hpp"

namespace hhgen::llm {

/// Text-generation backend. Implementations signal transient transport
/// failures with ProviderUnavailable and content refusals with
/// ProviderRefused.
class Provider {
 public:
  virtual ~Provider() = default;
  virtual std::string id() const = 0;
  virtual std::string complete(const std::string& prompt, const GenParams& params) = 0;
};

using ProviderPtr = std::shared_ptr<Provider>;

/// Counts every completion request that reaches the wrapped provider.
class CountingProvider : public Provider {
 public:
  explicit CountingProvider(ProviderPtr inner) : inner_(std::move(inner)) {}

  std::string id() const override { return inner_->id(); }
  std::string complete(const std::string& prompt, const GenParams& params) override {
    ++count_;
    return inner_->complete(prompt, params);
  }
  long count() const { return count_.load(); }

 private:
  ProviderPtr inner_;
  std::atomic<long> count_{0};
};

struct RetryPolicy {
  int retries = 3;
  double base_seconds = 0.5;
  double factor = 2.0;
  double jitter = 0.25;  // delay is scaled by 1 + jitter * U[0, 1)
  std::uint64_t seed = 0;
};

/// Retries ProviderUnavailable with exponential backoff. Refusals and every
/// other error pass straight through.
class RetryingProvider : public Provider {
 public:
  using Sleeper = std::function<void(double)>;

  RetryingProvider(ProviderPtr inner, RetryPolicy policy, Sleeper sleeper = default_sleeper())
      : inner_(std::move(inner)), policy_(policy), sleeper_(std::move(sleeper)), rng_(policy.seed) {}

  static Sleeper default_sleeper() {
    return [](double s) { std::this_thread::sleep_for(std::chrono::duration<double>(s)); };
  }

  std::string id() const override { return inner_->id(); }

  std::string complete(const std::string& prompt, const GenParams& params) override {
    double delay = policy_.base_seconds;
    for (int attempt = 0;; ++attempt) {
      try {
        return inner_->complete(prompt, params);
      } catch (const Error& e) {
        if (e.code() != ErrorCode::provider_unavailable) throw;
        if (attempt >= policy_.retries)
          fail(ErrorCode::provider_unavailable,
               "gave up after " + std::to_string(attempt + 1) + " attempts: " + e.what());
      }
      sleeper_(delay * (1.0 + policy_.jitter * rng_.uniform()));
      delay *= policy_.factor;
    }
  }

 private:
  ProviderPtr inner_;
  RetryPolicy policy_;
  Sleeper sleeper_;
  Rng rng_;
};

}  // namespace hhgen::llm
