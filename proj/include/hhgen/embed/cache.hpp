#pragma once

#include <filesystem>
#include <map>
#include <memory>
#include <mutex>

#include <json.hpp>

#include "hhgen/embed/provider.hpp"
#include "hhgen/util/fs.hpp"
#include "hhgen/util/hash.hpp"

namespace hhgen::embed {

/// Content-addressed cache in front of another provider. Entries are keyed
/// by (provider id, text) and persisted as <dir>/<hash>.json when a
/// directory is given.
class CachedEmbedder : public EmbeddingProvider {
 public:
  CachedEmbedder(std::shared_ptr<const EmbeddingProvider> inner, std::string dir = {})
      : inner_(std::move(inner)), dir_(std::move(dir)) {}

  std::string id() const override { return inner_->id(); }
  bool has_image_capability() const override { return inner_->has_image_capability(); }

  std::pair<Embedding, Embedding> embed_image_text_pair(const std::string& image_ref,
                                                        const std::string& text) const override {
    return inner_->embed_image_text_pair(image_ref, text);
  }

  static std::string key(const std::string& provider, const std::string& text) {
    return hex64(fnv1a64(text, fnv1a64(provider + "\n")));
  }

  Embedding embed_text(const std::string& text) const override {
    const std::string k = key(inner_->id(), text);
    {
      std::lock_guard lock(mu_);
      if (auto it = memo_.find(k); it != memo_.end()) return it->second;
    }
    if (!dir_.empty()) {
      const auto path = std::filesystem::path(dir_) / (k + ".json");
      if (std::filesystem::exists(path)) {
        Embedding v = nlohmann::json::parse(read_text_file(path.string())).at("embedding").get<Embedding>();
        std::lock_guard lock(mu_);
        return memo_.emplace(k, std::move(v)).first->second;
      }
    }
    Embedding v = inner_->embed_text(text);
    std::lock_guard lock(mu_);
    if (!dir_.empty()) {
      nlohmann::json j{{"provider", inner_->id()}, {"embedding", v}};
      write_text_file((std::filesystem::path(dir_) / (k + ".json")).string(), j.dump());
    }
    ++misses_;
    return memo_.emplace(k, std::move(v)).first->second;
  }

  std::size_t misses() const {
    std::lock_guard lock(mu_);
    return misses_;
  }

 private:
  std::shared_ptr<const EmbeddingProvider> inner_;
  std::string dir_;
  mutable std::mutex mu_;
  mutable std::map<std::string, Embedding> memo_;
  mutable std::size_t misses_ = 0;
};

}  // namespace hhgen::embed
