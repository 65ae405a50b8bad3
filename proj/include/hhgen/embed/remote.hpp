#pragma once

// Remote text embedder speaking the common embeddings contract:
//   POST {url} {"model": m, "input": text}
//   -> {"data": [{"embedding": [...]}]}

#include <string>

#include "hhgen/embed/provider.hpp"
#include "hhgen/util/http.hpp"

namespace hhgen::embed {

struct RemoteEmbedderConfig {
  std::string url;
  std::string model;
  std::string token_env = "HHGEN_EMBED_TOKEN";
  double timeout_seconds = 30.0;
};

class RemoteEmbedder : public EmbeddingProvider {
 public:
  explicit RemoteEmbedder(RemoteEmbedderConfig cfg) : cfg_(std::move(cfg)) {
    if (cfg_.url.empty()) fail(ErrorCode::config, "remote embedder needs a URL");
  }

  std::string id() const override { return "remote:" + cfg_.model + "@" + cfg_.url; }

  Embedding embed_text(const std::string& text) const override {
    require(!text.empty(), "embed_text needs non-empty text");
    const auto reply = http::post_json(cfg_.url, {{"model", cfg_.model}, {"input", text}},
                                       http::token_from_env(cfg_.token_env), cfg_.timeout_seconds);
    try {
      Embedding v = reply.at("data").at(0).at("embedding").get<Embedding>();
      for (double x : v)
        if (!std::isfinite(x)) fail(ErrorCode::provider_unavailable, "embedding has non-finite entries");
      return v;
    } catch (const nlohmann::json::exception& e) {
      fail(ErrorCode::provider_unavailable, std::string("unexpected embedding response: ") + e.what());
    }
  }

 private:
  RemoteEmbedderConfig cfg_;
};

}  // namespace hhgen::embed
