#pragma once

#include <string>
#include <utility>
#include <vector>

#include "hhgen/error.hpp"
#include "hhgen/stats/cosine.hpp"

namespace hhgen::embed {

using Embedding = std::vector<double>;

/// Text embedder with an optional image-text capability. Implementations
/// are stateless from the caller's point of view and safe to share.
class EmbeddingProvider {
 public:
  virtual ~EmbeddingProvider() = default;

  virtual std::string id() const = 0;
  virtual Embedding embed_text(const std::string& text) const = 0;

  virtual bool has_image_capability() const { return false; }
  virtual std::pair<Embedding, Embedding> embed_image_text_pair(const std::string& image_ref,
                                                                const std::string& text) const {
    (void)image_ref;
    (void)text;
    fail(ErrorCode::capability_missing, "provider " + id() + " has no image embedding");
  }
};

inline double text_similarity(const EmbeddingProvider& p, const std::string& a, const std::string& b) {
  return stats::cosine(p.embed_text(a), p.embed_text(b));
}

}  // namespace hhgen::embed
