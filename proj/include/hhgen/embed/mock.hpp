#pragma once

#include <cmath>
#include <map>
#include <string>

#include "hhgen/embed/provider.hpp"
#include "hhgen/util/fs.hpp"
#include "hhgen/util/hash.hpp"
#include "hhgen/util/text.hpp"

namespace hhgen::embed {

constexpr std::size_t kMockDimension = 256;

/// Bucket of a token in the mock embedder: FNV-1a 64 of the lower-case
/// token, modulo the dimension.
inline std::size_t mock_bucket(const std::string& token, std::size_t dim = kMockDimension) {
  return static_cast<std::size_t>(fnv1a64(token) % dim);
}

/// L2-normalized hashed bag of tokens.
inline Embedding bag_of_tokens(const std::vector<std::string>& tokens, std::size_t dim = kMockDimension) {
  if (tokens.empty()) fail(ErrorCode::zero_vector, "text has no tokens to embed");
  Embedding v(dim, 0.0);
  for (const auto& t : tokens) v[mock_bucket(t, dim)] += 1.0;
  double norm = 0.0;
  for (double x : v) norm += x * x;
  norm = std::sqrt(norm);
  for (double& x : v) x /= norm;
  return v;
}

class MockEmbedder : public EmbeddingProvider {
 public:
  explicit MockEmbedder(std::size_t dim = kMockDimension) : dim_(dim) {}

  std::string id() const override { return "mock-bow-" + std::to_string(dim_); }

  Embedding embed_text(const std::string& text) const override {
    require(!text.empty(), "embed_text needs non-empty text");
    return bag_of_tokens(tokenize(text), dim_);
  }

  std::size_t dimension() const { return dim_; }

 private:
  std::size_t dim_;
};

/// Room labels from the legend of a grid-txt floor plan ("X room-id label (function)").
inline std::vector<std::string> floorplan_room_labels(const std::string& plan) {
  std::vector<std::string> labels;
  bool in_legend = false;
  for (const auto& raw : split(plan, '\n')) {
    const std::string line = trim(raw);
    if (line == "legend:") {
      in_legend = true;
      continue;
    }
    if (!in_legend) continue;
    if (line.empty() || line.back() == ':') break;
    // "<glyph> <room-id> <label...> (<function>)"
    const auto first = line.find(' ');
    const auto second = line.find(' ', first + 1);
    const auto paren = line.rfind(" (");
    if (first == std::string::npos || second == std::string::npos) continue;
    const auto end = (paren != std::string::npos && paren > second) ? paren : line.size();
    labels.push_back(line.substr(second + 1, end - second - 1));
  }
  return labels;
}

/// Mock image-text provider. An "image" is a grid-txt floor plan (a path,
/// or the plan text itself); its vector is the bag of room-label tokens, so
/// plans with the same label multiset embed identically.
class MockImageEmbedder : public MockEmbedder {
 public:
  using MockEmbedder::MockEmbedder;

  std::string id() const override { return "mock-image-" + std::to_string(dimension()); }
  bool has_image_capability() const override { return true; }

  std::pair<Embedding, Embedding> embed_image_text_pair(const std::string& image_ref,
                                                        const std::string& text) const override {
    const std::string plan = image_ref.find('\n') != std::string::npos ? image_ref : read_text_file(image_ref);
    std::vector<std::string> tokens;
    for (const auto& label : floorplan_room_labels(plan))
      for (auto& t : tokenize(label)) tokens.push_back(std::move(t));
    return {bag_of_tokens(tokens, dimension()), embed_text(text)};
  }
};

}  // namespace hhgen::embed
