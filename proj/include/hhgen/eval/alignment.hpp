#pragma once

#include <cmath>
#include <map>
#include <string>
#include <vector>

#include "hhgen/embed/provider.hpp"
#include "hhgen/embed/standardize.hpp"
#include "hhgen/stats/matrix.hpp"

namespace hhgen::eval {

struct MeanSd {
  double mean = 0.0;
  double sd = 0.0;  // sample standard deviation
  bool operator==(const MeanSd&) const = default;
};

inline MeanSd mean_sd(const std::vector<double>& v) {
  require(v.size() >= 2, "mean and sd need at least two values");
  return {stats::mean(v), std::sqrt(stats::sample_variance(v))};
}

/// One household: its persona, environment and behavior texts plus what
/// standardization should hide.
struct AlignmentSample {
  std::string persona;
  std::string environment;
  std::string behavior;
  std::vector<std::string> member_names;
  std::map<std::string, std::string> room_labels;
};

struct SemanticAlignment {
  MeanSd persona_env;
  MeanSd env_behavior;
  MeanSd persona_behavior;
  std::size_t n = 0;
};

/// Standardizes each text, embeds it and reports mean and sd of the three
/// pairwise cosines over the samples.
inline SemanticAlignment semantic_alignment(const std::vector<AlignmentSample>& samples,
                                            const embed::EmbeddingProvider& embed) {
  require(samples.size() >= 2, "semantic alignment needs at least two samples");
  std::vector<double> pe, eb, pb;
  for (const auto& s : samples) {
    auto vec = [&](const std::string& text) {
      return embed.embed_text(embed::standardize_description(text, s.member_names, s.room_labels));
    };
    const auto p = vec(s.persona), e = vec(s.environment), b = vec(s.behavior);
    pe.push_back(stats::cosine(p, e));
    eb.push_back(stats::cosine(e, b));
    pb.push_back(stats::cosine(p, b));
  }
  return {mean_sd(pe), mean_sd(eb), mean_sd(pb), samples.size()};
}

inline SemanticAlignment semantic_alignment(const std::vector<std::string>& persona_texts,
                                            const std::vector<std::string>& env_texts,
                                            const std::vector<std::string>& beh_texts,
                                            const embed::EmbeddingProvider& embed) {
  if (persona_texts.size() != env_texts.size() || env_texts.size() != beh_texts.size())
    fail(ErrorCode::length_mismatch, "alignment text lists differ in length");
  std::vector<AlignmentSample> samples;
  for (std::size_t i = 0; i < persona_texts.size(); ++i)
    samples.push_back({persona_texts[i], env_texts[i], beh_texts[i], {}, {}});
  return semantic_alignment(samples, embed);
}

/// Cosine between each floor-plan image and its household description in
/// the provider's shared image-text space.
inline MeanSd image_text_alignment(const std::vector<std::pair<std::string, std::string>>& image_and_text,
                                   const embed::EmbeddingProvider& embed) {
  std::vector<double> cos;
  for (const auto& [image, text] : image_and_text) {
    const auto [iv, tv] = embed.embed_image_text_pair(image, text);
    cos.push_back(stats::cosine(iv, tv));
  }
  return mean_sd(cos);
}

}  // namespace hhgen::eval
