#pragma once

#include <algorithm>
#include <cmath>
#include <span>

#include "hhgen/error.hpp"

namespace hhgen::stats {

/// x.y / (|x| |y|), clamped to [-1, 1] against rounding.
inline double cosine(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) fail(ErrorCode::length_mismatch, "cosine of vectors with different lengths");
  double dot = 0.0, nx = 0.0, ny = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    dot += x[i] * y[i];
    nx += x[i] * x[i];
    ny += y[i] * y[i];
  }
  if (nx <= 0.0 || ny <= 0.0) fail(ErrorCode::zero_vector, "cosine of a zero vector");
  return std::clamp(dot / (std::sqrt(nx) * std::sqrt(ny)), -1.0, 1.0);
}

}  // namespace hhgen::stats
