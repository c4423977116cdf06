#pragma once

#include "core/rng.hpp"
#include "core/tensor.hpp"

#include <Eigen/Core>

namespace edgegan {

struct SpectralResult {
  Tensor weight;     // weight / sigma_hat (unchanged when degenerate)
  double sigma = 0;  // power-iteration estimate of the largest singular value
  bool degenerate = false;
};

/// Standalone power-iteration spectral normalization of a matricized kernel
/// (first dim = rows, remainder flattened to columns). A zero weight is
/// returned unchanged with the degenerate flag set.
SpectralResult spectral_normalize(const Tensor& weight, int power_iterations, Rng& rng);

}  // namespace edgegan
