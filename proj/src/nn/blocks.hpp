#pragma once

#include "nn/params.hpp"

#include <string>

namespace edgegan {

/// 3x3 (or 1x1) convolution with optional spectral normalization of the
/// kernel. Padding is (k-1)/2 so stride-1 convolutions preserve H×W.
struct Conv2d {
  int in_c = 0, out_c = 0, k = 3, stride = 1;
  int w_id = -1, b_id = -1;

  Conv2d() = default;
  Conv2d(ParamStore& ps, const std::string& name, int in_c, int out_c, int k, int stride,
         bool spectral, Rng& init);

  int forward(const Bound& b, int x) const;
};

/// Plain residual downsampling block used on the encoder's contracting path:
/// conv(s2) -> lrelu -> conv(s1), plus a 1x1 stride-2 skip projection.
struct DownResBlock {
  Conv2d c1, c2, skip;

  DownResBlock() = default;
  DownResBlock(ParamStore& ps, const std::string& name, int channels, Rng& init);

  int forward(const Bound& b, int x) const;
};

/// Label-conditioned modulation: two convolutions over the (resized) layout
/// produce the per-pixel scale and shift applied after normalization.
struct SpadeModulation {
  Conv2d shared, to_gamma, to_beta;

  SpadeModulation() = default;
  SpadeModulation(ParamStore& ps, const std::string& name, int label_c, int hidden, int out_c,
                  Rng& init);

  /// Returns (gamma, beta) tape nodes, each out_c×H×W.
  std::pair<int, int> forward(const Bound& b, int label) const;
};

/// Spatially-adaptive residual block: each convolution is preceded by a
/// parameter-free per-channel normalization modulated by the semantic layout.
/// A channel mismatch on the skip path is resolved by a spectrally
/// normalized 1x1 projection.
struct SpadeResBlock {
  int in_c = 0, out_c = 0;
  SpadeModulation m1, m2, ms;
  Conv2d c1, c2, skip;
  double lrelu_slope = 0.2;

  SpadeResBlock() = default;
  SpadeResBlock(ParamStore& ps, const std::string& name, int in_c, int out_c, int label_c,
                int hidden, Rng& init);

  /// `label` must already be resized (nearest) to x's spatial size.
  int forward(const Bound& b, int x, int label) const;
};

/// Kaiming-style normal initialization for a conv kernel {O,I,k,k}.
Tensor conv_init(int out_c, int in_c, int k, Rng& rng);

}  // namespace edgegan
