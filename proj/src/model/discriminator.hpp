#pragma once

#include "core/config.hpp"
#include "nn/blocks.hpp"

#include <vector>

namespace edgegan {

struct DiscriminatorConfig {
  int num_classes = 4;
  int base_channels = 64;
  int num_scales = 2;

  static DiscriminatorConfig from(const Config& cfg);
};

/// Multi-modality patch discriminator. One trunk scores both (label, edge)
/// and (label, image) pairs: the candidate is channel-concatenated with the
/// layout (N+3 input channels) and judged at `num_scales` resolutions.
class Discriminator {
 public:
  struct Out {
    std::vector<int> logits;    // one patch-logit map per scale
    std::vector<int> features;  // intermediate activations, fixed order
  };

  Discriminator(ParamStore& ps, const DiscriminatorConfig& cfg, Rng& init);

  /// `candidate` is an edge map or an image (both 3×H×W). The minimum
  /// spatial size is 8·2^(num_scales-1) so every scale keeps a patch grid.
  Out forward(Tape& tape, const Bound& b, int layout, int candidate) const;

  int min_input_size() const { return 8 << (cfg_.num_scales - 1); }
  const DiscriminatorConfig& config() const { return cfg_; }

 private:
  struct Scale {
    Conv2d c0, c1, c2, out;
  };
  DiscriminatorConfig cfg_;
  std::vector<Scale> scales_;
};

}  // namespace edgegan
