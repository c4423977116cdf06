#pragma once

#include "core/config.hpp"
#include "core/tape.hpp"

#include <Eigen/Core>

#include <string>
#include <vector>

namespace edgegan {

/// Fixed (never trained) convolutional feature extractor used by the
/// perceptual loss and by the toy-scale distribution metric. The default is
/// a seeded random-weight stack; a pretrained network exported to the tensor
/// archive format can be supplied instead via `loss.perceptual.weights_path`.
///
/// Tap 0 is the input itself, so the perceptual distance upper-bounds a plain
/// pixel L1 term; deeper taps come after each stride-2 convolution.
class PerceptualExtractor {
 public:
  static PerceptualExtractor random(uint64_t seed, const std::vector<int>& channels = {16, 32, 32});
  static PerceptualExtractor from_file(const std::string& path);
  static PerceptualExtractor from_config(const Config& cfg);

  /// Tape nodes for every tap; gradients flow into `image`, never into the
  /// extractor weights (they are bound as constants).
  std::vector<int> taps(Tape& tape, int image) const;

  /// Pooled deep feature of one image: global average of the last tap.
  Eigen::VectorXd pooled_feature(const Tensor& image) const;

  int feature_dim() const { return channels_.back(); }

 private:
  std::vector<int> channels_;
  std::vector<Tensor> weights_;  // {out,in,3,3} per layer
  std::vector<Tensor> biases_;
};

}  // namespace edgegan
