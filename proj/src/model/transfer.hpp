#pragma once

#include "core/tape.hpp"

namespace edgegan {

/// Attention guided edge transfer: parameter-free Sigmoid gating that moves
/// edge structure into the image branch at feature level and image level.
namespace transfer {

/// Sigmoid(edge_feature) ⊙ image_feature + image_feature. Shapes must match.
int features(Tape& tape, int edge_feature, int image_feature);

/// Sigmoid(edge_map) ⊙ intermediate + intermediate.
int image(Tape& tape, int edge_map, int intermediate);

/// Eager (tensor) versions for callers outside a training graph.
Tensor features(const Tensor& edge_feature, const Tensor& image_feature);
Tensor image(const Tensor& edge_map, const Tensor& intermediate);

}  // namespace transfer
}  // namespace edgegan
