#pragma once

#include "core/tensor.hpp"
#include "data/image_io.hpp"

#include <string>
#include <vector>

namespace edgegan {

/// One-hot semantic layout S, N×H×W with channel-sum 1 at every pixel.
struct SemanticLayout {
  Tensor data;  // {N,H,W}
  std::vector<std::string> class_names;

  int num_classes() const { return data.dim(0); }
  int height() const { return data.dim(1); }
  int width() const { return data.dim(2); }
};

/// Encodes an index map into a one-hot layout. An out-of-range index is
/// rejected with the offending pixel coordinate in the message.
SemanticLayout encode_onehot(const GrayBytes& indices, int num_classes);

/// Argmax decode; exact inverse of encode_onehot.
GrayBytes decode_onehot(const SemanticLayout& layout);

/// Validates the one-hot invariant (values in {0,1}, channel-sum 1).
bool is_valid_onehot(const Tensor& data);

/// Nearest-neighbor downscale of a one-hot layout (used for the SPADE
/// label pyramid); preserves the one-hot invariant by construction.
Tensor resize_onehot_nearest(const Tensor& layout, int out_h, int out_w);

}  // namespace edgegan
