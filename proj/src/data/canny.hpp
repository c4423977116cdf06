#pragma once

#include "core/tensor.hpp"

namespace edgegan {

struct CannyParams {
  double sigma = 1.0;
  double low = 0.1;   // gradient-magnitude thresholds on [0,1] luminance
  double high = 0.2;
};

/// Classic Canny detector on the luminance of a [-1,1] RGB tensor:
/// Gaussian smoothing, Sobel gradients, non-maximum suppression, then
/// hysteresis thresholding. Fully deterministic in double precision.
///
/// Returns the edge target replicated to 3 channels with values in {-1,+1}
/// (edge = +1). A constant image yields a valid all -1 map.
Tensor extract_canny_edges(const Tensor& image, const CannyParams& params);

/// Number of edge pixels (+1 entries in one channel) of an edge target.
int64_t edge_pixel_count(const Tensor& edge_target);

}  // namespace edgegan
