#include "data/onehot.hpp"

#include <algorithm>
#include <cmath>

namespace edgegan {

SemanticLayout encode_onehot(const GrayBytes& indices, int num_classes) {
  require(num_classes >= 2, "encode_onehot: need at least 2 classes");
  SemanticLayout out;
  out.data = Tensor({num_classes, indices.h, indices.w});
  for (int y = 0; y < indices.h; ++y)
    for (int x = 0; x < indices.w; ++x) {
      const int idx = indices.at(y, x);
      if (idx >= num_classes)
        throw std::invalid_argument("encode_onehot: index " + std::to_string(idx) +
                                    " out of range at pixel (" + std::to_string(y) + "," +
                                    std::to_string(x) + ")");
      out.data.at3(idx, y, x) = 1.0;
    }
  for (int i = 0; i < num_classes; ++i) out.class_names.push_back("class" + std::to_string(i));
  return out;
}

GrayBytes decode_onehot(const SemanticLayout& layout) {
  GrayBytes out;
  out.h = layout.height();
  out.w = layout.width();
  out.pixels.resize(static_cast<size_t>(out.h) * out.w);
  for (int y = 0; y < out.h; ++y)
    for (int x = 0; x < out.w; ++x) {
      int best = 0;
      double bv = layout.data.at3(0, y, x);
      for (int c = 1; c < layout.num_classes(); ++c)
        if (layout.data.at3(c, y, x) > bv) {
          bv = layout.data.at3(c, y, x);
          best = c;
        }
      out.at(y, x) = static_cast<uint8_t>(best);
    }
  return out;
}

bool is_valid_onehot(const Tensor& data) {
  if (data.rank() != 3) return false;
  const int n = data.dim(0), h = data.dim(1), w = data.dim(2);
  for (int y = 0; y < h; ++y)
    for (int x = 0; x < w; ++x) {
      double sum = 0;
      for (int c = 0; c < n; ++c) {
        const double v = data.at3(c, y, x);
        if (v != 0.0 && v != 1.0) return false;
        sum += v;
      }
      if (sum != 1.0) return false;
    }
  return true;
}

Tensor resize_onehot_nearest(const Tensor& layout, int out_h, int out_w) {
  const int n = layout.dim(0), h = layout.dim(1), w = layout.dim(2);
  if (h == out_h && w == out_w) return layout;
  Tensor out({n, out_h, out_w});
  for (int y = 0; y < out_h; ++y) {
    const int sy = std::min(static_cast<int>((y + 0.5) * h / out_h), h - 1);
    for (int x = 0; x < out_w; ++x) {
      const int sx = std::min(static_cast<int>((x + 0.5) * w / out_w), w - 1);
      for (int c = 0; c < n; ++c) out.at3(c, y, x) = layout.at3(c, sy, sx);
    }
  }
  return out;
}

}  // namespace edgegan
