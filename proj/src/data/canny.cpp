#include "data/canny.hpp"

#include <cmath>
#include <deque>
#include <vector>

namespace edgegan {

namespace {

std::vector<double> gaussian_kernel(double sigma) {
  const int radius = std::max(1, static_cast<int>(std::ceil(3.0 * sigma)));
  std::vector<double> k(static_cast<size_t>(2 * radius + 1));
  double sum = 0;
  for (int i = -radius; i <= radius; ++i) {
    k[static_cast<size_t>(i + radius)] = std::exp(-0.5 * i * i / (sigma * sigma));
    sum += k[static_cast<size_t>(i + radius)];
  }
  for (auto& v : k) v /= sum;
  return k;
}

// Separable blur with edge-clamped borders.
std::vector<double> blur(const std::vector<double>& img, int h, int w, double sigma) {
  const auto k = gaussian_kernel(sigma);
  const int r = (static_cast<int>(k.size()) - 1) / 2;
  std::vector<double> tmp(img.size()), out(img.size());
  for (int y = 0; y < h; ++y)
    for (int x = 0; x < w; ++x) {
      double acc = 0;
      for (int i = -r; i <= r; ++i) {
        const int xx = std::clamp(x + i, 0, w - 1);
        acc += k[static_cast<size_t>(i + r)] * img[static_cast<size_t>(y) * w + xx];
      }
      tmp[static_cast<size_t>(y) * w + x] = acc;
    }
  for (int y = 0; y < h; ++y)
    for (int x = 0; x < w; ++x) {
      double acc = 0;
      for (int i = -r; i <= r; ++i) {
        const int yy = std::clamp(y + i, 0, h - 1);
        acc += k[static_cast<size_t>(i + r)] * tmp[static_cast<size_t>(yy) * w + x];
      }
      out[static_cast<size_t>(y) * w + x] = acc;
    }
  return out;
}

}  // namespace

Tensor extract_canny_edges(const Tensor& image, const CannyParams& p) {
  require(image.rank() == 3 && image.dim(0) == 3, "canny: expected 3×H×W image");
  require(p.low < p.high, "canny: low threshold must be below high");
  require(p.sigma > 0, "canny: sigma must be positive");
  const int h = image.dim(1), w = image.dim(2);

  std::vector<double> lum(static_cast<size_t>(h) * w);
  for (int y = 0; y < h; ++y)
    for (int x = 0; x < w; ++x)
      lum[static_cast<size_t>(y) * w + x] =
          (0.299 * image.at3(0, y, x) + 0.587 * image.at3(1, y, x) + 0.114 * image.at3(2, y, x) +
           1.0) /
          2.0;
  lum = blur(lum, h, w, p.sigma);

  auto at = [&](int y, int x) {
    return lum[static_cast<size_t>(std::clamp(y, 0, h - 1)) * w + std::clamp(x, 0, w - 1)];
  };
  std::vector<double> mag(lum.size()), gx_(lum.size()), gy_(lum.size());
  for (int y = 0; y < h; ++y)
    for (int x = 0; x < w; ++x) {
      const double gx = (at(y - 1, x + 1) + 2 * at(y, x + 1) + at(y + 1, x + 1)) -
                        (at(y - 1, x - 1) + 2 * at(y, x - 1) + at(y + 1, x - 1));
      const double gy = (at(y + 1, x - 1) + 2 * at(y + 1, x) + at(y + 1, x + 1)) -
                        (at(y - 1, x - 1) + 2 * at(y - 1, x) + at(y - 1, x + 1));
      const size_t i = static_cast<size_t>(y) * w + x;
      gx_[i] = gx;
      gy_[i] = gy;
      mag[i] = std::hypot(gx, gy);
    }

  // Non-maximum suppression along the quantized gradient direction.
  std::vector<double> nms(lum.size(), 0.0);
  for (int y = 0; y < h; ++y)
    for (int x = 0; x < w; ++x) {
      const size_t i = static_cast<size_t>(y) * w + x;
      if (mag[i] == 0.0) continue;
      double angle = std::atan2(gy_[i], gx_[i]) * 180.0 / M_PI;
      if (angle < 0) angle += 180.0;
      int dy0, dx0, dy1, dx1;
      if (angle < 22.5 || angle >= 157.5) {
        dy0 = 0; dx0 = 1; dy1 = 0; dx1 = -1;
      } else if (angle < 67.5) {
        dy0 = 1; dx0 = 1; dy1 = -1; dx1 = -1;
      } else if (angle < 112.5) {
        dy0 = 1; dx0 = 0; dy1 = -1; dx1 = 0;
      } else {
        dy0 = 1; dx0 = -1; dy1 = -1; dx1 = 1;
      }
      auto m = [&](int yy, int xx) {
        if (yy < 0 || yy >= h || xx < 0 || xx >= w) return 0.0;
        return mag[static_cast<size_t>(yy) * w + xx];
      };
      if (mag[i] >= m(y + dy0, x + dx0) && mag[i] >= m(y + dy1, x + dx1)) nms[i] = mag[i];
    }

  // Hysteresis: strong seeds, weak pixels kept only when 8-connected to strong.
  std::vector<uint8_t> state(lum.size(), 0);  // 0 none, 1 weak, 2 edge
  std::deque<std::pair<int, int>> queue;
  for (int y = 0; y < h; ++y)
    for (int x = 0; x < w; ++x) {
      const size_t i = static_cast<size_t>(y) * w + x;
      if (nms[i] >= p.high) {
        state[i] = 2;
        queue.emplace_back(y, x);
      } else if (nms[i] >= p.low) {
        state[i] = 1;
      }
    }
  while (!queue.empty()) {
    auto [y, x] = queue.front();
    queue.pop_front();
    for (int dy = -1; dy <= 1; ++dy)
      for (int dx = -1; dx <= 1; ++dx) {
        const int yy = y + dy, xx = x + dx;
        if (yy < 0 || yy >= h || xx < 0 || xx >= w) continue;
        const size_t j = static_cast<size_t>(yy) * w + xx;
        if (state[j] == 1) {
          state[j] = 2;
          queue.emplace_back(yy, xx);
        }
      }
  }

  Tensor out = Tensor::full({3, h, w}, -1.0);
  for (int y = 0; y < h; ++y)
    for (int x = 0; x < w; ++x)
      if (state[static_cast<size_t>(y) * w + x] == 2)
        for (int c = 0; c < 3; ++c) out.at3(c, y, x) = 1.0;
  return out;
}

int64_t edge_pixel_count(const Tensor& edge_target) {
  int64_t n = 0;
  const int h = edge_target.dim(1), w = edge_target.dim(2);
  for (int y = 0; y < h; ++y)
    for (int x = 0; x < w; ++x)
      if (edge_target.at3(0, y, x) > 0) ++n;
  return n;
}

}  // namespace edgegan
