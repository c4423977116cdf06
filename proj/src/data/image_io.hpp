#pragma once

#include "core/tensor.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace edgegan {

/// 8-bit RGB image in HWC order (binary PPM on disk).
struct RgbBytes {
  int h = 0, w = 0;
  std::vector<uint8_t> pixels;  // h*w*3

  uint8_t& at(int y, int x, int c) { return pixels[(static_cast<size_t>(y) * w + x) * 3 + c]; }
  uint8_t at(int y, int x, int c) const { return pixels[(static_cast<size_t>(y) * w + x) * 3 + c]; }
};

/// 8-bit single-channel map (binary PGM on disk); used for label index images.
struct GrayBytes {
  int h = 0, w = 0;
  std::vector<uint8_t> pixels;  // h*w

  uint8_t& at(int y, int x) { return pixels[static_cast<size_t>(y) * w + x]; }
  uint8_t at(int y, int x) const { return pixels[static_cast<size_t>(y) * w + x]; }
};

void write_ppm(const std::string& path, const RgbBytes& img);
RgbBytes read_ppm(const std::string& path);
void write_pgm(const std::string& path, const GrayBytes& img);
GrayBytes read_pgm(const std::string& path);

/// [-1,1] 3×H×W tensor -> bytes (rounded, clamped).
RgbBytes tensor_to_rgb(const Tensor& t);
/// bytes -> [-1,1] 3×H×W tensor.
Tensor rgb_to_tensor(const RgbBytes& img);

/// Bilinear resize of a 3×H×W tensor.
Tensor resize_bilinear(const Tensor& img, int out_h, int out_w);
/// Nearest-neighbor resize of an integer index map.
GrayBytes resize_nearest(const GrayBytes& m, int out_h, int out_w);

}  // namespace edgegan
