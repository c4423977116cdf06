#include "data/image_io.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <stdexcept>

namespace edgegan {

namespace {

void write_pnm(const std::string& path, const char* magic, int w, int h,
               const std::vector<uint8_t>& pixels) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("image: cannot write " + path);
  out << magic << "\n" << w << " " << h << "\n255\n";
  out.write(reinterpret_cast<const char*>(pixels.data()),
            static_cast<std::streamsize>(pixels.size()));
  if (!out) throw std::runtime_error("image: write failed for " + path);
}

void read_pnm_header(std::ifstream& in, const std::string& path, const std::string& want_magic,
                     int& w, int& h) {
  std::string magic;
  in >> magic;
  if (magic != want_magic) throw std::runtime_error("image: bad format in " + path);
  int maxval = 0;
  in >> w >> h >> maxval;
  if (!in || w <= 0 || h <= 0 || maxval != 255)
    throw std::runtime_error("image: bad header in " + path);
  in.get();  // single whitespace before payload
}

}  // namespace

void write_ppm(const std::string& path, const RgbBytes& img) {
  write_pnm(path, "P6", img.w, img.h, img.pixels);
}

RgbBytes read_ppm(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("image: cannot open " + path);
  RgbBytes img;
  read_pnm_header(in, path, "P6", img.w, img.h);
  img.pixels.resize(static_cast<size_t>(img.w) * img.h * 3);
  in.read(reinterpret_cast<char*>(img.pixels.data()),
          static_cast<std::streamsize>(img.pixels.size()));
  if (!in) throw std::runtime_error("image: truncated payload in " + path);
  return img;
}

void write_pgm(const std::string& path, const GrayBytes& img) {
  write_pnm(path, "P5", img.w, img.h, img.pixels);
}

GrayBytes read_pgm(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("image: cannot open " + path);
  GrayBytes img;
  read_pnm_header(in, path, "P5", img.w, img.h);
  img.pixels.resize(static_cast<size_t>(img.w) * img.h);
  in.read(reinterpret_cast<char*>(img.pixels.data()),
          static_cast<std::streamsize>(img.pixels.size()));
  if (!in) throw std::runtime_error("image: truncated payload in " + path);
  return img;
}

RgbBytes tensor_to_rgb(const Tensor& t) {
  require(t.rank() == 3 && t.dim(0) == 3, "tensor_to_rgb: expected 3×H×W");
  RgbBytes img;
  img.h = t.dim(1);
  img.w = t.dim(2);
  img.pixels.resize(static_cast<size_t>(img.h) * img.w * 3);
  for (int y = 0; y < img.h; ++y)
    for (int x = 0; x < img.w; ++x)
      for (int c = 0; c < 3; ++c) {
        const double v = std::clamp((t.at3(c, y, x) + 1.0) * 127.5, 0.0, 255.0);
        img.at(y, x, c) = static_cast<uint8_t>(std::lround(v));
      }
  return img;
}

Tensor rgb_to_tensor(const RgbBytes& img) {
  Tensor t({3, img.h, img.w});
  for (int y = 0; y < img.h; ++y)
    for (int x = 0; x < img.w; ++x)
      for (int c = 0; c < 3; ++c) t.at3(c, y, x) = img.at(y, x, c) / 127.5 - 1.0;
  return t;
}

Tensor resize_bilinear(const Tensor& img, int out_h, int out_w) {
  require(img.rank() == 3, "resize_bilinear: expected CHW");
  const int c = img.dim(0), h = img.dim(1), w = img.dim(2);
  if (h == out_h && w == out_w) return img;
  Tensor out({c, out_h, out_w});
  const double sy = static_cast<double>(h) / out_h;
  const double sx = static_cast<double>(w) / out_w;
  for (int y = 0; y < out_h; ++y) {
    const double fy = std::max(0.0, (y + 0.5) * sy - 0.5);
    const int y0 = std::min(static_cast<int>(fy), h - 1);
    const int y1 = std::min(y0 + 1, h - 1);
    const double wy = fy - y0;
    for (int x = 0; x < out_w; ++x) {
      const double fx = std::max(0.0, (x + 0.5) * sx - 0.5);
      const int x0 = std::min(static_cast<int>(fx), w - 1);
      const int x1 = std::min(x0 + 1, w - 1);
      const double wx = fx - x0;
      for (int ci = 0; ci < c; ++ci) {
        const double top = img.at3(ci, y0, x0) * (1 - wx) + img.at3(ci, y0, x1) * wx;
        const double bot = img.at3(ci, y1, x0) * (1 - wx) + img.at3(ci, y1, x1) * wx;
        out.at3(ci, y, x) = top * (1 - wy) + bot * wy;
      }
    }
  }
  return out;
}

GrayBytes resize_nearest(const GrayBytes& m, int out_h, int out_w) {
  if (m.h == out_h && m.w == out_w) return m;
  GrayBytes out;
  out.h = out_h;
  out.w = out_w;
  out.pixels.resize(static_cast<size_t>(out_h) * out_w);
  for (int y = 0; y < out_h; ++y) {
    const int sy = std::min(static_cast<int>((y + 0.5) * m.h / out_h), m.h - 1);
    for (int x = 0; x < out_w; ++x) {
      const int sx = std::min(static_cast<int>((x + 0.5) * m.w / out_w), m.w - 1);
      out.at(y, x) = m.at(sy, sx);
    }
  }
  return out;
}

}  // namespace edgegan
