#include "data/dataset.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

namespace edgegan {

namespace {

// Fixed palette; class 0 (background) first. Distinct hues so the
// image<->label correspondence is recoverable per pixel.
constexpr uint8_t kPalette[][3] = {
    {40, 40, 48},    {200, 60, 60},  {60, 170, 60},  {70, 90, 210},
    {210, 190, 60},  {170, 60, 190}, {60, 190, 190}, {230, 140, 60},
    {120, 120, 120}, {90, 50, 30},   {180, 220, 240}, {20, 90, 70},
};
constexpr int kPaletteSize = static_cast<int>(sizeof(kPalette) / sizeof(kPalette[0]));

struct Box {
  int y0, x0, y1, x1;
  bool overlaps(const Box& o) const {
    return y0 < o.y1 && o.y0 < y1 && x0 < o.x1 && o.x0 < x1;
  }
};

}  // namespace

std::vector<double> ToyParams::effective_priors() const {
  std::vector<double> p = priors;
  if (p.empty()) p.assign(static_cast<size_t>(num_classes - 1), 0.08);
  require(static_cast<int>(p.size()) == num_classes - 1,
          "toy dataset: priors length must be num_classes-1");
  double sum = 0;
  for (double v : p) sum += v;
  require(sum < 0.8, "toy dataset: non-background priors must leave room for background");
  return p;
}

ToySample render_toy_sample(const ToyParams& p, int index) {
  require(p.num_classes >= 3, "toy dataset: need background + at least 2 shape classes");
  require(p.num_classes <= kPaletteSize, "toy dataset: palette exhausted");
  const auto priors = p.effective_priors();
  // Per-sample stream decoupled from neighbors so any subset replays exactly.
  Rng rng(p.seed * 0x9E3779B97F4A7C15ull + static_cast<uint64_t>(index) + 1);

  const int h = p.height, w = p.width;
  ToySample s;
  s.label.h = h;
  s.label.w = w;
  s.label.pixels.assign(static_cast<size_t>(h) * w, 0);
  s.image.h = h;
  s.image.w = w;
  s.image.pixels.resize(static_cast<size_t>(h) * w * 3);

  auto fill_color = [&](int cls, double shade, int y, int x) {
    for (int c = 0; c < 3; ++c) {
      const double v = std::clamp(kPalette[cls][c] * shade, 0.0, 255.0);
      s.image.at(y, x, c) = static_cast<uint8_t>(std::lround(v));
    }
  };

  const double bg_shade = 0.9 + 0.2 * rng.uniform();
  for (int y = 0; y < h; ++y)
    for (int x = 0; x < w; ++x) fill_color(0, bg_shade, y, x);

  std::vector<Box> used;
  for (int cls = 1; cls < p.num_classes; ++cls) {
    const double jitter = 0.9 + 0.2 * rng.uniform();  // area within ±10%
    const double area = priors[static_cast<size_t>(cls - 1)] * h * w * jitter;
    const int kind = static_cast<int>(rng.integer(0, 2));  // 0 rect, 1 ellipse, 2 stripe
    const double aspect = (kind == 2) ? 4.0 + 4.0 * rng.uniform() : 0.5 + 1.5 * rng.uniform();
    double bw, bh;
    if (kind == 1) {  // ellipse: pi*a*b = area
      const double b = std::sqrt(area / (M_PI * aspect));
      bh = 2.0 * b;
      bw = 2.0 * b * aspect;
    } else {
      bw = std::sqrt(area * aspect);
      bh = area / bw;
    }
    int ih = std::clamp(static_cast<int>(std::lround(bh)), 2, h - 2);
    int iw = std::clamp(static_cast<int>(std::lround(bw)), 2, w - 2);

    Box box{};
    bool placed = false;
    for (int attempt = 0; attempt < 40 && !placed; ++attempt) {
      box.y0 = static_cast<int>(rng.integer(1, h - 1 - ih));
      box.x0 = static_cast<int>(rng.integer(1, w - 1 - iw));
      box.y1 = box.y0 + ih;
      box.x1 = box.x0 + iw;
      placed = std::none_of(used.begin(), used.end(), [&](const Box& b) { return b.overlaps(box); });
    }
    used.push_back(box);

    const double shade = 0.85 + 0.3 * rng.uniform();
    const double cy = 0.5 * (box.y0 + box.y1), cx = 0.5 * (box.x0 + box.x1);
    for (int y = box.y0; y < box.y1; ++y)
      for (int x = box.x0; x < box.x1; ++x) {
        if (kind == 1) {
          const double ny = (y + 0.5 - cy) / (0.5 * ih);
          const double nx = (x + 0.5 - cx) / (0.5 * iw);
          if (ny * ny + nx * nx > 1.0) continue;
        }
        s.label.at(y, x) = static_cast<uint8_t>(cls);
        fill_color(cls, shade, y, x);
      }
  }
  return s;
}

DatasetManifest make_toy_dataset(const ToyParams& p, const std::string& dir) {
  require(p.count > 0, "toy dataset: count must be positive");
  namespace fs = std::filesystem;
  fs::create_directories(dir);
  DatasetManifest m;
  m.num_classes = p.num_classes;
  m.target_h = p.height;
  m.target_w = p.width;
  std::ofstream manifest(dir + "/manifest.tsv", std::ios::trunc);
  if (!manifest) throw std::runtime_error("toy dataset: cannot write manifest in " + dir);
  for (int i = 0; i < p.count; ++i) {
    ToySample s = render_toy_sample(p, i);
    char img[32], lab[32];
    std::snprintf(img, sizeof(img), "img_%05d.ppm", i);
    std::snprintf(lab, sizeof(lab), "lab_%05d.pgm", i);
    const std::string ip = dir + "/" + img, lp = dir + "/" + lab;
    write_ppm(ip, s.image);
    write_pgm(lp, s.label);
    manifest << ip << "\t" << lp << "\n";
    m.entries.emplace_back(ip, lp);
  }
  return m;
}

DatasetManifest load_manifest(const std::string& path, int num_classes, int target_h,
                              int target_w) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("manifest: cannot open " + path);
  DatasetManifest m;
  m.num_classes = num_classes;
  m.target_h = target_h;
  m.target_w = target_w;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto tab = line.find('\t');
    if (tab == std::string::npos) throw std::runtime_error("manifest: missing tab in " + path);
    std::string ip = line.substr(0, tab), lp = line.substr(tab + 1);
    if (!std::filesystem::exists(ip)) throw std::runtime_error("manifest: missing file " + ip);
    if (!std::filesystem::exists(lp)) throw std::runtime_error("manifest: missing file " + lp);
    m.entries.emplace_back(std::move(ip), std::move(lp));
  }
  return m;
}

std::vector<Sample> load_batch(const DatasetManifest& manifest, const std::vector<int>& indices,
                               const CannyParams& canny) {
  std::vector<Sample> out;
  out.reserve(indices.size());
  for (int idx : indices) {
    require(idx >= 0 && idx < static_cast<int>(manifest.entries.size()),
            "load_batch: index out of range");
    const auto& [ip, lp] = manifest.entries[static_cast<size_t>(idx)];
    Sample s;
    RgbBytes img = read_ppm(ip);
    GrayBytes lab = read_pgm(lp);
    lab = resize_nearest(lab, manifest.target_h, manifest.target_w);
    s.layout = encode_onehot(lab, manifest.num_classes);
    s.image = resize_bilinear(rgb_to_tensor(img), manifest.target_h, manifest.target_w);
    s.edge = extract_canny_edges(s.image, canny);
    out.push_back(std::move(s));
  }
  return out;
}

}  // namespace edgegan
