#include "eval/report.hpp"

#include "data/image_io.hpp"
#include "eval/metrics.hpp"

#include <algorithm>
#include <cmath>

namespace edgegan {

ParamBreakdown count_parameters(const ParamStore& gen, const ParamStore& disc) {
  ParamBreakdown p;
  p.encoder = gen.num_scalars("enc.");
  p.edge_branch = gen.num_scalars("edge.");
  p.image_branch = gen.num_scalars("img.");
  p.enhance = gen.num_scalars("gs.");
  p.transfer = 0;  // the gating transfer has no weights
  p.generator_total = p.encoder + p.edge_branch + p.image_branch + p.transfer + p.enhance;
  p.discriminator_total = disc.num_scalars("");
  return p;
}

FidReport fid_between_sets(const PerceptualExtractor& extractor,
                           const std::vector<Tensor>& real_images,
                           const std::vector<Tensor>& fake_images) {
  std::vector<Eigen::VectorXd> rf, ff;
  for (const auto& t : real_images) rf.push_back(extractor.pooled_feature(t));
  for (const auto& t : fake_images) ff.push_back(extractor.pooled_feature(t));
  FidReport r;
  r.value = fid(GaussianStats::fit(rf), GaussianStats::fit(ff));
  r.real_samples = static_cast<int64_t>(rf.size());
  r.fake_samples = static_cast<int64_t>(ff.size());
  r.feature_dim = extractor.feature_dim();
  return r;
}

void class_color(int cls, uint8_t rgb[3]) {
  // Deterministic palette: fixed table for low indices, hashed hues beyond.
  static constexpr uint8_t table[][3] = {
      {64, 64, 72},   {220, 70, 70},  {70, 190, 70},  {80, 100, 230},
      {230, 210, 70}, {190, 70, 210}, {70, 210, 210}, {245, 150, 70},
  };
  constexpr int n = static_cast<int>(sizeof(table) / sizeof(table[0]));
  if (cls < n) {
    rgb[0] = table[cls][0];
    rgb[1] = table[cls][1];
    rgb[2] = table[cls][2];
    return;
  }
  uint32_t h = static_cast<uint32_t>(cls) * 2654435761u;
  rgb[0] = static_cast<uint8_t>(64 + (h & 0x7F));
  rgb[1] = static_cast<uint8_t>(64 + ((h >> 8) & 0x7F));
  rgb[2] = static_cast<uint8_t>(64 + ((h >> 16) & 0x7F));
}

namespace {

void blit(RgbBytes& canvas, const RgbBytes& tile, int row, int col, int tile_h, int tile_w) {
  for (int y = 0; y < tile_h; ++y)
    for (int x = 0; x < tile_w; ++x)
      for (int c = 0; c < 3; ++c)
        canvas.at(row * tile_h + y, col * tile_w + x, c) = tile.at(y, x, c);
}

RgbBytes colorize_layout(const SemanticLayout& layout) {
  GrayBytes idx = decode_onehot(layout);
  RgbBytes out;
  out.h = idx.h;
  out.w = idx.w;
  out.pixels.resize(static_cast<size_t>(idx.h) * idx.w * 3);
  for (int y = 0; y < idx.h; ++y)
    for (int x = 0; x < idx.w; ++x) {
      uint8_t rgb[3];
      class_color(idx.at(y, x), rgb);
      for (int c = 0; c < 3; ++c) out.at(y, x, c) = rgb[c];
    }
  return out;
}

RgbBytes heatmap(const Tensor& edge_map) {
  // Attention = Sigmoid over the edge map, averaged across channels.
  RgbBytes out;
  out.h = edge_map.dim(1);
  out.w = edge_map.dim(2);
  out.pixels.resize(static_cast<size_t>(out.h) * out.w * 3);
  for (int y = 0; y < out.h; ++y)
    for (int x = 0; x < out.w; ++x) {
      double a = 0;
      for (int c = 0; c < 3; ++c) a += 1.0 / (1.0 + std::exp(-edge_map.at3(c, y, x)));
      a /= 3.0;
      const auto v = static_cast<uint8_t>(std::lround(std::clamp(a, 0.0, 1.0) * 255.0));
      out.at(y, x, 0) = v;
      out.at(y, x, 1) = static_cast<uint8_t>(v / 4);
      out.at(y, x, 2) = static_cast<uint8_t>(255 - v);
    }
  return out;
}

}  // namespace

void emit_figure_grid(const std::vector<FigureSample>& samples, const std::string& path) {
  require(!samples.empty(), "figure grid: no samples");
  const int th = samples[0].ground_truth.dim(1);
  const int tw = samples[0].ground_truth.dim(2);
  const int cols = 6;
  RgbBytes canvas;
  canvas.h = th * static_cast<int>(samples.size());
  canvas.w = tw * cols;
  canvas.pixels.assign(static_cast<size_t>(canvas.h) * canvas.w * 3, 0);
  for (size_t i = 0; i < samples.size(); ++i) {
    const auto& s = samples[i];
    const int row = static_cast<int>(i);
    blit(canvas, colorize_layout(s.layout), row, 0, th, tw);
    blit(canvas, tensor_to_rgb(s.edge), row, 1, th, tw);
    blit(canvas, heatmap(s.edge), row, 2, th, tw);
    blit(canvas, tensor_to_rgb(s.intermediate), row, 3, th, tw);
    blit(canvas, tensor_to_rgb(s.final_image), row, 4, th, tw);
    blit(canvas, tensor_to_rgb(s.ground_truth), row, 5, th, tw);
  }
  write_ppm(path, canvas);
}

nlohmann::json to_json(const ParamBreakdown& p) {
  return {{"encoder", p.encoder},
          {"edge_branch", p.edge_branch},
          {"image_branch", p.image_branch},
          {"transfer", p.transfer},
          {"semantic_preserving", p.enhance},
          {"generator_total", p.generator_total},
          {"discriminator_total", p.discriminator_total}};
}

nlohmann::json to_json(const FidReport& f) {
  return {{"fid", f.value},
          {"real_samples", f.real_samples},
          {"fake_samples", f.fake_samples},
          {"feature_dim", f.feature_dim}};
}

}  // namespace edgegan
