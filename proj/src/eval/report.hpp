#pragma once

#include "data/onehot.hpp"
#include "model/perceptual.hpp"
#include "nn/params.hpp"
#include "train/trainer.hpp"

#include <nlohmann/json.hpp>

#include <string>
#include <vector>

namespace edgegan {

/// Parameter totals per component; the transfer module is parameter-free by
/// construction and always reports zero.
struct ParamBreakdown {
  int64_t encoder = 0, edge_branch = 0, image_branch = 0, transfer = 0, enhance = 0;
  int64_t generator_total = 0;
  int64_t discriminator_total = 0;
};

ParamBreakdown count_parameters(const ParamStore& gen, const ParamStore& disc);

/// Toy-scale distribution distance: pooled extractor features of two image
/// sets, Gaussian fit, Fréchet distance. Comparable only under a fixed
/// extractor; the report records the sample counts used.
struct FidReport {
  double value = 0;
  int64_t real_samples = 0, fake_samples = 0;
  int feature_dim = 0;
};

FidReport fid_between_sets(const PerceptualExtractor& extractor,
                           const std::vector<Tensor>& real_images,
                           const std::vector<Tensor>& fake_images);

/// One row per sample: [label color map | edge | attention | I' | I'' | GT],
/// tiled into a single deterministic image with a fixed class palette.
struct FigureSample {
  SemanticLayout layout;
  Tensor edge;          // I_e'
  Tensor intermediate;  // I'
  Tensor final_image;   // I''
  Tensor ground_truth;
};

void emit_figure_grid(const std::vector<FigureSample>& samples, const std::string& path);

/// Fixed per-class color used everywhere labels are visualized.
void class_color(int cls, uint8_t rgb[3]);

nlohmann::json to_json(const ParamBreakdown& p);
nlohmann::json to_json(const FidReport& f);

}  // namespace edgegan
