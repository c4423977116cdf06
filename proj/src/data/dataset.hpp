#pragma once

#include "core/rng.hpp"
#include "data/canny.hpp"
#include "data/image_io.hpp"
#include "data/onehot.hpp"

#include <string>
#include <utility>
#include <vector>

namespace edgegan {

struct ToyParams {
  uint64_t seed = 0;
  int count = 16;
  int num_classes = 4;  // background + >= 2 shape classes
  int height = 64, width = 64;
  /// Target area fraction for each non-background class (background takes
  /// the remainder). Empty = uniform default of 0.08 per class.
  std::vector<double> priors;

  std::vector<double> effective_priors() const;
};

struct ToySample {
  RgbBytes image;
  GrayBytes label;
};

/// Renders one procedural scene of flat-colored rectangles/ellipses/stripes
/// with exact per-pixel labels. Pure function of (params, index).
ToySample render_toy_sample(const ToyParams& p, int index);

struct DatasetManifest {
  std::vector<std::pair<std::string, std::string>> entries;  // (image_path, label_path)
  int num_classes = 0;
  int target_h = 0, target_w = 0;
};

/// Writes `count` toy pairs plus a manifest.tsv into `dir` and returns the
/// manifest. Bit-identical for identical (seed, count, classes, size).
DatasetManifest make_toy_dataset(const ToyParams& p, const std::string& dir);

/// Loads a tab-separated manifest, verifying every path exists.
DatasetManifest load_manifest(const std::string& path, int num_classes, int target_h, int target_w);

struct Sample {
  SemanticLayout layout;
  Tensor image;  // 3×H×W in [-1,1]
  Tensor edge;   // 3×H×W in {-1,+1}, recomputed on the resized image
};

/// Reads, resizes (nearest for labels, bilinear for images) and derives edge
/// targets. Pure function of (manifest, indices, canny params).
std::vector<Sample> load_batch(const DatasetManifest& manifest, const std::vector<int>& indices,
                               const CannyParams& canny);

}  // namespace edgegan
