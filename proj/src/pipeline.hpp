#pragma once

#include "core/config.hpp"

#include <nlohmann/json.hpp>

#include <string>

namespace edgegan {

/// High-level entry points behind the CLI verbs and the C API. All of them
/// read the same flat configuration; paths are directories unless noted.

/// Synthesizes the procedural dataset into `out_dir` (images, labels,
/// manifest.tsv). Returns the number of pairs written.
int pipeline_make_dataset(const Config& cfg, const std::string& out_dir);

/// Trains on `data_dir`/manifest.tsv for `train.max_steps` steps (or until
/// the epoch schedule completes), writing checkpoint.egc and log.csv into
/// `out_dir`. Resumes from an existing checkpoint in `out_dir` when present.
nlohmann::json pipeline_train(const Config& cfg, const std::string& data_dir,
                              const std::string& out_dir);

/// Generates images for every label map (*.pgm) in `labels_dir` using the
/// checkpoint; writes final images (and, with `generate.write_aux`, edge and
/// intermediate images) into `out_dir`.
nlohmann::json pipeline_generate(const Config& cfg, const std::string& checkpoint,
                                 const std::string& labels_dir, const std::string& out_dir);

/// Metric report comparing two image directories (*.ppm) under the fixed
/// extractor; optionally adds mIoU/Acc from externally produced prediction
/// label maps (`eval.gt_labels` and `eval.pred_labels` directories).
nlohmann::json pipeline_evaluate(const Config& cfg, const std::string& real_dir,
                                 const std::string& fake_dir);

/// Trains the four cumulative architecture variants for `ablate.steps` each
/// on the dataset in `data_dir` and reports the per-variant metrics.
nlohmann::json pipeline_ablate(const Config& cfg, const std::string& data_dir,
                               const std::string& out_dir);

/// Renders a qualitative figure grid for the first `figures.count` samples.
nlohmann::json pipeline_figures(const Config& cfg, const std::string& checkpoint,
                                const std::string& data_dir, const std::string& out_path);

/// Per-component parameter counts of the configured architecture.
nlohmann::json pipeline_params(const Config& cfg);

}  // namespace edgegan
