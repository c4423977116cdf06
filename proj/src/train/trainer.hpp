#pragma once

#include "core/config.hpp"
#include "data/dataset.hpp"
#include "model/discriminator.hpp"
#include "model/generator.hpp"
#include "model/perceptual.hpp"
#include "train/losses.hpp"

#include <functional>
#include <string>
#include <vector>

namespace edgegan {

struct TrainConfig {
  int epochs = 200;
  int decay_start_epoch = 100;
  int batch_size = 8;
  double beta1 = 0.0, beta2 = 0.999, adam_eps = 1e-8;
  double base_lr_g = 1e-4, base_lr_d = 4e-4;
  int power_iterations = 1;
  uint64_t seed = 0;

  static TrainConfig from(const Config& cfg);
};

/// Constant before decay_start_epoch, then linear to zero at `epochs`.
double lr_at_epoch(const TrainConfig& cfg, int epoch, double base_lr);

struct StepReport {
  LossReport gen;     // batch-averaged generator terms
  double disc = 0;    // batch-averaged discriminator objective value
  double lr_g = 0, lr_d = 0;
  int64_t step = 0;
  int epoch = 0;
};

/// Tensors produced by an inference pass (no gradients).
struct GeneratedImages {
  Tensor edge;          // empty when no edge branch
  Tensor intermediate;
  Tensor final_image;
};

/// Alternating adversarial optimization: one generator update with the
/// discriminator frozen, then one discriminator update with the generator
/// frozen, exactly as configured by the schedule.
class Trainer {
 public:
  explicit Trainer(const Config& cfg);

  /// One generator update then one discriminator update. Either phase can be
  /// skipped, which leaves the other network completely untouched.
  StepReport train_step(const std::vector<Sample>& batch, bool update_g = true,
                        bool update_d = true);

  /// Runs `max_steps` steps over the manifest with per-epoch shuffling and
  /// an optional append-only CSV log (step,epoch,lr,adv,fm,perc,total).
  void run(const DatasetManifest& manifest, int64_t max_steps, const std::string& log_path = "",
           const std::function<void(const StepReport&)>& on_step = nullptr);

  GeneratedImages generate(const Tensor& layout) const;

  void save_checkpoint(const std::string& path) const;
  void load_checkpoint(const std::string& path);

  int64_t iteration() const { return iteration_; }
  int epoch() const { return epoch_; }
  void set_epoch(int e) { epoch_ = e; }

  Generator& generator() { return gen_; }
  const Generator& generator() const { return gen_; }
  ParamStore& gen_params() { return gp_; }
  ParamStore& disc_params() { return dp_; }
  const Discriminator& discriminator() const { return disc_; }
  const PerceptualExtractor& perceptual() const { return perc_; }
  const LossWeights& loss_weights() const { return weights_; }
  const TrainConfig& train_config() const { return tcfg_; }
  int steps_per_epoch() const { return steps_per_epoch_; }
  void set_steps_per_epoch(int s) { steps_per_epoch_ = s; }

 private:
  struct DiscPass {
    std::vector<Tensor> features;  // detached copies
    std::vector<Tensor> scores;    // probability maps (values only)
  };
  DiscPass disc_eval(const Tensor& layout, const Tensor& candidate) const;

  Config cfg_;
  TrainConfig tcfg_;
  LossWeights weights_;
  ParamStore gp_, dp_;
  Generator gen_;
  Discriminator disc_;
  PerceptualExtractor perc_;
  Rng power_rng_;
  int64_t iteration_ = 0;
  int64_t g_updates_ = 0, d_updates_ = 0;
  int epoch_ = 0;
  int steps_per_epoch_ = 1;
};

}  // namespace edgegan
