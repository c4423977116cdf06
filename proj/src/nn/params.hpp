#pragma once

#include "core/rng.hpp"
#include "core/tape.hpp"
#include "core/tensor.hpp"

#include <Eigen/Core>

#include <string>
#include <vector>

namespace edgegan {

/// One learnable tensor plus its Adam moments and, for spectrally
/// normalized weights, the power-iteration singular vector estimates.
struct Param {
  std::string name;
  Tensor value;
  Tensor m;  // first Adam moment
  Tensor v;  // second Adam moment
  bool spectral = false;
  int rows = 0, cols = 0;  // matricized view for spectral norm
  Eigen::VectorXd u, sv;   // left/right singular vector estimates, unit norm
};

/// Owns all parameters of one network. Modules register parameters at
/// construction and refer to them by index afterwards.
class ParamStore {
 public:
  int add(std::string name, Tensor value, bool spectral = false);

  Param& param(int id) { return params_[static_cast<size_t>(id)]; }
  const Param& param(int id) const { return params_[static_cast<size_t>(id)]; }
  int count() const { return static_cast<int>(params_.size()); }

  int64_t num_scalars(const std::string& prefix = "") const;

  /// Advances every spectral parameter's (u, v) by `iters` power iterations.
  void power_iterate(int iters, Rng& rng);

  /// In-place calibration: runs `iters` power iterations and divides each
  /// spectral weight by its estimated largest singular value.
  void calibrate_spectral(int iters, Rng& rng);

  /// Adam with bias correction; t is the 1-based step counter after this call.
  void adam_step(const std::vector<Tensor>& grads, double lr, double beta1, double beta2,
                 double eps, int64_t t);

  /// FNV hash over all parameter bytes — cheap change detector.
  uint64_t checksum() const;

 private:
  std::vector<Param> params_;
};

/// Binds every parameter of a store as a leaf on `tape`; node ids align with
/// parameter indices. Spectral weights are bound raw — the per-layer
/// normalization happens in the module forward via Tape::spectral_scale.
struct Bound {
  Tape* tape = nullptr;
  const ParamStore* store = nullptr;
  std::vector<int> node;
};

Bound bind(Tape& tape, const ParamStore& store);

/// Collects d(loss)/d(param) for every parameter after tape.backward().
std::vector<Tensor> collect_grads(const Tape& tape, const Bound& bound);

/// grads[i] += other[i] * scale (allocating on first use).
void accumulate_grads(std::vector<Tensor>& acc, const std::vector<Tensor>& g, double scale);

}  // namespace edgegan
