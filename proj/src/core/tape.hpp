#pragma once

#include "core/tensor.hpp"

#include <Eigen/Core>

#include <functional>
#include <memory>
#include <vector>

namespace edgegan {

/// Reverse-mode autodiff tape. Values are computed eagerly; each op records
/// a closure that scatters the output gradient back to its inputs.
///
/// With grad_enabled=false the tape degenerates into a plain forward
/// evaluator (no closures, no grad buffers) — used for detached generator
/// passes during the discriminator phase and for inference.
class Tape {
 public:
  explicit Tape(bool grad_enabled = true) : grad_(grad_enabled) {}
  Tape(const Tape&) = delete;
  Tape& operator=(const Tape&) = delete;

  bool grad_enabled() const { return grad_; }

  int leaf(Tensor t);
  const Tensor& value(int id) const { return nodes_[static_cast<size_t>(id)].value; }
  const Tensor& grad(int id) const { return nodes_[static_cast<size_t>(id)].grad; }

  /// Seeds d(root)/d(root)=1 and runs all recorded closures in reverse order.
  /// root must be a scalar node.
  void backward(int root);

  // ---- elementwise ----
  int add(int a, int b);
  int sub(int a, int b);
  int mul(int a, int b);
  int scale(int a, double s);
  int add_scalar(int a, double s);
  int rsub_scalar(double s, int a);  // s - x
  int sigmoid(int a);
  int tanh_(int a);
  int leaky_relu(int a, double slope);
  int log_clamped(int a, double eps);  // log(clamp(x, eps, 1-eps))

  // ---- reductions / scalars ----
  int mean_all(int a);                 // scalar mean over all elements
  int l1_diff_mean(int a, int b);      // mean |a-b|
  int weighted_sum(const std::vector<int>& scalars, const std::vector<double>& w);

  // ---- structure ----
  int concat_channels(const std::vector<int>& xs);  // CHW tensors, same H,W
  int detach(int a);                                // cuts the graph
  int global_avg_pool(int a);                       // {C,H,W} -> {C}
  int channel_affine(int x, int g);                 // y[c,:,:] = x*(g[c]) + x
  int instance_norm(int x, double eps = 1e-5);      // per-channel (x-mu)/sqrt(var+eps)
  int upsample_nearest2(int x);
  int downsample_avg2(int x);

  // ---- conv ----
  /// x {I,H,W}, w {O,I,k,k}, b {O}; padding (k-1)/2.
  int conv2d(int x, int w, int b, int stride);

  /// Divides w by the power-iteration singular value estimate sigma = u^T W v.
  /// u, v are treated as constants; the division itself is differentiated.
  int spectral_scale(int w, const Eigen::VectorXd& u, const Eigen::VectorXd& v);

  size_t num_nodes() const { return nodes_.size(); }

 private:
  struct Node {
    Tensor value;
    Tensor grad;
    std::function<void()> back;  // empty for leaves / grad-disabled
  };

  int push(Tensor value, std::function<void()> back);
  Tensor& grad_mut(int id) { return nodes_[static_cast<size_t>(id)].grad; }

  std::vector<Node> nodes_;
  bool grad_;
};

}  // namespace edgegan
