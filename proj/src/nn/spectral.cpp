#include "nn/spectral.hpp"

#include <cmath>

namespace edgegan {

SpectralResult spectral_normalize(const Tensor& weight, int power_iterations, Rng& rng) {
  const int rows = weight.dim(0);
  const int cols = static_cast<int>(weight.size() / rows);
  Eigen::Map<const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>> w(
      weight.data.data(), rows, cols);

  SpectralResult r;
  if (weight.data.abs().maxCoeff() < 1e-300) {
    r.weight = weight;
    r.degenerate = true;
    return r;
  }

  Eigen::VectorXd u(rows);
  for (int i = 0; i < rows; ++i) u[i] = rng.normal();
  u.normalize();
  Eigen::VectorXd v;
  for (int it = 0; it < power_iterations; ++it) {
    v = (w.transpose() * u).normalized();
    u = (w * v).normalized();
  }
  r.sigma = u.dot(w * v);
  if (std::abs(r.sigma) < 1e-12) {
    r.weight = weight;
    r.degenerate = true;
    return r;
  }
  r.weight = Tensor(weight.shape, weight.data / r.sigma);
  return r;
}

}  // namespace edgegan
