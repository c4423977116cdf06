#pragma once

#include <Eigen/Core>

#include <cstdint>
#include <vector>

namespace edgegan {

/// Gaussian summary of a feature distribution (mean + covariance, ddof=1).
struct GaussianStats {
  Eigen::VectorXd mean;
  Eigen::MatrixXd covariance;
  int64_t sample_count = 0;
  bool sample_count_warning = false;  // set when sample_count < dimension

  static GaussianStats fit(const std::vector<Eigen::VectorXd>& features);
};

/// Fréchet distance between two Gaussians:
///   ||mu1-mu2||^2 + Tr(C1 + C2 - 2 (C1 C2)^{1/2})
/// The matrix square root comes from the eigen-decomposition of the
/// symmetrized product; small negative eigenvalues (> -1e-8) are clipped.
double fid(const GaussianStats& real, const GaussianStats& fake);

/// N×N confusion counts; rows = ground truth, columns = prediction.
struct ConfusionMatrix {
  Eigen::Matrix<int64_t, Eigen::Dynamic, Eigen::Dynamic> counts;

  explicit ConfusionMatrix(int num_classes);
  void add(int truth, int prediction, int64_t n = 1);
  void merge(const ConfusionMatrix& other);
  int64_t total() const { return counts.sum(); }
};

/// Mean IoU (classes absent from both GT and prediction excluded) and
/// overall pixel accuracy.
std::pair<double, double> miou_acc(const ConfusionMatrix& confusion);

}  // namespace edgegan
