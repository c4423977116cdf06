#include "eval/metrics.hpp"

#include <Eigen/Eigenvalues>

#include <cmath>
#include <stdexcept>
#include <string>

namespace edgegan {

GaussianStats GaussianStats::fit(const std::vector<Eigen::VectorXd>& features) {
  if (features.empty()) throw std::invalid_argument("GaussianStats: no samples");
  const auto n = static_cast<int64_t>(features.size());
  const auto d = features.front().size();
  GaussianStats s;
  s.sample_count = n;
  s.sample_count_warning = n < d;
  s.mean = Eigen::VectorXd::Zero(d);
  for (const auto& f : features) s.mean += f;
  s.mean /= static_cast<double>(n);
  s.covariance = Eigen::MatrixXd::Zero(d, d);
  if (n > 1) {
    for (const auto& f : features) {
      Eigen::VectorXd c = f - s.mean;
      s.covariance += c * c.transpose();
    }
    s.covariance /= static_cast<double>(n - 1);
  }
  return s;
}

namespace {

// PSD square root with clipping of small negative eigenvalues.
Eigen::MatrixXd psd_sqrt(const Eigen::MatrixXd& m, const char* what) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(0.5 * (m + m.transpose()));
  Eigen::VectorXd ev = es.eigenvalues();
  const double tol = 1e-8 * std::max(1.0, ev.cwiseAbs().maxCoeff());
  for (Eigen::Index i = 0; i < ev.size(); ++i) {
    if (ev[i] < -tol)
      throw std::runtime_error(std::string("fid: matrix not PSD (") + what +
                               "), smallest eigenvalue " + std::to_string(ev[i]));
    ev[i] = std::sqrt(std::max(ev[i], 0.0));
  }
  return es.eigenvectors() * ev.asDiagonal() * es.eigenvectors().transpose();
}

}  // namespace

double fid(const GaussianStats& real, const GaussianStats& fake) {
  if (real.mean.size() != fake.mean.size())
    throw std::invalid_argument("fid: feature dimension mismatch");
  const Eigen::VectorXd dmu = real.mean - fake.mean;
  const Eigen::MatrixXd a = psd_sqrt(real.covariance, "real covariance");
  // Tr((C1 C2)^{1/2}) = Tr((C1^{1/2} C2 C1^{1/2})^{1/2}); the inner form is symmetric.
  const Eigen::MatrixXd inner = a * fake.covariance * a;
  const double tr_sqrt = psd_sqrt(inner, "cross term").trace();
  return dmu.squaredNorm() + real.covariance.trace() + fake.covariance.trace() - 2.0 * tr_sqrt;
}

ConfusionMatrix::ConfusionMatrix(int num_classes) {
  if (num_classes < 1) throw std::invalid_argument("ConfusionMatrix: need >= 1 class");
  counts = Eigen::Matrix<int64_t, Eigen::Dynamic, Eigen::Dynamic>::Zero(num_classes, num_classes);
}

void ConfusionMatrix::add(int truth, int prediction, int64_t n) {
  if (truth < 0 || truth >= counts.rows() || prediction < 0 || prediction >= counts.cols())
    throw std::invalid_argument("ConfusionMatrix: class index out of range");
  counts(truth, prediction) += n;
}

void ConfusionMatrix::merge(const ConfusionMatrix& other) { counts += other.counts; }

std::pair<double, double> miou_acc(const ConfusionMatrix& confusion) {
  const auto& m = confusion.counts;
  const int n = static_cast<int>(m.rows());
  double iou_sum = 0;
  int present = 0;
  int64_t diag = 0;
  for (int k = 0; k < n; ++k) {
    const int64_t tp = m(k, k);
    const int64_t fn = m.row(k).sum() - tp;
    const int64_t fp = m.col(k).sum() - tp;
    diag += tp;
    if (tp + fn + fp == 0) continue;  // absent from both GT and prediction
    iou_sum += static_cast<double>(tp) / static_cast<double>(tp + fn + fp);
    ++present;
  }
  const double miou = present > 0 ? iou_sum / present : 0.0;
  const int64_t total = m.sum();
  const double acc = total > 0 ? static_cast<double>(diag) / static_cast<double>(total) : 0.0;
  return {miou, acc};
}

}  // namespace edgegan
