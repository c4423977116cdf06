#include "nn/params.hpp"

#include "core/archive.hpp"

#include <cmath>

namespace edgegan {

namespace {
using CRowMap =
    Eigen::Map<const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>>;
}

int ParamStore::add(std::string name, Tensor value, bool spectral) {
  Param p;
  p.name = std::move(name);
  p.m = Tensor(value.shape);
  p.v = Tensor(value.shape);
  p.spectral = spectral;
  if (spectral) {
    p.rows = value.dim(0);
    p.cols = static_cast<int>(value.size() / value.dim(0));
    p.u = Eigen::VectorXd::Zero(p.rows);
    p.sv = Eigen::VectorXd::Zero(p.cols);
  }
  p.value = std::move(value);
  params_.push_back(std::move(p));
  return static_cast<int>(params_.size()) - 1;
}

int64_t ParamStore::num_scalars(const std::string& prefix) const {
  int64_t n = 0;
  for (const auto& p : params_)
    if (p.name.rfind(prefix, 0) == 0) n += p.value.size();
  return n;
}

void ParamStore::power_iterate(int iters, Rng& rng) {
  for (auto& p : params_) {
    if (!p.spectral) continue;
    if (p.u.norm() < 0.5) {  // first use: random unit start
      for (int i = 0; i < p.rows; ++i) p.u[i] = rng.normal();
      p.u.normalize();
    }
    CRowMap w(p.value.data.data(), p.rows, p.cols);
    for (int it = 0; it < iters; ++it) {
      Eigen::VectorXd v = w.transpose() * p.u;
      const double vn = v.norm();
      if (vn < 1e-20) break;
      p.sv = v / vn;
      Eigen::VectorXd u = w * p.sv;
      const double un = u.norm();
      if (un < 1e-20) break;
      p.u = u / un;
    }
  }
}

void ParamStore::calibrate_spectral(int iters, Rng& rng) {
  power_iterate(iters, rng);
  for (auto& p : params_) {
    if (!p.spectral) continue;
    CRowMap w(p.value.data.data(), p.rows, p.cols);
    const double sigma = p.u.dot(w * p.sv);
    if (std::abs(sigma) > 1e-12) p.value.data /= sigma;
  }
}

void ParamStore::adam_step(const std::vector<Tensor>& grads, double lr, double beta1, double beta2,
                           double eps, int64_t t) {
  require(grads.size() == params_.size(), "adam_step: gradient count mismatch");
  const double bc1 = 1.0 - std::pow(beta1, static_cast<double>(t));
  const double bc2 = 1.0 - std::pow(beta2, static_cast<double>(t));
  for (size_t i = 0; i < params_.size(); ++i) {
    auto& p = params_[i];
    const auto& g = grads[i].data;
    p.m.data = beta1 * p.m.data + (1.0 - beta1) * g;
    p.v.data = beta2 * p.v.data + (1.0 - beta2) * g.square();
    p.value.data -= lr * (p.m.data / bc1) / ((p.v.data / bc2).sqrt() + eps);
  }
}

uint64_t ParamStore::checksum() const {
  uint64_t h = 1469598103934665603ull;
  for (const auto& p : params_) {
    const uint64_t ph = fnv1a(p.value.data.data(), static_cast<size_t>(p.value.size()) * sizeof(double));
    h ^= ph;
    h *= 1099511628211ull;
  }
  return h;
}

Bound bind(Tape& tape, const ParamStore& store) {
  Bound b;
  b.tape = &tape;
  b.store = &store;
  b.node.reserve(static_cast<size_t>(store.count()));
  for (int i = 0; i < store.count(); ++i) b.node.push_back(tape.leaf(store.param(i).value));
  return b;
}

std::vector<Tensor> collect_grads(const Tape& tape, const Bound& bound) {
  std::vector<Tensor> out;
  out.reserve(bound.node.size());
  for (int id : bound.node) out.push_back(tape.grad(id));
  return out;
}

void accumulate_grads(std::vector<Tensor>& acc, const std::vector<Tensor>& g, double scale) {
  if (acc.empty()) {
    acc.resize(g.size());
    for (size_t i = 0; i < g.size(); ++i) acc[i] = Tensor(g[i].shape);
  }
  for (size_t i = 0; i < g.size(); ++i) acc[i].data += g[i].data * scale;
}

}  // namespace edgegan
