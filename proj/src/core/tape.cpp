#include "core/tape.hpp"

#include <cmath>

namespace edgegan {

namespace {
using RowMat = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using RowMap = Eigen::Map<RowMat>;
using CRowMap = Eigen::Map<const RowMat>;
}  // namespace

int Tape::push(Tensor value, std::function<void()> back) {
  Node n;
  n.value = std::move(value);
  if (grad_) {
    n.grad = Tensor(n.value.shape);
    n.back = std::move(back);
  }
  nodes_.push_back(std::move(n));
  return static_cast<int>(nodes_.size()) - 1;
}

int Tape::leaf(Tensor t) { return push(std::move(t), {}); }

void Tape::backward(int root) {
  require(grad_, "Tape::backward on a grad-disabled tape");
  require(value(root).size() == 1, "Tape::backward: root must be scalar");
  grad_mut(root).data[0] = 1.0;
  for (int i = root; i >= 0; --i) {
    auto& n = nodes_[static_cast<size_t>(i)];
    if (n.back) n.back();
  }
}

int Tape::add(int a, int b) {
  require(value(a).same_shape(value(b)), "add: shape mismatch");
  Tensor out(value(a).shape, value(a).data + value(b).data);
  int id = push(std::move(out), {});
  if (grad_) {
    nodes_.back().back = [this, id, a, b] {
      grad_mut(a).data += grad(id).data;
      grad_mut(b).data += grad(id).data;
    };
  }
  return id;
}

int Tape::sub(int a, int b) {
  require(value(a).same_shape(value(b)), "sub: shape mismatch");
  Tensor out(value(a).shape, value(a).data - value(b).data);
  int id = push(std::move(out), {});
  if (grad_) {
    nodes_.back().back = [this, id, a, b] {
      grad_mut(a).data += grad(id).data;
      grad_mut(b).data -= grad(id).data;
    };
  }
  return id;
}

int Tape::mul(int a, int b) {
  require(value(a).same_shape(value(b)), "mul: shape mismatch");
  Tensor out(value(a).shape, value(a).data * value(b).data);
  int id = push(std::move(out), {});
  if (grad_) {
    nodes_.back().back = [this, id, a, b] {
      grad_mut(a).data += grad(id).data * value(b).data;
      grad_mut(b).data += grad(id).data * value(a).data;
    };
  }
  return id;
}

int Tape::scale(int a, double s) {
  Tensor out(value(a).shape, value(a).data * s);
  int id = push(std::move(out), {});
  if (grad_) {
    nodes_.back().back = [this, id, a, s] { grad_mut(a).data += grad(id).data * s; };
  }
  return id;
}

int Tape::add_scalar(int a, double s) {
  Tensor out(value(a).shape, value(a).data + s);
  int id = push(std::move(out), {});
  if (grad_) {
    nodes_.back().back = [this, id, a] { grad_mut(a).data += grad(id).data; };
  }
  return id;
}

int Tape::rsub_scalar(double s, int a) {
  Tensor out(value(a).shape, s - value(a).data);
  int id = push(std::move(out), {});
  if (grad_) {
    nodes_.back().back = [this, id, a] { grad_mut(a).data -= grad(id).data; };
  }
  return id;
}

int Tape::sigmoid(int a) {
  Tensor out(value(a).shape, 1.0 / (1.0 + (-value(a).data).exp()));
  int id = push(std::move(out), {});
  if (grad_) {
    nodes_.back().back = [this, id, a] {
      const auto& y = value(id).data;
      grad_mut(a).data += grad(id).data * y * (1.0 - y);
    };
  }
  return id;
}

int Tape::tanh_(int a) {
  Tensor out(value(a).shape, value(a).data.tanh());
  int id = push(std::move(out), {});
  if (grad_) {
    nodes_.back().back = [this, id, a] {
      const auto& y = value(id).data;
      grad_mut(a).data += grad(id).data * (1.0 - y * y);
    };
  }
  return id;
}

int Tape::leaky_relu(int a, double slope) {
  const auto& x = value(a).data;
  Tensor out(value(a).shape, (x >= 0.0).select(x, x * slope));
  int id = push(std::move(out), {});
  if (grad_) {
    nodes_.back().back = [this, id, a, slope] {
      const auto& x = value(a).data;
      grad_mut(a).data += (x >= 0.0).select(grad(id).data, grad(id).data * slope);
    };
  }
  return id;
}

int Tape::log_clamped(int a, double eps) {
  const auto& x = value(a).data;
  Eigen::ArrayXd clamped = x.max(eps).min(1.0 - eps);
  Tensor out(value(a).shape, clamped.log());
  int id = push(std::move(out), {});
  if (grad_) {
    nodes_.back().back = [this, id, a, eps] {
      const auto& x = value(a).data;
      Eigen::ArrayXd inside =
          ((x > eps) && (x < 1.0 - eps)).select(1.0 / x, Eigen::ArrayXd::Zero(x.size()));
      grad_mut(a).data += grad(id).data * inside;
    };
  }
  return id;
}

int Tape::mean_all(int a) {
  const int64_t n = value(a).size();
  int id = push(Tensor::scalar(value(a).data.mean()), {});
  if (grad_) {
    nodes_.back().back = [this, id, a, n] {
      grad_mut(a).data += grad(id).data[0] / static_cast<double>(n);
    };
  }
  return id;
}

int Tape::l1_diff_mean(int a, int b) {
  require(value(a).same_shape(value(b)), "l1_diff_mean: shape mismatch");
  const int64_t n = value(a).size();
  Eigen::ArrayXd d = value(a).data - value(b).data;
  int id = push(Tensor::scalar(d.abs().mean()), {});
  if (grad_) {
    nodes_.back().back = [this, id, a, b, n] {
      Eigen::ArrayXd s = (value(a).data - value(b).data).sign() *
                         (grad(id).data[0] / static_cast<double>(n));
      grad_mut(a).data += s;
      grad_mut(b).data -= s;
    };
  }
  return id;
}

int Tape::weighted_sum(const std::vector<int>& scalars, const std::vector<double>& w) {
  require(scalars.size() == w.size(), "weighted_sum: length mismatch");
  double acc = 0.0;
  for (size_t i = 0; i < scalars.size(); ++i) {
    require(value(scalars[i]).size() == 1, "weighted_sum: non-scalar input");
    acc += w[i] * value(scalars[i]).data[0];
  }
  int id = push(Tensor::scalar(acc), {});
  if (grad_) {
    std::vector<int> ids = scalars;
    std::vector<double> ws = w;
    nodes_.back().back = [this, id, ids, ws] {
      for (size_t i = 0; i < ids.size(); ++i) grad_mut(ids[i]).data[0] += ws[i] * grad(id).data[0];
    };
  }
  return id;
}

int Tape::concat_channels(const std::vector<int>& xs) {
  require(!xs.empty(), "concat_channels: empty input");
  const int h = value(xs[0]).dim(1), w = value(xs[0]).dim(2);
  int ctot = 0;
  for (int x : xs) {
    require(value(x).rank() == 3 && value(x).dim(1) == h && value(x).dim(2) == w,
            "concat_channels: spatial mismatch");
    ctot += value(x).dim(0);
  }
  Tensor out({ctot, h, w});
  int64_t off = 0;
  for (int x : xs) {
    out.data.segment(off, value(x).size()) = value(x).data;
    off += value(x).size();
  }
  int id = push(std::move(out), {});
  if (grad_) {
    std::vector<int> ids = xs;
    nodes_.back().back = [this, id, ids] {
      int64_t off = 0;
      for (int x : ids) {
        grad_mut(x).data += grad(id).data.segment(off, value(x).size());
        off += value(x).size();
      }
    };
  }
  return id;
}

int Tape::detach(int a) { return leaf(value(a)); }

int Tape::global_avg_pool(int a) {
  const Tensor& x = value(a);
  require(x.rank() == 3, "global_avg_pool: expected CHW");
  const int c = x.dim(0);
  const int64_t hw = static_cast<int64_t>(x.dim(1)) * x.dim(2);
  Tensor out({c});
  for (int i = 0; i < c; ++i) out.data[i] = x.data.segment(i * hw, hw).mean();
  int id = push(std::move(out), {});
  if (grad_) {
    nodes_.back().back = [this, id, a, c, hw] {
      for (int i = 0; i < c; ++i)
        grad_mut(a).data.segment(i * hw, hw) += grad(id).data[i] / static_cast<double>(hw);
    };
  }
  return id;
}

int Tape::channel_affine(int x, int g) {
  const Tensor& xv = value(x);
  require(xv.rank() == 3 && value(g).rank() == 1 && value(g).dim(0) == xv.dim(0),
          "channel_affine: shape mismatch");
  const int c = xv.dim(0);
  const int64_t hw = static_cast<int64_t>(xv.dim(1)) * xv.dim(2);
  Tensor out(xv.shape);
  for (int i = 0; i < c; ++i)
    out.data.segment(i * hw, hw) = xv.data.segment(i * hw, hw) * (1.0 + value(g).data[i]);
  int id = push(std::move(out), {});
  if (grad_) {
    nodes_.back().back = [this, id, x, g, c, hw] {
      for (int i = 0; i < c; ++i) {
        grad_mut(x).data.segment(i * hw, hw) +=
            grad(id).data.segment(i * hw, hw) * (1.0 + value(g).data[i]);
        grad_mut(g).data[i] +=
            (grad(id).data.segment(i * hw, hw) * value(x).data.segment(i * hw, hw)).sum();
      }
    };
  }
  return id;
}

int Tape::instance_norm(int x, double eps) {
  const Tensor& xv = value(x);
  require(xv.rank() == 3, "instance_norm: expected CHW");
  const int c = xv.dim(0);
  const int64_t hw = static_cast<int64_t>(xv.dim(1)) * xv.dim(2);
  Tensor out(xv.shape);
  auto inv_std = std::make_shared<Eigen::ArrayXd>(c);
  for (int i = 0; i < c; ++i) {
    auto ch = xv.data.segment(i * hw, hw);
    const double mu = ch.mean();
    const double var = (ch - mu).square().mean();
    const double is = 1.0 / std::sqrt(var + eps);
    (*inv_std)[i] = is;
    out.data.segment(i * hw, hw) = (ch - mu) * is;
  }
  int id = push(std::move(out), {});
  if (grad_) {
    nodes_.back().back = [this, id, x, c, hw, inv_std] {
      for (int i = 0; i < c; ++i) {
        auto dy = grad(id).data.segment(i * hw, hw);
        auto y = value(id).data.segment(i * hw, hw);
        const double mdy = dy.mean();
        const double mdyy = (dy * y).mean();
        grad_mut(x).data.segment(i * hw, hw) += (*inv_std)[i] * (dy - mdy - y * mdyy);
      }
    };
  }
  return id;
}

int Tape::upsample_nearest2(int x) {
  const Tensor& xv = value(x);
  require(xv.rank() == 3, "upsample_nearest2: expected CHW");
  const int c = xv.dim(0), h = xv.dim(1), w = xv.dim(2);
  Tensor out({c, 2 * h, 2 * w});
  for (int ci = 0; ci < c; ++ci)
    for (int y = 0; y < 2 * h; ++y)
      for (int xx = 0; xx < 2 * w; ++xx) out.at3(ci, y, xx) = xv.at3(ci, y / 2, xx / 2);
  int id = push(std::move(out), {});
  if (grad_) {
    nodes_.back().back = [this, id, x, c, h, w] {
      for (int ci = 0; ci < c; ++ci)
        for (int y = 0; y < 2 * h; ++y)
          for (int xx = 0; xx < 2 * w; ++xx)
            grad_mut(x).at3(ci, y / 2, xx / 2) += grad(id).at3(ci, y, xx);
    };
  }
  return id;
}

int Tape::downsample_avg2(int x) {
  const Tensor& xv = value(x);
  require(xv.rank() == 3 && xv.dim(1) % 2 == 0 && xv.dim(2) % 2 == 0,
          "downsample_avg2: expected CHW with even spatial dims");
  const int c = xv.dim(0), h = xv.dim(1) / 2, w = xv.dim(2) / 2;
  Tensor out({c, h, w});
  for (int ci = 0; ci < c; ++ci)
    for (int y = 0; y < h; ++y)
      for (int xx = 0; xx < w; ++xx)
        out.at3(ci, y, xx) = 0.25 * (xv.at3(ci, 2 * y, 2 * xx) + xv.at3(ci, 2 * y, 2 * xx + 1) +
                                     xv.at3(ci, 2 * y + 1, 2 * xx) + xv.at3(ci, 2 * y + 1, 2 * xx + 1));
  int id = push(std::move(out), {});
  if (grad_) {
    nodes_.back().back = [this, id, x, c, h, w] {
      for (int ci = 0; ci < c; ++ci)
        for (int y = 0; y < h; ++y)
          for (int xx = 0; xx < w; ++xx) {
            const double g = 0.25 * grad(id).at3(ci, y, xx);
            grad_mut(x).at3(ci, 2 * y, 2 * xx) += g;
            grad_mut(x).at3(ci, 2 * y, 2 * xx + 1) += g;
            grad_mut(x).at3(ci, 2 * y + 1, 2 * xx) += g;
            grad_mut(x).at3(ci, 2 * y + 1, 2 * xx + 1) += g;
          }
    };
  }
  return id;
}

int Tape::conv2d(int x, int w, int b, int stride) {
  const Tensor& xv = value(x);
  const Tensor& wv = value(w);
  const Tensor& bv = value(b);
  require(xv.rank() == 3 && wv.rank() == 4, "conv2d: bad ranks");
  const int ic = xv.dim(0), h = xv.dim(1), wi = xv.dim(2);
  const int oc = wv.dim(0), k = wv.dim(2);
  require(wv.dim(1) == ic && wv.dim(3) == k, "conv2d: weight shape mismatch");
  require(bv.rank() == 1 && bv.dim(0) == oc, "conv2d: bias shape mismatch");
  require(stride == 1 || stride == 2, "conv2d: stride must be 1 or 2");
  const int pad = (k - 1) / 2;
  const int ho = (h + 2 * pad - k) / stride + 1;
  const int wo = (wi + 2 * pad - k) / stride + 1;
  const int kk = ic * k * k;

  auto col = std::make_shared<Eigen::MatrixXd>(kk, static_cast<int64_t>(ho) * wo);
  for (int oy = 0; oy < ho; ++oy)
    for (int ox = 0; ox < wo; ++ox) {
      const int64_t cidx = static_cast<int64_t>(oy) * wo + ox;
      int r = 0;
      for (int ci = 0; ci < ic; ++ci)
        for (int ky = 0; ky < k; ++ky)
          for (int kx = 0; kx < k; ++kx, ++r) {
            const int iy = oy * stride - pad + ky;
            const int ix = ox * stride - pad + kx;
            (*col)(r, cidx) =
                (iy >= 0 && iy < h && ix >= 0 && ix < wi) ? xv.at3(ci, iy, ix) : 0.0;
          }
    }

  Tensor out({oc, ho, wo});
  CRowMap wmat(wv.data.data(), oc, kk);
  RowMap ymat(out.data.data(), oc, static_cast<int64_t>(ho) * wo);
  ymat.noalias() = wmat * (*col);
  ymat.colwise() += Eigen::Map<const Eigen::VectorXd>(bv.data.data(), oc);

  int id = push(std::move(out), {});
  if (grad_) {
    nodes_.back().back = [this, id, x, w, b, col, ic, h, wi, oc, k, kk, stride, pad, ho, wo] {
      CRowMap dy(grad(id).data.data(), oc, static_cast<int64_t>(ho) * wo);
      // dW and db
      RowMap dw(grad_mut(w).data.data(), oc, kk);
      dw.noalias() += dy * col->transpose();
      Eigen::Map<Eigen::VectorXd>(grad_mut(b).data.data(), oc) += dy.rowwise().sum();
      // dX via col2im
      CRowMap wmat(value(w).data.data(), oc, kk);
      Eigen::MatrixXd dcol = wmat.transpose() * dy;
      Tensor& gx = grad_mut(x);
      for (int oy = 0; oy < ho; ++oy)
        for (int ox = 0; ox < wo; ++ox) {
          const int64_t cidx = static_cast<int64_t>(oy) * wo + ox;
          int r = 0;
          for (int ci = 0; ci < ic; ++ci)
            for (int ky = 0; ky < k; ++ky)
              for (int kx = 0; kx < k; ++kx, ++r) {
                const int iy = oy * stride - pad + ky;
                const int ix = ox * stride - pad + kx;
                if (iy >= 0 && iy < h && ix >= 0 && ix < wi) gx.at3(ci, iy, ix) += dcol(r, cidx);
              }
        }
    };
  } else {
    col.reset();
  }
  return id;
}

int Tape::spectral_scale(int w, const Eigen::VectorXd& u, const Eigen::VectorXd& v) {
  const Tensor& wv = value(w);
  const int rows = static_cast<int>(u.size());
  const int cols = static_cast<int>(v.size());
  require(wv.size() == static_cast<int64_t>(rows) * cols, "spectral_scale: u/v size mismatch");
  CRowMap m(wv.data.data(), rows, cols);
  double sigma = u.dot(m * v);
  if (std::abs(sigma) < 1e-12) sigma = 1.0;  // degenerate weight passes through
  Tensor out(wv.shape, wv.data / sigma);
  int id = push(std::move(out), {});
  if (grad_) {
    auto uc = std::make_shared<Eigen::VectorXd>(u);
    auto vc = std::make_shared<Eigen::VectorXd>(v);
    nodes_.back().back = [this, id, w, uc, vc, sigma, rows, cols] {
      const auto& dy = grad(id).data;
      const double inner = (dy * value(w).data).sum();
      RowMap gw(grad_mut(w).data.data(), rows, cols);
      CRowMap dym(dy.data(), rows, cols);
      gw.noalias() += dym / sigma;
      gw.noalias() -= (inner / (sigma * sigma)) * ((*uc) * vc->transpose());
    };
  }
  return id;
}

}  // namespace edgegan
