#pragma once

#include "core/rng.hpp"
#include "core/tape.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <vector>

namespace testutil {

using edgegan::Rng;
using edgegan::Tape;
using edgegan::Tensor;

inline Tensor random_tensor(std::vector<int> shape, Rng& rng, double scale = 1.0) {
  Tensor t(std::move(shape));
  for (Eigen::Index i = 0; i < t.data.size(); ++i) t.data[i] = rng.normal() * scale;
  return t;
}

/// Max relative error between the tape gradient of fn(x) and central finite
/// differences. fn must build a scalar node from the leaf it is given.
inline double fd_check(const Tensor& x, const std::function<int(Tape&, int)>& fn,
                       double h = 1e-5) {
  Tape tape(true);
  const int leaf = tape.leaf(x);
  tape.backward(fn(tape, leaf));
  const Tensor g = tape.grad(leaf);

  double max_rel = 0;
  for (Eigen::Index i = 0; i < x.data.size(); ++i) {
    Tensor xp = x, xm = x;
    xp.data[i] += h;
    xm.data[i] -= h;
    Tape tp(false), tm(false);
    const double fp = tp.value(fn(tp, tp.leaf(xp))).data[0];
    const double fm = tm.value(fn(tm, tm.leaf(xm))).data[0];
    const double fd = (fp - fm) / (2 * h);
    const double denom = std::max({std::abs(fd), std::abs(g.data[i]), 1e-6});
    max_rel = std::max(max_rel, std::abs(fd - g.data[i]) / denom);
  }
  return max_rel;
}

}  // namespace testutil
