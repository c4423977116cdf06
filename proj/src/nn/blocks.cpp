#include "nn/blocks.hpp"

#include <cmath>

namespace edgegan {

Tensor conv_init(int out_c, int in_c, int k, Rng& rng) {
  Tensor w({out_c, in_c, k, k});
  const double std = std::sqrt(2.0 / (in_c * k * k));
  for (int64_t i = 0; i < w.size(); ++i) w.data[i] = rng.normal(0.0, std);
  return w;
}

Conv2d::Conv2d(ParamStore& ps, const std::string& name, int in_c_, int out_c_, int k_, int stride_,
               bool spectral, Rng& init)
    : in_c(in_c_), out_c(out_c_), k(k_), stride(stride_) {
  w_id = ps.add(name + ".w", conv_init(out_c, in_c, k, init), spectral);
  b_id = ps.add(name + ".b", Tensor({out_c}), false);
}

int Conv2d::forward(const Bound& b, int x) const {
  int w = b.node[static_cast<size_t>(w_id)];
  const Param& p = b.store->param(w_id);
  if (p.spectral && p.u.norm() > 0.5) w = b.tape->spectral_scale(w, p.u, p.sv);
  return b.tape->conv2d(x, w, b.node[static_cast<size_t>(b_id)], stride);
}

DownResBlock::DownResBlock(ParamStore& ps, const std::string& name, int channels, Rng& init)
    : c1(ps, name + ".c1", channels, channels, 3, 2, true, init),
      c2(ps, name + ".c2", channels, channels, 3, 1, true, init),
      skip(ps, name + ".skip", channels, channels, 1, 2, true, init) {}

int DownResBlock::forward(const Bound& b, int x) const {
  Tape& t = *b.tape;
  int h = c2.forward(b, t.leaky_relu(c1.forward(b, x), 0.2));
  return t.leaky_relu(t.add(h, skip.forward(b, x)), 0.2);
}

SpadeModulation::SpadeModulation(ParamStore& ps, const std::string& name, int label_c, int hidden,
                                 int out_c, Rng& init)
    : shared(ps, name + ".shared", label_c, hidden, 3, 1, true, init),
      to_gamma(ps, name + ".gamma", hidden, out_c, 3, 1, true, init),
      to_beta(ps, name + ".beta", hidden, out_c, 3, 1, true, init) {}

std::pair<int, int> SpadeModulation::forward(const Bound& b, int label) const {
  int h = b.tape->leaky_relu(shared.forward(b, label), 0.2);
  return {to_gamma.forward(b, h), to_beta.forward(b, h)};
}

SpadeResBlock::SpadeResBlock(ParamStore& ps, const std::string& name, int in_c_, int out_c_,
                             int label_c, int hidden, Rng& init)
    : in_c(in_c_),
      out_c(out_c_),
      m1(ps, name + ".m1", label_c, hidden, in_c_, init),
      m2(ps, name + ".m2", label_c, hidden, out_c_, init),
      c1(ps, name + ".c1", in_c_, out_c_, 3, 1, true, init),
      c2(ps, name + ".c2", out_c_, out_c_, 3, 1, true, init) {
  if (in_c != out_c) {
    ms = SpadeModulation(ps, name + ".ms", label_c, hidden, in_c, init);
    skip = Conv2d(ps, name + ".skip", in_c, out_c, 1, 1, true, init);
  }
}

int SpadeResBlock::forward(const Bound& b, int x, int label) const {
  Tape& t = *b.tape;
  auto modulate = [&](int feat, const std::pair<int, int>& gb) {
    int xn = t.instance_norm(feat);
    return t.add(t.mul(xn, t.add_scalar(gb.first, 1.0)), gb.second);
  };
  int h = c1.forward(b, t.leaky_relu(modulate(x, m1.forward(b, label)), lrelu_slope));
  h = c2.forward(b, t.leaky_relu(modulate(h, m2.forward(b, label)), lrelu_slope));
  int s = (in_c == out_c) ? x : skip.forward(b, modulate(x, ms.forward(b, label)));
  return t.add(h, s);
}

}  // namespace edgegan
