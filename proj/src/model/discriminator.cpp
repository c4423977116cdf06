#include "model/discriminator.hpp"

namespace edgegan {

DiscriminatorConfig DiscriminatorConfig::from(const Config& cfg) {
  DiscriminatorConfig d;
  d.num_classes = cfg.get_int("data.num_classes", d.num_classes);
  d.base_channels = cfg.get_int("disc.base", d.base_channels);
  d.num_scales = cfg.get_int("disc.num_scales", d.num_scales);
  return d;
}

Discriminator::Discriminator(ParamStore& ps, const DiscriminatorConfig& cfg, Rng& init)
    : cfg_(cfg) {
  require(cfg.num_scales >= 1, "discriminator: need at least one scale");
  const int in_c = cfg.num_classes + 3;
  const int b = cfg.base_channels;
  for (int s = 0; s < cfg.num_scales; ++s) {
    const std::string name = "disc.scale" + std::to_string(s);
    Scale sc;
    sc.c0 = Conv2d(ps, name + ".c0", in_c, b, 3, 2, true, init);
    sc.c1 = Conv2d(ps, name + ".c1", b, 2 * b, 3, 2, true, init);
    sc.c2 = Conv2d(ps, name + ".c2", 2 * b, 4 * b, 3, 1, true, init);
    sc.out = Conv2d(ps, name + ".out", 4 * b, 1, 3, 1, true, init);
    scales_.push_back(std::move(sc));
  }
}

Discriminator::Out Discriminator::forward(Tape& tape, const Bound& b, int layout,
                                          int candidate) const {
  const Tensor& cand = tape.value(candidate);
  require(cand.rank() == 3 && cand.dim(0) == 3, "discriminator: candidate must be 3×H×W");
  require(cand.dim(1) >= min_input_size() && cand.dim(2) >= min_input_size(),
          "discriminator: input below receptive-field minimum");
  int x = tape.concat_channels({layout, candidate});
  Out out;
  for (const auto& sc : scales_) {
    int h = tape.leaky_relu(sc.c0.forward(b, x), 0.2);
    out.features.push_back(h);
    h = tape.leaky_relu(sc.c1.forward(b, h), 0.2);
    out.features.push_back(h);
    h = tape.leaky_relu(sc.c2.forward(b, h), 0.2);
    out.features.push_back(h);
    out.logits.push_back(sc.out.forward(b, h));
    if (&sc != &scales_.back()) x = tape.downsample_avg2(x);
  }
  return out;
}

}  // namespace edgegan
