#include "model/generator.hpp"

#include "model/transfer.hpp"

namespace edgegan {

GeneratorConfig GeneratorConfig::from(const Config& cfg) {
  GeneratorConfig g;
  g.num_classes = cfg.get_int("data.num_classes", g.num_classes);
  g.feature_channels = cfg.get_int("model.C", g.feature_channels);
  g.branch_depth = cfg.get_int("model.n", g.branch_depth);
  g.spade_hidden = cfg.get_int("nn.spade_hidden", g.spade_hidden);
  g.use_edge = cfg.get_bool("model.use_Ge", g.use_edge);
  g.use_transfer = cfg.get_bool("model.use_Gt", g.use_transfer);
  g.use_enhance = cfg.get_bool("model.use_Gs", g.use_enhance);
  return g;
}

Encoder::Encoder(ParamStore& ps, const GeneratorConfig& g, Rng& init)
    : stem(ps, "enc.stem", g.num_classes, g.feature_channels, 3, 1, true, init),
      down1(ps, "enc.down1", g.feature_channels, init),
      down2(ps, "enc.down2", g.feature_channels, init),
      down3(ps, "enc.down3", g.feature_channels, init),
      up1(ps, "enc.up1", g.feature_channels, g.feature_channels, g.num_classes, g.spade_hidden, init),
      up2(ps, "enc.up2", g.feature_channels, g.feature_channels, g.num_classes, g.spade_hidden, init),
      up3(ps, "enc.up3", g.feature_channels, g.feature_channels, g.num_classes, g.spade_hidden,
          init) {}

int Encoder::forward(const Bound& b, int layout_node, const Tensor& layout) const {
  Tape& t = *b.tape;
  const int h = layout.dim(1), w = layout.dim(2);
  int x = t.leaky_relu(stem.forward(b, layout_node), 0.2);
  x = down1.forward(b, x);
  x = down2.forward(b, x);
  x = down3.forward(b, x);
  // Label pyramid for the conditioned upsampling path.
  int s4 = t.leaf(resize_onehot_nearest(layout, h / 4, w / 4));
  int s2 = t.leaf(resize_onehot_nearest(layout, h / 2, w / 2));
  x = up1.forward(b, t.upsample_nearest2(x), s4);
  x = up2.forward(b, t.upsample_nearest2(x), s2);
  x = up3.forward(b, t.upsample_nearest2(x), layout_node);
  return x;
}

BranchHead::BranchHead(ParamStore& ps, const std::string& name, int channels, int depth,
                       Rng& init) {
  for (int j = 0; j < depth; ++j)
    convs.emplace_back(ps, name + ".conv" + std::to_string(j), channels, channels, 3, 1, true,
                       init);
  out = Conv2d(ps, name + ".out", channels, 3, 3, 1, true, init);
}

SemanticPreserve::SemanticPreserve(ParamStore& ps, const GeneratorConfig& g, Rng& init) {
  const int cat = g.feature_channels + g.num_classes + 6;
  project = Conv2d(ps, "gs.project", cat, g.num_classes, 3, 1, true, init);
  expand = Conv2d(ps, "gs.expand", g.num_classes, cat, 3, 1, true, init);
  render = Conv2d(ps, "gs.render", cat, 3, 3, 1, true, init);
}

SemanticPreserve::Out SemanticPreserve::forward(const Bound& b, int layout, int edge_map,
                                                int intermediate, int deep_feature) const {
  Tape& t = *b.tape;
  Out o;
  o.concat = t.concat_channels({layout, edge_map, intermediate, deep_feature});
  o.class_feat = project.forward(b, o.concat);
  o.gamma = t.sigmoid(t.global_avg_pool(o.class_feat));
  int reweighted = t.channel_affine(o.class_feat, o.gamma);
  o.enhanced = expand.forward(b, reweighted);
  o.image = t.tanh_(render.forward(b, t.leaky_relu(o.enhanced, 0.2)));
  return o;
}

Generator::Generator(ParamStore& ps, const GeneratorConfig& cfg, Rng& init) : cfg_(cfg) {
  require(!cfg.use_enhance || cfg.use_edge,
          "generator: the enhancement module requires the edge branch");
  require(!cfg.use_transfer || cfg.use_edge,
          "generator: edge transfer requires the edge branch");
  encoder_ = Encoder(ps, cfg, init);
  if (cfg.use_edge) edge_head_.emplace(ps, "edge", cfg.feature_channels, cfg.branch_depth, init);
  image_head_ = BranchHead(ps, "img", cfg.feature_channels, cfg.branch_depth, init);
  if (cfg.use_enhance) enhance_.emplace(ps, cfg, init);
}

GenOutputs Generator::forward(Tape& tape, const Bound& b, const Tensor& layout) const {
  require(layout.rank() == 3 && layout.dim(0) == cfg_.num_classes,
          "generator: layout/class-count mismatch");
  require(layout.dim(1) % 8 == 0 && layout.dim(2) % 8 == 0 && layout.dim(1) >= 8 &&
              layout.dim(2) >= 8,
          "generator: spatial size must be divisible by the downsampling factor 8");

  GenOutputs out;
  out.layout = tape.leaf(layout);
  out.deep_feature = encoder_.forward(b, out.layout, layout);

  if (cfg_.use_edge) {
    int x = out.deep_feature;
    for (const auto& conv : edge_head_->convs) {
      x = tape.leaky_relu(conv.forward(b, x), 0.2);
      out.edge_stack.push_back(x);
    }
    out.edge_map = tape.tanh_(edge_head_->out.forward(b, x));
  }

  int x = out.deep_feature;
  for (size_t j = 0; j < image_head_.convs.size(); ++j) {
    x = tape.leaky_relu(image_head_.convs[j].forward(b, x), 0.2);
    if (cfg_.use_transfer) x = transfer::features(tape, out.edge_stack[j], x);
    out.image_stack.push_back(x);
  }
  int raw_image = tape.tanh_(image_head_.out.forward(b, x));
  out.intermediate =
      cfg_.use_transfer ? transfer::image(tape, out.edge_map, raw_image) : raw_image;

  if (cfg_.use_enhance) {
    auto gs = enhance_->forward(b, out.layout, out.edge_map, out.intermediate, out.deep_feature);
    out.final_image = gs.image;
  } else {
    out.final_image = out.intermediate;
  }
  return out;
}

}  // namespace edgegan
