#include "helpers.hpp"
#include "model/discriminator.hpp"
#include "model/generator.hpp"
#include "model/perceptual.hpp"
#include "model/transfer.hpp"

#include <doctest.h>

#include <filesystem>

#include "core/archive.hpp"

using namespace edgegan;
using testutil::fd_check;
using testutil::random_tensor;

namespace {

GeneratorConfig small_gen_cfg(bool edge, bool tr, bool enh) {
  GeneratorConfig g;
  g.num_classes = 4;
  g.feature_channels = 6;
  g.branch_depth = 2;
  g.spade_hidden = 4;
  g.use_edge = edge;
  g.use_transfer = tr;
  g.use_enhance = enh;
  return g;
}

Tensor onehot_layout(int n, int hw, uint64_t seed) {
  Rng rng(seed);
  Tensor t({n, hw, hw});
  for (int y = 0; y < hw; ++y)
    for (int x = 0; x < hw; ++x) t.at3(static_cast<int>(rng.integer(0, n - 1)), y, x) = 1.0;
  return t;
}

}  // namespace

TEST_SUITE("model") {

TEST_CASE("edge transfer at feature level") {
  Rng rng(30);
  Tensor x = random_tensor({2, 3, 3}, rng);

  // zero gate: exactly 1.5x
  Tensor half = transfer::features(Tensor({2, 3, 3}), x);
  for (Eigen::Index i = 0; i < x.data.size(); ++i) CHECK(half.data[i] == 1.5 * x.data[i]);

  // saturated gate: 2x (and an all-negative gate leaves x almost untouched)
  Tensor two = transfer::features(Tensor::full({2, 3, 3}, 40.0), x);
  Tensor one = transfer::features(Tensor::full({2, 3, 3}, -40.0), x);
  for (Eigen::Index i = 0; i < x.data.size(); ++i) {
    CHECK(std::abs(two.data[i] - 2.0 * x.data[i]) < 1e-12);
    CHECK(std::abs(one.data[i] - x.data[i]) < 1e-12);
  }

  // random pair against the scalar definition
  Tensor e = random_tensor({2, 3, 3}, rng);
  Tensor out = transfer::features(e, x);
  for (Eigen::Index i = 0; i < x.data.size(); ++i) {
    const double gate = 1.0 / (1.0 + std::exp(-e.data[i]));
    CHECK(std::abs(out.data[i] - (gate * x.data[i] + x.data[i])) < 1e-12);
  }

  // tape version agrees with the eager one
  Tape t;
  int node = transfer::features(t, t.leaf(e), t.leaf(x));
  CHECK((t.value(node).data == out.data).all());
}

TEST_CASE("edge transfer at image level bounds") {
  Rng rng(31);
  Tensor edge = random_tensor({3, 4, 4}, rng);
  Tensor inter(std::vector<int>{3, 4, 4});
  for (Eigen::Index i = 0; i < inter.data.size(); ++i) inter.data[i] = rng.uniform(-1.0, 1.0);
  edge.data = edge.data.tanh();  // edge map lives in [-1,1]

  Tensor out = transfer::image(edge, inter);
  CHECK((out.data >= -2.0).all());
  CHECK((out.data <= 2.0).all());
  for (Eigen::Index i = 0; i < out.data.size(); ++i) {
    const double gate = 1.0 / (1.0 + std::exp(-edge.data[i]));
    CHECK(std::abs(out.data[i] - (gate * inter.data[i] + inter.data[i])) < 1e-12);
  }
}

TEST_CASE("transfer gradient matches finite differences") {
  Rng rng(32);
  Tensor e = random_tensor({2, 3, 3}, rng);
  Tensor x = random_tensor({2, 3, 3}, rng);
  CHECK(fd_check(e, [&](Tape& t, int l) {
          return t.mean_all(t.mul(transfer::features(t, l, t.leaf(x)),
                                  transfer::features(t, l, t.leaf(x))));
        }) < 1e-4);
  CHECK(fd_check(x, [&](Tape& t, int l) {
          int y = transfer::image(t, t.leaf(e), l);
          return t.mean_all(t.mul(y, y));
        }) < 1e-4);
}

TEST_CASE("encoder output shape and non-collapse") {
  GeneratorConfig g;
  g.num_classes = 8;
  g.feature_channels = 64;
  g.spade_hidden = 128;
  ParamStore ps;
  Rng init(33);
  Encoder enc(ps, g, init);

  Tensor a = onehot_layout(8, 64, 1);
  Tensor bl = onehot_layout(8, 64, 2);
  Tape t(false);
  Bound b = bind(t, ps);
  int fa = enc.forward(b, t.leaf(a), a);
  CHECK(t.value(fa).shape == std::vector<int>{64, 64, 64});
  int fb = enc.forward(b, t.leaf(bl), bl);
  CHECK((t.value(fa).data - t.value(fb).data).matrix().norm() > 0.0);
}

TEST_CASE("encoder gradient w.r.t. an embedding weight") {
  GeneratorConfig g = small_gen_cfg(false, false, false);
  g.feature_channels = 4;
  g.spade_hidden = 3;
  g.num_classes = 3;
  ParamStore ps;
  Rng init(34);
  Encoder enc(ps, g, init);
  Tensor layout = onehot_layout(3, 8, 3);

  const Tensor w0 = ps.param(0).value;  // stem kernel
  auto f = [&](Tape& t, int leaf) {
    Bound b = bind(t, ps);
    b.node[0] = leaf;  // substitute the probed weight
    int y = enc.forward(b, t.leaf(layout), layout);
    return t.mean_all(t.mul(y, t.sigmoid(y)));
  };
  CHECK(fd_check(w0, f, 1e-6) < 1e-4);
}

TEST_CASE("semantic preserving module") {
  GeneratorConfig g;
  g.num_classes = 8;
  g.feature_channels = 64;
  ParamStore ps;
  Rng init(35);
  SemanticPreserve sp(ps, g, init);

  Rng data(36);
  Tensor layout = onehot_layout(8, 8, 4);
  Tensor edge = random_tensor({3, 8, 8}, data);
  Tensor inter = random_tensor({3, 8, 8}, data);
  Tensor feat = random_tensor({64, 8, 8}, data);

  Tape t(false);
  Bound b = bind(t, ps);
  auto out = sp.forward(b, t.leaf(layout), t.leaf(edge), t.leaf(inter), t.leaf(feat));

  // concatenation: 64 + 8 + 3 + 3 = 78 channels, slices bit-identical to inputs
  const Tensor& cat = t.value(out.concat);
  CHECK(cat.shape == std::vector<int>{78, 8, 8});
  CHECK((cat.data.segment(0, layout.size()) == layout.data).all());
  CHECK((cat.data.segment(layout.size(), edge.size()) == edge.data).all());
  CHECK((cat.data.segment(layout.size() + edge.size(), inter.size()) == inter.data).all());
  CHECK((cat.data.tail(feat.size()) == feat.data).all());

  CHECK(t.value(out.class_feat).shape == std::vector<int>{8, 8, 8});
  CHECK(t.value(out.gamma).shape == std::vector<int>{8});
  CHECK(t.value(out.enhanced).shape == std::vector<int>{78, 8, 8});
  CHECK(t.value(out.image).shape == std::vector<int>{3, 8, 8});
  CHECK((t.value(out.image).data.abs() <= 1.0).all());
}

TEST_CASE("class scaling factors from pooled sigmoid") {
  Tape t;
  int zero = t.sigmoid(t.global_avg_pool(t.leaf(Tensor({3, 4, 4}))));
  for (int i = 0; i < 3; ++i) CHECK(t.value(zero).data[i] == 0.5);

  int ln3 = t.sigmoid(t.global_avg_pool(t.leaf(Tensor::full({2, 4, 4}, std::log(3.0)))));
  for (int i = 0; i < 2; ++i) CHECK(t.value(ln3).data[i] == doctest::Approx(0.75).epsilon(1e-12));

  // random channels against the scalar mean + sigmoid definition
  Rng rng(37);
  Tensor x = random_tensor({5, 3, 3}, rng);
  int node = t.sigmoid(t.global_avg_pool(t.leaf(x)));
  for (int c = 0; c < 5; ++c) {
    double mean = 0;
    for (int y = 0; y < 3; ++y)
      for (int xx = 0; xx < 3; ++xx) mean += x.at3(c, y, xx) / 9.0;
    CHECK(std::abs(t.value(node).data[c] - 1.0 / (1.0 + std::exp(-mean))) < 1e-12);
  }
}

TEST_CASE("residual channel reweighting") {
  Rng rng(38);
  Tensor x = random_tensor({3, 4, 4}, rng);
  Tape t;

  // gamma' = 0.5 everywhere: exactly 1.5x
  int y = t.channel_affine(t.leaf(x), t.leaf(Tensor::full({3}, 0.5)));
  for (Eigen::Index i = 0; i < x.data.size(); ++i) CHECK(t.value(y).data[i] == 1.5 * x.data[i]);

  // gamma' = sigmoid(-40) ~ 0: output collapses to the input
  const double tiny = 1.0 / (1.0 + std::exp(40.0));
  int z = t.channel_affine(t.leaf(x), t.leaf(Tensor::full({3}, tiny)));
  for (Eigen::Index i = 0; i < x.data.size(); ++i)
    CHECK(std::abs(t.value(z).data[i] - x.data[i]) < 1e-12);

  // random per-channel factors against scalar arithmetic
  Tensor gam = random_tensor({3}, rng);
  int r = t.channel_affine(t.leaf(x), t.leaf(gam));
  for (int c = 0; c < 3; ++c)
    for (int yy = 0; yy < 4; ++yy)
      for (int xx = 0; xx < 4; ++xx)
        CHECK(std::abs(t.value(r).at3(c, yy, xx) - x.at3(c, yy, xx) * (1.0 + gam.data[c])) < 1e-12);
}

TEST_CASE("zero render weights give a zero final image") {
  GeneratorConfig g = small_gen_cfg(true, true, true);
  ParamStore ps;
  Rng init(39);
  SemanticPreserve sp(ps, g, init);
  for (int i = 0; i < ps.count(); ++i)
    if (ps.param(i).name.rfind("gs.render", 0) == 0) ps.param(i).value.data.setZero();

  Rng data(40);
  Tape t(false);
  Bound b = bind(t, ps);
  auto out = sp.forward(b, t.leaf(onehot_layout(4, 8, 5)), t.leaf(random_tensor({3, 8, 8}, data)),
                        t.leaf(random_tensor({3, 8, 8}, data)),
                        t.leaf(random_tensor({6, 8, 8}, data)));
  CHECK((t.value(out.image).data == 0.0).all());
}

TEST_CASE("semantic preserving gradient matches finite differences") {
  GeneratorConfig g = small_gen_cfg(true, true, true);
  ParamStore ps;
  Rng init(41);
  SemanticPreserve sp(ps, g, init);
  Rng data(42);
  Tensor layout = onehot_layout(4, 8, 6);
  Tensor edge = random_tensor({3, 8, 8}, data, 0.5);
  Tensor feat = random_tensor({6, 8, 8}, data, 0.5);
  Tensor inter = random_tensor({3, 8, 8}, data, 0.5);

  auto f = [&](Tape& t, int leaf) {
    Bound b = bind(t, ps);
    auto out = sp.forward(b, t.leaf(layout), t.leaf(edge), leaf, t.leaf(feat));
    return t.mean_all(t.mul(out.image, out.image));
  };
  CHECK(fd_check(inter, f, 1e-6) < 1e-4);
}

TEST_CASE("generator wiring across ablation variants") {
  Rng data(43);
  Tensor layout = onehot_layout(4, 16, 7);

  // E+Gi: no edge branch at all, final == intermediate, plain tanh range
  {
    ParamStore ps;
    Rng init(44);
    Generator gen(ps, small_gen_cfg(false, false, false), init);
    Tape t(false);
    Bound b = bind(t, ps);
    GenOutputs o = gen.forward(t, b, layout);
    CHECK(o.edge_map == -1);
    CHECK(o.edge_stack.empty());
    CHECK(o.final_image == o.intermediate);
    CHECK((t.value(o.intermediate).data.abs() <= 1.0).all());
  }

  // E+Gi+Ge without transfer: the image path never reads edge activations
  {
    ParamStore ps;
    Rng init(45);
    Generator gen(ps, small_gen_cfg(true, false, false), init);
    Tape t1(false);
    Bound b1 = bind(t1, ps);
    GenOutputs o1 = gen.forward(t1, b1, layout);
    const Tensor before = t1.value(o1.intermediate);
    const Tensor edge_before = t1.value(o1.edge_map);

    for (int i = 0; i < ps.count(); ++i)
      if (ps.param(i).name.rfind("edge.", 0) == 0) ps.param(i).value.data += 0.37;
    Tape t2(false);
    Bound b2 = bind(t2, ps);
    GenOutputs o2 = gen.forward(t2, b2, layout);
    CHECK((t2.value(o2.intermediate).data == before.data).all());
    CHECK((t2.value(o2.edge_map).data != edge_before.data).any());
  }

  // full model: transfer widens the intermediate range bound to [-2,2]
  {
    ParamStore ps;
    Rng init(46);
    Generator gen(ps, small_gen_cfg(true, true, true), init);
    Tape t(false);
    Bound b = bind(t, ps);
    GenOutputs o = gen.forward(t, b, layout);
    CHECK(o.edge_stack.size() == 2);
    CHECK((t.value(o.intermediate).data.abs() <= 2.0).all());
    CHECK((t.value(o.final_image).data.abs() <= 1.0).all());
    CHECK(o.final_image != o.intermediate);
  }

  // invalid configurations and inputs
  {
    ParamStore ps;
    Rng init(47);
    CHECK_THROWS_AS(Generator(ps, small_gen_cfg(false, false, true), init), std::invalid_argument);
    CHECK_THROWS_AS(Generator(ps, small_gen_cfg(false, true, false), init), std::invalid_argument);
    ParamStore ps2;
    Generator gen(ps2, small_gen_cfg(true, true, true), init);
    Tape t(false);
    Bound b = bind(t, ps2);
    CHECK_THROWS_AS(gen.forward(t, b, onehot_layout(4, 12, 8)), std::invalid_argument);
    CHECK_THROWS_AS(gen.forward(t, b, onehot_layout(3, 16, 8)), std::invalid_argument);
  }
}

TEST_CASE("edge branch range and zero behavior") {
  for (uint64_t seed = 0; seed < 100; ++seed) {
    ParamStore ps;
    Rng init(seed);
    Generator gen(ps, small_gen_cfg(true, false, false), init);
    Tape t(false);
    Bound b = bind(t, ps);
    GenOutputs o = gen.forward(t, b, onehot_layout(4, 8, seed));
    REQUIRE((t.value(o.edge_map).data.abs() <= 1.0).all());
  }

  ParamStore ps;
  Rng init(48);
  Generator gen(ps, small_gen_cfg(true, false, false), init);
  for (int i = 0; i < ps.count(); ++i)
    if (ps.param(i).name.rfind("edge.", 0) == 0) ps.param(i).value.data.setZero();
  Tape t(false);
  Bound b = bind(t, ps);
  GenOutputs o = gen.forward(t, b, onehot_layout(4, 8, 9));
  for (int n : o.edge_stack) CHECK((t.value(n).data == 0.0).all());
  CHECK((t.value(o.edge_map).data == 0.0).all());
}

TEST_CASE("discriminator shapes, purity and label sensitivity") {
  DiscriminatorConfig dc;
  dc.num_classes = 4;
  dc.base_channels = 4;
  dc.num_scales = 2;
  ParamStore ps;
  Rng init(49);
  Discriminator disc(ps, dc, init);
  CHECK(disc.min_input_size() == 16);

  Rng data(50);
  Tensor layout = onehot_layout(4, 64, 10);
  Tensor cand = random_tensor({3, 64, 64}, data, 0.3);

  Tape t(false);
  Bound b = bind(t, ps);
  auto out = disc.forward(t, b, t.leaf(layout), t.leaf(cand));
  REQUIRE(out.logits.size() == 2);
  REQUIRE(out.features.size() == 6);
  CHECK(t.value(out.logits[0]).shape == std::vector<int>{1, 16, 16});
  CHECK(t.value(out.logits[1]).shape == std::vector<int>{1, 8, 8});

  // purity: a second pass over the same inputs is bit-identical
  Tape t2(false);
  Bound b2 = bind(t2, ps);
  auto out2 = disc.forward(t2, b2, t2.leaf(layout), t2.leaf(cand));
  CHECK((t2.value(out2.logits[0]).data == t.value(out.logits[0]).data).all());

  // the layout matters: zeroing it moves the scores
  Tape t3(false);
  Bound b3 = bind(t3, ps);
  auto out3 = disc.forward(t3, b3, t3.leaf(Tensor({4, 64, 64})), t3.leaf(cand));
  CHECK((t3.value(out3.logits[0]).data != t.value(out.logits[0]).data).any());

  CHECK_THROWS_AS(disc.forward(t, b, t.leaf(onehot_layout(4, 8, 11)),
                               t.leaf(random_tensor({3, 8, 8}, data))),
                  std::invalid_argument);
}

TEST_CASE("perceptual extractor taps and persistence") {
  PerceptualExtractor e = PerceptualExtractor::random(77, {4, 6});
  Rng data(51);
  Tensor img = random_tensor({3, 8, 8}, data, 0.4);

  Tape t(false);
  int node = t.leaf(img);
  auto taps = e.taps(t, node);
  REQUIRE(taps.size() == 3);
  CHECK(taps[0] == node);
  CHECK(t.value(taps[1]).shape == std::vector<int>{4, 4, 4});
  CHECK(t.value(taps[2]).shape == std::vector<int>{6, 2, 2});
  CHECK(e.feature_dim() == 6);

  // same seed reproduces features; a different seed does not
  Eigen::VectorXd f1 = e.pooled_feature(img);
  Eigen::VectorXd f2 = PerceptualExtractor::random(77, {4, 6}).pooled_feature(img);
  Eigen::VectorXd f3 = PerceptualExtractor::random(78, {4, 6}).pooled_feature(img);
  CHECK((f1 - f2).norm() == 0.0);
  CHECK((f1 - f3).norm() > 0.0);

  // export to an archive and reload
  const std::string path = std::filesystem::temp_directory_path() / "perc.egc";
  Archive a;
  Rng wr(52);
  a.tensors["layer0.w"] = random_tensor({4, 3, 3, 3}, wr);
  a.tensors["layer0.b"] = Tensor({4});
  a.save(path);
  PerceptualExtractor loaded = PerceptualExtractor::from_file(path);
  CHECK(loaded.feature_dim() == 4);
  CHECK(loaded.pooled_feature(img).size() == 4);
  std::filesystem::remove(path);
}

}  // TEST_SUITE
