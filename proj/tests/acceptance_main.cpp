// Acceptance gate: each criterion is an independent check that prints
// "CRITERION k: PASS" or "CRITERION k: FAIL". Run one with --criterion k,
// or all of them with no arguments. The exit code is the number of failures.

#include "data/dataset.hpp"
#include "eval/metrics.hpp"
#include "eval/report.hpp"
#include "helpers.hpp"
#include "model/discriminator.hpp"
#include "model/generator.hpp"
#include "model/transfer.hpp"
#include "nn/spectral.hpp"
#include "pipeline.hpp"
#include "train/losses.hpp"
#include "train/trainer.hpp"

#include <Eigen/SVD>

#include <cmath>
#include <cstdio>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

using namespace edgegan;
using testutil::fd_check;
using testutil::random_tensor;
namespace fs = std::filesystem;

namespace {

struct Checker {
  int failures = 0;
  void expect(bool ok, const char* what) {
    if (!ok) {
      ++failures;
      std::fprintf(stderr, "  check failed: %s\n", what);
    }
  }
};

Tensor random_layout(int num_classes, int hw, uint64_t seed) {
  Rng rng(seed);
  GrayBytes idx;
  idx.h = idx.w = hw;
  idx.pixels.resize(static_cast<size_t>(hw) * hw);
  for (auto& p : idx.pixels) p = static_cast<uint8_t>(rng.integer(0, num_classes - 1));
  return encode_onehot(idx, num_classes).data;
}

double exact_spectral_norm(const Param& p) {
  Eigen::Map<const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>> m(
      p.value.data.data(), p.rows, p.cols);
  return Eigen::JacobiSVD<Eigen::MatrixXd>(m).singularValues()(0);
}

double sigmoid(double x) { return 1.0 / (1.0 + std::exp(-x)); }

// ---------------------------------------------------------------------------
// 1. The four transfer/enhance operations match scalar oracles to 1e-12.
// ---------------------------------------------------------------------------
bool criterion1() {
  Checker c;
  Rng rng(101);
  for (int trial = 0; trial < 1000; ++trial) {
    const int ch = static_cast<int>(rng.integer(1, 4));
    const int hw = static_cast<int>(rng.integer(2, 6));

    // Feature-level gating: Sigmoid(e) ⊙ x + x.
    Tensor e = random_tensor({ch, hw, hw}, rng);
    Tensor x = random_tensor({ch, hw, hw}, rng);
    Tensor y1 = transfer::features(e, x);
    for (Eigen::Index i = 0; i < x.data.size(); ++i)
      c.expect(std::abs(y1.data[i] - (sigmoid(e.data[i]) * x.data[i] + x.data[i])) < 1e-12,
               "feature gating oracle");

    // Image-level gating on tanh-range inputs.
    Tensor edge = random_tensor({3, hw, hw}, rng);
    edge.data = edge.data.tanh();
    Tensor inter = random_tensor({3, hw, hw}, rng);
    inter.data = inter.data.tanh();
    Tensor y2 = transfer::image(edge, inter);
    for (Eigen::Index i = 0; i < inter.data.size(); ++i)
      c.expect(std::abs(y2.data[i] - (sigmoid(edge.data[i]) * inter.data[i] + inter.data[i])) <
                   1e-12,
               "image gating oracle");

    // Pooled scaling factors: Sigmoid of the per-channel spatial mean.
    Tensor f = random_tensor({ch, hw, hw}, rng);
    Tape t(false);
    Tensor gamma = t.value(t.sigmoid(t.global_avg_pool(t.leaf(f))));
    for (int k = 0; k < ch; ++k) {
      double mean = 0;
      for (int j = 0; j < hw * hw; ++j) mean += f.data[k * hw * hw + j] / (hw * hw);
      c.expect(std::abs(gamma.data[k] - sigmoid(mean)) < 1e-12, "pooled scaling oracle");
    }

    // Residual channel reweighting: y[c] = x[c] * gamma[c] + x[c].
    Tensor g({ch});
    for (int k = 0; k < ch; ++k) g.data[k] = rng.uniform();
    Tape t2(false);
    Tensor y4 = t2.value(t2.channel_affine(t2.leaf(f), t2.leaf(g)));
    for (int k = 0; k < ch; ++k)
      for (int j = 0; j < hw * hw; ++j) {
        const double v = f.data[k * hw * hw + j];
        c.expect(std::abs(y4.data[k * hw * hw + j] - (v * g.data[k] + v)) < 1e-12,
                 "channel reweighting oracle");
      }
  }
  return c.failures == 0;
}

// ---------------------------------------------------------------------------
// 2. Analytic loss values, exact to 1e-9.
// ---------------------------------------------------------------------------
bool criterion2() {
  Checker c;
  auto half = [](Tape& t, int n = 2, int hw = 4) {
    std::vector<int> out;
    for (int i = 0; i < n; ++i) out.push_back(t.leaf(Tensor::full({1, hw, hw}, 0.5)));
    return out;
  };

  Tape t1;
  c.expect(std::abs(t1.value(edge_adv_d_term(t1, half(t1), half(t1))).data[0] -
                    2.0 * std::log(0.5)) < 1e-9,
           "edge objective at D==0.5");

  Tape t2;
  c.expect(std::abs(t2.value(image_adv_d_term(t2, half(t2), half(t2), half(t2), 2.0)).data[0] -
                    6.0 * std::log(0.5)) < 1e-9,
           "image objective at D==0.5, lambda 2");

  LossWeights w;  // lambda_c=1, lambda_f=10, lambda_p=10, lambda=2
  LossReport ones;
  ones.adv_image = 1;
  ones.fm_edge = ones.fm_inter = ones.fm_final = 1;
  ones.perc_edge = ones.perc_inter = ones.perc_final = 1;
  c.expect(std::abs(total_objective(ones, w).total - 81.0) < 1e-9, "all-ones total");
  return c.failures == 0;
}

// ---------------------------------------------------------------------------
// 3. Gradient checks against central finite differences, rel err < 1e-4.
// ---------------------------------------------------------------------------
bool criterion3() {
  Checker c;
  Rng rng(303);
  const double tol = 1e-4;

  // Feature-level transfer, through both arguments.
  Tensor e = random_tensor({2, 6, 6}, rng);
  Tensor x = random_tensor({2, 6, 6}, rng);
  c.expect(fd_check(e, [&](Tape& t, int l) {
             int y = transfer::features(t, l, t.leaf(x));
             return t.mean_all(t.mul(y, y));
           }) < tol,
           "feature transfer grad wrt edge");
  c.expect(fd_check(x, [&](Tape& t, int l) {
             int y = transfer::features(t, t.leaf(e), l);
             return t.mean_all(t.mul(y, y));
           }) < tol,
           "feature transfer grad wrt image");

  // Image-level transfer.
  c.expect(fd_check(x, [&](Tape& t, int l) {
             int y = transfer::image(t, t.leaf(e), l);
             return t.mean_all(t.mul(y, y));
           }) < tol,
           "image transfer grad");

  // SPADE residual block.
  {
    ParamStore ps;
    Rng init(31);
    SpadeResBlock blk(ps, "blk", 2, 2, 3, 4, init);
    Tensor in = random_tensor({2, 8, 8}, rng, 0.5);
    Tensor label = random_tensor({3, 8, 8}, rng, 0.5);
    c.expect(fd_check(in,
                      [&](Tape& t, int l) {
                        Bound b = bind(t, ps);
                        int y = blk.forward(b, l, t.leaf(label));
                        return t.mean_all(t.mul(y, t.sigmoid(y)));
                      },
                      1e-6) < tol,
             "spade block grad");
  }

  // Semantic preserving module, end to end through the intermediate image.
  {
    GeneratorConfig g;
    g.num_classes = 4;
    g.feature_channels = 4;
    ParamStore ps;
    Rng init(32);
    SemanticPreserve sp(ps, g, init);
    Tensor layout = random_layout(4, 8, 5);
    Tensor edge = random_tensor({3, 8, 8}, rng, 0.5);
    Tensor feat = random_tensor({4, 8, 8}, rng, 0.5);
    Tensor inter = random_tensor({3, 8, 8}, rng, 0.5);
    c.expect(fd_check(inter,
                      [&](Tape& t, int l) {
                        Bound b = bind(t, ps);
                        auto out = sp.forward(b, t.leaf(layout), t.leaf(edge), l, t.leaf(feat));
                        return t.mean_all(t.mul(out.image, out.image));
                      },
                      1e-6) < tol,
             "semantic preserving grad");
  }

  // Both adversarial generator terms, through the score squashing.
  Tensor logits = random_tensor({1, 4, 4}, rng);
  c.expect(fd_check(logits,
                    [](Tape& t, int l) { return adv_g_term(t, logits_to_scores(t, {l})); },
                    1e-6) < tol,
           "edge-modality generator adversarial grad");
  Tensor other = random_tensor({1, 4, 4}, rng);
  c.expect(fd_check(logits,
                    [&](Tape& t, int l) {
                      return adv_g_term(t, logits_to_scores(t, {l, t.leaf(other)}));
                    },
                    1e-6) < tol,
           "image-modality generator adversarial grad");
  return c.failures == 0;
}

// ---------------------------------------------------------------------------
// 4. Structural ablation: four variants train 300 steps; the full model's
//    toy-FID is no worse than the plain encoder+image-branch variant's.
// ---------------------------------------------------------------------------
bool criterion4() {
  const std::string root = fs::temp_directory_path() / "acceptance_ablate";
  fs::remove_all(root);
  Config cfg;
  cfg.set("data.num_classes", "4");
  cfg.set("data.size", "64x64");
  cfg.set("data.count", "64");
  cfg.set("data.seed", "7");
  cfg.set("train.batch_size", "8");
  cfg.set("train.seed", "7");
  cfg.set("model.C", "8");
  cfg.set("nn.spade_hidden", "16");
  cfg.set("disc.base", "8");
  cfg.set("ablate.steps", "300");
  cfg.set("ablate.eval_count", "64");

  pipeline_make_dataset(cfg, root + "/data");
  nlohmann::json report = pipeline_ablate(cfg, root + "/data", root + "/run");

  double fid_plain = -1, fid_full = -1;
  for (const auto& v : report.at("variants")) {
    const std::string name = v.at("variant");
    const double f = v.at("fid").at("fid").get<double>();
    std::fprintf(stderr, "  variant %-12s fid %.6f\n", name.c_str(), f);
    if (name == "E+Gi") fid_plain = f;
    if (name == "full") fid_full = f;
  }
  fs::remove_all(root);
  return fid_plain >= 0 && fid_full >= 0 && fid_full <= fid_plain;
}

// ---------------------------------------------------------------------------
// 5. Edge-branch learnability: overfitting 16 samples for 2000 steps drives
//    the edge MAE below 60% of its starting value.
// ---------------------------------------------------------------------------
bool criterion5() {
  const std::string dir = fs::temp_directory_path() / "acceptance_overfit";
  fs::remove_all(dir);
  ToyParams p;
  p.seed = 11;
  p.count = 16;
  p.num_classes = 4;
  p.height = p.width = 32;
  DatasetManifest manifest = make_toy_dataset(p, dir);

  Config cfg;
  cfg.set("data.num_classes", "4");
  cfg.set("data.size", "32x32");
  cfg.set("model.C", "8");
  cfg.set("model.n", "2");
  cfg.set("nn.spade_hidden", "16");
  cfg.set("disc.base", "8");
  cfg.set("train.batch_size", "4");
  cfg.set("train.seed", "11");
  cfg.set("train.epochs", "1000");  // keep the rate constant for the whole run
  cfg.set("train.decay_start_epoch", "999");
  Trainer trainer(cfg);

  std::vector<int> all;
  for (int i = 0; i < 16; ++i) all.push_back(i);
  std::vector<Sample> samples = load_batch(manifest, all, {});

  auto edge_mae = [&] {
    double mae = 0;
    for (const auto& s : samples) {
      GeneratedImages g = trainer.generate(s.layout.data);
      mae += (g.edge.data - s.edge.data).abs().mean() / samples.size();
    }
    return mae;
  };

  const double before = edge_mae();
  trainer.run(manifest, 2000);
  const double after = edge_mae();
  std::fprintf(stderr, "  edge MAE %.6f -> %.6f (ratio %.3f)\n", before, after, after / before);
  fs::remove_all(dir);
  return after < 0.6 * before;
}

// ---------------------------------------------------------------------------
// 6. Phase isolation and bit-exact determinism.
// ---------------------------------------------------------------------------
bool criterion6() {
  Checker c;
  Config cfg;
  cfg.set("data.num_classes", "4");
  cfg.set("data.size", "16x16");
  cfg.set("model.C", "4");
  cfg.set("model.n", "2");
  cfg.set("nn.spade_hidden", "4");
  cfg.set("disc.base", "4");
  cfg.set("train.batch_size", "2");
  cfg.set("train.seed", "21");

  const std::string dir = fs::temp_directory_path() / "acceptance_det";
  fs::remove_all(dir);
  ToyParams p;
  p.seed = 21;
  p.count = 4;
  p.num_classes = 4;
  p.height = p.width = 16;
  DatasetManifest manifest = make_toy_dataset(p, dir);
  std::vector<Sample> batch = load_batch(manifest, {0, 1}, {});

  // Checksums prove each network is frozen during the other's update.
  Trainer t(cfg);
  const uint64_t g0 = t.gen_params().checksum();
  const uint64_t d0 = t.disc_params().checksum();
  t.train_step(batch, true, false);
  c.expect(t.gen_params().checksum() != g0, "generator updated in its phase");
  c.expect(t.disc_params().checksum() == d0, "discriminator frozen in the generator phase");
  const uint64_t g1 = t.gen_params().checksum();
  t.train_step(batch, false, true);
  c.expect(t.gen_params().checksum() == g1, "generator frozen in the discriminator phase");
  c.expect(t.disc_params().checksum() != d0, "discriminator updated in its phase");

  // Identical seeds reproduce the loss log bit for bit.
  auto run_once = [&](const std::string& log) {
    Trainer tr(cfg);
    std::vector<double> losses;
    tr.run(manifest, 5, log, [&](const StepReport& r) {
      losses.push_back(r.gen.total);
      losses.push_back(r.disc);
    });
    return losses;
  };
  auto a = run_once(dir + "/log_a.csv");
  auto b = run_once(dir + "/log_b.csv");
  c.expect(a == b, "loss values identical at 64-bit");
  auto slurp = [](const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    return std::string(std::istreambuf_iterator<char>(in), {});
  };
  const std::string la = slurp(dir + "/log_a.csv");
  c.expect(!la.empty() && la == slurp(dir + "/log_b.csv"), "log files byte-identical");
  fs::remove_all(dir);
  return c.failures == 0;
}

// ---------------------------------------------------------------------------
// 7. FID correctness.
// ---------------------------------------------------------------------------
bool criterion7() {
  Checker c;
  auto diag = [](const Eigen::VectorXd& mean, const Eigen::VectorXd& var) {
    GaussianStats s;
    s.mean = mean;
    s.covariance = var.asDiagonal();
    s.sample_count = 1000;
    return s;
  };

  Eigen::VectorXd mu(3), var(3);
  mu << 1, -2, 0.5;
  var << 1.0, 2.0, 0.25;
  c.expect(fid(diag(mu, var), diag(mu, var)) < 1e-8, "identical distributions");

  Eigen::VectorXd m0(1), m1(1), v1(1);
  m0 << 0;
  m1 << 1;
  v1 << 1;
  c.expect(std::abs(fid(diag(m0, v1), diag(m1, v1)) - 1.0) < 1e-8, "1-D analytic case");

  Rng rng(707);
  for (int trial = 0; trial < 50; ++trial) {
    const int d = 4;
    Eigen::VectorXd a(d), b(d), va(d), vb(d);
    for (int i = 0; i < d; ++i) {
      a[i] = rng.normal();
      b[i] = rng.normal();
      va[i] = rng.uniform(0.1, 3.0);
      vb[i] = rng.uniform(0.1, 3.0);
    }
    double expect = (a - b).squaredNorm();
    for (int i = 0; i < d; ++i) {
      const double diff = std::sqrt(va[i]) - std::sqrt(vb[i]);
      expect += diff * diff;
    }
    c.expect(std::abs(fid(diag(a, va), diag(b, vb)) - expect) < 1e-8, "diagonal oracle");
  }
  return c.failures == 0;
}

// ---------------------------------------------------------------------------
// 8. Calibration-mode spectral normalization lands every weight's exact
//    largest singular value inside [1 - 1e-3, 1 + 1e-3].
// ---------------------------------------------------------------------------
bool criterion8() {
  Checker c;
  GeneratorConfig g;
  g.num_classes = 4;
  g.feature_channels = 8;
  g.spade_hidden = 8;
  ParamStore gp, dp;
  Rng ginit(81), dinit(82);
  Generator gen(gp, g, ginit);
  DiscriminatorConfig dc;
  dc.num_classes = 4;
  dc.base_channels = 8;
  Discriminator disc(dp, dc, dinit);

  Rng rng(83);
  for (ParamStore* ps : {&gp, &dp}) {
    ps->calibrate_spectral(1000, rng);
    for (int i = 0; i < ps->count(); ++i) {
      const Param& p = ps->param(i);
      if (!p.spectral) continue;
      const double sn = exact_spectral_norm(p);
      c.expect(sn >= 1.0 - 1e-3 && sn <= 1.0 + 1e-3, "singular value inside the unit band");
    }
  }
  return c.failures == 0;
}

// ---------------------------------------------------------------------------
// 9. Learning-rate schedule is exact at the pinned epochs.
// ---------------------------------------------------------------------------
bool criterion9() {
  Checker c;
  TrainConfig cfg;  // 200 epochs, decay from 100
  const double base = 2e-4;
  c.expect(lr_at_epoch(cfg, 0, base) == base, "epoch 0");
  c.expect(lr_at_epoch(cfg, 99, base) == base, "epoch 99");
  c.expect(lr_at_epoch(cfg, 100, base) == base, "epoch 100");
  c.expect(lr_at_epoch(cfg, 150, base) == 0.5 * base, "epoch 150");
  c.expect(lr_at_epoch(cfg, 200, base) == 0.0, "epoch 200");
  return c.failures == 0;
}

// ---------------------------------------------------------------------------
// 10. The transfer module owns no parameters.
// ---------------------------------------------------------------------------
bool criterion10() {
  GeneratorConfig g;
  g.num_classes = 4;
  g.feature_channels = 8;
  g.spade_hidden = 8;
  ParamStore gp, dp;
  Rng ginit(91), dinit(92);
  Generator gen(gp, g, ginit);
  DiscriminatorConfig dc;
  dc.num_classes = 4;
  dc.base_channels = 8;
  Discriminator disc(dp, dc, dinit);
  ParamBreakdown pb = count_parameters(gp, dp);
  return pb.transfer == 0 && pb.generator_total > 0;
}

bool run_criterion(int k) {
  switch (k) {
    case 1: return criterion1();
    case 2: return criterion2();
    case 3: return criterion3();
    case 4: return criterion4();
    case 5: return criterion5();
    case 6: return criterion6();
    case 7: return criterion7();
    case 8: return criterion8();
    case 9: return criterion9();
    case 10: return criterion10();
    default: throw std::invalid_argument("unknown criterion " + std::to_string(k));
  }
}

}  // namespace

int main(int argc, char** argv) {
  int only = 0;
  for (int i = 1; i < argc; ++i)
    if (std::strcmp(argv[i], "--criterion") == 0 && i + 1 < argc) only = std::atoi(argv[i + 1]);

  int failures = 0;
  for (int k = 1; k <= 10; ++k) {
    if (only != 0 && k != only) continue;
    bool ok = false;
    try {
      ok = run_criterion(k);
    } catch (const std::exception& e) {
      std::fprintf(stderr, "  criterion %d threw: %s\n", k, e.what());
    }
    std::printf("CRITERION %d: %s\n", k, ok ? "PASS" : "FAIL");
    if (!ok) ++failures;
  }
  return failures;
}
