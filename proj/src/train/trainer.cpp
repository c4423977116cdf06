#include "train/trainer.hpp"

#include "core/archive.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>
#include <sstream>

namespace edgegan {

TrainConfig TrainConfig::from(const Config& cfg) {
  TrainConfig t;
  t.epochs = cfg.get_int("train.epochs", t.epochs);
  t.decay_start_epoch = cfg.get_int("train.decay_start_epoch", t.decay_start_epoch);
  t.batch_size = cfg.get_int("train.batch_size", t.batch_size);
  t.beta1 = cfg.get_real("train.beta1", t.beta1);
  t.beta2 = cfg.get_real("train.beta2", t.beta2);
  t.base_lr_g = cfg.get_real("train.base_lr_g", t.base_lr_g);
  t.base_lr_d = cfg.get_real("train.base_lr_d", t.base_lr_d);
  t.power_iterations = cfg.get_int("nn.power_iterations", t.power_iterations);
  t.seed = static_cast<uint64_t>(cfg.get_int("train.seed", 0));
  require(t.decay_start_epoch < t.epochs, "train: decay_start_epoch must precede epochs");
  require(t.beta1 >= 0 && t.beta1 < 1 && t.beta2 >= 0 && t.beta2 < 1,
          "train: betas must lie in [0,1)");
  return t;
}

double lr_at_epoch(const TrainConfig& cfg, int epoch, double base_lr) {
  if (epoch < cfg.decay_start_epoch) return base_lr;
  if (epoch >= cfg.epochs) return 0.0;
  return base_lr * static_cast<double>(cfg.epochs - epoch) /
         static_cast<double>(cfg.epochs - cfg.decay_start_epoch);
}

namespace {

LossWeights weights_from(const Config& cfg) {
  LossWeights w;
  w.lambda_c = cfg.get_real("loss.lambda_c", w.lambda_c);
  w.lambda_f = cfg.get_real("loss.lambda_f", w.lambda_f);
  w.lambda_p = cfg.get_real("loss.lambda_p", w.lambda_p);
  w.lambda = cfg.get_real("loss.lambda", w.lambda);
  return w;
}

void check_finite(const LossReport& r) {
  const double terms[] = {r.adv_edge, r.adv_image, r.fm_edge,   r.fm_inter, r.fm_final,
                          r.perc_edge, r.perc_inter, r.perc_final, r.total};
  const char* names[] = {"adv_edge", "adv_image", "fm_edge",   "fm_inter", "fm_final",
                         "perc_edge", "perc_inter", "perc_final", "total"};
  for (size_t i = 0; i < sizeof(terms) / sizeof(terms[0]); ++i)
    if (!std::isfinite(terms[i])) {
      std::ostringstream os;
      os << "train: non-finite loss term " << names[i] << "; full report:";
      for (size_t j = 0; j < sizeof(terms) / sizeof(terms[0]); ++j)
        os << " " << names[j] << "=" << terms[j];
      throw std::runtime_error(os.str());
    }
}

}  // namespace

Trainer::Trainer(const Config& cfg)
    : cfg_(cfg),
      tcfg_(TrainConfig::from(cfg)),
      weights_(weights_from(cfg)),
      gen_([&] {
        // Parameter registration happens in the member initializers below;
        // the generator and discriminator share nothing but the layout input.
        Rng init(tcfg_.seed ^ 0xC0FFEE);
        return Generator(gp_, GeneratorConfig::from(cfg), init);
      }()),
      disc_([&] {
        Rng init(tcfg_.seed ^ 0xD15C);
        return Discriminator(dp_, DiscriminatorConfig::from(cfg), init);
      }()),
      perc_(PerceptualExtractor::from_config(cfg)),
      power_rng_(tcfg_.seed ^ 0x5EC7) {
  const auto [h, w] = cfg.get_size("data.size", {64, 64});
  require(h >= disc_.min_input_size() && w >= disc_.min_input_size(),
          "train: data.size below the discriminator's receptive-field minimum");
}

Trainer::DiscPass Trainer::disc_eval(const Tensor& layout, const Tensor& candidate) const {
  Tape tape(false);
  Bound db = bind(tape, dp_);
  int s = tape.leaf(layout);
  int c = tape.leaf(candidate);
  auto out = disc_.forward(tape, db, s, c);
  DiscPass p;
  for (int f : out.features) p.features.push_back(tape.value(f));
  for (int l : out.logits) p.scores.push_back(tape.value(tape.sigmoid(l)));
  return p;
}

StepReport Trainer::train_step(const std::vector<Sample>& batch, bool update_g, bool update_d) {
  require(!batch.empty(), "train_step: empty batch");
  const double inv_b = 1.0 / static_cast<double>(batch.size());
  StepReport rep;
  rep.lr_g = lr_at_epoch(tcfg_, epoch_, tcfg_.base_lr_g);
  rep.lr_d = lr_at_epoch(tcfg_, epoch_, tcfg_.base_lr_d);

  // ---- generator phase (discriminator frozen) ----
  if (update_g) {
    gp_.power_iterate(tcfg_.power_iterations, power_rng_);
    std::vector<Tensor> g_grads;
    for (const Sample& sample : batch) {
      // Real-side discriminator features are constants for feature matching.
      DiscPass real_edge = disc_eval(sample.layout.data, sample.edge);
      DiscPass real_img = disc_eval(sample.layout.data, sample.image);

      Tape tape(true);
      Bound gb = bind(tape, gp_);
      Bound db = bind(tape, dp_);
      GenOutputs out = gen_.forward(tape, gb, sample.layout.data);
      const bool has_edge = gen_.config().use_edge;
      const bool has_final = gen_.config().use_enhance;

      LossReport parts;
      std::vector<int> loss_nodes;
      std::vector<double> loss_w;
      auto add_term = [&](int node, double w, double* slot) {
        *slot = tape.value(node).data[0];
        loss_nodes.push_back(node);
        loss_w.push_back(w);
      };

      auto fake_scores = [&](int candidate) {
        auto d = disc_.forward(tape, db, out.layout, candidate);
        return std::make_pair(logits_to_scores(tape, d.logits), d.features);
      };
      auto leaves = [&](const std::vector<Tensor>& ts) {
        std::vector<int> ids;
        for (const auto& t : ts) ids.push_back(tape.leaf(t));
        return ids;
      };

      int real_edge_leaf = tape.leaf(sample.edge);
      int real_img_leaf = tape.leaf(sample.image);

      if (has_edge) {
        auto [scores, feats] = fake_scores(out.edge_map);
        add_term(adv_g_term(tape, scores), weights_.lambda_c, &parts.adv_edge);
        add_term(feature_matching_loss(tape, leaves(real_edge.features), feats), weights_.lambda_f,
                 &parts.fm_edge);
        add_term(perceptual_loss(tape, perc_, real_edge_leaf, out.edge_map), weights_.lambda_p,
                 &parts.perc_edge);
      }
      {
        auto [scores, feats] = fake_scores(out.intermediate);
        int adv = adv_g_term(tape, scores);
        int adv_total = adv;
        if (has_final) {
          auto [fscores, ffeats] = fake_scores(out.final_image);
          adv_total = tape.weighted_sum({adv, adv_g_term(tape, fscores)}, {1.0, weights_.lambda});
          add_term(feature_matching_loss(tape, leaves(real_img.features), ffeats),
                   weights_.lambda_f * weights_.lambda, &parts.fm_final);
          add_term(perceptual_loss(tape, perc_, real_img_leaf, out.final_image),
                   weights_.lambda_p * weights_.lambda, &parts.perc_final);
        }
        add_term(adv_total, weights_.lambda_c, &parts.adv_image);
        add_term(feature_matching_loss(tape, leaves(real_img.features), feats), weights_.lambda_f,
                 &parts.fm_inter);
        add_term(perceptual_loss(tape, perc_, real_img_leaf, out.intermediate), weights_.lambda_p,
                 &parts.perc_inter);
      }

      int total = tape.weighted_sum(loss_nodes, loss_w);
      LossReport full = total_objective(parts, weights_);
      check_finite(full);
      rep.gen.adv_edge += inv_b * full.adv_edge;
      rep.gen.adv_image += inv_b * full.adv_image;
      rep.gen.fm_edge += inv_b * full.fm_edge;
      rep.gen.fm_inter += inv_b * full.fm_inter;
      rep.gen.fm_final += inv_b * full.fm_final;
      rep.gen.perc_edge += inv_b * full.perc_edge;
      rep.gen.perc_inter += inv_b * full.perc_inter;
      rep.gen.perc_final += inv_b * full.perc_final;
      rep.gen.total += inv_b * full.total;

      tape.backward(total);
      accumulate_grads(g_grads, collect_grads(tape, gb), inv_b);
    }
    gp_.adam_step(g_grads, rep.lr_g, tcfg_.beta1, tcfg_.beta2, tcfg_.adam_eps, ++g_updates_);
  }

  // ---- discriminator phase (generator frozen) ----
  if (update_d) {
    dp_.power_iterate(tcfg_.power_iterations, power_rng_);
    std::vector<Tensor> d_grads;
    for (const Sample& sample : batch) {
      GeneratedImages fake = generate(sample.layout.data);

      Tape tape(true);
      Bound db = bind(tape, dp_);
      int layout = tape.leaf(sample.layout.data);
      auto scores_of = [&](const Tensor& cand) {
        auto d = disc_.forward(tape, db, layout, tape.leaf(cand));
        return logits_to_scores(tape, d.logits);
      };

      std::vector<int> terms;
      if (gen_.config().use_edge)
        terms.push_back(
            edge_adv_d_term(tape, scores_of(sample.edge), scores_of(fake.edge)));
      terms.push_back(image_adv_d_term(
          tape, scores_of(sample.image), scores_of(fake.intermediate),
          gen_.config().use_enhance ? scores_of(fake.final_image) : std::vector<int>{},
          weights_.lambda));
      int d_value = tape.weighted_sum(terms, std::vector<double>(terms.size(), 1.0));
      rep.disc += inv_b * tape.value(d_value).data[0];
      int d_loss = tape.weighted_sum({d_value}, {-1.0});  // ascend the objective
      if (!std::isfinite(tape.value(d_loss).data[0]))
        throw std::runtime_error("train: non-finite discriminator loss");

      tape.backward(d_loss);
      accumulate_grads(d_grads, collect_grads(tape, db), inv_b);
    }
    dp_.adam_step(d_grads, rep.lr_d, tcfg_.beta1, tcfg_.beta2, tcfg_.adam_eps, ++d_updates_);
  }

  rep.step = ++iteration_;
  if (steps_per_epoch_ > 0) epoch_ = static_cast<int>(iteration_ / steps_per_epoch_);
  rep.epoch = epoch_;
  return rep;
}

void Trainer::run(const DatasetManifest& manifest, int64_t max_steps, const std::string& log_path,
                  const std::function<void(const StepReport&)>& on_step) {
  require(!manifest.entries.empty(), "train: empty manifest");
  const int n = static_cast<int>(manifest.entries.size());
  steps_per_epoch_ = std::max(1, (n + tcfg_.batch_size - 1) / tcfg_.batch_size);
  CannyParams canny{cfg_.get_real("data.canny.sigma", 1.0), cfg_.get_real("data.canny.low", 0.1),
                    cfg_.get_real("data.canny.high", 0.2)};

  std::ofstream log;
  if (!log_path.empty()) {
    const bool fresh = iteration_ == 0;
    log.open(log_path, std::ios::app);
    if (!log) throw std::runtime_error("train: cannot open log " + log_path);
    if (fresh) log << "step,epoch,lr,adv,fm,perc,total\n";
  }

  std::vector<int> order(static_cast<size_t>(n));
  std::iota(order.begin(), order.end(), 0);
  int64_t done = 0;
  while (done < max_steps) {
    Rng shuffle_rng(tcfg_.seed * 1000003ull + static_cast<uint64_t>(epoch_));
    std::shuffle(order.begin(), order.end(), shuffle_rng.engine());
    for (int64_t b = iteration_ % steps_per_epoch_; b < steps_per_epoch_ && done < max_steps; ++b) {
      std::vector<int> idx;
      for (int i = 0; i < tcfg_.batch_size; ++i)
        idx.push_back(order[static_cast<size_t>((b * tcfg_.batch_size + i) % n)]);
      StepReport rep = train_step(load_batch(manifest, idx, canny));
      ++done;
      if (log) {
        log << rep.step << "," << rep.epoch << "," << rep.lr_g << ","
            << (rep.gen.adv_edge + rep.gen.adv_image) << ","
            << (rep.gen.fm_edge + rep.gen.fm_inter + rep.gen.fm_final) << ","
            << (rep.gen.perc_edge + rep.gen.perc_inter + rep.gen.perc_final) << ","
            << rep.gen.total << "\n";
      }
      if (on_step) on_step(rep);
      if (epoch_ >= tcfg_.epochs) return;
    }
  }
}

GeneratedImages Trainer::generate(const Tensor& layout) const {
  Tape tape(false);
  Bound gb = bind(tape, gp_);
  GenOutputs out = gen_.forward(tape, gb, layout);
  GeneratedImages g;
  if (out.edge_map >= 0) g.edge = tape.value(out.edge_map);
  g.intermediate = tape.value(out.intermediate);
  g.final_image = tape.value(out.final_image);
  return g;
}

namespace {

void store_to_archive(const ParamStore& ps, const std::string& prefix, Archive& a) {
  for (int i = 0; i < ps.count(); ++i) {
    const Param& p = ps.param(i);
    a.tensors.emplace(prefix + p.name, p.value);
    a.tensors.emplace(prefix + p.name + "#m", p.m);
    a.tensors.emplace(prefix + p.name + "#v", p.v);
    if (p.spectral && p.u.size() > 0) {
      a.tensors.emplace(prefix + p.name + "#u",
                        Tensor({p.rows}, Eigen::ArrayXd(p.u.array())));
      a.tensors.emplace(prefix + p.name + "#sv",
                        Tensor({p.cols}, Eigen::ArrayXd(p.sv.array())));
    }
  }
}

void store_from_archive(ParamStore& ps, const std::string& prefix, const Archive& a) {
  for (int i = 0; i < ps.count(); ++i) {
    Param& p = ps.param(i);
    auto fetch = [&](const std::string& suffix) -> const Tensor& {
      auto it = a.tensors.find(prefix + p.name + suffix);
      if (it == a.tensors.end())
        throw std::runtime_error("checkpoint: missing tensor " + prefix + p.name + suffix);
      return it->second;
    };
    const Tensor& v = fetch("");
    require(v.shape == p.value.shape, "checkpoint: shape mismatch for " + p.name);
    p.value = v;
    p.m = fetch("#m");
    p.v = fetch("#v");
    if (p.spectral) {
      auto uit = a.tensors.find(prefix + p.name + "#u");
      if (uit != a.tensors.end()) {
        p.u = Eigen::Map<const Eigen::VectorXd>(uit->second.data.data(), p.rows);
        p.sv = Eigen::Map<const Eigen::VectorXd>(fetch("#sv").data.data(), p.cols);
      }
    }
  }
}

}  // namespace

void Trainer::save_checkpoint(const std::string& path) const {
  Archive a;
  store_to_archive(gp_, "G/", a);
  store_to_archive(dp_, "D/", a);
  a.metadata["epoch"] = epoch_;
  a.metadata["iteration"] = iteration_;
  a.metadata["g_updates"] = g_updates_;
  a.metadata["d_updates"] = d_updates_;
  a.metadata["steps_per_epoch"] = steps_per_epoch_;
  a.metadata["config"] = cfg_.to_string();
  a.save(path);
}

void Trainer::load_checkpoint(const std::string& path) {
  Archive a = Archive::load(path);
  store_from_archive(gp_, "G/", a);
  store_from_archive(dp_, "D/", a);
  epoch_ = a.metadata.value("epoch", 0);
  iteration_ = a.metadata.value("iteration", static_cast<int64_t>(0));
  g_updates_ = a.metadata.value("g_updates", static_cast<int64_t>(0));
  d_updates_ = a.metadata.value("d_updates", static_cast<int64_t>(0));
  steps_per_epoch_ = a.metadata.value("steps_per_epoch", 1);
}

}  // namespace edgegan
