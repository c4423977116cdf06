#include "pipeline.hpp"

#include "data/dataset.hpp"
#include "eval/metrics.hpp"
#include "eval/report.hpp"
#include "train/trainer.hpp"

#include <algorithm>
#include <filesystem>
#include <vector>

namespace edgegan {

namespace fs = std::filesystem;

namespace {

ToyParams toy_params_from(const Config& cfg) {
  ToyParams p;
  p.seed = static_cast<uint64_t>(cfg.get_int("data.seed", 7));
  p.count = cfg.get_int("data.count", 64);
  p.num_classes = cfg.get_int("data.num_classes", 4);
  const auto [h, w] = cfg.get_size("data.size", {64, 64});
  p.height = h;
  p.width = w;
  return p;
}

CannyParams canny_from(const Config& cfg) {
  return {cfg.get_real("data.canny.sigma", 1.0), cfg.get_real("data.canny.low", 0.1),
          cfg.get_real("data.canny.high", 0.2)};
}

DatasetManifest manifest_from(const Config& cfg, const std::string& data_dir) {
  const auto [h, w] = cfg.get_size("data.size", {64, 64});
  return load_manifest(data_dir + "/manifest.tsv", cfg.get_int("data.num_classes", 4), h, w);
}

std::vector<std::string> sorted_files(const std::string& dir, const std::string& ext) {
  std::vector<std::string> out;
  if (!fs::is_directory(dir)) throw std::runtime_error("not a directory: " + dir);
  for (const auto& e : fs::directory_iterator(dir))
    if (e.path().extension() == ext) out.push_back(e.path().string());
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace

int pipeline_make_dataset(const Config& cfg, const std::string& out_dir) {
  const ToyParams p = toy_params_from(cfg);
  make_toy_dataset(p, out_dir);
  return p.count;
}

nlohmann::json pipeline_train(const Config& cfg, const std::string& data_dir,
                              const std::string& out_dir) {
  fs::create_directories(out_dir);
  DatasetManifest manifest = manifest_from(cfg, data_dir);
  Trainer trainer(cfg);
  const std::string ckpt = out_dir + "/checkpoint.egc";
  if (fs::exists(ckpt)) trainer.load_checkpoint(ckpt);
  const int64_t max_steps = cfg.get_int("train.max_steps", 100);
  StepReport last;
  trainer.run(manifest, max_steps, out_dir + "/log.csv",
              [&](const StepReport& r) { last = r; });
  trainer.save_checkpoint(ckpt);
  return {{"checkpoint", ckpt},
          {"steps", trainer.iteration()},
          {"epoch", trainer.epoch()},
          {"last_total", last.gen.total}};
}

nlohmann::json pipeline_generate(const Config& cfg, const std::string& checkpoint,
                                 const std::string& labels_dir, const std::string& out_dir) {
  fs::create_directories(out_dir);
  Trainer trainer(cfg);
  trainer.load_checkpoint(checkpoint);
  const int num_classes = cfg.get_int("data.num_classes", 4);
  const auto [h, w] = cfg.get_size("data.size", {64, 64});
  const bool aux = cfg.get_bool("generate.write_aux", false);
  int count = 0;
  for (const std::string& path : sorted_files(labels_dir, ".pgm")) {
    GrayBytes lab = resize_nearest(read_pgm(path), h, w);
    SemanticLayout layout = encode_onehot(lab, num_classes);
    GeneratedImages g = trainer.generate(layout.data);
    const std::string stem = fs::path(path).stem().string();
    write_ppm(out_dir + "/" + stem + "_final.ppm", tensor_to_rgb(g.final_image));
    if (aux) {
      if (g.edge.size() > 0) write_ppm(out_dir + "/" + stem + "_edge.ppm", tensor_to_rgb(g.edge));
      write_ppm(out_dir + "/" + stem + "_inter.ppm", tensor_to_rgb(g.intermediate));
    }
    ++count;
  }
  if (count == 0) throw std::runtime_error("generate: no .pgm label maps in " + labels_dir);
  return {{"generated", count}, {"out_dir", out_dir}};
}

nlohmann::json pipeline_evaluate(const Config& cfg, const std::string& real_dir,
                                 const std::string& fake_dir) {
  PerceptualExtractor extractor = PerceptualExtractor::from_config(cfg);
  std::vector<Tensor> real, fake;
  for (const auto& p : sorted_files(real_dir, ".ppm")) real.push_back(rgb_to_tensor(read_ppm(p)));
  for (const auto& p : sorted_files(fake_dir, ".ppm")) fake.push_back(rgb_to_tensor(read_ppm(p)));
  if (real.empty() || fake.empty())
    throw std::runtime_error("evaluate: need .ppm images in both directories");
  nlohmann::json out = to_json(fid_between_sets(extractor, real, fake));

  // Segmentation agreement from externally supplied prediction label maps.
  const std::string gt_dir = cfg.get_str("eval.gt_labels", "");
  const std::string pred_dir = cfg.get_str("eval.pred_labels", "");
  if (!gt_dir.empty() && !pred_dir.empty()) {
    const int n = cfg.get_int("data.num_classes", 4);
    auto gts = sorted_files(gt_dir, ".pgm");
    auto preds = sorted_files(pred_dir, ".pgm");
    if (gts.size() != preds.size())
      throw std::runtime_error("evaluate: gt/prediction label count mismatch");
    ConfusionMatrix cm(n);
    for (size_t i = 0; i < gts.size(); ++i) {
      GrayBytes g = read_pgm(gts[i]);
      GrayBytes p = read_pgm(preds[i]);
      if (g.h != p.h || g.w != p.w)
        throw std::runtime_error("evaluate: label size mismatch at " + gts[i]);
      for (size_t j = 0; j < g.pixels.size(); ++j) cm.add(g.pixels[j], p.pixels[j]);
    }
    const auto [miou, acc] = miou_acc(cm);
    out["miou"] = miou;
    out["acc"] = acc;
  }
  return out;
}

nlohmann::json pipeline_ablate(const Config& cfg, const std::string& data_dir,
                               const std::string& out_dir) {
  fs::create_directories(out_dir);
  DatasetManifest manifest = manifest_from(cfg, data_dir);
  const int steps = cfg.get_int("ablate.steps", 300);
  const int eval_count = std::min<int>(cfg.get_int("ablate.eval_count", 64),
                                       static_cast<int>(manifest.entries.size()));
  PerceptualExtractor extractor = PerceptualExtractor::from_config(cfg);
  const CannyParams canny = canny_from(cfg);

  std::vector<int> eval_idx(static_cast<size_t>(eval_count));
  for (int i = 0; i < eval_count; ++i) eval_idx[static_cast<size_t>(i)] = i;
  std::vector<Sample> eval_set = load_batch(manifest, eval_idx, canny);
  std::vector<Tensor> real_images;
  for (const auto& s : eval_set) real_images.push_back(s.image);

  struct Variant {
    const char* name;
    bool ge, gt, gs;
  };
  const Variant variants[] = {{"E+Gi", false, false, false},
                              {"E+Gi+Ge", true, false, false},
                              {"E+Gi+Ge+Gt", true, true, false},
                              {"full", true, true, true}};

  nlohmann::json report = nlohmann::json::array();
  for (const auto& v : variants) {
    Config vc = cfg;
    vc.set("model.use_Ge", v.ge ? "true" : "false");
    vc.set("model.use_Gt", v.gt ? "true" : "false");
    vc.set("model.use_Gs", v.gs ? "true" : "false");
    Trainer trainer(vc);
    trainer.run(manifest, steps, std::string(out_dir) + "/log_" + v.name + ".csv");
    const std::string ckpt = std::string(out_dir) + "/checkpoint_" + v.name + ".egc";
    trainer.save_checkpoint(ckpt);

    std::vector<Tensor> fake_images;
    double edge_mae = 0;
    for (const auto& s : eval_set) {
      GeneratedImages g = trainer.generate(s.layout.data);
      fake_images.push_back(g.final_image);
      if (g.edge.size() > 0) edge_mae += (g.edge.data - s.edge.data).abs().mean() / eval_count;
    }
    FidReport f = fid_between_sets(extractor, real_images, fake_images);
    ParamBreakdown pb = count_parameters(trainer.gen_params(), trainer.disc_params());
    nlohmann::json entry = {{"variant", v.name},
                            {"steps", steps},
                            {"fid", to_json(f)},
                            {"params", to_json(pb)},
                            {"checkpoint", ckpt}};
    if (v.ge) entry["edge_mae"] = edge_mae;
    report.push_back(std::move(entry));
  }
  return {{"variants", report}};
}

nlohmann::json pipeline_figures(const Config& cfg, const std::string& checkpoint,
                                const std::string& data_dir, const std::string& out_path) {
  DatasetManifest manifest = manifest_from(cfg, data_dir);
  Trainer trainer(cfg);
  trainer.load_checkpoint(checkpoint);
  const int count =
      std::min<int>(cfg.get_int("figures.count", 4), static_cast<int>(manifest.entries.size()));
  std::vector<int> idx(static_cast<size_t>(count));
  for (int i = 0; i < count; ++i) idx[static_cast<size_t>(i)] = i;
  std::vector<Sample> samples = load_batch(manifest, idx, canny_from(cfg));
  std::vector<FigureSample> figs;
  for (const auto& s : samples) {
    GeneratedImages g = trainer.generate(s.layout.data);
    FigureSample f;
    f.layout = s.layout;
    f.edge = g.edge.size() > 0 ? g.edge : Tensor::full(s.image.shape, -1.0);
    f.intermediate = g.intermediate;
    f.final_image = g.final_image;
    f.ground_truth = s.image;
    figs.push_back(std::move(f));
  }
  emit_figure_grid(figs, out_path);
  return {{"figure", out_path}, {"samples", count}};
}

nlohmann::json pipeline_params(const Config& cfg) {
  ParamStore gp, dp;
  Rng gi(1), di(2);
  Generator gen(gp, GeneratorConfig::from(cfg), gi);
  Discriminator disc(dp, DiscriminatorConfig::from(cfg), di);
  return to_json(count_parameters(gp, dp));
}

}  // namespace edgegan
