// Command-line front end. Links only the public C API.

#include <edgegan/edgegan.h>

#include <CLI11.hpp>

#include <cstdio>
#include <memory>
#include <string>
#include <vector>

namespace {

struct ContextDeleter {
  void operator()(eg_context* c) const { eg_context_destroy(c); }
};

int finish(eg_context* ctx, eg_status status, const char* json) {
  if (status == EG_OK) {
    if (json) std::puts(json);
    return 0;
  }
  std::fprintf(stderr, "error: %s\n", eg_last_error(ctx));
  return static_cast<int>(status);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Edge guided semantic image synthesis"};
  app.require_subcommand(1);

  std::string config_path;
  std::vector<std::string> overrides;
  app.add_option("-c,--config", config_path, "Configuration file (flat key=value)");
  app.add_option("-s,--set", overrides, "Override, key=value (repeatable)");

  std::string data_dir, out_dir, checkpoint, labels_dir, real_dir, fake_dir, out_path;

  auto* make_data = app.add_subcommand("make-data", "Synthesize the procedural dataset");
  make_data->add_option("--out", out_dir, "Output directory")->required();

  auto* train = app.add_subcommand("train", "Train on a dataset directory");
  train->add_option("--data", data_dir, "Dataset directory (with manifest.tsv)")->required();
  train->add_option("--out", out_dir, "Run directory for checkpoint and log")->required();

  auto* generate = app.add_subcommand("generate", "Generate images from label maps");
  generate->add_option("--checkpoint", checkpoint, "Checkpoint file")->required();
  generate->add_option("--labels", labels_dir, "Directory of *.pgm label maps")->required();
  generate->add_option("--out", out_dir, "Output directory")->required();

  auto* evaluate = app.add_subcommand("evaluate", "Metric report for two image sets");
  evaluate->add_option("--real", real_dir, "Directory of real *.ppm images")->required();
  evaluate->add_option("--fake", fake_dir, "Directory of generated *.ppm images")->required();

  auto* ablate = app.add_subcommand("ablate", "Train and compare the architecture variants");
  ablate->add_option("--data", data_dir, "Dataset directory")->required();
  ablate->add_option("--out", out_dir, "Run directory")->required();

  auto* figures = app.add_subcommand("figures", "Render a qualitative figure grid");
  figures->add_option("--checkpoint", checkpoint, "Checkpoint file")->required();
  figures->add_option("--data", data_dir, "Dataset directory")->required();
  figures->add_option("--out", out_path, "Output image path (.ppm)")->required();

  auto* params = app.add_subcommand("params", "Report per-component parameter counts");

  CLI11_PARSE(app, argc, argv);

  std::unique_ptr<eg_context, ContextDeleter> ctx(eg_context_create());
  if (!ctx) {
    std::fprintf(stderr, "error: out of memory\n");
    return static_cast<int>(EG_ERR_RUNTIME);
  }
  if (!config_path.empty()) {
    if (eg_status s = eg_load_config(ctx.get(), config_path.c_str()); s != EG_OK)
      return finish(ctx.get(), s, nullptr);
  }
  for (const std::string& o : overrides) {
    const auto eq = o.find('=');
    if (eq == std::string::npos) {
      std::fprintf(stderr, "error: override must be key=value: %s\n", o.c_str());
      return static_cast<int>(EG_ERR_CONFIG);
    }
    eg_set_option(ctx.get(), o.substr(0, eq).c_str(), o.substr(eq + 1).c_str());
  }

  const char* json = nullptr;
  eg_status s = EG_ERR_CONFIG;
  if (make_data->parsed()) s = eg_make_dataset(ctx.get(), out_dir.c_str(), &json);
  else if (train->parsed()) s = eg_train(ctx.get(), data_dir.c_str(), out_dir.c_str(), &json);
  else if (generate->parsed())
    s = eg_generate(ctx.get(), checkpoint.c_str(), labels_dir.c_str(), out_dir.c_str(), &json);
  else if (evaluate->parsed()) s = eg_evaluate(ctx.get(), real_dir.c_str(), fake_dir.c_str(), &json);
  else if (ablate->parsed()) s = eg_ablate(ctx.get(), data_dir.c_str(), out_dir.c_str(), &json);
  else if (figures->parsed())
    s = eg_figures(ctx.get(), checkpoint.c_str(), data_dir.c_str(), out_path.c_str(), &json);
  else if (params->parsed()) s = eg_params(ctx.get(), &json);

  return finish(ctx.get(), s, json);
}
