#include "edgegan/edgegan.h"

#include "core/config.hpp"
#include "pipeline.hpp"

#include <exception>
#include <filesystem>
#include <string>

using edgegan::Config;

struct eg_context {
  Config config;
  std::string last_error;
  std::string last_json;
};

namespace {

const char* stash(eg_context* ctx, const nlohmann::json& j, const char** json_out) {
  ctx->last_json = j.dump(2);
  if (json_out) *json_out = ctx->last_json.c_str();
  return ctx->last_json.c_str();
}

// Data problems (missing files/dirs) map to EG_ERR_DATA, config/argument
// problems to EG_ERR_CONFIG, the rest to EG_ERR_RUNTIME.
eg_status classify(const std::string& what) {
  if (what.find("config") != std::string::npos || what.find("override") != std::string::npos)
    return EG_ERR_CONFIG;
  if (what.find("cannot open") != std::string::npos ||
      what.find("missing file") != std::string::npos ||
      what.find("not a directory") != std::string::npos ||
      what.find("manifest") != std::string::npos || what.find("archive") != std::string::npos ||
      what.find("image:") != std::string::npos || what.find(".pgm") != std::string::npos ||
      what.find(".ppm") != std::string::npos)
    return EG_ERR_DATA;
  return EG_ERR_RUNTIME;
}

template <typename Fn>
eg_status guarded(eg_context* ctx, Fn&& fn) {
  if (!ctx) return EG_ERR_CONFIG;
  try {
    ctx->last_error.clear();
    fn();
    return EG_OK;
  } catch (const std::invalid_argument& e) {
    ctx->last_error = e.what();
    return EG_ERR_CONFIG;
  } catch (const std::exception& e) {
    ctx->last_error = e.what();
    return classify(ctx->last_error);
  }
}

bool require_args(eg_context* ctx, std::initializer_list<const char*> args) {
  for (const char* a : args)
    if (!a) {
      ctx->last_error = "null argument";
      return false;
    }
  return true;
}

}  // namespace

extern "C" {

eg_context* eg_context_create(void) { return new (std::nothrow) eg_context; }

void eg_context_destroy(eg_context* ctx) { delete ctx; }

eg_status eg_load_config(eg_context* ctx, const char* path) {
  if (!ctx) return EG_ERR_CONFIG;
  if (!require_args(ctx, {path})) return EG_ERR_CONFIG;
  return guarded(ctx, [&] { ctx->config = Config::from_file(path); });
}

eg_status eg_set_option(eg_context* ctx, const char* key, const char* value) {
  if (!ctx) return EG_ERR_CONFIG;
  if (!require_args(ctx, {key, value})) return EG_ERR_CONFIG;
  ctx->config.set(key, value);
  ctx->last_error.clear();
  return EG_OK;
}

const char* eg_last_error(const eg_context* ctx) {
  return ctx ? ctx->last_error.c_str() : "null context";
}

eg_status eg_make_dataset(eg_context* ctx, const char* out_dir, const char** json_out) {
  if (!ctx || !require_args(ctx, {out_dir})) return EG_ERR_CONFIG;
  return guarded(ctx, [&] {
    int n = edgegan::pipeline_make_dataset(ctx->config, out_dir);
    stash(ctx, {{"count", n}, {"out_dir", out_dir}}, json_out);
  });
}

eg_status eg_train(eg_context* ctx, const char* data_dir, const char* out_dir,
                   const char** json_out) {
  if (!ctx || !require_args(ctx, {data_dir, out_dir})) return EG_ERR_CONFIG;
  return guarded(ctx,
                 [&] { stash(ctx, edgegan::pipeline_train(ctx->config, data_dir, out_dir), json_out); });
}

eg_status eg_generate(eg_context* ctx, const char* checkpoint, const char* labels_dir,
                      const char* out_dir, const char** json_out) {
  if (!ctx || !require_args(ctx, {checkpoint, labels_dir, out_dir})) return EG_ERR_CONFIG;
  return guarded(ctx, [&] {
    stash(ctx, edgegan::pipeline_generate(ctx->config, checkpoint, labels_dir, out_dir), json_out);
  });
}

eg_status eg_evaluate(eg_context* ctx, const char* real_dir, const char* fake_dir,
                      const char** json_out) {
  if (!ctx || !require_args(ctx, {real_dir, fake_dir})) return EG_ERR_CONFIG;
  return guarded(
      ctx, [&] { stash(ctx, edgegan::pipeline_evaluate(ctx->config, real_dir, fake_dir), json_out); });
}

eg_status eg_ablate(eg_context* ctx, const char* data_dir, const char* out_dir,
                    const char** json_out) {
  if (!ctx || !require_args(ctx, {data_dir, out_dir})) return EG_ERR_CONFIG;
  return guarded(
      ctx, [&] { stash(ctx, edgegan::pipeline_ablate(ctx->config, data_dir, out_dir), json_out); });
}

eg_status eg_figures(eg_context* ctx, const char* checkpoint, const char* data_dir,
                     const char* out_path, const char** json_out) {
  if (!ctx || !require_args(ctx, {checkpoint, data_dir, out_path})) return EG_ERR_CONFIG;
  return guarded(ctx, [&] {
    stash(ctx, edgegan::pipeline_figures(ctx->config, checkpoint, data_dir, out_path), json_out);
  });
}

eg_status eg_params(eg_context* ctx, const char** json_out) {
  if (!ctx) return EG_ERR_CONFIG;
  return guarded(ctx, [&] { stash(ctx, edgegan::pipeline_params(ctx->config), json_out); });
}

}  // extern "C"
