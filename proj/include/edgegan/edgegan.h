/* C API for the edge-guided semantic image synthesis library.
 *
 * All functions return eg_status (EG_OK on success). On failure the
 * context stores a human-readable message retrievable with eg_last_error.
 * JSON-producing calls hand back a string owned by the context; it stays
 * valid until the next call on the same context or eg_context_destroy.
 */
#ifndef EDGEGAN_H
#define EDGEGAN_H

#ifdef __cplusplus
extern "C" {
#endif

typedef struct eg_context eg_context;

typedef enum eg_status {
  EG_OK = 0,
  EG_ERR_CONFIG = 2, /* bad configuration or arguments */
  EG_ERR_DATA = 3,   /* missing or unreadable data */
  EG_ERR_RUNTIME = 4 /* everything else */
} eg_status;

eg_context* eg_context_create(void);
void eg_context_destroy(eg_context* ctx);

/* Loads a flat key=value configuration file into the context. */
eg_status eg_load_config(eg_context* ctx, const char* path);
/* Sets or overrides a single configuration key. */
eg_status eg_set_option(eg_context* ctx, const char* key, const char* value);

const char* eg_last_error(const eg_context* ctx);

/* Writes the procedural dataset (images, labels, manifest.tsv) to out_dir. */
eg_status eg_make_dataset(eg_context* ctx, const char* out_dir, const char** json_out);

/* Trains on data_dir/manifest.tsv; checkpoint and CSV log land in out_dir.
 * Resumes from out_dir/checkpoint.egc when it exists. */
eg_status eg_train(eg_context* ctx, const char* data_dir, const char* out_dir,
                   const char** json_out);

/* Generates images for every *.pgm label map in labels_dir. */
eg_status eg_generate(eg_context* ctx, const char* checkpoint, const char* labels_dir,
                      const char* out_dir, const char** json_out);

/* Metric report (JSON) comparing two image directories. */
eg_status eg_evaluate(eg_context* ctx, const char* real_dir, const char* fake_dir,
                      const char** json_out);

/* Trains the four architecture variants and reports per-variant metrics. */
eg_status eg_ablate(eg_context* ctx, const char* data_dir, const char* out_dir,
                    const char** json_out);

/* Renders the qualitative figure grid to out_path. */
eg_status eg_figures(eg_context* ctx, const char* checkpoint, const char* data_dir,
                     const char* out_path, const char** json_out);

/* Per-component parameter counts of the configured architecture. */
eg_status eg_params(eg_context* ctx, const char** json_out);

#ifdef __cplusplus
}
#endif

#endif /* EDGEGAN_H */
