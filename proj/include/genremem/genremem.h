/*
 * Copyright 2026 The genremem Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *   http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

/*
 * C interface of libgenremem.
 *
 * Every function returns a gm_status. On failure a message describing the
 * error is available from gm_last_error() on the calling thread until the
 * next call into the library from that thread. Strings returned through
 * `char **` out-parameters are owned by the caller and released with
 * gm_string_free().
 */

#ifndef GENREMEM_H_
#define GENREMEM_H_

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#  if defined(GENREMEM_BUILDING)
#    define GM_API __declspec(dllexport)
#  else
#    define GM_API __declspec(dllimport)
#  endif
#else
#  define GM_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum gm_status {
  GM_OK = 0,
  GM_ERR_USAGE = 1,      /* bad arguments, configuration or missing files */
  GM_ERR_DATA = 2,       /* malformed or insufficient input data */
  GM_ERR_DEGENERATE = 3, /* a fit or test has no defined result */
  GM_ERR_INTERNAL = 4
} gm_status;

GM_API const char *gm_version(void);
GM_API const char *gm_last_error(void);
GM_API void gm_string_free(char *s);

/* ---- configuration and batch stages ---------------------------------- */

typedef struct gm_config gm_config;

GM_API gm_status gm_config_create(gm_config **out);
GM_API void gm_config_destroy(gm_config *config);
/* Keys are the long option names, e.g. "events", "group-size", "seed". */
GM_API gm_status gm_config_set(gm_config *config, const char *key,
                               const char *value);
/* Reads `key = value` lines. */
GM_API gm_status gm_config_load(gm_config *config, const char *path);
/* Snapshot in the format gm_config_load reads. */
GM_API gm_status gm_config_dump(const gm_config *config, char **out);

/* Each stage writes a human-readable summary to *summary (may be NULL). */
GM_API gm_status gm_ingest(const gm_config *config, char **summary);
GM_API gm_status gm_split_groups(const gm_config *config, char **summary);
GM_API gm_status gm_fit_decay(const gm_config *config, const char *group,
                              char **summary);
/* `algorithms` is a comma separated list (e.g. "TOP,BLL_u"); NULL or ""
 * runs the seven comparison methods. */
GM_API gm_status gm_evaluate(const gm_config *config, const char *group,
                             const char *algorithms, char **summary);
GM_API gm_status gm_report(const gm_config *config, char **summary);

/* ---- in-memory model over ingested data ------------------------------ */

typedef struct gm_model gm_model;

/* Loads the ingested data under the configured output directory. With a
 * group name only that group's users are loaded and its fitted d (if any)
 * becomes the default; with NULL every ingested user is loaded. */
GM_API gm_status gm_model_open(const gm_config *config, const char *group,
                               gm_model **out);
GM_API void gm_model_close(gm_model *model);
GM_API size_t gm_model_user_count(const gm_model *model);
GM_API size_t gm_model_genre_count(const gm_model *model);
/* Fits the decay exponent on all loaded events. */
GM_API gm_status gm_model_fit_decay(const gm_model *model, size_t bins,
                                    double *d_out, double *slope_out);
/* Top-k genres for `user` at `ref_time` as a JSON object
 * {"user", "context_artist", "k", "items": [{"genre", "score"}]}.
 * `algorithm` is "BLL_u" or "ACT_ua" (or an alias); `context_artist` may be
 * NULL. d <= 0 selects the group's fitted d. */
GM_API gm_status gm_model_predict(const gm_model *model, const char *user,
                                  const char *algorithm,
                                  const char *context_artist, int64_t ref_time,
                                  size_t k, double d, char **json_out);

/* ---- numeric building blocks ----------------------------------------- */

/* `metric` is one of "recall", "precision", "mrr", "map", "ndcg". Genre ids
 * are arbitrary integers; `relevant` must be non-empty. */
GM_API gm_status gm_metric(const char *metric, const uint32_t *predicted,
                           size_t predicted_len, const uint32_t *relevant,
                           size_t relevant_len, size_t k, double *out);

/* Two-sided paired t-test. *degenerate is set to 1 when all differences are
 * equal, in which case *t is NaN and *p is 1. */
GM_API gm_status gm_paired_t_test(const double *a, const double *b, size_t n,
                                  double *t, double *p, int *degenerate);

GM_API gm_status gm_softmax(const double *in, size_t n, double *out);

GM_API gm_status gm_base_level_activation(const int64_t *times, size_t n,
                                          int64_t ref_time, double d,
                                          double *out);

#ifdef __cplusplus
}
#endif

#endif /* GENREMEM_H_ */
