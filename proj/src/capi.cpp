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

#include "genremem/genremem.h"

#include <cstdlib>
#include <cstring>
#include <fstream>
#include <limits>
#include <new>
#include <set>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "genremem/catalog.hpp"
#include "genremem/error.hpp"
#include "genremem/evaluation.hpp"
#include "genremem/ingestion.hpp"
#include "genremem/log.hpp"
#include "genremem/memory.hpp"
#include "genremem/metrics.hpp"
#include "genremem/pipeline.hpp"
#include "genremem/report.hpp"
#include "genremem/stats.hpp"
#include "text.hpp"

using namespace genremem;

struct gm_config {
  pipeline::RunConfig config;
};

struct gm_model {
  GenreCatalog catalog;
  ListeningLog log;
  ArtistGenreTable table;
  memory::GenreHistory history;
  memory::AssociationIndex associations;
  double default_d = 0.0;
};

namespace {

thread_local std::string last_error;

gm_status status_of(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::kUsage: return GM_ERR_USAGE;
    case ErrorKind::kData: return GM_ERR_DATA;
    case ErrorKind::kDegenerate: return GM_ERR_DEGENERATE;
  }
  return GM_ERR_INTERNAL;
}

template <typename F>
gm_status guarded(F&& body) {
  last_error.clear();
  try {
    body();
    return GM_OK;
  } catch (const Error& e) {
    last_error = e.what();
    return status_of(e.kind());
  } catch (const std::bad_alloc&) {
    last_error = "out of memory";
  } catch (const std::exception& e) {
    last_error = e.what();
  } catch (...) {
    last_error = "unknown error";
  }
  return GM_ERR_INTERNAL;
}

void require(bool ok, const char* what) {
  if (!ok) fail(ErrorKind::kUsage, what);
}

char* copy_out(const std::string& s) {
  auto* p = static_cast<char*>(std::malloc(s.size() + 1));
  if (!p) throw std::bad_alloc();
  std::memcpy(p, s.c_str(), s.size() + 1);
  return p;
}

void emit(char** out, const std::string& s) {
  if (out) *out = copy_out(s);
}

std::vector<eval::Algorithm> parse_algorithm_list(const char* list) {
  if (!list || !*list) return eval::default_algorithms();
  std::vector<eval::Algorithm> out;
  for (auto name : detail::split(list, ',')) {
    while (!name.empty() && name.front() == ' ') name.remove_prefix(1);
    while (!name.empty() && name.back() == ' ') name.remove_suffix(1);
    if (!name.empty()) out.push_back(eval::parse_algorithm(name));
  }
  if (out.empty()) fail(ErrorKind::kUsage, "empty algorithm list");
  return out;
}

}  // namespace

extern "C" {

const char* gm_version(void) { return pipeline::kToolVersion.data(); }

const char* gm_last_error(void) { return last_error.c_str(); }

void gm_string_free(char* s) { std::free(s); }

gm_status gm_config_create(gm_config** out) {
  return guarded([&] {
    require(out != nullptr, "null output pointer");
    *out = new gm_config();
  });
}

void gm_config_destroy(gm_config* config) { delete config; }

gm_status gm_config_set(gm_config* config, const char* key, const char* value) {
  return guarded([&] {
    require(config && key && value, "null argument");
    pipeline::set_config_value(config->config, key, value);
  });
}

gm_status gm_config_load(gm_config* config, const char* path) {
  return guarded([&] {
    require(config && path, "null argument");
    pipeline::load_config_file(config->config, path);
  });
}

gm_status gm_config_dump(const gm_config* config, char** out) {
  return guarded([&] {
    require(config && out, "null argument");
    emit(out, pipeline::config_to_ini(config->config));
  });
}

gm_status gm_ingest(const gm_config* config, char** summary) {
  return guarded([&] {
    require(config, "null config");
    emit(summary, pipeline::cmd_ingest(config->config));
  });
}

gm_status gm_split_groups(const gm_config* config, char** summary) {
  return guarded([&] {
    require(config, "null config");
    emit(summary, pipeline::cmd_split_groups(config->config));
  });
}

gm_status gm_fit_decay(const gm_config* config, const char* group, char** summary) {
  return guarded([&] {
    require(config && group, "null argument");
    emit(summary, pipeline::cmd_fit_decay(config->config, group));
  });
}

gm_status gm_evaluate(const gm_config* config, const char* group, const char* algorithms,
                      char** summary) {
  return guarded([&] {
    require(config && group, "null argument");
    const auto list = parse_algorithm_list(algorithms);
    emit(summary, pipeline::cmd_evaluate(config->config, group, list));
  });
}

gm_status gm_report(const gm_config* config, char** summary) {
  return guarded([&] {
    require(config, "null config");
    emit(summary, pipeline::cmd_report(config->config));
  });
}

gm_status gm_model_open(const gm_config* config, const char* group, gm_model** out) {
  return guarded([&] {
    require(config && out, "null argument");
    const auto& c = config->config;
    const auto data = c.out_dir / "data";
    const ingest::ParseOptions strict{true, c.workers};

    std::ifstream tags_in(data / "catalog.tsv", std::ios::binary);
    std::ifstream events_in(data / "events.tsv", std::ios::binary);
    if (!tags_in || !events_in) {
      fail(ErrorKind::kUsage, "no ingested data under " + c.out_dir.string() + "; run ingest first");
    }
    auto model = std::make_unique<gm_model>();
    model->catalog = GenreCatalog::build(ingest::parse_tags(tags_in, strict).records, 0.0);
    const auto events = ingest::parse_events(events_in, strict).records;

    std::set<std::string> members;
    const std::set<std::string>* filter = nullptr;
    if (group) {
      const auto path = c.out_dir / "groups" / (std::string(group) + ".json");
      std::ifstream in(path, std::ios::binary);
      if (!in) fail(ErrorKind::kUsage, "no group manifest " + path.string());
      nlohmann::json doc;
      try {
        doc = nlohmann::json::parse(in);
      } catch (const nlohmann::json::exception& e) {
        fail(ErrorKind::kData, std::string("malformed group manifest: ") + e.what());
      }
      const auto g = report::group_from_json(doc);
      members.insert(g.user_ids.begin(), g.user_ids.end());
      filter = &members;
      if (g.decay_d) model->default_d = *g.decay_d;
    }
    model->log = ListeningLog::build(events, filter);
    model->table = ArtistGenreTable::build(model->log, model->catalog);
    model->history = memory::GenreHistory::build(model->log.users(), model->table);
    model->associations = memory::AssociationIndex::build(model->catalog);
    *out = model.release();
  });
}

void gm_model_close(gm_model* model) { delete model; }

size_t gm_model_user_count(const gm_model* model) {
  return model ? model->history.user_count() : 0;
}

size_t gm_model_genre_count(const gm_model* model) {
  return model ? model->catalog.genre_count() : 0;
}

gm_status gm_model_fit_decay(const gm_model* model, size_t bins, double* d_out,
                             double* slope_out) {
  return guarded([&] {
    require(model != nullptr, "null model");
    const auto fit = memory::fit_decay(model->history, bins);
    if (d_out) *d_out = fit.d;
    if (slope_out) *slope_out = fit.slope;
  });
}

gm_status gm_model_predict(const gm_model* model, const char* user, const char* algorithm,
                           const char* context_artist, int64_t ref_time, size_t k, double d,
                           char** json_out) {
  return guarded([&] {
    require(model && user && algorithm && json_out, "null argument");
    require(k > 0, "k must be positive");
    if (!(d > 0.0)) d = model->default_d;
    if (!(d > 0.0)) fail(ErrorKind::kUsage, "no decay exponent: pass d > 0 or fit the group");
    const auto index = model->history.find_user(user);
    if (!index) fail(ErrorKind::kData, "unknown user " + std::string(user));

    const auto algo = eval::parse_algorithm(algorithm);
    std::optional<std::string> context;
    std::vector<GenreId> context_genres;
    if (context_artist && *context_artist) {
      context = context_artist;
      const auto g = model->catalog.genres_of(std::string_view(context_artist));
      context_genres.assign(g.begin(), g.end());
    }
    Ranking ranking;
    if (algo == eval::Algorithm::kBllUser) {
      ranking = memory::predict_bll(model->history, *index, ref_time, k, d);
    } else if (algo == eval::Algorithm::kActUserArtist) {
      ranking = memory::predict_act(model->history, model->associations, *index,
                                    context_genres, ref_time, k, d);
    } else {
      fail(ErrorKind::kUsage, "gm_model_predict supports BLL_u and ACT_ua only");
    }
    *json_out = copy_out(report::prediction_line(model->catalog, user, context, k, ranking));
  });
}

gm_status gm_metric(const char* metric, const uint32_t* predicted, size_t predicted_len,
                    const uint32_t* relevant, size_t relevant_len, size_t k, double* out) {
  return guarded([&] {
    require(metric && out, "null argument");
    require(predicted || predicted_len == 0, "null predicted list");
    require(relevant && relevant_len > 0, "relevant set must be non-empty");
    const std::span<const GenreId> p(predicted, predicted_len);
    const std::span<const GenreId> r(relevant, relevant_len);
    const std::string_view m(metric);
    if (m == "recall") *out = eval::recall_at(p, r, k);
    else if (m == "precision") *out = eval::precision_at(p, r, k);
    else if (m == "mrr") *out = eval::reciprocal_rank(p, r, k);
    else if (m == "map") *out = eval::average_precision(p, r, k);
    else if (m == "ndcg") *out = eval::ndcg(p, r, k);
    else fail(ErrorKind::kUsage, "unknown metric " + std::string(m));
  });
}

gm_status gm_paired_t_test(const double* a, const double* b, size_t n, double* t, double* p,
                           int* degenerate) {
  return guarded([&] {
    require(a && b, "null argument");
    const auto r = stats::paired_t_test(std::span(a, n), std::span(b, n));
    if (t) *t = r.degenerate ? std::numeric_limits<double>::quiet_NaN() : r.t;
    if (p) *p = r.p;
    if (degenerate) *degenerate = r.degenerate ? 1 : 0;
  });
}

gm_status gm_softmax(const double* in, size_t n, double* out) {
  return guarded([&] {
    require(in && out, "null argument");
    const auto v = memory::softmax_normalize(std::span(in, n));
    std::copy(v.begin(), v.end(), out);
  });
}

gm_status gm_base_level_activation(const int64_t* times, size_t n, int64_t ref_time, double d,
                                   double* out) {
  return guarded([&] {
    require(times && out, "null argument");
    *out = memory::base_level_activation(std::span<const Timestamp>(times, n), ref_time, d);
  });
}

}  // extern "C"
