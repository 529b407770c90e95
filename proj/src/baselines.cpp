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

#include "genremem/baselines.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "genremem/error.hpp"
#include "parallel.hpp"

namespace genremem::baselines {
namespace {

using memory::GenreHistory;
using memory::GenreTrace;

Ranking top_k(Ranking scored, std::size_t k) {
  const auto keep = std::min(k, scored.size());
  std::partial_sort(scored.begin(), scored.begin() + static_cast<std::ptrdiff_t>(keep),
                    scored.end(), [](const ScoredGenre& a, const ScoredGenre& b) {
                      if (a.score != b.score) return a.score > b.score;
                      return a.genre < b.genre;
                    });
  scored.resize(keep);
  return scored;
}

Ranking from_map(const std::map<GenreId, double>& scores, std::size_t k) {
  Ranking scored;
  scored.reserve(scores.size());
  for (const auto& [g, s] : scores) scored.push_back({g, s});
  return top_k(std::move(scored), k);
}

std::span<const GenreTrace> warm_traces(const GenreHistory& history,
                                        std::size_t user) {
  const auto traces = history.traces(user);
  if (traces.empty()) {
    fail(ErrorKind::kData, "cold user '" + history.user_id(user) +
                               "': no genre history to rank");
  }
  return traces;
}

double sparse_dot(std::span<const GenreTrace> a, std::span<const GenreTrace> b) {
  double dot = 0.0;
  std::size_t i = 0;
  std::size_t j = 0;
  while (i < a.size() && j < b.size()) {
    if (a[i].genre < b[j].genre) {
      ++i;
    } else if (b[j].genre < a[i].genre) {
      ++j;
    } else {
      dot += static_cast<double>(a[i].times.size()) *
             static_cast<double>(b[j].times.size());
      ++i;
      ++j;
    }
  }
  return dot;
}

double norm(std::span<const GenreTrace> a) { return std::sqrt(sparse_dot(a, a)); }

void sort_neighbors(std::vector<Neighbor>& v, std::size_t n) {
  std::sort(v.begin(), v.end(), [](const Neighbor& a, const Neighbor& b) {
    if (a.similarity != b.similarity) return a.similarity > b.similarity;
    return a.id < b.id;
  });
  if (v.size() > n) v.resize(n);
}

}  // namespace

Ranking predict_top(const GenreHistory& history, std::size_t k) {
  std::map<GenreId, double> counts;
  for (std::size_t u = 0; u < history.user_count(); ++u) {
    for (const auto& trace : history.traces(u)) {
      counts[trace.genre] += static_cast<double>(trace.times.size());
    }
  }
  return from_map(counts, k);
}

Ranking predict_pop(const GenreHistory& history, std::size_t user, std::size_t k) {
  Ranking scored;
  for (const auto& trace : warm_traces(history, user)) {
    scored.push_back({trace.genre, static_cast<double>(trace.times.size())});
  }
  return top_k(std::move(scored), k);
}

Ranking predict_time(const GenreHistory& history, std::size_t user, std::size_t k) {
  Ranking scored;
  for (const auto& trace : warm_traces(history, user)) {
    scored.push_back({trace.genre, static_cast<double>(trace.times.back())});
  }
  return top_k(std::move(scored), k);
}

double user_similarity(const GenreHistory& history, std::size_t u, std::size_t v) {
  const auto a = history.traces(u);
  const auto b = history.traces(v);
  const double denom = norm(a) * norm(b);
  if (denom <= 0.0) return 0.0;
  return std::clamp(sparse_dot(a, b) / denom, 0.0, 1.0);
}

UserNeighborhoods UserNeighborhoods::build(const GenreHistory& history,
                                           std::size_t neighbors,
                                           std::size_t workers) {
  const auto n = history.user_count();
  std::vector<double> norms(n);
  for (std::size_t u = 0; u < n; ++u) norms[u] = norm(history.traces(u));

  UserNeighborhoods out;
  out.sets_.resize(n);
  detail::parallel_for(n, workers, [&](std::size_t u) {
    std::vector<Neighbor> candidates;
    if (norms[u] > 0.0) {
      for (std::size_t v = 0; v < n; ++v) {
        if (v == u || norms[v] <= 0.0) continue;
        const double sim = std::clamp(
            sparse_dot(history.traces(u), history.traces(v)) / (norms[u] * norms[v]),
            0.0, 1.0);
        if (sim > 0.0) candidates.push_back({static_cast<std::uint32_t>(v), sim});
      }
    }
    sort_neighbors(candidates, neighbors);
    out.sets_[u] = std::move(candidates);
  });
  return out;
}

Ranking predict_cf_user(const GenreHistory& history,
                        const UserNeighborhoods& neighborhoods, std::size_t user,
                        std::size_t k) {
  std::map<GenreId, double> scores;
  for (const auto& neighbor : neighborhoods.of(user)) {
    for (const auto& trace : history.traces(neighbor.id)) {
      scores[trace.genre] +=
          neighbor.similarity * static_cast<double>(trace.times.size());
    }
  }
  return from_map(scores, k);
}

double ArtistSimilarity::cosine(std::uint32_t a, std::uint32_t b) const {
  const auto ga = catalog_->genres_of(a);
  const auto gb = catalog_->genres_of(b);
  if (ga.empty() || gb.empty()) return 0.0;
  std::size_t shared = 0;
  std::size_t i = 0;
  std::size_t j = 0;
  while (i < ga.size() && j < gb.size()) {
    if (ga[i] < gb[j]) {
      ++i;
    } else if (gb[j] < ga[i]) {
      ++j;
    } else {
      ++shared;
      ++i;
      ++j;
    }
  }
  return static_cast<double>(shared) /
         std::sqrt(static_cast<double>(ga.size()) * static_cast<double>(gb.size()));
}

std::vector<Neighbor> ArtistSimilarity::neighbors(std::uint32_t artist,
                                                  std::size_t n) const {
  std::vector<std::uint32_t> candidates;
  for (const GenreId g : catalog_->genres_of(artist)) {
    const auto carriers = catalog_->artists_of(g);
    candidates.insert(candidates.end(), carriers.begin(), carriers.end());
  }
  std::sort(candidates.begin(), candidates.end());
  candidates.erase(std::unique(candidates.begin(), candidates.end()), candidates.end());

  std::vector<Neighbor> out;
  out.reserve(candidates.size());
  for (const auto c : candidates) {
    if (c == artist) continue;
    out.push_back({c, cosine(artist, c)});
  }
  sort_neighbors(out, n);
  return out;
}

std::vector<ArtistIndex> top_artists(const UserSequence& sequence,
                                     std::size_t count) {
  std::map<ArtistIndex, std::size_t> plays;
  for (const auto& play : sequence.plays) ++plays[play.artist];
  std::vector<std::pair<ArtistIndex, std::size_t>> ranked(plays.begin(), plays.end());
  std::stable_sort(ranked.begin(), ranked.end(),
                   [](const auto& a, const auto& b) { return a.second > b.second; });
  std::vector<ArtistIndex> out;
  for (std::size_t i = 0; i < std::min(count, ranked.size()); ++i) {
    out.push_back(ranked[i].first);
  }
  return out;
}

ArtistNeighborhoods ArtistNeighborhoods::build(const GenreCatalog& catalog,
                                               std::span<const std::uint32_t> artists,
                                               std::size_t neighbors,
                                               std::size_t workers) {
  ArtistNeighborhoods out;
  out.catalog_ = &catalog;
  out.neighbors_ = neighbors;
  out.keys_.assign(artists.begin(), artists.end());
  std::sort(out.keys_.begin(), out.keys_.end());
  out.keys_.erase(std::unique(out.keys_.begin(), out.keys_.end()), out.keys_.end());
  out.sets_.resize(out.keys_.size());
  const ArtistSimilarity similarity(catalog);
  detail::parallel_for(out.keys_.size(), workers, [&](std::size_t i) {
    out.sets_[i] = similarity.neighbors(out.keys_[i], neighbors);
  });
  return out;
}

std::vector<Neighbor> ArtistNeighborhoods::of(std::uint32_t catalog_artist) const {
  auto it = std::lower_bound(keys_.begin(), keys_.end(), catalog_artist);
  if (it != keys_.end() && *it == catalog_artist) {
    return sets_[static_cast<std::size_t>(it - keys_.begin())];
  }
  if (catalog_ == nullptr) return {};
  return ArtistSimilarity(*catalog_).neighbors(catalog_artist, neighbors_);
}

Ranking predict_cf_item(const GenreCatalog& catalog,
                        const ArtistGenreTable& artist_genres,
                        const ArtistNeighborhoods& neighborhoods,
                        const UserSequence& sequence, std::size_t k,
                        std::size_t top_artist_count) {
  std::map<GenreId, double> scores;
  for (const ArtistIndex a : top_artists(sequence, top_artist_count)) {
    const auto catalog_index = artist_genres.catalog_index(a);
    if (!catalog_index) continue;
    for (const auto& similar : neighborhoods.of(*catalog_index)) {
      for (const GenreId g : catalog.genres_of(similar.id)) {
        scores[g] += similar.similarity;
      }
    }
  }
  return from_map(scores, k);
}

}  // namespace genremem::baselines
