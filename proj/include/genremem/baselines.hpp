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

#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "genremem/catalog.hpp"
#include "genremem/log.hpp"
#include "genremem/memory.hpp"
#include "genremem/types.hpp"

// Comparison predictors. All of them read the per-user genre counts from a
// GenreHistory (|GA_{g,u}| is the length of the user's trace for g). Scores
// are the raw ranking quantity of each method; ties always fall back to
// ascending genre id.
namespace genremem::baselines {

/// Group-wide genre popularity; identical for every user.
Ranking predict_top(const memory::GenreHistory& history, std::size_t k);

/// |GA_{g,u}| descending. Throws kData for a cold user.
Ranking predict_pop(const memory::GenreHistory& history, std::size_t user,
                    std::size_t k);

/// Most recent occurrence first. Throws kData for a cold user.
Ranking predict_time(const memory::GenreHistory& history, std::size_t user,
                     std::size_t k);

struct Neighbor {
  std::uint32_t id = 0;
  double similarity = 0.0;
};

/// Cosine similarity of two users' genre count vectors.
double user_similarity(const memory::GenreHistory& history, std::size_t u,
                       std::size_t v);

/// Top-N users by cosine similarity of genre count vectors, restricted to
/// positive similarity and excluding the user itself. Ties go to the lower
/// user index. Built once per training set.
class UserNeighborhoods {
 public:
  UserNeighborhoods() = default;

  static UserNeighborhoods build(const memory::GenreHistory& history,
                                 std::size_t neighbors = 20,
                                 std::size_t workers = 1);

  std::span<const Neighbor> of(std::size_t user) const { return sets_.at(user); }

 private:
  std::vector<std::vector<Neighbor>> sets_;
};

/// score(g) = sum over neighbours v of sim(u, v) * |GA_{g,v}|. Empty when the
/// user has no positively similar neighbour.
Ranking predict_cf_user(const memory::GenreHistory& history,
                        const UserNeighborhoods& neighborhoods,
                        std::size_t user, std::size_t k);

/// Artist-to-artist cosine over binary genre vectors of the catalog.
/// Candidates are the artists sharing at least one genre with the query.
class ArtistSimilarity {
 public:
  explicit ArtistSimilarity(const GenreCatalog& catalog) : catalog_(&catalog) {}

  double cosine(std::uint32_t a, std::uint32_t b) const;

  /// Top-N most similar catalog artists to `artist` (excluding it), by
  /// similarity descending then catalog index ascending.
  std::vector<Neighbor> neighbors(std::uint32_t artist, std::size_t n) const;

 private:
  const GenreCatalog* catalog_;
};

/// The user's most played artists (play count descending, artist id
/// ascending), as log artist indices.
std::vector<ArtistIndex> top_artists(const UserSequence& sequence,
                                     std::size_t count);

/// Precomputed artist neighbourhoods for every artist that any user's top
/// artists resolve to. Lookups for other artists compute on the fly.
class ArtistNeighborhoods {
 public:
  ArtistNeighborhoods() = default;

  static ArtistNeighborhoods build(const GenreCatalog& catalog,
                                   std::span<const std::uint32_t> artists,
                                   std::size_t neighbors = 20,
                                   std::size_t workers = 1);

  /// Neighbours of a catalog artist; computed on demand when it was not part
  /// of the precomputed set.
  std::vector<Neighbor> of(std::uint32_t catalog_artist) const;

 private:
  const GenreCatalog* catalog_ = nullptr;
  std::size_t neighbors_ = 0;
  std::vector<std::uint32_t> keys_;
  std::vector<std::vector<Neighbor>> sets_;
};

/// score(g) = sum_{a in A_u} sum_{s in S_a, g in G_s} cos(G_a, G_s), where
/// A_u are the user's top artists that resolve to the catalog.
Ranking predict_cf_item(const GenreCatalog& catalog,
                        const ArtistGenreTable& artist_genres,
                        const ArtistNeighborhoods& neighborhoods,
                        const UserSequence& sequence, std::size_t k,
                        std::size_t top_artist_count = 20);

}  // namespace genremem::baselines
