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

// Declarative-memory scoring of genres: base-level learning, softmax
// normalisation, associative spreading from a context artist, and the
// power-law decay fit that calibrates the forgetting exponent.

#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "genremem/catalog.hpp"
#include "genremem/log.hpp"
#include "genremem/types.hpp"

namespace genremem::memory {

/// Occurrence times of one genre for one user, ascending.
struct GenreTrace {
  GenreId genre = 0;
  std::vector<Timestamp> times;
};

/// Per-user genre occurrence histories. Every play of an artist with genres
/// G_a appends one occurrence of each g in G_a at the play's timestamp.
/// Users keep the order of the input span, so user indices line up with the
/// sequences the history was built from.
class GenreHistory {
 public:
  GenreHistory() = default;

  static GenreHistory build(std::span<const UserSequence> users,
                            const ArtistGenreTable& artist_genres);

  std::size_t user_count() const { return user_ids_.size(); }
  const std::string& user_id(std::size_t user) const { return user_ids_.at(user); }
  std::optional<std::size_t> find_user(std::string_view user_id) const;

  /// Traces of one user in ascending genre order. Empty for cold users.
  std::span<const GenreTrace> traces(std::size_t user) const {
    return traces_.at(user);
  }
  const GenreTrace* find(std::size_t user, GenreId genre) const;

  std::size_t occurrence_count() const;

 private:
  std::vector<std::string> user_ids_;
  std::unordered_map<std::string, std::size_t> index_;
  std::vector<std::vector<GenreTrace>> traces_;
};

/// ln(sum_j age_j^-d) with age_j = ref_time - t_j clamped to at least one
/// second. Evaluated in log space so large d or old occurrences do not
/// underflow. Requires non-empty `times` and finite d > 0.
double base_level_activation(std::span<const Timestamp> times,
                             Timestamp ref_time, double d);

/// Base-level activation of `genre` for `user`. Throws kData when the user
/// never heard the genre.
double bll_score(const GenreHistory& history, std::size_t user, GenreId genre,
                 Timestamp ref_time, double d);

/// exp(s - max) / sum exp(s' - max). Throws kUsage on empty or non-finite
/// input.
std::vector<double> softmax_normalize(std::span<const double> scores);

/// Jaccard overlap of the artist sets of two genres, backed by sparse
/// genre co-occurrence counts over the whole catalog.
class AssociationIndex {
 public:
  AssociationIndex() = default;

  static AssociationIndex build(const GenreCatalog& catalog);

  std::size_t genre_count() const { return artist_counts_.size(); }

  /// |A_c ∩ A_g| / |A_c ∪ A_g|, 0 for an empty union. Throws kData for
  /// unknown genre ids.
  double strength(GenreId c, GenreId g) const;

  std::uint32_t co_occurrence(GenreId c, GenreId g) const;

 private:
  std::vector<std::uint32_t> artist_counts_;
  // Row c holds (g, count) for g > c, sorted by g.
  std::vector<std::vector<std::pair<GenreId, std::uint32_t>>> rows_;
};

/// Top-k genres of G_u by softmax-normalised base-level activation, ties by
/// ascending genre id. Throws kData for a cold user.
Ranking predict_bll(const GenreHistory& history, std::size_t user,
                    Timestamp ref_time, std::size_t k, double d);

/// Top-k genres of G_u by softmax(B'(g) + weight * sum_{c in context} S(c, g)).
/// With an empty context the result is exactly predict_bll.
Ranking predict_act(const GenreHistory& history,
                    const AssociationIndex& associations, std::size_t user,
                    std::span<const GenreId> context, Timestamp ref_time,
                    std::size_t k, double d, double weight = 1.0);

/// One (time gap, relistening count) point of the decay plot.
struct DecayPoint {
  double gap_seconds = 0.0;
  double count = 0.0;
};

struct DecayFit {
  double slope = 0.0;
  double intercept = 0.0;
  double d = 0.0;  // |slope|
  std::size_t point_count = 0;
  std::size_t bin_count = 0;
};

/// Gaps in seconds between consecutive occurrences of the same genre for the
/// same user. Zero gaps (simultaneous occurrences) are dropped.
std::vector<Timestamp> relisten_gaps(const GenreHistory& history);

/// Buckets gaps into `bin_count` logarithmically spaced bins between the
/// smallest and largest gap. Each non-empty bin yields one point located at
/// the geometric mean of its gaps.
std::vector<DecayPoint> bin_gaps(std::span<const Timestamp> gaps,
                                 std::size_t bin_count);

/// Least-squares line through (log10 gap, log10 count). Throws kDegenerate
/// with fewer than two distinct points.
DecayFit fit_power_law(std::span<const DecayPoint> points);

/// relisten_gaps -> bin_gaps -> fit_power_law.
DecayFit fit_decay(const GenreHistory& history, std::size_t bin_count = 100);

}  // namespace genremem::memory
