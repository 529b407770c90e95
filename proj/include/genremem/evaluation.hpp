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
#include <memory>
#include <mutex>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "genremem/baselines.hpp"
#include "genremem/catalog.hpp"
#include "genremem/log.hpp"
#include "genremem/memory.hpp"
#include "genremem/metrics.hpp"
#include "genremem/types.hpp"

namespace genremem::eval {

/// Per-user chronological train/test partition. `train[i]` and `test[i]`
/// belong to the same user.
struct SplitDataset {
  std::vector<UserSequence> train;
  std::vector<UserSequence> test;
  double fraction = 0.01;
  /// Users dropped for having fewer than two events.
  std::vector<std::string> excluded_users;
};

/// max(1, ceil(fraction * n)), capped at n - 1 so training is never empty.
std::size_t test_size(std::size_t event_count, double fraction);

/// Moves the most recent events of every user into the test set. Events are
/// ordered by (timestamp, input position), so among equal timestamps the
/// later input line is the more recent one.
SplitDataset temporal_split(std::span<const UserSequence> users,
                            double fraction = 0.01);

/// True when every user's last training event precedes (or ties with) their
/// first test event and train ∪ test sizes are consistent.
bool split_is_temporal(const SplitDataset& split);

struct TestCase {
  std::size_t user = 0;  // index into SplitDataset::train / test
  ArtistIndex target_artist = 0;
  std::vector<GenreId> relevant;  // ascending
  /// Artist of the immediately preceding event in the user's full stream.
  std::optional<ArtistIndex> context_artist;
  Timestamp ref_time = 0;
};

struct TestCaseSet {
  std::vector<TestCase> cases;  // grouped by user, chronological per user
  std::size_t unmappable = 0;   // test events whose artist has no genres
};

TestCaseSet build_test_cases(const SplitDataset& split,
                             const ArtistGenreTable& artist_genres);

enum class Algorithm {
  kTop,
  kCfUser,
  kCfItem,
  kPopUser,
  kTimeUser,
  kBllUser,
  kActUserArtist,
  kOracle,  // debug: predicts the relevant set
  kRandom,  // debug: seeded random permutation of the user's genres
};

/// Display name used in reports (TOP, CF_u, CF_i, POP_u, TIME_u, BLL_u,
/// ACT_ua, ORACLE, RANDOM).
std::string_view algorithm_name(Algorithm algorithm);

/// Accepts display names and lower-case aliases such as "bll", "cf_u",
/// "act_ua". Throws kUsage for unknown names.
Algorithm parse_algorithm(std::string_view name);

/// The seven comparison methods: TOP, CF_u, CF_i, POP_u, TIME_u, BLL_u, ACT_ua.
std::vector<Algorithm> default_algorithms();

struct EvalOptions {
  std::size_t k_max = 10;
  std::size_t f1_k = 5;
  double decay_d = 0.5;
  double attentional_weight = 1.0;
  std::size_t cf_user_neighbors = 20;
  std::size_t cf_item_neighbors = 20;
  std::size_t cf_top_artists = 20;
  std::uint64_t seed = 42;
  std::size_t workers = 1;
};

/// Mean metric values over a set of test cases. F1 is the harmonic mean of
/// the mean precision and mean recall at f1_k.
struct MetricSummary {
  std::vector<double> recall;     // k = 1..k_max
  std::vector<double> precision;  // k = 1..k_max
  double f1 = 0.0;
  double mrr = 0.0;
  double map = 0.0;
  double ndcg = 0.0;
  std::size_t cases = 0;
};

struct AlgorithmReport {
  Algorithm algorithm = Algorithm::kTop;
  MetricSummary mean;
  /// Per-user means, aligned with Evaluator::users().
  std::vector<MetricSummary> per_user;
  /// One ranking per test case, aligned with TestCaseSet::cases.
  std::vector<Ranking> predictions;
  std::vector<CaseMetrics> case_metrics;
  /// Cases for which the model had nothing to score (cold user).
  std::size_t cold_cases = 0;
};

/// Trains every model on the training half of a split (once) and scores
/// test cases against it. The trained state is never updated with test
/// events; only the context pointer advances through the test stream.
class Evaluator {
 public:
  Evaluator(const SplitDataset& split, const GenreCatalog& catalog,
            const ArtistGenreTable& artist_genres, EvalOptions options);

  const TestCaseSet& cases() const { return cases_; }
  /// User ids with at least one scored test case, in user order.
  const std::vector<std::string>& users() const { return users_; }
  const EvalOptions& options() const { return options_; }
  const memory::GenreHistory& history() const { return history_; }

  AlgorithmReport run(Algorithm algorithm) const;

 private:
  Ranking predict(Algorithm algorithm, const TestCase& test_case,
                  std::size_t case_index) const;

  const SplitDataset* split_;
  const GenreCatalog* catalog_;
  const ArtistGenreTable* artist_genres_;
  EvalOptions options_;
  TestCaseSet cases_;
  std::vector<std::string> users_;
  std::vector<std::size_t> user_of_case_slot_;  // case -> index into users_
  memory::GenreHistory history_;
  memory::AssociationIndex associations_;
  Ranking top_;
  // Built lazily by run(); guarded so const runs may proceed concurrently.
  mutable std::once_flag cf_user_once_;
  mutable baselines::UserNeighborhoods cf_user_;
  mutable std::once_flag cf_item_once_;
  mutable baselines::ArtistNeighborhoods cf_item_;
};

/// Summary of arbitrary case metrics (used for both group and per-user means).
MetricSummary summarize(std::span<const CaseMetrics> metrics, std::size_t k_max,
                        std::size_t f1_k);

}  // namespace genremem::eval
