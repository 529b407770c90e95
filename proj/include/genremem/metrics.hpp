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
#include <span>
#include <vector>

#include "genremem/types.hpp"

// Top-k ranking metrics for one prediction list against one relevant set.
// `relevant` must be sorted ascending and duplicate free; `predicted` is in
// rank order and duplicate free. Only the first k predictions count.
namespace genremem::eval {

/// |top-k ∩ relevant| / |relevant|.
double recall_at(std::span<const GenreId> predicted,
                 std::span<const GenreId> relevant, std::size_t k);

/// |top-k ∩ relevant| / k. A list shorter than k still divides by k.
double precision_at(std::span<const GenreId> predicted,
                    std::span<const GenreId> relevant, std::size_t k);

/// 2pr / (p + r), 0 when both are 0.
double f1(double precision, double recall);

/// Mean of 1/rank over the relevant genres (0 for those outside the top k),
/// divided by the same quantity for a perfect ranking so that a perfect
/// list scores 1.
double reciprocal_rank(std::span<const GenreId> predicted,
                       std::span<const GenreId> relevant, std::size_t k);

/// (1/min(k, |relevant|)) * sum_{i<=k} rel_i * P@i. The normaliser is
/// |relevant| whenever the relevant set fits in the list, and a perfect
/// list scores 1 otherwise as well.
double average_precision(std::span<const GenreId> predicted,
                         std::span<const GenreId> relevant, std::size_t k);

/// DCG@k / iDCG@k with binary gains; the ideal list holds min(k, |relevant|)
/// hits.
double ndcg(std::span<const GenreId> predicted,
            std::span<const GenreId> relevant, std::size_t k);

/// All metrics of one test case.
struct CaseMetrics {
  std::vector<double> recall;     // index k-1, k = 1..k_max
  std::vector<double> precision;  // index k-1
  double f1 = 0.0;                // at f1_k
  double mrr = 0.0;               // at k_max
  double map = 0.0;               // at k_max
  double ndcg = 0.0;              // at k_max
};

CaseMetrics score_case(std::span<const GenreId> predicted,
                       std::span<const GenreId> relevant, std::size_t k_max = 10,
                       std::size_t f1_k = 5);

/// Genre ids of a ranking in rank order.
std::vector<GenreId> genres_of(const Ranking& ranking);

}  // namespace genremem::eval
