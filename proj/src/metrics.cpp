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

#include "genremem/metrics.hpp"

#include <algorithm>
#include <cmath>

#include "genremem/error.hpp"

namespace genremem::eval {
namespace {

bool is_relevant(std::span<const GenreId> relevant, GenreId g) {
  return std::binary_search(relevant.begin(), relevant.end(), g);
}

std::size_t hits_at(std::span<const GenreId> predicted,
                    std::span<const GenreId> relevant, std::size_t k) {
  std::size_t hits = 0;
  const auto n = std::min(k, predicted.size());
  for (std::size_t i = 0; i < n; ++i) hits += is_relevant(relevant, predicted[i]);
  return hits;
}

void check(std::span<const GenreId> relevant, std::size_t k) {
  if (relevant.empty()) fail(ErrorKind::kUsage, "metric needs a non-empty relevant set");
  if (k == 0) fail(ErrorKind::kUsage, "metric cut-off k must be positive");
}

}  // namespace

double recall_at(std::span<const GenreId> predicted,
                 std::span<const GenreId> relevant, std::size_t k) {
  check(relevant, k);
  return static_cast<double>(hits_at(predicted, relevant, k)) /
         static_cast<double>(relevant.size());
}

double precision_at(std::span<const GenreId> predicted,
                    std::span<const GenreId> relevant, std::size_t k) {
  check(relevant, k);
  return static_cast<double>(hits_at(predicted, relevant, k)) /
         static_cast<double>(k);
}

double f1(double precision, double recall) {
  const double sum = precision + recall;
  if (sum <= 0.0) return 0.0;
  return 2.0 * precision * recall / sum;
}

double reciprocal_rank(std::span<const GenreId> predicted,
                       std::span<const GenreId> relevant, std::size_t k) {
  check(relevant, k);
  double achieved = 0.0;
  const auto n = std::min(k, predicted.size());
  for (std::size_t i = 0; i < n; ++i) {
    if (is_relevant(relevant, predicted[i])) achieved += 1.0 / static_cast<double>(i + 1);
  }
  double ideal = 0.0;
  const auto ideal_hits = std::min(k, relevant.size());
  for (std::size_t i = 0; i < ideal_hits; ++i) ideal += 1.0 / static_cast<double>(i + 1);
  return achieved / ideal;
}

double average_precision(std::span<const GenreId> predicted,
                         std::span<const GenreId> relevant, std::size_t k) {
  check(relevant, k);
  double sum = 0.0;
  std::size_t hits = 0;
  const auto n = std::min(k, predicted.size());
  for (std::size_t i = 0; i < n; ++i) {
    if (!is_relevant(relevant, predicted[i])) continue;
    ++hits;
    sum += static_cast<double>(hits) / static_cast<double>(i + 1);
  }
  return sum / static_cast<double>(std::min(k, relevant.size()));
}

double ndcg(std::span<const GenreId> predicted, std::span<const GenreId> relevant,
            std::size_t k) {
  check(relevant, k);
  double dcg = 0.0;
  const auto n = std::min(k, predicted.size());
  for (std::size_t i = 0; i < n; ++i) {
    if (is_relevant(relevant, predicted[i])) dcg += 1.0 / std::log2(static_cast<double>(i + 2));
  }
  double idcg = 0.0;
  const auto ideal_hits = std::min(k, relevant.size());
  for (std::size_t i = 0; i < ideal_hits; ++i) idcg += 1.0 / std::log2(static_cast<double>(i + 2));
  return dcg / idcg;
}

CaseMetrics score_case(std::span<const GenreId> predicted,
                       std::span<const GenreId> relevant, std::size_t k_max,
                       std::size_t f1_k) {
  if (f1_k == 0 || f1_k > k_max) fail(ErrorKind::kUsage, "f1_k must lie in [1, k_max]");
  CaseMetrics m;
  m.recall.resize(k_max);
  m.precision.resize(k_max);
  for (std::size_t k = 1; k <= k_max; ++k) {
    m.recall[k - 1] = recall_at(predicted, relevant, k);
    m.precision[k - 1] = precision_at(predicted, relevant, k);
  }
  m.f1 = f1(m.precision[f1_k - 1], m.recall[f1_k - 1]);
  m.mrr = reciprocal_rank(predicted, relevant, k_max);
  m.map = average_precision(predicted, relevant, k_max);
  m.ndcg = ndcg(predicted, relevant, k_max);
  return m;
}

std::vector<GenreId> genres_of(const Ranking& ranking) {
  std::vector<GenreId> out;
  out.reserve(ranking.size());
  for (const auto& item : ranking) out.push_back(item.genre);
  return out;
}

}  // namespace genremem::eval
