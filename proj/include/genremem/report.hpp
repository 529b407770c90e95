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

// Serialised forms: JSON for fits, groups and prediction lines; CSV for
// metric tables, recall/precision curves and significance matrices.

#pragma once

#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "genremem/catalog.hpp"
#include "genremem/evaluation.hpp"
#include "genremem/ingestion.hpp"
#include "genremem/memory.hpp"
#include "genremem/types.hpp"

namespace genremem::report {

/// {slope, intercept, d, point_count, bin_count}
nlohmann::json to_json(const memory::DecayFit& fit);
memory::DecayFit decay_fit_from_json(const nlohmann::json& j);

/// {name, decay_d (null until fitted), user_ids, stats}
nlohmann::json to_json(const ingest::UserGroup& group);
ingest::UserGroup group_from_json(const nlohmann::json& j);

/// One prediction line: {user, context_artist, k, items: [{genre, score}]}
/// plus any members of `extra` (e.g. the algorithm name).
std::string prediction_line(const GenreCatalog& catalog, std::string_view user,
                            const std::optional<std::string>& context_artist,
                            std::size_t k, const Ranking& ranking,
                            const nlohmann::json& extra = nlohmann::json::object());

/// Long-format rows: group, algorithm, metric, k, value, n.
void write_metric_table(std::ostream& out, std::string_view group,
                        std::span<const eval::AlgorithmReport> reports,
                        const eval::EvalOptions& options);

/// group, algorithm, k, recall, precision for k = 1..k_max.
void write_curves(std::ostream& out, std::string_view group,
                  std::span<const eval::AlgorithmReport> reports);

/// group, metric, algorithm_a, algorithm_b, t, p, significant over per-user
/// means for every algorithm pair. `significant` is yes, no, degenerate or
/// insufficient (fewer than two users).
void write_significance(std::ostream& out, std::string_view group,
                       std::span<const eval::AlgorithmReport> reports,
                       double alpha, bool paired = true);

/// One JSON line per test case and algorithm.
void write_prediction_log(std::ostream& out, std::string_view group,
                          const eval::Evaluator& evaluator,
                          const eval::AlgorithmReport& report,
                          const std::vector<std::string>& artist_names,
                          const GenreCatalog& catalog);

/// Aligned text table (group x metric rows, algorithm columns) of the
/// F1 / MRR / MAP / nDCG rows of one or more metric CSVs.
std::string render_table(std::span<const std::string> metric_csv_documents);

}  // namespace genremem::report
