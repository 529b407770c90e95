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

// Staged batch pipeline behind the command line tool. Every stage reads the
// previous stage's files from the output directory and writes its own, so
// long runs can resume and every stage is reproducible from its inputs:
//
//   <out>/config.ini              configuration snapshot (re-runnable)
//   <out>/manifest.json           digests, stage counts, fitted d per group
//   <out>/data/events.tsv         events of the users kept by the LE filter
//   <out>/data/catalog.tsv        filtered artist -> genre assignments
//   <out>/data/profiles.tsv       user profiles (when supplied)
//   <out>/groups/<name>.json      LowMS / MedMS / HighMS manifests
//   <out>/fits/<name>.json        decay fits
//   <out>/eval/<name>/...         metrics.csv, curves.csv, significance.csv,
//                                 predictions.jsonl

#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "genremem/evaluation.hpp"

namespace genremem::pipeline {

inline constexpr std::string_view kToolVersion = "1.0.0";

struct RunConfig {
  std::filesystem::path events;
  std::filesystem::path profiles;
  std::filesystem::path tags;
  std::filesystem::path allowed_genres;
  std::filesystem::path out_dir = "out";

  std::size_t group_size = 1000;
  std::size_t min_le = 6000;
  std::size_t max_le = 12000;
  double min_rel_freq = 0.5;
  std::string mainstream_mode = "cosine";  // cosine | supplied
  double split_fraction = 0.01;
  std::size_t k_max = 10;
  std::size_t f1_k = 5;
  std::size_t decay_bins = 100;
  std::map<std::string, double> d_override;  // group name -> d
  std::size_t cf_user_neighbors = 20;
  std::size_t cf_item_neighbors = 20;
  std::size_t cf_top_artists = 20;
  double attentional_weight = 1.0;
  double alpha = 0.001;
  bool paired = true;
  std::uint64_t seed = 42;
  bool strict = false;
  std::size_t workers = 1;
};

/// Sets one configuration key from its textual value. Keys use the long
/// flag names with dashes or underscores (e.g. "group-size", "min_le").
/// `d-override` takes "GROUP=VALUE[,GROUP=VALUE...]". Throws kUsage.
void set_config_value(RunConfig& config, std::string_view key,
                      std::string_view value);

/// Reads `key = value` lines (INI/TOML subset, '#' or ';' comments).
void load_config_file(RunConfig& config, const std::filesystem::path& path);

/// Checks ranges (fractions in (0,1), positive sizes). Throws kUsage.
void validate(const RunConfig& config);

/// Key/value snapshot in the format load_config_file reads.
std::string config_to_ini(const RunConfig& config);

// Each command returns a human-readable summary of what it did.

std::string cmd_ingest(const RunConfig& config);
std::string cmd_split_groups(const RunConfig& config);
std::string cmd_fit_decay(const RunConfig& config, std::string_view group);
std::string cmd_evaluate(const RunConfig& config, std::string_view group,
                         std::span<const eval::Algorithm> algorithms);
/// Renders every <out>/eval/*/metrics.csv as one aligned table.
std::string cmd_report(const RunConfig& config);

/// 64-bit FNV-1a digest of a file's bytes, as 16 hex digits.
std::string file_digest(const std::filesystem::path& path);

}  // namespace genremem::pipeline
