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
#include <iosfwd>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "genremem/catalog.hpp"
#include "genremem/types.hpp"

namespace genremem::ingest {

struct ParseOptions {
  /// Abort on the first malformed line instead of skipping it.
  bool strict = false;
  /// Number of line-range shards parsed concurrently. Output does not depend
  /// on this value.
  std::size_t workers = 1;
};

template <typename Record>
struct Parsed {
  std::vector<Record> records;
  std::size_t skipped = 0;
};

// All parsers accept UTF-8 TSV with LF line endings and no header. Invalid
// UTF-8 makes a line malformed. In strict mode the thrown Error (kData)
// names the 1-based line number.

Parsed<ListeningEvent> parse_events(std::string_view text,
                                    const ParseOptions& options = {});
Parsed<ListeningEvent> parse_events(std::istream& in,
                                    const ParseOptions& options = {});

/// TSV line (no trailing newline); an absent album is written as an empty
/// field.
std::string format_event(const ListeningEvent& event);
void write_events(std::ostream& out, std::span<const ListeningEvent> events);

/// Profiles: user_id, country, age, gender, mainstreaminess; `-` = missing.
Parsed<UserProfile> parse_profiles(std::istream& in,
                                   const ParseOptions& options = {});
void write_profiles(std::ostream& out, std::span<const UserProfile> profiles);

/// Tags: artist_id, tag, relative_frequency in [0, 1].
Parsed<TagRecord> parse_tags(std::istream& in, const ParseOptions& options = {});
void write_tags(std::ostream& out, std::span<const TagRecord> tags);

/// One genre name per line; blank lines are ignored.
std::set<std::string> parse_genre_list(std::istream& in);

bool is_valid_utf8(std::string_view text);

/// Users whose event count lies in [min_le, max_le].
std::set<std::string> filter_users(std::span<const ListeningEvent> events,
                                   std::size_t min_le = 6000,
                                   std::size_t max_le = 12000);

enum class MainstreamMode {
  /// Cosine between the user's and the global artist play-count vectors.
  kCosine,
  /// Use UserProfile::mainstreaminess when present, cosine otherwise.
  kPreferSupplied,
};

/// Mainstreaminess per user in [0, 1]. Independent of event order.
std::map<std::string, double> compute_mainstreaminess(
    std::span<const ListeningEvent> events,
    std::span<const UserProfile> profiles = {},
    MainstreamMode mode = MainstreamMode::kCosine);

/// Descriptive statistics of a user group.
struct GroupStats {
  std::size_t users = 0;
  std::size_t artists = 0;
  std::size_t genres = 0;
  std::size_t events = 0;
  std::size_t genre_assignments = 0;
  double avg_mainstreaminess = 0.0;
};

struct UserGroup {
  std::string name;
  std::vector<std::string> user_ids;  // ascending, duplicate free
  std::optional<double> decay_d;
  GroupStats stats;
};

struct GroupSplit {
  UserGroup low;
  UserGroup med;
  UserGroup high;
  double median_score = 0.0;
};

/// Sorts users by (score, user_id) and takes the lowest `group_size`, the
/// `group_size` centred on the median rank, and the highest `group_size`.
/// Throws kData when fewer than 3 * group_size users are scored.
GroupSplit split_groups(const std::map<std::string, double>& scores,
                        std::size_t group_size = 1000);

GroupStats compute_group_stats(const std::vector<std::string>& user_ids,
                               std::span<const ListeningEvent> events,
                               const GenreCatalog& catalog,
                               const std::map<std::string, double>& scores);

}  // namespace genremem::ingest
