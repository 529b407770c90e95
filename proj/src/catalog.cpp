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

#include "genremem/catalog.hpp"

#include <algorithm>
#include <map>

#include "genremem/error.hpp"

namespace genremem {

GenreCatalog GenreCatalog::build(std::span<const TagRecord> tags,
                                 double min_rel_freq,
                                 const std::set<std::string>* allowed) {
  if (!(min_rel_freq >= 0.0 && min_rel_freq <= 1.0)) {
    fail(ErrorKind::kUsage, "min_rel_freq must lie in [0, 1]");
  }

  // artist -> tag -> max frequency; std::map keeps everything sorted.
  std::map<std::string, std::map<std::string, double>> kept;
  for (const auto& row : tags) {
    auto& per_artist = kept[row.artist_id];
    if (allowed != nullptr && !allowed->contains(row.tag)) continue;
    if (row.relative_frequency < min_rel_freq) continue;
    auto [it, inserted] = per_artist.emplace(row.tag, row.relative_frequency);
    if (!inserted) it->second = std::max(it->second, row.relative_frequency);
  }

  GenreCatalog catalog;
  std::set<std::string> genre_set;
  for (const auto& [artist, per_artist] : kept) {
    for (const auto& [tag, freq] : per_artist) genre_set.insert(tag);
  }
  catalog.genre_names_.assign(genre_set.begin(), genre_set.end());
  catalog.artists_by_genre_.resize(catalog.genre_names_.size());

  catalog.artists_.reserve(kept.size());
  for (const auto& [artist, per_artist] : kept) {
    const auto artist_index = static_cast<std::uint32_t>(catalog.artists_.size());
    catalog.artists_.push_back(artist);
    std::vector<Assignment> assignments;
    std::vector<GenreId> genres;
    for (const auto& [tag, freq] : per_artist) {
      const GenreId id = *catalog.find_genre(tag);
      assignments.push_back({id, freq});
      genres.push_back(id);
      catalog.artists_by_genre_[id].push_back(artist_index);
    }
    catalog.assignments_.push_back(std::move(assignments));
    catalog.genre_sets_.push_back(std::move(genres));
  }
  return catalog;
}

std::optional<GenreId> GenreCatalog::find_genre(std::string_view name) const {
  auto it = std::lower_bound(genre_names_.begin(), genre_names_.end(), name);
  if (it == genre_names_.end() || *it != name) return std::nullopt;
  return static_cast<GenreId>(it - genre_names_.begin());
}

std::optional<std::uint32_t> GenreCatalog::find_artist(
    std::string_view artist_id) const {
  auto it = std::lower_bound(artists_.begin(), artists_.end(), artist_id);
  if (it == artists_.end() || *it != artist_id) return std::nullopt;
  return static_cast<std::uint32_t>(it - artists_.begin());
}

std::span<const GenreId> GenreCatalog::genres_of(
    std::string_view artist_id) const {
  const auto index = find_artist(artist_id);
  if (!index) return {};
  return genre_sets_[*index];
}

std::size_t GenreCatalog::assignment_count() const {
  std::size_t total = 0;
  for (const auto& a : assignments_) total += a.size();
  return total;
}

std::vector<TagRecord> GenreCatalog::to_records() const {
  std::vector<TagRecord> rows;
  rows.reserve(assignment_count());
  for (std::size_t a = 0; a < artists_.size(); ++a) {
    for (const auto& assignment : assignments_[a]) {
      rows.push_back({artists_[a], genre_names_[assignment.genre],
                      assignment.relative_frequency});
    }
  }
  return rows;
}

}  // namespace genremem
