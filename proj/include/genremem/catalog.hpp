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

#include <cstdint>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "genremem/types.hpp"

namespace genremem {

/// One (artist, tag, weight) row of a tag file.
struct TagRecord {
  std::string artist_id;
  std::string tag;
  double relative_frequency = 0.0;
};

/// Artist to genre mapping after tag filtering.
///
/// Artists are kept in lexicographic order and addressed by their position
/// ("catalog index"); genres likewise. Every artist seen in the tag source is
/// present, possibly with an empty genre set.
class GenreCatalog {
 public:
  struct Assignment {
    GenreId genre = 0;
    double relative_frequency = 0.0;
  };

  GenreCatalog() = default;

  /// Keeps, per artist, the tags that are in `allowed` (all tags when
  /// `allowed` is null) and whose relative frequency is at least
  /// `min_rel_freq`. Repeated (artist, tag) rows collapse to the largest
  /// frequency.
  static GenreCatalog build(std::span<const TagRecord> tags, double min_rel_freq,
                            const std::set<std::string>* allowed = nullptr);

  std::size_t genre_count() const { return genre_names_.size(); }
  std::size_t artist_count() const { return artists_.size(); }

  const std::vector<std::string>& genre_names() const { return genre_names_; }
  const std::string& genre_name(GenreId id) const { return genre_names_.at(id); }
  std::optional<GenreId> find_genre(std::string_view name) const;

  const std::vector<std::string>& artists() const { return artists_; }
  std::optional<std::uint32_t> find_artist(std::string_view artist_id) const;

  /// Assignments of one catalog artist, sorted by genre id.
  std::span<const Assignment> assignments(std::uint32_t artist) const {
    return assignments_.at(artist);
  }
  /// Genre ids of one catalog artist, ascending.
  std::span<const GenreId> genres_of(std::uint32_t artist) const {
    return genre_sets_.at(artist);
  }
  /// Genre ids of an artist by id; empty for unknown artists.
  std::span<const GenreId> genres_of(std::string_view artist_id) const;

  /// Catalog indices of the artists carrying `genre`, ascending.
  std::span<const std::uint32_t> artists_of(GenreId genre) const {
    return artists_by_genre_.at(genre);
  }

  /// Total number of stored assignments.
  std::size_t assignment_count() const;

  /// Kept assignments as tag rows in (artist, genre) order.
  std::vector<TagRecord> to_records() const;

 private:
  std::vector<std::string> genre_names_;
  std::vector<std::string> artists_;
  std::vector<std::vector<Assignment>> assignments_;
  std::vector<std::vector<GenreId>> genre_sets_;
  std::vector<std::vector<std::uint32_t>> artists_by_genre_;
};

}  // namespace genremem
