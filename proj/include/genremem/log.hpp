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

#include "genremem/catalog.hpp"
#include "genremem/types.hpp"

namespace genremem {

/// Listening events regrouped per user with interned artist ids.
///
/// Users and artists are sorted lexicographically; each user's plays are
/// stably sorted by (timestamp, input position). Immutable after build.
class ListeningLog {
 public:
  ListeningLog() = default;

  /// Builds from `events`; when `users` is given only those users are kept.
  static ListeningLog build(std::span<const ListeningEvent> events,
                            const std::set<std::string>* users = nullptr);

  const std::vector<std::string>& artists() const { return artists_; }
  const std::vector<UserSequence>& users() const { return users_; }

  std::optional<ArtistIndex> find_artist(std::string_view artist_id) const;
  std::optional<std::size_t> find_user(std::string_view user_id) const;

  std::size_t event_count() const;

  /// Restriction to a subset of users, sharing this log's artist dictionary.
  ListeningLog subset(const std::vector<std::string>& user_ids) const;

 private:
  std::vector<std::string> artists_;
  std::vector<UserSequence> users_;
};

/// Genres of every artist in a ListeningLog's dictionary, resolved against a
/// catalog once so models can look them up by ArtistIndex.
class ArtistGenreTable {
 public:
  ArtistGenreTable() = default;

  static ArtistGenreTable build(const ListeningLog& log,
                                const GenreCatalog& catalog);

  std::span<const GenreId> genres(ArtistIndex artist) const {
    return genres_.at(artist);
  }
  std::optional<std::uint32_t> catalog_index(ArtistIndex artist) const {
    return catalog_index_.at(artist);
  }
  std::size_t size() const { return genres_.size(); }

 private:
  std::vector<std::vector<GenreId>> genres_;
  std::vector<std::optional<std::uint32_t>> catalog_index_;
};

}  // namespace genremem
