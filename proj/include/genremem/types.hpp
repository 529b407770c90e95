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
#include <optional>
#include <string>
#include <vector>

namespace genremem {

/// Seconds since the Unix epoch (UTC).
using Timestamp = std::int64_t;

/// Index into GenreCatalog::genre_names(). Genre ids are assigned in
/// lexicographic order of the genre name, so ascending id is also ascending
/// name; every tie-break in the library relies on this.
using GenreId = std::uint32_t;

/// Index into a ListeningLog's sorted artist dictionary.
using ArtistIndex = std::uint32_t;

/// One timestamped play of a track by a user.
struct ListeningEvent {
  std::string user_id;
  std::string artist_id;
  std::optional<std::string> album_id;
  std::string track_id;
  Timestamp timestamp = 0;

  bool operator==(const ListeningEvent&) const = default;
};

enum class Gender { kUnknown, kMale, kFemale };

struct UserProfile {
  std::string user_id;
  std::optional<std::string> country;
  std::optional<int> age;
  std::optional<Gender> gender;
  std::optional<double> mainstreaminess;
};

/// A play inside a per-user sequence. `seq` is the position of the event in
/// the original input and breaks ties between equal timestamps.
struct Play {
  ArtistIndex artist = 0;
  Timestamp timestamp = 0;
  std::uint64_t seq = 0;

  bool operator==(const Play&) const = default;
};

/// Chronologically ordered plays of one user.
struct UserSequence {
  std::string user_id;
  std::vector<Play> plays;
};

/// A genre together with a score. Used for every ranked output.
struct ScoredGenre {
  GenreId genre = 0;
  double score = 0.0;

  bool operator==(const ScoredGenre&) const = default;
};

using Ranking = std::vector<ScoredGenre>;

}  // namespace genremem
