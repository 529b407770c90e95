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

#include "genremem/log.hpp"

#include <algorithm>
#include <map>
#include <unordered_map>

namespace genremem {

ListeningLog ListeningLog::build(std::span<const ListeningEvent> events,
                                 const std::set<std::string>* users) {
  auto keep = [users](const ListeningEvent& e) {
    return users == nullptr || users->contains(e.user_id);
  };

  std::set<std::string_view> artist_names;
  std::map<std::string_view, std::size_t> user_names;
  for (const auto& e : events) {
    if (!keep(e)) continue;
    artist_names.insert(e.artist_id);
    ++user_names[e.user_id];
  }

  ListeningLog log;
  log.artists_.assign(artist_names.begin(), artist_names.end());
  std::unordered_map<std::string_view, ArtistIndex> artist_index;
  artist_index.reserve(log.artists_.size());
  for (std::size_t i = 0; i < log.artists_.size(); ++i) {
    artist_index.emplace(log.artists_[i], static_cast<ArtistIndex>(i));
  }

  std::unordered_map<std::string_view, std::size_t> user_index;
  log.users_.reserve(user_names.size());
  for (const auto& [name, count] : user_names) {
    user_index.emplace(name, log.users_.size());
    UserSequence seq;
    seq.user_id = std::string(name);
    seq.plays.reserve(count);
    log.users_.push_back(std::move(seq));
  }

  for (std::size_t i = 0; i < events.size(); ++i) {
    const auto& e = events[i];
    if (!keep(e)) continue;
    log.users_[user_index.at(e.user_id)].plays.push_back(
        {artist_index.at(e.artist_id), e.timestamp, i});
  }
  for (auto& user : log.users_) {
    std::stable_sort(user.plays.begin(), user.plays.end(),
                     [](const Play& a, const Play& b) {
                       return a.timestamp != b.timestamp
                                  ? a.timestamp < b.timestamp
                                  : a.seq < b.seq;
                     });
  }
  return log;
}

std::optional<ArtistIndex> ListeningLog::find_artist(
    std::string_view artist_id) const {
  auto it = std::lower_bound(artists_.begin(), artists_.end(), artist_id);
  if (it == artists_.end() || *it != artist_id) return std::nullopt;
  return static_cast<ArtistIndex>(it - artists_.begin());
}

std::optional<std::size_t> ListeningLog::find_user(
    std::string_view user_id) const {
  auto it = std::lower_bound(
      users_.begin(), users_.end(), user_id,
      [](const UserSequence& u, std::string_view id) { return u.user_id < id; });
  if (it == users_.end() || it->user_id != user_id) return std::nullopt;
  return static_cast<std::size_t>(it - users_.begin());
}

std::size_t ListeningLog::event_count() const {
  std::size_t total = 0;
  for (const auto& u : users_) total += u.plays.size();
  return total;
}

ListeningLog ListeningLog::subset(const std::vector<std::string>& user_ids) const {
  ListeningLog out;
  out.artists_ = artists_;
  std::set<std::string_view> wanted(user_ids.begin(), user_ids.end());
  for (const auto& user : users_) {
    if (wanted.contains(user.user_id)) out.users_.push_back(user);
  }
  return out;
}

ArtistGenreTable ArtistGenreTable::build(const ListeningLog& log,
                                         const GenreCatalog& catalog) {
  ArtistGenreTable table;
  table.genres_.resize(log.artists().size());
  table.catalog_index_.resize(log.artists().size());
  for (std::size_t i = 0; i < log.artists().size(); ++i) {
    const auto index = catalog.find_artist(log.artists()[i]);
    table.catalog_index_[i] = index;
    if (index) {
      const auto genres = catalog.genres_of(*index);
      table.genres_[i].assign(genres.begin(), genres.end());
    }
  }
  return table;
}

}  // namespace genremem
