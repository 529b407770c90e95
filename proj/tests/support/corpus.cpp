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

#include "corpus.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <random>

namespace corpus {
namespace {

std::string name(const char* prefix, std::size_t i) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%s%03zu", prefix, i);
  return buf;
}

std::size_t uniform(std::mt19937_64& rng, std::size_t lo, std::size_t hi) {
  return std::uniform_int_distribution<std::size_t>(lo, hi)(rng);
}

}  // namespace

void sync_world(Instance& instance) {
  instance.world = {};
  for (const auto& t : instance.tags) {
    auto& genres = instance.world.artist_genres[t.artist_id];
    if (t.relative_frequency >= instance.min_rel_freq) genres.insert(t.tag);
  }
  for (const auto& e : instance.events) {
    instance.world.events.push_back({e.user_id, e.artist_id, e.timestamp});
  }
}

std::unique_ptr<Built> build(const Instance& instance) {
  auto b = std::make_unique<Built>();
  b->catalog = genremem::GenreCatalog::build(instance.tags, instance.min_rel_freq);
  b->log = genremem::ListeningLog::build(instance.events);
  b->table = genremem::ArtistGenreTable::build(b->log, b->catalog);
  b->history = genremem::memory::GenreHistory::build(b->log.users(), b->table);
  b->associations = genremem::memory::AssociationIndex::build(b->catalog);
  return b;
}

Instance random_instance(std::uint64_t seed, std::size_t max_users, std::size_t max_genres,
                         std::size_t max_events) {
  std::mt19937_64 rng(seed);
  Instance inst;
  const auto genres = uniform(rng, 2, max_genres);
  const auto artists = uniform(rng, 3, 20);
  const double freqs[] = {0.2, 0.45, 0.5, 0.7, 1.0};
  for (std::size_t a = 0; a < artists; ++a) {
    if (a % 7 == 6) continue;  // never tagged
    const auto tags = uniform(rng, 1, 4);
    for (std::size_t t = 0; t < tags; ++t) {
      inst.tags.push_back({name("a", a), name("g", uniform(rng, 0, genres - 1)),
                           freqs[uniform(rng, 0, 4)]});
    }
  }
  const auto users = uniform(rng, 1, max_users);
  const auto events = uniform(rng, users, max_events);
  const std::int64_t base = 1'300'000'000;
  for (std::size_t i = 0; i < events; ++i) {
    // a small pool of timestamps makes ties and zero gaps common
    const std::int64_t t = uniform(rng, 0, 3) == 0
                               ? base + static_cast<std::int64_t>(uniform(rng, 0, 20)) * 600
                               : base + static_cast<std::int64_t>(uniform(rng, 0, 2'000'000));
    inst.events.push_back({name("u", i < users ? i : uniform(rng, 0, users - 1)),
                           name("a", uniform(rng, 0, artists - 1)), std::nullopt,
                           name("t", uniform(rng, 0, 50)), t});
  }
  sync_world(inst);
  return inst;
}

Instance decay_instance(const std::vector<std::int64_t>& gaps,
                        const std::vector<std::size_t>& counts) {
  Instance inst;
  inst.tags.push_back({"artist", "rock", 1.0});
  std::int64_t t = 1'000'000'000;
  inst.events.push_back({"listener", "artist", std::nullopt, "track", t});
  for (std::size_t i = 0; i < gaps.size(); ++i) {
    for (std::size_t j = 0; j < counts[i]; ++j) {
      t += gaps[i];
      inst.events.push_back({"listener", "artist", std::nullopt, "track", t});
    }
  }
  sync_world(inst);
  return inst;
}

Instance mainstream_instance(std::uint64_t seed, std::size_t per_kind,
                             std::size_t events_per_user) {
  std::mt19937_64 rng(seed);
  Instance inst;
  constexpr std::size_t kMainGenres = 15;
  constexpr std::size_t kMainArtists = 60;
  for (std::size_t a = 0; a < kMainArtists; ++a) {
    inst.tags.push_back({name("main", a), name("m", a % kMainGenres), 1.0});
    inst.tags.push_back({name("main", a), name("m", (a * 7 + 3) % kMainGenres), 0.8});
  }
  // Zipf popularity over the mainstream artists, shared by everybody
  std::vector<double> weights;
  for (std::size_t a = 0; a < kMainArtists; ++a) weights.push_back(1.0 / static_cast<double>(a + 1));
  std::discrete_distribution<std::size_t> mainstream(weights.begin(), weights.end());

  const double niche_share[] = {0.95, 0.5, 0.0};
  std::size_t user = 0;
  for (const double share : niche_share) {
    for (std::size_t i = 0; i < per_kind; ++i, ++user) {
      const auto uid = name("user", user);
      // four private artists, two of three private genres each
      std::vector<std::string> own;
      const std::string genre_prefix = "n" + std::to_string(user) + "_";
      for (std::size_t j = 0; j < 4; ++j) {
        const auto artist = name(("niche" + std::to_string(user) + "_").c_str(), j);
        own.push_back(artist);
        inst.tags.push_back({artist, name(genre_prefix.c_str(), j % 3), 1.0});
        inst.tags.push_back({artist, name(genre_prefix.c_str(), (j + 1) % 3), 0.9});
      }
      std::int64_t t = 1'300'000'000 + static_cast<std::int64_t>(uniform(rng, 0, 86'400));
      for (std::size_t e = 0; e < events_per_user; ++e) {
        t += static_cast<std::int64_t>(uniform(rng, 120, 20'000));
        const bool niche = std::uniform_real_distribution<double>(0.0, 1.0)(rng) < share;
        const auto artist = niche ? own[uniform(rng, 0, own.size() - 1)]
                                  : name("main", mainstream(rng));
        inst.events.push_back({uid, artist, std::nullopt, "track", t});
      }
    }
  }
  sync_world(inst);
  return inst;
}

}  // namespace corpus
