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

#include "genremem/evaluation.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <random>

#include "genremem/error.hpp"
#include "genremem/stats.hpp"
#include "parallel.hpp"

namespace genremem::eval {
namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

bool chronological(const Play& a, const Play& b) {
  return a.timestamp != b.timestamp ? a.timestamp < b.timestamp : a.seq < b.seq;
}

// Algorithms whose output does not depend on the individual test event.
bool user_constant(Algorithm a) {
  switch (a) {
    case Algorithm::kTop:
    case Algorithm::kCfUser:
    case Algorithm::kCfItem:
    case Algorithm::kPopUser:
    case Algorithm::kTimeUser:
      return true;
    default:
      return false;
  }
}

}  // namespace

std::size_t test_size(std::size_t event_count, double fraction) {
  if (!(fraction > 0.0 && fraction < 1.0)) {
    fail(ErrorKind::kUsage, "split fraction must lie in (0, 1)");
  }
  if (event_count < 2) return 0;
  // the epsilon keeps e.g. 0.07 * 100 from rounding up to 8
  const auto raw = std::ceil(fraction * static_cast<double>(event_count) - 1e-9);
  auto size = static_cast<std::size_t>(std::max(1.0, raw));
  return std::min(size, event_count - 1);
}

SplitDataset temporal_split(std::span<const UserSequence> users, double fraction) {
  SplitDataset split;
  split.fraction = fraction;
  for (const auto& user : users) {
    const auto n_test = test_size(user.plays.size(), fraction);
    if (user.plays.size() < 2) {
      split.excluded_users.push_back(user.user_id);
      continue;
    }
    std::vector<Play> plays = user.plays;
    std::stable_sort(plays.begin(), plays.end(), chronological);
    const auto cut = plays.size() - n_test;
    UserSequence train{user.user_id, {plays.begin(), plays.begin() + static_cast<std::ptrdiff_t>(cut)}};
    UserSequence test{user.user_id, {plays.begin() + static_cast<std::ptrdiff_t>(cut), plays.end()}};
    split.train.push_back(std::move(train));
    split.test.push_back(std::move(test));
  }
  return split;
}

bool split_is_temporal(const SplitDataset& split) {
  if (split.train.size() != split.test.size()) return false;
  for (std::size_t u = 0; u < split.train.size(); ++u) {
    const auto& train = split.train[u].plays;
    const auto& test = split.test[u].plays;
    if (split.train[u].user_id != split.test[u].user_id) return false;
    if (train.empty() || test.empty()) return false;
    if (test.size() != test_size(train.size() + test.size(), split.fraction)) return false;
    if (!std::is_sorted(train.begin(), train.end(), chronological)) return false;
    if (!std::is_sorted(test.begin(), test.end(), chronological)) return false;
    if (train.back().timestamp > test.front().timestamp) return false;
  }
  return true;
}

TestCaseSet build_test_cases(const SplitDataset& split,
                             const ArtistGenreTable& artist_genres) {
  TestCaseSet set;
  for (std::size_t u = 0; u < split.test.size(); ++u) {
    const auto& train = split.train[u].plays;
    const auto& test = split.test[u].plays;
    for (std::size_t j = 0; j < test.size(); ++j) {
      const auto genres = artist_genres.genres(test[j].artist);
      if (genres.empty()) {
        ++set.unmappable;
        continue;
      }
      TestCase c;
      c.user = u;
      c.target_artist = test[j].artist;
      c.relevant.assign(genres.begin(), genres.end());
      if (j > 0) {
        c.context_artist = test[j - 1].artist;
      } else if (!train.empty()) {
        c.context_artist = train.back().artist;
      }
      c.ref_time = test[j].timestamp;
      set.cases.push_back(std::move(c));
    }
  }
  return set;
}

std::string_view algorithm_name(Algorithm algorithm) {
  switch (algorithm) {
    case Algorithm::kTop: return "TOP";
    case Algorithm::kCfUser: return "CF_u";
    case Algorithm::kCfItem: return "CF_i";
    case Algorithm::kPopUser: return "POP_u";
    case Algorithm::kTimeUser: return "TIME_u";
    case Algorithm::kBllUser: return "BLL_u";
    case Algorithm::kActUserArtist: return "ACT_ua";
    case Algorithm::kOracle: return "ORACLE";
    case Algorithm::kRandom: return "RANDOM";
  }
  return "?";
}

Algorithm parse_algorithm(std::string_view name) {
  std::string key(name);
  std::transform(key.begin(), key.end(), key.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  key.erase(std::remove(key.begin(), key.end(), ','), key.end());
  if (key == "top") return Algorithm::kTop;
  if (key == "cf_u" || key == "cfu" || key == "cf-user") return Algorithm::kCfUser;
  if (key == "cf_i" || key == "cfi" || key == "cf-item") return Algorithm::kCfItem;
  if (key == "pop_u" || key == "pop") return Algorithm::kPopUser;
  if (key == "time_u" || key == "time") return Algorithm::kTimeUser;
  if (key == "bll_u" || key == "bll") return Algorithm::kBllUser;
  if (key == "act_ua" || key == "act_u_a" || key == "act") return Algorithm::kActUserArtist;
  if (key == "oracle") return Algorithm::kOracle;
  if (key == "random") return Algorithm::kRandom;
  fail(ErrorKind::kUsage, "unknown algorithm '" + std::string(name) + "'");
}

std::vector<Algorithm> default_algorithms() {
  return {Algorithm::kTop,      Algorithm::kCfUser,  Algorithm::kCfItem,
          Algorithm::kPopUser,  Algorithm::kTimeUser, Algorithm::kBllUser,
          Algorithm::kActUserArtist};
}

MetricSummary summarize(std::span<const CaseMetrics> metrics, std::size_t k_max,
                        std::size_t f1_k) {
  MetricSummary s;
  s.cases = metrics.size();
  s.recall.assign(k_max, 0.0);
  s.precision.assign(k_max, 0.0);
  if (metrics.empty()) return s;
  const auto n = static_cast<double>(metrics.size());
  std::vector<double> column(metrics.size());
  auto mean_of = [&](auto field) {
    for (std::size_t i = 0; i < metrics.size(); ++i) column[i] = field(metrics[i]);
    return stats::stable_sum(column) / n;
  };
  for (std::size_t k = 0; k < k_max; ++k) {
    s.recall[k] = mean_of([k](const CaseMetrics& m) { return m.recall[k]; });
    s.precision[k] = mean_of([k](const CaseMetrics& m) { return m.precision[k]; });
  }
  s.f1 = f1(s.precision[f1_k - 1], s.recall[f1_k - 1]);
  s.mrr = mean_of([](const CaseMetrics& m) { return m.mrr; });
  s.map = mean_of([](const CaseMetrics& m) { return m.map; });
  s.ndcg = mean_of([](const CaseMetrics& m) { return m.ndcg; });
  return s;
}

Evaluator::Evaluator(const SplitDataset& split, const GenreCatalog& catalog,
                     const ArtistGenreTable& artist_genres, EvalOptions options)
    : split_(&split),
      catalog_(&catalog),
      artist_genres_(&artist_genres),
      options_(options) {
  if (options_.k_max == 0) fail(ErrorKind::kUsage, "k_max must be positive");
  if (options_.f1_k == 0 || options_.f1_k > options_.k_max) {
    fail(ErrorKind::kUsage, "f1_k must lie in [1, k_max]");
  }
  options_.workers = std::max<std::size_t>(1, options_.workers);
  cases_ = build_test_cases(split, artist_genres);
  history_ = memory::GenreHistory::build(split.train, artist_genres);
  associations_ = memory::AssociationIndex::build(catalog);
  top_ = baselines::predict_top(history_, options_.k_max);

  std::size_t last_user = static_cast<std::size_t>(-1);
  for (const auto& c : cases_.cases) {
    if (c.user != last_user) {
      users_.push_back(split.train[c.user].user_id);
      last_user = c.user;
    }
    user_of_case_slot_.push_back(users_.size() - 1);
  }
}

Ranking Evaluator::predict(Algorithm algorithm, const TestCase& c,
                           std::size_t case_index) const {
  const auto k = options_.k_max;
  switch (algorithm) {
    case Algorithm::kTop:
      return top_;
    case Algorithm::kCfUser:
      return baselines::predict_cf_user(history_, cf_user_, c.user, k);
    case Algorithm::kCfItem:
      return baselines::predict_cf_item(*catalog_, *artist_genres_, cf_item_,
                                        split_->train[c.user], k,
                                        options_.cf_top_artists);
    case Algorithm::kPopUser:
      return baselines::predict_pop(history_, c.user, k);
    case Algorithm::kTimeUser:
      return baselines::predict_time(history_, c.user, k);
    case Algorithm::kBllUser:
      return memory::predict_bll(history_, c.user, c.ref_time, k, options_.decay_d);
    case Algorithm::kActUserArtist: {
      std::span<const GenreId> context;
      if (c.context_artist) context = artist_genres_->genres(*c.context_artist);
      return memory::predict_act(history_, associations_, c.user, context,
                                 c.ref_time, k, options_.decay_d,
                                 options_.attentional_weight);
    }
    case Algorithm::kOracle: {
      Ranking r;
      for (std::size_t i = 0; i < std::min(k, c.relevant.size()); ++i) {
        r.push_back({c.relevant[i], 1.0});
      }
      return r;
    }
    case Algorithm::kRandom: {
      std::vector<GenreId> genres;
      for (const auto& trace : history_.traces(c.user)) genres.push_back(trace.genre);
      std::mt19937_64 rng(splitmix64(options_.seed ^ splitmix64(case_index)));
      // Fisher-Yates with an explicit draw so the order is library independent
      for (std::size_t i = genres.size(); i > 1; --i) {
        const auto j = static_cast<std::size_t>(rng() % i);
        std::swap(genres[i - 1], genres[j]);
      }
      Ranking r;
      for (std::size_t i = 0; i < std::min(k, genres.size()); ++i) {
        r.push_back({genres[i], 0.0});
      }
      return r;
    }
  }
  fail(ErrorKind::kUsage, "unhandled algorithm");
}

AlgorithmReport Evaluator::run(Algorithm algorithm) const {
  if (algorithm == Algorithm::kBllUser || algorithm == Algorithm::kActUserArtist) {
    if (!std::isfinite(options_.decay_d) || options_.decay_d <= 0.0) {
      fail(ErrorKind::kUsage, "BLL_u / ACT_ua need a positive decay exponent d");
    }
  }
  if (algorithm == Algorithm::kCfUser) {
    std::call_once(cf_user_once_, [this] {
      cf_user_ = baselines::UserNeighborhoods::build(
          history_, options_.cf_user_neighbors, options_.workers);
    });
  }
  if (algorithm == Algorithm::kCfItem) {
    std::call_once(cf_item_once_, [this] {
      std::vector<std::uint32_t> needed;
      for (const auto& user : split_->train) {
        for (const auto a : baselines::top_artists(user, options_.cf_top_artists)) {
          if (const auto idx = artist_genres_->catalog_index(a)) needed.push_back(*idx);
        }
      }
      cf_item_ = baselines::ArtistNeighborhoods::build(
          *catalog_, needed, options_.cf_item_neighbors, options_.workers);
    });
  }

  const auto& cases = cases_.cases;
  AlgorithmReport report;
  report.algorithm = algorithm;
  report.predictions.resize(cases.size());
  report.case_metrics.resize(cases.size());

  // contiguous case ranges per reported user
  std::vector<std::pair<std::size_t, std::size_t>> ranges(users_.size(), {0, 0});
  for (std::size_t i = 0; i < cases.size(); ++i) {
    auto& r = ranges[user_of_case_slot_[i]];
    if (r.second == 0) r.first = i;
    r.second = i + 1;
  }
  std::vector<std::size_t> cold(users_.size(), 0);

  detail::parallel_for(users_.size(), options_.workers, [&](std::size_t ui) {
    const auto [begin, end] = ranges[ui];
    std::optional<Ranking> shared;
    for (std::size_t i = begin; i < end; ++i) {
      Ranking ranking;
      if (user_constant(algorithm) && shared) {
        ranking = *shared;
      } else {
        try {
          ranking = predict(algorithm, cases[i], i);
        } catch (const Error& e) {
          if (e.kind() != ErrorKind::kData) throw;
          ranking.clear();
        }
        if (user_constant(algorithm)) shared = ranking;
      }
      if (ranking.empty()) ++cold[ui];
      report.case_metrics[i] = score_case(genres_of(ranking), cases[i].relevant,
                                          options_.k_max, options_.f1_k);
      report.predictions[i] = std::move(ranking);
    }
  });

  report.mean = summarize(report.case_metrics, options_.k_max, options_.f1_k);
  report.per_user.reserve(users_.size());
  for (std::size_t ui = 0; ui < users_.size(); ++ui) {
    const auto [begin, end] = ranges[ui];
    report.per_user.push_back(summarize(
        std::span<const CaseMetrics>(report.case_metrics).subspan(begin, end - begin),
        options_.k_max, options_.f1_k));
    report.cold_cases += cold[ui];
  }
  return report;
}

}  // namespace genremem::eval
