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

#include "genremem/memory.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "genremem/error.hpp"

namespace genremem::memory {
namespace {

void check_decay(double d) {
  if (!std::isfinite(d) || d <= 0.0) {
    fail(ErrorKind::kUsage, "decay exponent d must be a positive finite number");
  }
}

// Orders by `rank_key` (descending, genre id ascending on ties) and reports
// `shown` as the score.
Ranking rank_by(std::span<const GenreId> genres, std::span<const double> rank_key,
                std::span<const double> shown, std::size_t k) {
  std::vector<std::size_t> order(genres.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  const auto keep = std::min(k, order.size());
  auto better = [&](std::size_t a, std::size_t b) {
    if (rank_key[a] != rank_key[b]) return rank_key[a] > rank_key[b];
    return genres[a] < genres[b];
  };
  std::partial_sort(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(keep),
                    order.end(), better);
  Ranking out;
  out.reserve(keep);
  for (std::size_t i = 0; i < keep; ++i) {
    out.push_back({genres[order[i]], shown[order[i]]});
  }
  return out;
}

struct BaseLevel {
  std::vector<GenreId> genres;
  std::vector<double> raw;         // B(g, u)
  std::vector<double> normalized;  // B'(g, u)
};

BaseLevel base_levels(const GenreHistory& history, std::size_t user,
                      Timestamp ref_time, double d) {
  check_decay(d);
  const auto traces = history.traces(user);
  if (traces.empty()) {
    fail(ErrorKind::kData, "cold user '" + history.user_id(user) +
                               "': no genre history to score");
  }
  BaseLevel out;
  out.genres.reserve(traces.size());
  out.raw.reserve(traces.size());
  for (const auto& trace : traces) {
    out.genres.push_back(trace.genre);
    out.raw.push_back(base_level_activation(trace.times, ref_time, d));
  }
  out.normalized = softmax_normalize(out.raw);
  return out;
}

}  // namespace

GenreHistory GenreHistory::build(std::span<const UserSequence> users,
                                 const ArtistGenreTable& artist_genres) {
  GenreHistory history;
  history.user_ids_.reserve(users.size());
  history.traces_.resize(users.size());
  for (std::size_t u = 0; u < users.size(); ++u) {
    history.user_ids_.push_back(users[u].user_id);
    history.index_.emplace(users[u].user_id, u);

    std::vector<std::pair<GenreId, Timestamp>> occurrences;
    for (const auto& play : users[u].plays) {
      for (const GenreId g : artist_genres.genres(play.artist)) {
        occurrences.emplace_back(g, play.timestamp);
      }
    }
    std::sort(occurrences.begin(), occurrences.end());

    auto& traces = history.traces_[u];
    for (const auto& [genre, ts] : occurrences) {
      if (traces.empty() || traces.back().genre != genre) {
        traces.push_back({genre, {}});
      }
      traces.back().times.push_back(ts);
    }
  }
  return history;
}

std::optional<std::size_t> GenreHistory::find_user(std::string_view user_id) const {
  auto it = index_.find(std::string(user_id));
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

const GenreTrace* GenreHistory::find(std::size_t user, GenreId genre) const {
  const auto& traces = traces_.at(user);
  auto it = std::lower_bound(
      traces.begin(), traces.end(), genre,
      [](const GenreTrace& t, GenreId g) { return t.genre < g; });
  if (it == traces.end() || it->genre != genre) return nullptr;
  return &*it;
}

std::size_t GenreHistory::occurrence_count() const {
  std::size_t total = 0;
  for (const auto& user : traces_) {
    for (const auto& trace : user) total += trace.times.size();
  }
  return total;
}

double base_level_activation(std::span<const Timestamp> times,
                             Timestamp ref_time, double d) {
  check_decay(d);
  if (times.empty()) {
    fail(ErrorKind::kData, "base-level activation needs at least one occurrence");
  }
  // terms are -d * ln(age); the youngest occurrence gives the largest one
  double max_term = -std::numeric_limits<double>::infinity();
  std::vector<double> terms;
  terms.reserve(times.size());
  for (const Timestamp t : times) {
    const auto age = std::max<Timestamp>(ref_time - t, 1);
    const double term = -d * std::log(static_cast<double>(age));
    terms.push_back(term);
    max_term = std::max(max_term, term);
  }
  double sum = 0.0;
  for (const double term : terms) sum += std::exp(term - max_term);
  return max_term + std::log(sum);
}

double bll_score(const GenreHistory& history, std::size_t user, GenreId genre,
                 Timestamp ref_time, double d) {
  const auto* trace = history.find(user, genre);
  if (trace == nullptr) {
    fail(ErrorKind::kData, "unknown genre for user '" + history.user_id(user) + "'");
  }
  return base_level_activation(trace->times, ref_time, d);
}

std::vector<double> softmax_normalize(std::span<const double> scores) {
  if (scores.empty()) fail(ErrorKind::kUsage, "softmax of an empty score set");
  double max_score = scores.front();
  for (const double s : scores) {
    if (!std::isfinite(s)) fail(ErrorKind::kUsage, "softmax input is not finite");
    max_score = std::max(max_score, s);
  }
  std::vector<double> out(scores.size());
  double sum = 0.0;
  for (std::size_t i = 0; i < scores.size(); ++i) {
    out[i] = std::exp(scores[i] - max_score);
    sum += out[i];
  }
  for (auto& v : out) v /= sum;
  return out;
}

AssociationIndex AssociationIndex::build(const GenreCatalog& catalog) {
  AssociationIndex index;
  const auto n = catalog.genre_count();
  index.artist_counts_.resize(n);
  for (GenreId g = 0; g < n; ++g) {
    index.artist_counts_[g] = static_cast<std::uint32_t>(catalog.artists_of(g).size());
  }

  std::vector<std::uint64_t> pairs;
  for (std::uint32_t a = 0; a < catalog.artist_count(); ++a) {
    const auto genres = catalog.genres_of(a);
    for (std::size_t i = 0; i < genres.size(); ++i) {
      for (std::size_t j = i + 1; j < genres.size(); ++j) {
        pairs.push_back((std::uint64_t{genres[i]} << 32) | genres[j]);
      }
    }
  }
  std::sort(pairs.begin(), pairs.end());

  index.rows_.resize(n);
  for (std::size_t i = 0; i < pairs.size();) {
    std::size_t j = i;
    while (j < pairs.size() && pairs[j] == pairs[i]) ++j;
    const auto c = static_cast<GenreId>(pairs[i] >> 32);
    const auto g = static_cast<GenreId>(pairs[i] & 0xffffffffu);
    index.rows_[c].emplace_back(g, static_cast<std::uint32_t>(j - i));
    i = j;
  }
  return index;
}

std::uint32_t AssociationIndex::co_occurrence(GenreId c, GenreId g) const {
  if (c >= genre_count() || g >= genre_count()) {
    fail(ErrorKind::kData, "unknown genre id in association lookup");
  }
  if (c == g) return artist_counts_[c];
  if (c > g) std::swap(c, g);
  const auto& row = rows_[c];
  auto it = std::lower_bound(
      row.begin(), row.end(), g,
      [](const std::pair<GenreId, std::uint32_t>& e, GenreId x) { return e.first < x; });
  if (it == row.end() || it->first != g) return 0;
  return it->second;
}

double AssociationIndex::strength(GenreId c, GenreId g) const {
  const double both = co_occurrence(c, g);
  const double either =
      static_cast<double>(artist_counts_[c]) + artist_counts_[g] - both;
  if (either <= 0.0) return 0.0;
  return both / either;
}

Ranking predict_bll(const GenreHistory& history, std::size_t user,
                    Timestamp ref_time, std::size_t k, double d) {
  const auto base = base_levels(history, user, ref_time, d);
  return rank_by(base.genres, base.raw, base.normalized, k);
}

Ranking predict_act(const GenreHistory& history,
                    const AssociationIndex& associations, std::size_t user,
                    std::span<const GenreId> context, Timestamp ref_time,
                    std::size_t k, double d, double weight) {
  if (context.empty()) return predict_bll(history, user, ref_time, k, d);
  if (!std::isfinite(weight)) fail(ErrorKind::kUsage, "attentional weight must be finite");

  const auto base = base_levels(history, user, ref_time, d);
  std::vector<double> activation(base.genres.size());
  for (std::size_t i = 0; i < base.genres.size(); ++i) {
    double spread = 0.0;
    for (const GenreId c : context) spread += associations.strength(c, base.genres[i]);
    activation[i] = base.normalized[i] + weight * spread;
  }
  const auto normalized = softmax_normalize(activation);
  return rank_by(base.genres, activation, normalized, k);
}

std::vector<Timestamp> relisten_gaps(const GenreHistory& history) {
  std::vector<Timestamp> gaps;
  for (std::size_t u = 0; u < history.user_count(); ++u) {
    for (const auto& trace : history.traces(u)) {
      for (std::size_t j = 1; j < trace.times.size(); ++j) {
        const auto gap = trace.times[j] - trace.times[j - 1];
        if (gap > 0) gaps.push_back(gap);
      }
    }
  }
  return gaps;
}

std::vector<DecayPoint> bin_gaps(std::span<const Timestamp> gaps,
                                 std::size_t bin_count) {
  if (bin_count == 0) fail(ErrorKind::kUsage, "bin_count must be positive");
  if (gaps.empty()) return {};
  const auto [min_it, max_it] = std::minmax_element(gaps.begin(), gaps.end());
  const double lo = std::log10(static_cast<double>(*min_it));
  const double hi = std::log10(static_cast<double>(*max_it));
  const double width = (hi - lo) / static_cast<double>(bin_count);

  std::vector<std::size_t> counts(bin_count, 0);
  std::vector<double> log_sums(bin_count, 0.0);
  for (const Timestamp gap : gaps) {
    const double x = std::log10(static_cast<double>(gap));
    std::size_t bin = 0;
    if (width > 0.0) {
      bin = std::min(bin_count - 1, static_cast<std::size_t>((x - lo) / width));
    }
    ++counts[bin];
    log_sums[bin] += x;
  }

  std::vector<DecayPoint> points;
  for (std::size_t b = 0; b < bin_count; ++b) {
    if (counts[b] == 0) continue;
    const double mean_log = log_sums[b] / static_cast<double>(counts[b]);
    points.push_back({std::pow(10.0, mean_log), static_cast<double>(counts[b])});
  }
  return points;
}

DecayFit fit_power_law(std::span<const DecayPoint> points) {
  std::vector<double> xs;
  std::vector<double> ys;
  for (const auto& p : points) {
    if (!(p.gap_seconds > 0.0) || !(p.count > 0.0)) continue;
    xs.push_back(std::log10(p.gap_seconds));
    ys.push_back(std::log10(p.count));
  }
  const auto n = xs.size();
  const bool distinct = n >= 2 && std::any_of(xs.begin(), xs.end(),
                                              [&](double x) { return x != xs[0]; });
  if (!distinct) {
    fail(ErrorKind::kDegenerate,
         "decay fit needs at least 2 distinct non-empty gap bins (got " +
             std::to_string(n) + "); supply d manually instead");
  }
  const double mean_x = std::accumulate(xs.begin(), xs.end(), 0.0) / static_cast<double>(n);
  const double mean_y = std::accumulate(ys.begin(), ys.end(), 0.0) / static_cast<double>(n);
  double sxx = 0.0;
  double sxy = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    sxx += (xs[i] - mean_x) * (xs[i] - mean_x);
    sxy += (xs[i] - mean_x) * (ys[i] - mean_y);
  }
  DecayFit fit;
  fit.slope = sxy / sxx;
  fit.intercept = mean_y - fit.slope * mean_x;
  fit.d = std::abs(fit.slope);
  fit.point_count = n;
  if (!(fit.d > 0.0)) {
    fail(ErrorKind::kDegenerate,
         "decay fit produced a flat line (d = 0); supply d manually instead");
  }
  return fit;
}

DecayFit fit_decay(const GenreHistory& history, std::size_t bin_count) {
  const auto gaps = relisten_gaps(history);
  const auto points = bin_gaps(gaps, bin_count);
  auto fit = fit_power_law(points);
  fit.bin_count = bin_count;
  return fit;
}

}  // namespace genremem::memory
