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

#include "oracles.hpp"

#include <algorithm>
#include <cmath>
#include <tuple>

namespace oracle {

std::set<std::string> genres_of(const World& w, const std::string& artist) {
  auto it = w.artist_genres.find(artist);
  return it == w.artist_genres.end() ? std::set<std::string>{} : it->second;
}

std::map<std::string, std::vector<std::int64_t>> genre_times(const World& w,
                                                             const std::string& user) {
  std::map<std::string, std::vector<std::int64_t>> out;
  for (const auto& e : w.events) {
    if (e.user != user) continue;
    for (const auto& g : genres_of(w, e.artist)) out[g].push_back(e.t);
  }
  for (auto& [g, times] : out) std::sort(times.begin(), times.end());
  return out;
}

double bll(const std::vector<std::int64_t>& times, std::int64_t ref, double d) {
  double sum = 0.0;
  for (const auto t : times) {
    const double age = std::max<double>(static_cast<double>(ref - t), 1.0);
    sum += std::pow(age, -d);
  }
  return std::log(sum);
}

std::vector<double> softmax(const std::vector<double>& x) {
  double total = 0.0;
  for (const double v : x) total += std::exp(v);
  std::vector<double> out;
  for (const double v : x) out.push_back(std::exp(v) / total);
  return out;
}

double jaccard(const World& w, const std::string& c, const std::string& g) {
  std::set<std::string> ac;
  std::set<std::string> ag;
  for (const auto& [artist, genres] : w.artist_genres) {
    if (genres.count(c)) ac.insert(artist);
    if (genres.count(g)) ag.insert(artist);
  }
  std::set<std::string> both;
  std::set<std::string> either;
  for (const auto& a : ac) {
    either.insert(a);
    if (ag.count(a)) both.insert(a);
  }
  for (const auto& a : ag) either.insert(a);
  if (either.empty()) return 0.0;
  return static_cast<double>(both.size()) / static_cast<double>(either.size());
}

Ranked rank(std::vector<std::tuple<std::string, double, double>> rows, std::size_t k) {
  std::sort(rows.begin(), rows.end(), [](const auto& a, const auto& b) {
    if (std::get<1>(a) != std::get<1>(b)) return std::get<1>(a) > std::get<1>(b);
    return std::get<0>(a) < std::get<0>(b);
  });
  Ranked out;
  for (std::size_t i = 0; i < rows.size() && i < k; ++i) {
    out.emplace_back(std::get<0>(rows[i]), std::get<2>(rows[i]));
  }
  return out;
}

Ranked bll_predict(const World& w, const std::string& user, std::int64_t ref,
                   std::size_t k, double d) {
  const auto times = genre_times(w, user);
  std::vector<std::string> names;
  std::vector<double> raw;
  for (const auto& [g, t] : times) {
    names.push_back(g);
    raw.push_back(bll(t, ref, d));
  }
  const auto norm = softmax(raw);
  std::vector<std::tuple<std::string, double, double>> rows;
  for (std::size_t i = 0; i < names.size(); ++i) rows.emplace_back(names[i], raw[i], norm[i]);
  return rank(rows, k);
}

Ranked act_predict(const World& w, const std::string& user,
                   const std::vector<std::string>& context_genres, std::int64_t ref,
                   std::size_t k, double d, double weight) {
  if (context_genres.empty()) return bll_predict(w, user, ref, k, d);
  const auto times = genre_times(w, user);
  std::vector<std::string> names;
  std::vector<double> raw;
  for (const auto& [g, t] : times) {
    names.push_back(g);
    raw.push_back(bll(t, ref, d));
  }
  const auto base = softmax(raw);
  std::vector<double> act;
  for (std::size_t i = 0; i < names.size(); ++i) {
    double spread = 0.0;
    for (const auto& c : context_genres) spread += jaccard(w, c, names[i]);
    act.push_back(base[i] + weight * spread);
  }
  const auto norm = softmax(act);
  std::vector<std::tuple<std::string, double, double>> rows;
  for (std::size_t i = 0; i < names.size(); ++i) rows.emplace_back(names[i], act[i], norm[i]);
  return rank(rows, k);
}

namespace {

Ranked from_scores(const std::map<std::string, double>& scores, std::size_t k) {
  std::vector<std::tuple<std::string, double, double>> rows;
  for (const auto& [g, s] : scores) rows.emplace_back(g, s, s);
  return rank(rows, k);
}

std::set<std::string> users_of(const World& w) {
  std::set<std::string> users;
  for (const auto& e : w.events) users.insert(e.user);
  return users;
}

std::map<std::string, double> count_vector(const World& w, const std::string& user) {
  std::map<std::string, double> v;
  for (const auto& [g, t] : genre_times(w, user)) v[g] = static_cast<double>(t.size());
  return v;
}

}  // namespace

Ranked top_predict(const World& w, std::size_t k) {
  std::map<std::string, double> scores;
  for (const auto& e : w.events) {
    for (const auto& g : genres_of(w, e.artist)) scores[g] += 1.0;
  }
  return from_scores(scores, k);
}

Ranked pop_predict(const World& w, const std::string& user, std::size_t k) {
  return from_scores(count_vector(w, user), k);
}

Ranked time_predict(const World& w, const std::string& user, std::size_t k) {
  std::map<std::string, double> scores;
  for (const auto& [g, t] : genre_times(w, user)) {
    scores[g] = static_cast<double>(*std::max_element(t.begin(), t.end()));
  }
  return from_scores(scores, k);
}

Ranked cf_user_predict(const World& w, const std::string& user, std::size_t neighbors,
                       std::size_t k) {
  const auto mine = count_vector(w, user);
  auto length = [](const std::map<std::string, double>& v) {
    double s = 0.0;
    for (const auto& [g, x] : v) s += x * x;
    return std::sqrt(s);
  };
  std::vector<std::pair<double, std::string>> sims;  // (-sim, user) sorts as wanted
  for (const auto& other : users_of(w)) {
    if (other == user) continue;
    const auto theirs = count_vector(w, other);
    double dot = 0.0;
    for (const auto& [g, x] : mine) {
      auto it = theirs.find(g);
      if (it != theirs.end()) dot += x * it->second;
    }
    const double denom = length(mine) * length(theirs);
    const double sim = denom > 0.0 ? dot / denom : 0.0;
    if (sim > 0.0) sims.emplace_back(-sim, other);
  }
  std::sort(sims.begin(), sims.end());
  std::map<std::string, double> scores;
  for (std::size_t i = 0; i < sims.size() && i < neighbors; ++i) {
    for (const auto& [g, x] : count_vector(w, sims[i].second)) scores[g] += -sims[i].first * x;
  }
  return from_scores(scores, k);
}

Ranked cf_item_predict(const World& w, const std::string& user, std::size_t neighbors,
                       std::size_t top_artists, std::size_t k) {
  std::map<std::string, int> plays;
  for (const auto& e : w.events) {
    if (e.user == user) ++plays[e.artist];
  }
  std::vector<std::pair<int, std::string>> ranked;  // (-plays, artist)
  for (const auto& [a, n] : plays) ranked.emplace_back(-n, a);
  std::sort(ranked.begin(), ranked.end());

  std::map<std::string, double> scores;
  for (std::size_t i = 0; i < ranked.size() && i < top_artists; ++i) {
    const auto& a = ranked[i].second;
    if (!w.artist_genres.count(a)) continue;
    const auto ga = genres_of(w, a);
    std::vector<std::pair<double, std::string>> sims;
    for (const auto& [b, gb] : w.artist_genres) {
      if (b == a) continue;
      std::size_t shared = 0;
      for (const auto& g : ga) shared += gb.count(g);
      if (shared == 0) continue;
      const double cos = static_cast<double>(shared) /
                         std::sqrt(static_cast<double>(ga.size() * gb.size()));
      sims.emplace_back(-cos, b);
    }
    std::sort(sims.begin(), sims.end());
    for (std::size_t j = 0; j < sims.size() && j < neighbors; ++j) {
      for (const auto& g : genres_of(w, sims[j].second)) scores[g] += -sims[j].first;
    }
  }
  return from_scores(scores, k);
}

namespace {

bool contains(const std::vector<int>& v, int x) {
  return std::find(v.begin(), v.end(), x) != v.end();
}

}  // namespace

double recall(const std::vector<int>& pred, const std::vector<int>& relevant, std::size_t k) {
  double hits = 0;
  for (std::size_t i = 0; i < pred.size() && i < k; ++i) hits += contains(relevant, pred[i]);
  return hits / static_cast<double>(relevant.size());
}

double precision(const std::vector<int>& pred, const std::vector<int>& relevant,
                 std::size_t k) {
  double hits = 0;
  for (std::size_t i = 0; i < pred.size() && i < k; ++i) hits += contains(relevant, pred[i]);
  return hits / static_cast<double>(k);
}

double f1(double p, double r) { return p + r == 0.0 ? 0.0 : 2.0 * p * r / (p + r); }

double mrr(const std::vector<int>& pred, const std::vector<int>& relevant, std::size_t k) {
  // mean over relevant items of 1/rank, relative to the best achievable value
  double got = 0.0;
  for (const int g : relevant) {
    for (std::size_t i = 0; i < pred.size() && i < k; ++i) {
      if (pred[i] == g) got += 1.0 / static_cast<double>(i + 1);
    }
  }
  double best = 0.0;
  for (std::size_t r = 1; r <= relevant.size() && r <= k; ++r) best += 1.0 / static_cast<double>(r);
  return (got / static_cast<double>(relevant.size())) / (best / static_cast<double>(relevant.size()));
}

double map(const std::vector<int>& pred, const std::vector<int>& relevant, std::size_t k) {
  double sum = 0.0;
  for (std::size_t i = 1; i <= pred.size() && i <= k; ++i) {
    if (!contains(relevant, pred[i - 1])) continue;
    sum += precision(pred, relevant, i);
  }
  return sum / static_cast<double>(std::min(k, relevant.size()));
}

double ndcg(const std::vector<int>& pred, const std::vector<int>& relevant, std::size_t k) {
  std::vector<double> gains;
  for (std::size_t i = 0; i < pred.size() && i < k; ++i) gains.push_back(contains(relevant, pred[i]));
  double dcg = 0.0;
  for (std::size_t i = 0; i < gains.size(); ++i) dcg += gains[i] / std::log2(static_cast<double>(i) + 2.0);
  std::vector<double> ideal(relevant.size(), 1.0);
  double idcg = 0.0;
  for (std::size_t i = 0; i < ideal.size() && i < k; ++i) idcg += ideal[i] / std::log2(static_cast<double>(i) + 2.0);
  return dcg / idcg;
}

double paired_t(const std::vector<double>& a, const std::vector<double>& b) {
  const double n = static_cast<double>(a.size());
  double mean = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) mean += a[i] - b[i];
  mean /= n;
  double ss = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) ss += std::pow(a[i] - b[i] - mean, 2);
  const double sd = std::sqrt(ss / (n - 1.0));
  return mean / (sd / std::sqrt(n));
}

double cosine_mainstreaminess(const std::vector<Event>& events, const std::string& user) {
  std::set<std::string> artists;
  for (const auto& e : events) artists.insert(e.artist);
  std::vector<double> mine;
  std::vector<double> all;
  for (const auto& a : artists) {
    double m = 0;
    double g = 0;
    for (const auto& e : events) {
      if (e.artist != a) continue;
      g += 1;
      if (e.user == user) m += 1;
    }
    mine.push_back(m);
    all.push_back(g);
  }
  double dot = 0, nm = 0, ng = 0;
  for (std::size_t i = 0; i < mine.size(); ++i) {
    dot += mine[i] * all[i];
    nm += mine[i] * mine[i];
    ng += all[i] * all[i];
  }
  return dot / std::sqrt(nm * ng);
}

}  // namespace oracle
