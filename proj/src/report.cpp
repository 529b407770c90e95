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

#include "genremem/report.hpp"

#include <algorithm>
#include <iomanip>
#include <map>
#include <ostream>
#include <sstream>

#include "genremem/error.hpp"
#include "genremem/stats.hpp"
#include "text.hpp"

namespace genremem::report {
namespace {

using nlohmann::json;

constexpr const char* kRankMetrics[] = {"F1", "MRR", "MAP", "nDCG"};

double summary_value(const eval::MetricSummary& s, std::string_view metric) {
  if (metric == "F1") return s.f1;
  if (metric == "MRR") return s.mrr;
  if (metric == "MAP") return s.map;
  return s.ndcg;
}

}  // namespace

json to_json(const memory::DecayFit& fit) {
  return json{{"slope", fit.slope},
              {"intercept", fit.intercept},
              {"d", fit.d},
              {"point_count", fit.point_count},
              {"bin_count", fit.bin_count}};
}

memory::DecayFit decay_fit_from_json(const json& j) {
  memory::DecayFit fit;
  fit.slope = j.at("slope").get<double>();
  fit.intercept = j.at("intercept").get<double>();
  fit.d = j.at("d").get<double>();
  fit.point_count = j.at("point_count").get<std::size_t>();
  fit.bin_count = j.at("bin_count").get<std::size_t>();
  return fit;
}

json to_json(const ingest::UserGroup& group) {
  const auto& s = group.stats;
  const double events = static_cast<double>(s.events);
  const double users = static_cast<double>(s.users);
  json stats{{"users", s.users},
             {"artists", s.artists},
             {"genres", s.genres},
             {"events", s.events},
             {"genre_assignments", s.genre_assignments},
             {"genre_assignments_per_event",
              s.events ? static_cast<double>(s.genre_assignments) / events : 0.0},
             {"genres_per_user", s.users ? static_cast<double>(s.genres) / users : 0.0},
             {"avg_mainstreaminess", s.avg_mainstreaminess}};
  return json{{"name", group.name},
              {"decay_d", group.decay_d ? json(*group.decay_d) : json(nullptr)},
              {"user_ids", group.user_ids},
              {"stats", std::move(stats)}};
}

ingest::UserGroup group_from_json(const json& j) {
  ingest::UserGroup g;
  try {
    g.name = j.at("name").get<std::string>();
    if (!j.at("decay_d").is_null()) g.decay_d = j.at("decay_d").get<double>();
    g.user_ids = j.at("user_ids").get<std::vector<std::string>>();
    const auto& s = j.at("stats");
    g.stats.users = s.at("users").get<std::size_t>();
    g.stats.artists = s.at("artists").get<std::size_t>();
    g.stats.genres = s.at("genres").get<std::size_t>();
    g.stats.events = s.at("events").get<std::size_t>();
    g.stats.genre_assignments = s.at("genre_assignments").get<std::size_t>();
    g.stats.avg_mainstreaminess = s.at("avg_mainstreaminess").get<double>();
  } catch (const json::exception& e) {
    fail(ErrorKind::kData, std::string("malformed group manifest: ") + e.what());
  }
  if (g.user_ids.empty()) fail(ErrorKind::kData, "group manifest has no users");
  return g;
}

std::string prediction_line(const GenreCatalog& catalog, std::string_view user,
                            const std::optional<std::string>& context_artist,
                            std::size_t k, const Ranking& ranking,
                            const json& extra) {
  json items = json::array();
  for (const auto& item : ranking) {
    items.push_back({{"genre", catalog.genre_name(item.genre)}, {"score", item.score}});
  }
  json line = extra.is_object() ? extra : json::object();
  line["user"] = user;
  line["context_artist"] = context_artist ? json(*context_artist) : json(nullptr);
  line["k"] = k;
  line["items"] = std::move(items);
  return line.dump();
}

void write_metric_table(std::ostream& out, std::string_view group,
                        std::span<const eval::AlgorithmReport> reports,
                        const eval::EvalOptions& options) {
  out << "group,algorithm,metric,k,value,n\n";
  for (const auto& r : reports) {
    const auto name = eval::algorithm_name(r.algorithm);
    const auto n = r.mean.cases;
    auto row = [&](std::string_view metric, std::size_t k, double value) {
      out << group << ',' << name << ',' << metric << ',' << k << ','
          << detail::format_fixed(value) << ',' << n << '\n';
    };
    for (std::size_t k = 1; k <= options.k_max; ++k) row("R", k, r.mean.recall[k - 1]);
    for (std::size_t k = 1; k <= options.k_max; ++k) row("P", k, r.mean.precision[k - 1]);
    row("F1", options.f1_k, r.mean.f1);
    row("MRR", options.k_max, r.mean.mrr);
    row("MAP", options.k_max, r.mean.map);
    row("nDCG", options.k_max, r.mean.ndcg);
  }
}

void write_curves(std::ostream& out, std::string_view group,
                  std::span<const eval::AlgorithmReport> reports) {
  out << "group,algorithm,k,recall,precision\n";
  for (const auto& r : reports) {
    for (std::size_t k = 1; k <= r.mean.recall.size(); ++k) {
      out << group << ',' << eval::algorithm_name(r.algorithm) << ',' << k << ','
          << detail::format_fixed(r.mean.recall[k - 1]) << ','
          << detail::format_fixed(r.mean.precision[k - 1]) << '\n';
    }
  }
}

void write_significance(std::ostream& out, std::string_view group,
                        std::span<const eval::AlgorithmReport> reports,
                        double alpha, bool paired) {
  out << "group,metric,algorithm_a,algorithm_b,t,p,significant\n";
  for (const char* metric : kRankMetrics) {
    for (std::size_t a = 0; a < reports.size(); ++a) {
      for (std::size_t b = a + 1; b < reports.size(); ++b) {
        std::vector<double> xa;
        std::vector<double> xb;
        for (const auto& s : reports[a].per_user) xa.push_back(summary_value(s, metric));
        for (const auto& s : reports[b].per_user) xb.push_back(summary_value(s, metric));
        out << group << ',' << metric << ',' << eval::algorithm_name(reports[a].algorithm)
            << ',' << eval::algorithm_name(reports[b].algorithm) << ',';
        if (xa.size() < 2 || xa.size() != xb.size()) {
          out << "nan,nan,insufficient\n";
          continue;
        }
        const auto t = paired ? stats::paired_t_test(xa, xb, alpha)
                              : stats::welch_t_test(xa, xb, alpha);
        if (t.degenerate) {
          out << "nan,1,degenerate\n";
          continue;
        }
        out << detail::format_double(t.t) << ',' << detail::format_double(t.p) << ','
            << (t.significant ? "yes" : "no") << '\n';
      }
    }
  }
}

void write_prediction_log(std::ostream& out, std::string_view group,
                          const eval::Evaluator& evaluator,
                          const eval::AlgorithmReport& report,
                          const std::vector<std::string>& artist_names,
                          const GenreCatalog& catalog) {
  const auto& cases = evaluator.cases().cases;
  const auto& history = evaluator.history();
  for (std::size_t i = 0; i < cases.size(); ++i) {
    const auto& c = cases[i];
    std::optional<std::string> context;
    if (c.context_artist) context = artist_names.at(*c.context_artist);
    json relevant = json::array();
    for (const auto g : c.relevant) relevant.push_back(catalog.genre_name(g));
    json extra{{"group", group},
               {"algorithm", eval::algorithm_name(report.algorithm)},
               {"target_artist", artist_names.at(c.target_artist)},
               {"ref_time", c.ref_time},
               {"relevant", std::move(relevant)}};
    out << prediction_line(catalog, history.user_id(c.user), context,
                           evaluator.options().k_max, report.predictions[i], extra)
        << '\n';
  }
}

std::string render_table(std::span<const std::string> metric_csv_documents) {
  // (group, metric label) -> algorithm -> value, keeping first-seen order
  std::vector<std::string> groups;
  std::vector<std::string> algorithms;
  std::map<std::tuple<std::string, std::string, std::string>, std::string> cells;
  std::map<std::string, std::string> metric_labels;

  for (const auto& doc : metric_csv_documents) {
    std::istringstream in(doc);
    std::string line;
    bool header = true;
    while (std::getline(in, line)) {
      if (header) {
        header = false;
        continue;
      }
      if (line.empty()) continue;
      const auto f = detail::split(line, ',');
      if (f.size() != 6) fail(ErrorKind::kData, "malformed metric table line: " + line);
      const std::string metric(f[2]);
      if (std::find(std::begin(kRankMetrics), std::end(kRankMetrics), metric) ==
          std::end(kRankMetrics)) {
        continue;
      }
      const std::string group(f[0]);
      const std::string algorithm(f[1]);
      if (std::find(groups.begin(), groups.end(), group) == groups.end()) groups.push_back(group);
      if (std::find(algorithms.begin(), algorithms.end(), algorithm) == algorithms.end()) {
        algorithms.push_back(algorithm);
      }
      metric_labels[metric] = metric + "@" + std::string(f[3]);
      const auto value = detail::parse_double(f[4]);
      if (!value) fail(ErrorKind::kData, "malformed metric value: " + line);
      std::ostringstream cell;
      cell << std::fixed << std::setprecision(3) << *value;
      cells[{group, metric, algorithm}] = cell.str();
    }
  }

  std::vector<std::vector<std::string>> rows;
  std::vector<std::string> head{"group", "metric"};
  head.insert(head.end(), algorithms.begin(), algorithms.end());
  rows.push_back(head);
  for (const auto& g : groups) {
    for (const char* metric : kRankMetrics) {
      if (!metric_labels.contains(metric)) continue;
      std::vector<std::string> row{g, metric_labels[metric]};
      bool any = false;
      for (const auto& a : algorithms) {
        auto it = cells.find({g, metric, a});
        any |= it != cells.end();
        row.push_back(it != cells.end() ? it->second : "-");
      }
      if (any) rows.push_back(std::move(row));
    }
  }

  std::vector<std::size_t> widths(head.size(), 0);
  for (const auto& row : rows) {
    for (std::size_t c = 0; c < row.size(); ++c) widths[c] = std::max(widths[c], row[c].size());
  }
  std::ostringstream out;
  for (std::size_t r = 0; r < rows.size(); ++r) {
    for (std::size_t c = 0; c < rows[r].size(); ++c) {
      if (c < 2) {
        out << std::left << std::setw(static_cast<int>(widths[c])) << rows[r][c];
      } else {
        out << std::right << std::setw(static_cast<int>(widths[c])) << rows[r][c];
      }
      out << (c + 1 < rows[r].size() ? "  " : "\n");
    }
    if (r == 0) {
      std::size_t total = 0;
      for (const auto w : widths) total += w + 2;
      out << std::string(total - 2, '-') << '\n';
    }
  }
  return out.str();
}

}  // namespace genremem::report
