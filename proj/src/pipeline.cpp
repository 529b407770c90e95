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

#include "genremem/pipeline.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "genremem/catalog.hpp"
#include "genremem/error.hpp"
#include "genremem/ingestion.hpp"
#include "genremem/log.hpp"
#include "genremem/memory.hpp"
#include "genremem/report.hpp"
#include "text.hpp"

namespace genremem::pipeline {
namespace fs = std::filesystem;
using nlohmann::json;

namespace {

std::string normalize_key(std::string_view key) {
  std::string k(key);
  std::replace(k.begin(), k.end(), '_', '-');
  std::transform(k.begin(), k.end(), k.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  while (!k.empty() && k.front() == '-') k.erase(k.begin());
  return k;
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  if (s.size() >= 2 && (s.front() == '"' || s.front() == '\'') && s.back() == s.front()) {
    s = s.substr(1, s.size() - 2);
  }
  return s;
}

std::size_t to_size(std::string_view key, std::string_view value) {
  const auto v = detail::parse_int(value);
  if (!v || *v < 0) {
    fail(ErrorKind::kUsage, std::string(key) + " expects a non-negative integer, got '" +
                                std::string(value) + "'");
  }
  return static_cast<std::size_t>(*v);
}

double to_real(std::string_view key, std::string_view value) {
  const auto v = detail::parse_double(value);
  if (!v || !std::isfinite(*v)) {
    fail(ErrorKind::kUsage, std::string(key) + " expects a number, got '" +
                                std::string(value) + "'");
  }
  return *v;
}

bool to_bool(std::string_view key, std::string_view value) {
  if (value == "1" || value == "true" || value == "yes" || value == "on") return true;
  if (value == "0" || value == "false" || value == "no" || value == "off") return false;
  fail(ErrorKind::kUsage, std::string(key) + " expects a boolean, got '" +
                              std::string(value) + "'");
}

std::ifstream open_input(const fs::path& path, const char* what) {
  if (path.empty()) fail(ErrorKind::kUsage, std::string("no ") + what + " path configured");
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(ErrorKind::kUsage, std::string("cannot open ") + what + " file " + path.string());
  return in;
}

void write_file(const fs::path& path, const std::string& content) {
  std::error_code ec;
  fs::create_directories(path.parent_path(), ec);
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) fail(ErrorKind::kUsage, "cannot write " + path.string());
  out << content;
  if (!out) fail(ErrorKind::kUsage, "error while writing " + path.string());
}

json read_json(const fs::path& path, const char* what) {
  auto in = open_input(path, what);
  try {
    return json::parse(in);
  } catch (const json::exception& e) {
    fail(ErrorKind::kData, "malformed " + std::string(what) + " " + path.string() + ": " + e.what());
  }
}

fs::path data_dir(const RunConfig& c) { return c.out_dir / "data"; }
fs::path manifest_path(const RunConfig& c) { return c.out_dir / "manifest.json"; }
fs::path group_path(const RunConfig& c, std::string_view g) {
  return c.out_dir / "groups" / (std::string(g) + ".json");
}
fs::path fit_path(const RunConfig& c, std::string_view g) {
  return c.out_dir / "fits" / (std::string(g) + ".json");
}

json load_manifest(const RunConfig& c) {
  if (!fs::exists(manifest_path(c))) {
    fail(ErrorKind::kUsage, "no manifest in " + c.out_dir.string() + "; run ingest first");
  }
  return read_json(manifest_path(c), "manifest");
}

// The manifest and the snapshot of the configuration that last wrote it.
void save_manifest(const RunConfig& c, const json& manifest) {
  write_file(manifest_path(c), manifest.dump(2) + "\n");
  write_file(c.out_dir / "config.ini", config_to_ini(c));
}

json config_json(const RunConfig& c) {
  json overrides = json::object();
  for (const auto& [g, d] : c.d_override) overrides[g] = d;
  return json{{"events", c.events.string()},
              {"profiles", c.profiles.string()},
              {"tags", c.tags.string()},
              {"allowed_genres", c.allowed_genres.string()},
              {"group_size", c.group_size},
              {"min_le", c.min_le},
              {"max_le", c.max_le},
              {"min_rel_freq", c.min_rel_freq},
              {"mainstream_mode", c.mainstream_mode},
              {"split_fraction", c.split_fraction},
              {"k_max", c.k_max},
              {"f1_k", c.f1_k},
              {"decay_bins", c.decay_bins},
              {"d_override", overrides},
              {"cf_user_neighbors", c.cf_user_neighbors},
              {"cf_item_neighbors", c.cf_item_neighbors},
              {"cf_top_artists", c.cf_top_artists},
              {"attentional_weight", c.attentional_weight},
              {"alpha", c.alpha},
              {"paired", c.paired},
              {"seed", c.seed},
              {"strict", c.strict}};
}

ingest::ParseOptions parse_options(const RunConfig& c) {
  return {c.strict, c.workers};
}

// Normalised store written by ingest.
struct Store {
  std::vector<ListeningEvent> events;
  std::vector<UserProfile> profiles;
  GenreCatalog catalog;
};

Store load_store(const RunConfig& c) {
  load_manifest(c);
  Store store;
  const ingest::ParseOptions strict{true, c.workers};
  {
    auto in = open_input(data_dir(c) / "events.tsv", "normalized events");
    store.events = ingest::parse_events(in, strict).records;
  }
  {
    auto in = open_input(data_dir(c) / "catalog.tsv", "normalized catalog");
    const auto tags = ingest::parse_tags(in, strict).records;
    store.catalog = GenreCatalog::build(tags, 0.0, nullptr);
  }
  if (fs::exists(data_dir(c) / "profiles.tsv")) {
    auto in = open_input(data_dir(c) / "profiles.tsv", "normalized profiles");
    store.profiles = ingest::parse_profiles(in, strict).records;
  }
  return store;
}

ingest::UserGroup load_group(const RunConfig& c, std::string_view name) {
  const auto path = group_path(c, name);
  if (!fs::exists(path)) {
    fail(ErrorKind::kUsage, "no group manifest " + path.string() + "; run split-groups first");
  }
  return report::group_from_json(read_json(path, "group manifest"));
}

std::string format_count(std::string_view label, std::size_t n) {
  std::ostringstream s;
  s << "  " << label << ": " << n << '\n';
  return s.str();
}

}  // namespace

void set_config_value(RunConfig& c, std::string_view raw_key, std::string_view raw_value) {
  const auto key = normalize_key(raw_key);
  const auto value = trim(raw_value);
  if (key == "events") c.events = std::string(value);
  else if (key == "profiles") c.profiles = std::string(value);
  else if (key == "tags") c.tags = std::string(value);
  else if (key == "allowed-genres" || key == "genres") c.allowed_genres = std::string(value);
  else if (key == "out" || key == "out-dir") c.out_dir = std::string(value);
  else if (key == "group-size") c.group_size = to_size(key, value);
  else if (key == "min-le") c.min_le = to_size(key, value);
  else if (key == "max-le") c.max_le = to_size(key, value);
  else if (key == "min-rel-freq") c.min_rel_freq = to_real(key, value);
  else if (key == "mainstream-mode") c.mainstream_mode = std::string(value);
  else if (key == "split-fraction") c.split_fraction = to_real(key, value);
  else if (key == "k-max") c.k_max = to_size(key, value);
  else if (key == "f1-k") c.f1_k = to_size(key, value);
  else if (key == "decay-bins") c.decay_bins = to_size(key, value);
  else if (key == "cf-user-neighbors") c.cf_user_neighbors = to_size(key, value);
  else if (key == "cf-item-neighbors") c.cf_item_neighbors = to_size(key, value);
  else if (key == "cf-top-artists") c.cf_top_artists = to_size(key, value);
  else if (key == "attentional-weight") c.attentional_weight = to_real(key, value);
  else if (key == "alpha") c.alpha = to_real(key, value);
  else if (key == "paired") c.paired = to_bool(key, value);
  else if (key == "seed") c.seed = to_size(key, value);
  else if (key == "strict") c.strict = to_bool(key, value);
  else if (key == "workers") c.workers = to_size(key, value);
  else if (key == "d-override") {
    c.d_override.clear();
    for (auto item : detail::split(value, ',')) {
      item = trim(item);
      if (item.empty()) continue;
      const auto eq = item.find('=');
      if (eq == std::string_view::npos) {
        fail(ErrorKind::kUsage, "d-override expects GROUP=VALUE, got '" + std::string(item) + "'");
      }
      const auto group = std::string(trim(item.substr(0, eq)));
      const double d = to_real("d-override", trim(item.substr(eq + 1)));
      if (d <= 0.0) fail(ErrorKind::kUsage, "d-override values must be positive");
      c.d_override[group] = d;
    }
  } else {
    fail(ErrorKind::kUsage, "unknown configuration key '" + std::string(raw_key) + "'");
  }
}

void load_config_file(RunConfig& config, const fs::path& path) {
  auto in = open_input(path, "config");
  std::string line;
  std::size_t number = 0;
  while (std::getline(in, line)) {
    ++number;
    auto view = trim(line);
    if (view.empty() || view.front() == '#' || view.front() == ';' || view.front() == '[') continue;
    const auto eq = view.find('=');
    if (eq == std::string_view::npos) {
      fail(ErrorKind::kUsage, path.string() + ":" + std::to_string(number) +
                                  ": expected key = value");
    }
    set_config_value(config, trim(view.substr(0, eq)), view.substr(eq + 1));
  }
}

void validate(const RunConfig& c) {
  auto in_unit = [](double x) { return x > 0.0 && x < 1.0; };
  if (!in_unit(c.split_fraction)) fail(ErrorKind::kUsage, "split-fraction must lie in (0, 1)");
  if (!in_unit(c.alpha)) fail(ErrorKind::kUsage, "alpha must lie in (0, 1)");
  if (!(c.min_rel_freq >= 0.0 && c.min_rel_freq <= 1.0)) {
    fail(ErrorKind::kUsage, "min-rel-freq must lie in [0, 1]");
  }
  if (c.group_size == 0 || c.k_max == 0 || c.decay_bins == 0 || c.cf_user_neighbors == 0 ||
      c.cf_item_neighbors == 0 || c.cf_top_artists == 0 || c.workers == 0) {
    fail(ErrorKind::kUsage, "sizes and counts must be positive");
  }
  if (c.f1_k == 0 || c.f1_k > c.k_max) fail(ErrorKind::kUsage, "f1-k must lie in [1, k-max]");
  if (c.min_le > c.max_le) fail(ErrorKind::kUsage, "min-le must not exceed max-le");
  if (c.mainstream_mode != "cosine" && c.mainstream_mode != "supplied") {
    fail(ErrorKind::kUsage, "mainstream-mode must be 'cosine' or 'supplied'");
  }
}

std::string config_to_ini(const RunConfig& c) {
  std::ostringstream s;
  s << "# genremem run configuration\n";
  s << "events = " << c.events.string() << '\n';
  s << "profiles = " << c.profiles.string() << '\n';
  s << "tags = " << c.tags.string() << '\n';
  s << "allowed-genres = " << c.allowed_genres.string() << '\n';
  s << "out = " << c.out_dir.string() << '\n';
  s << "group-size = " << c.group_size << '\n';
  s << "min-le = " << c.min_le << '\n';
  s << "max-le = " << c.max_le << '\n';
  s << "min-rel-freq = " << detail::format_double(c.min_rel_freq) << '\n';
  s << "mainstream-mode = " << c.mainstream_mode << '\n';
  s << "split-fraction = " << detail::format_double(c.split_fraction) << '\n';
  s << "k-max = " << c.k_max << '\n';
  s << "f1-k = " << c.f1_k << '\n';
  s << "decay-bins = " << c.decay_bins << '\n';
  std::string overrides;
  for (const auto& [g, d] : c.d_override) {
    if (!overrides.empty()) overrides += ',';
    overrides += g + "=" + detail::format_double(d);
  }
  s << "d-override = " << overrides << '\n';
  s << "cf-user-neighbors = " << c.cf_user_neighbors << '\n';
  s << "cf-item-neighbors = " << c.cf_item_neighbors << '\n';
  s << "cf-top-artists = " << c.cf_top_artists << '\n';
  s << "attentional-weight = " << detail::format_double(c.attentional_weight) << '\n';
  s << "alpha = " << detail::format_double(c.alpha) << '\n';
  s << "paired = " << (c.paired ? "true" : "false") << '\n';
  s << "seed = " << c.seed << '\n';
  s << "strict = " << (c.strict ? "true" : "false") << '\n';
  return s.str();
}

std::string file_digest(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(ErrorKind::kUsage, "cannot open " + path.string());
  std::uint64_t h = 0xcbf29ce484222325ULL;
  char buf[1 << 16];
  while (in) {
    in.read(buf, sizeof buf);
    for (std::streamsize i = 0; i < in.gcount(); ++i) {
      h ^= static_cast<unsigned char>(buf[i]);
      h *= 0x100000001b3ULL;
    }
  }
  char hex[17];
  std::snprintf(hex, sizeof hex, "%016llx", static_cast<unsigned long long>(h));
  return hex;
}

std::string cmd_ingest(const RunConfig& c) {
  validate(c);
  const auto options = parse_options(c);

  ingest::Parsed<ListeningEvent> events;
  {
    auto in = open_input(c.events, "events");
    events = ingest::parse_events(in, options);
  }
  if (events.records.empty()) fail(ErrorKind::kData, "no events in " + c.events.string());

  ingest::Parsed<TagRecord> tags;
  {
    auto in = open_input(c.tags, "tags");
    tags = ingest::parse_tags(in, options);
  }
  std::optional<std::set<std::string>> allowed;
  if (!c.allowed_genres.empty()) {
    auto in = open_input(c.allowed_genres, "allowed genres");
    allowed = ingest::parse_genre_list(in);
  }
  const auto catalog =
      GenreCatalog::build(tags.records, c.min_rel_freq, allowed ? &*allowed : nullptr);

  std::set<std::string> all_users;
  for (const auto& e : events.records) all_users.insert(e.user_id);
  const auto kept_users = ingest::filter_users(events.records, c.min_le, c.max_le);

  std::vector<ListeningEvent> kept;
  std::size_t genre_assignments = 0;
  for (const auto& e : events.records) {
    if (!kept_users.contains(e.user_id)) continue;
    genre_assignments += catalog.genres_of(e.artist_id).size();
    kept.push_back(e);
  }

  std::ostringstream events_out;
  ingest::write_events(events_out, kept);
  write_file(data_dir(c) / "events.tsv", events_out.str());
  std::ostringstream catalog_out;
  ingest::write_tags(catalog_out, catalog.to_records());
  write_file(data_dir(c) / "catalog.tsv", catalog_out.str());

  ingest::Parsed<UserProfile> profiles;
  std::vector<UserProfile> kept_profiles;
  if (!c.profiles.empty()) {
    auto in = open_input(c.profiles, "profiles");
    profiles = ingest::parse_profiles(in, options);
    for (const auto& p : profiles.records) {
      if (kept_users.contains(p.user_id)) kept_profiles.push_back(p);
    }
    std::sort(kept_profiles.begin(), kept_profiles.end(),
              [](const UserProfile& a, const UserProfile& b) { return a.user_id < b.user_id; });
    std::ostringstream out;
    ingest::write_profiles(out, kept_profiles);
    write_file(data_dir(c) / "profiles.tsv", out.str());
  } else {
    std::error_code ec;
    fs::remove(data_dir(c) / "profiles.tsv", ec);
  }

  json inputs = json::object();
  auto add_input = [&](const char* name, const fs::path& p) {
    if (!p.empty()) inputs[name] = {{"path", p.string()}, {"fnv1a64", file_digest(p)}};
  };
  add_input("events", c.events);
  add_input("tags", c.tags);
  add_input("allowed_genres", c.allowed_genres);
  add_input("profiles", c.profiles);

  json counts{{"events_read", events.records.size()},
              {"events_skipped", events.skipped},
              {"users_before_filter", all_users.size()},
              {"users_after_filter", kept_users.size()},
              {"events_kept", kept.size()},
              {"genre_assignments_kept", genre_assignments},
              {"tags_read", tags.records.size()},
              {"tags_skipped", tags.skipped},
              {"catalog_artists", catalog.artist_count()},
              {"catalog_genres", catalog.genre_count()},
              {"catalog_assignments", catalog.assignment_count()},
              {"profiles_read", profiles.records.size()},
              {"profiles_skipped", profiles.skipped}};
  json manifest{{"tool_version", kToolVersion},
                {"config", config_json(c)},
                {"inputs", inputs},
                {"counts", {{"ingest", counts}}},
                {"stages", {{"ingest", config_json(c)}}},
                {"fits", json::object()}};
  save_manifest(c, manifest);

  std::ostringstream s;
  s << "ingest: " << c.out_dir.string() << '\n';
  s << format_count("events read", events.records.size());
  s << format_count("events skipped (malformed)", events.skipped);
  s << format_count("users before LE filter", all_users.size());
  s << format_count("users after LE filter", kept_users.size());
  s << format_count("|LE| kept", kept.size());
  s << format_count("|GA| kept", genre_assignments);
  s << format_count("catalog artists", catalog.artist_count());
  s << format_count("catalog genres", catalog.genre_count());
  s << format_count("tag lines skipped (malformed)", tags.skipped);
  return s.str();
}

std::string cmd_split_groups(const RunConfig& c) {
  validate(c);
  const auto store = load_store(c);
  const auto mode = c.mainstream_mode == "supplied" ? ingest::MainstreamMode::kPreferSupplied
                                                    : ingest::MainstreamMode::kCosine;
  const auto scores = ingest::compute_mainstreaminess(store.events, store.profiles, mode);
  auto split = ingest::split_groups(scores, c.group_size);

  auto manifest = load_manifest(c);
  json groups = json::object();
  std::ostringstream s;
  s << "split-groups: " << scores.size() << " scored users, median mainstreaminess "
    << detail::format_fixed(split.median_score, 3) << '\n';
  for (auto* g : {&split.low, &split.med, &split.high}) {
    g->stats = ingest::compute_group_stats(g->user_ids, store.events, store.catalog, scores);
    write_file(group_path(c, g->name), report::to_json(*g).dump(2) + "\n");
    groups[g->name] = {{"users", g->stats.users},
                       {"events", g->stats.events},
                       {"genre_assignments", g->stats.genre_assignments},
                       {"avg_mainstreaminess", g->stats.avg_mainstreaminess}};
    s << "  " << g->name << ": |U|=" << g->stats.users << " |A|=" << g->stats.artists
      << " |G|=" << g->stats.genres << " |LE|=" << g->stats.events
      << " |GA|=" << g->stats.genre_assignments << " avg MS="
      << detail::format_fixed(g->stats.avg_mainstreaminess, 3) << '\n';
  }
  manifest["stages"]["split_groups"] = config_json(c);
  manifest["counts"]["split_groups"] = {{"scored_users", scores.size()},
                                        {"median_mainstreaminess", split.median_score},
                                        {"groups", groups}};
  manifest["fits"] = json::object();
  manifest["stages"].erase("fit_decay");
  manifest["stages"].erase("evaluate");
  save_manifest(c, manifest);
  return s.str();
}

std::string cmd_fit_decay(const RunConfig& c, std::string_view group_name) {
  validate(c);
  auto group = load_group(c, group_name);
  auto manifest = load_manifest(c);
  json fit_doc;
  std::ostringstream s;

  if (auto it = c.d_override.find(std::string(group_name)); it != c.d_override.end()) {
    fit_doc = {{"group", group.name},
               {"slope", nullptr},
               {"intercept", nullptr},
               {"d", it->second},
               {"point_count", 0},
               {"bin_count", 0},
               {"provenance", "override"}};
    group.decay_d = it->second;
    s << "fit-decay: " << group.name << " d=" << detail::format_double(it->second)
      << " (override, fit skipped)\n";
  } else {
    const auto store = load_store(c);
    const std::set<std::string> members(group.user_ids.begin(), group.user_ids.end());
    const auto log = ListeningLog::build(store.events, &members);
    const auto table = ArtistGenreTable::build(log, store.catalog);
    const auto split = eval::temporal_split(log.users(), c.split_fraction);
    const auto history = memory::GenreHistory::build(split.train, table);
    memory::DecayFit fit;
    try {
      fit = memory::fit_decay(history, c.decay_bins);
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::kDegenerate) throw;
      fail(ErrorKind::kDegenerate, "group " + group.name + ": " + e.what() +
                                       " (pass --d-override " + group.name + "=VALUE)");
    }
    fit_doc = report::to_json(fit);
    fit_doc["group"] = group.name;
    fit_doc["provenance"] = "fit";
    group.decay_d = fit.d;
    s << "fit-decay: " << group.name << " slope=" << detail::format_fixed(fit.slope, 6)
      << " d=" << detail::format_fixed(fit.d, 6) << " points=" << fit.point_count
      << " bins=" << fit.bin_count << '\n';
  }
  write_file(fit_path(c, group.name), fit_doc.dump(2) + "\n");
  write_file(group_path(c, group.name), report::to_json(group).dump(2) + "\n");
  manifest["fits"][group.name] = {{"d", fit_doc["d"]}, {"provenance", fit_doc["provenance"]}};
  manifest["stages"]["fit_decay"][group.name] = config_json(c);
  save_manifest(c, manifest);
  return s.str();
}

std::string cmd_evaluate(const RunConfig& c, std::string_view group_name,
                         std::span<const eval::Algorithm> algorithms) {
  validate(c);
  if (algorithms.empty()) fail(ErrorKind::kUsage, "no algorithms requested");
  const auto group = load_group(c, group_name);

  const bool needs_d = std::any_of(algorithms.begin(), algorithms.end(), [](eval::Algorithm a) {
    return a == eval::Algorithm::kBllUser || a == eval::Algorithm::kActUserArtist;
  });
  double d = std::numeric_limits<double>::quiet_NaN();
  if (auto it = c.d_override.find(group.name); it != c.d_override.end()) {
    d = it->second;
  } else if (fs::exists(fit_path(c, group.name))) {
    d = read_json(fit_path(c, group.name), "decay fit").at("d").get<double>();
  }
  if (needs_d && !(d > 0.0)) {
    fail(ErrorKind::kUsage, "no decay fit for group " + group.name +
                                "; run fit-decay or pass --d-override " + group.name + "=VALUE");
  }

  const auto store = load_store(c);
  const std::set<std::string> members(group.user_ids.begin(), group.user_ids.end());
  const auto log = ListeningLog::build(store.events, &members);
  const auto table = ArtistGenreTable::build(log, store.catalog);
  const auto split = eval::temporal_split(log.users(), c.split_fraction);

  eval::EvalOptions options;
  options.k_max = c.k_max;
  options.f1_k = c.f1_k;
  options.decay_d = needs_d ? d : 1.0;
  options.attentional_weight = c.attentional_weight;
  options.cf_user_neighbors = c.cf_user_neighbors;
  options.cf_item_neighbors = c.cf_item_neighbors;
  options.cf_top_artists = c.cf_top_artists;
  options.seed = c.seed;
  options.workers = c.workers;
  const eval::Evaluator evaluator(split, store.catalog, table, options);

  std::vector<eval::AlgorithmReport> reports;
  std::ostringstream predictions;
  for (const auto a : algorithms) {
    reports.push_back(evaluator.run(a));
    report::write_prediction_log(predictions, group.name, evaluator, reports.back(),
                                 log.artists(), store.catalog);
  }

  const auto dir = c.out_dir / "eval" / group.name;
  std::ostringstream metrics;
  report::write_metric_table(metrics, group.name, reports, options);
  std::ostringstream curves;
  report::write_curves(curves, group.name, reports);
  std::ostringstream significance;
  report::write_significance(significance, group.name, reports, c.alpha, c.paired);
  write_file(dir / "metrics.csv", metrics.str());
  write_file(dir / "curves.csv", curves.str());
  write_file(dir / "significance.csv", significance.str());
  write_file(dir / "predictions.jsonl", predictions.str());

  json run = config_json(c);
  run["algorithms"] = json::array();
  for (const auto a : algorithms) run["algorithms"].push_back(eval::algorithm_name(a));
  run["decay_d"] = needs_d ? json(d) : json(nullptr);
  run["test_cases"] = evaluator.cases().cases.size();
  auto manifest = load_manifest(c);
  manifest["stages"]["evaluate"][group.name] = std::move(run);
  save_manifest(c, manifest);

  std::ostringstream s;
  s << "evaluate: " << group.name << " users=" << evaluator.users().size()
    << " test cases=" << evaluator.cases().cases.size()
    << " unmappable=" << evaluator.cases().unmappable
    << " excluded users=" << split.excluded_users.size() << '\n';
  for (const auto& r : reports) {
    if (r.cold_cases > 0) {
      s << "  " << eval::algorithm_name(r.algorithm) << ": " << r.cold_cases
        << " cases without a prediction\n";
    }
  }
  const std::string doc = metrics.str();
  s << report::render_table(std::span<const std::string>(&doc, 1));
  return s.str();
}

std::string cmd_report(const RunConfig& c) {
  const auto root = c.out_dir / "eval";
  if (!fs::exists(root)) fail(ErrorKind::kUsage, "no evaluation results under " + root.string());
  std::vector<fs::path> dirs;
  for (const auto& entry : fs::directory_iterator(root)) {
    if (entry.is_directory() && fs::exists(entry.path() / "metrics.csv")) dirs.push_back(entry.path());
  }
  // LowMS, MedMS, HighMS first, then anything else alphabetically
  auto rank = [](const fs::path& p) {
    const auto name = p.filename().string();
    if (name == "LowMS") return 0;
    if (name == "MedMS") return 1;
    if (name == "HighMS") return 2;
    return 3;
  };
  std::sort(dirs.begin(), dirs.end(), [&](const fs::path& a, const fs::path& b) {
    return rank(a) != rank(b) ? rank(a) < rank(b) : a.filename() < b.filename();
  });
  if (dirs.empty()) fail(ErrorKind::kUsage, "no metrics.csv under " + root.string());
  std::vector<std::string> docs;
  for (const auto& d : dirs) {
    auto in = open_input(d / "metrics.csv", "metric table");
    std::ostringstream buf;
    buf << in.rdbuf();
    docs.push_back(buf.str());
  }
  return report::render_table(docs);
}

}  // namespace genremem::pipeline
