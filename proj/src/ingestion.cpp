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

#include "genremem/ingestion.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <istream>
#include <iterator>
#include <ostream>
#include <sstream>
#include <unordered_map>

#include "genremem/error.hpp"
#include "genremem/log.hpp"
#include "parallel.hpp"
#include "text.hpp"

namespace genremem::ingest {
namespace {

std::string read_all(std::istream& in) {
  if (!in) fail(ErrorKind::kData, "input stream is not readable");
  std::string text{std::istreambuf_iterator<char>(in),
                   std::istreambuf_iterator<char>()};
  if (in.bad()) fail(ErrorKind::kData, "error while reading input stream");
  return text;
}

// Splits text into lines; a trailing newline does not start a new line.
std::vector<std::string_view> split_lines(std::string_view text) {
  std::vector<std::string_view> lines;
  std::size_t start = 0;
  while (start < text.size()) {
    const auto pos = text.find('\n', start);
    if (pos == std::string_view::npos) {
      lines.push_back(text.substr(start));
      break;
    }
    lines.push_back(text.substr(start, pos - start));
    start = pos + 1;
  }
  return lines;
}

struct LineError {
  std::size_t line = 0;  // 1-based
  std::string reason;
};

// Parses every line with `parse_line`, which returns nullopt and fills
// `reason` for malformed input. Shards are merged in line order.
template <typename Record, typename LineParser>
Parsed<Record> parse_lines(std::string_view text, const ParseOptions& options,
                           const char* what, LineParser parse_line) {
  const auto lines = split_lines(text);
  const std::size_t shards =
      std::max<std::size_t>(1, std::min(options.workers, lines.size()));
  const std::size_t block = lines.empty() ? 0 : (lines.size() + shards - 1) / shards;

  struct Shard {
    std::vector<Record> records;
    std::size_t skipped = 0;
    std::optional<LineError> first_error;
  };
  std::vector<Shard> results(shards);

  detail::parallel_for(shards, shards, [&](std::size_t s) {
    auto& shard = results[s];
    const std::size_t begin = s * block;
    const std::size_t end = std::min(lines.size(), begin + block);
    for (std::size_t i = begin; i < end; ++i) {
      std::string reason;
      std::optional<Record> record;
      if (!is_valid_utf8(lines[i])) {
        reason = "invalid UTF-8";
      } else {
        record = parse_line(lines[i], reason);
      }
      if (record) {
        shard.records.push_back(std::move(*record));
        continue;
      }
      ++shard.skipped;
      if (!shard.first_error) shard.first_error = LineError{i + 1, reason};
      if (options.strict) return;
    }
  });

  Parsed<Record> out;
  for (auto& shard : results) {
    if (options.strict && shard.first_error) {
      fail(ErrorKind::kData, std::string(what) + " line " +
                                 std::to_string(shard.first_error->line) +
                                 ": " + shard.first_error->reason);
    }
    out.skipped += shard.skipped;
    out.records.insert(out.records.end(),
                       std::make_move_iterator(shard.records.begin()),
                       std::make_move_iterator(shard.records.end()));
  }
  return out;
}

std::optional<ListeningEvent> parse_event_line(std::string_view line,
                                               std::string& reason) {
  const auto f = detail::split(line, '\t');
  if (f.size() != 5) {
    reason = "expected 5 tab-separated fields, got " + std::to_string(f.size());
    return std::nullopt;
  }
  if (f[0].empty() || f[1].empty()) {
    reason = "empty user_id or artist_id";
    return std::nullopt;
  }
  const auto ts = detail::parse_int(f[4]);
  if (!ts || *ts <= 0) {
    reason = "timestamp must be a positive integer";
    return std::nullopt;
  }
  ListeningEvent e;
  e.user_id = std::string(f[0]);
  e.artist_id = std::string(f[1]);
  if (!f[2].empty()) e.album_id = std::string(f[2]);
  e.track_id = std::string(f[3]);
  e.timestamp = *ts;
  return e;
}

bool is_missing(std::string_view field) { return field == "-" || field.empty(); }

std::optional<UserProfile> parse_profile_line(std::string_view line,
                                              std::string& reason) {
  const auto f = detail::split(line, '\t');
  if (f.size() != 5) {
    reason = "expected 5 tab-separated fields, got " + std::to_string(f.size());
    return std::nullopt;
  }
  if (f[0].empty()) {
    reason = "empty user_id";
    return std::nullopt;
  }
  UserProfile p;
  p.user_id = std::string(f[0]);
  if (!is_missing(f[1])) {
    if (f[1].size() != 2) {
      reason = "country must be a 2-letter code";
      return std::nullopt;
    }
    p.country = std::string(f[1]);
  }
  if (!is_missing(f[2])) {
    const auto age = detail::parse_int(f[2]);
    if (!age || *age < 0 || *age > 1000) {
      reason = "age must be a non-negative integer";
      return std::nullopt;
    }
    p.age = static_cast<int>(*age);
  }
  if (!is_missing(f[3])) {
    std::string g(f[3]);
    std::transform(g.begin(), g.end(), g.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    if (g == "m" || g == "male") {
      p.gender = Gender::kMale;
    } else if (g == "f" || g == "female") {
      p.gender = Gender::kFemale;
    } else if (g == "n" || g == "u" || g == "unknown") {
      p.gender = Gender::kUnknown;
    } else {
      reason = "unrecognised gender '" + g + "'";
      return std::nullopt;
    }
  }
  if (!is_missing(f[4])) {
    const auto ms = detail::parse_double(f[4]);
    if (!ms || !(*ms >= 0.0 && *ms <= 1.0)) {
      reason = "mainstreaminess must lie in [0, 1]";
      return std::nullopt;
    }
    p.mainstreaminess = *ms;
  }
  return p;
}

std::optional<TagRecord> parse_tag_line(std::string_view line,
                                        std::string& reason) {
  const auto f = detail::split(line, '\t');
  if (f.size() != 3) {
    reason = "expected 3 tab-separated fields, got " + std::to_string(f.size());
    return std::nullopt;
  }
  if (f[0].empty() || f[1].empty()) {
    reason = "empty artist_id or tag";
    return std::nullopt;
  }
  const auto freq = detail::parse_double(f[2]);
  if (!freq || !(*freq >= 0.0 && *freq <= 1.0)) {
    reason = "relative_frequency must lie in [0, 1]";
    return std::nullopt;
  }
  return TagRecord{std::string(f[0]), std::string(f[1]), *freq};
}

}  // namespace

bool is_valid_utf8(std::string_view text) {
  std::size_t i = 0;
  const auto n = text.size();
  while (i < n) {
    const auto c = static_cast<unsigned char>(text[i]);
    std::size_t len = 0;
    std::uint32_t cp = 0;
    if (c < 0x80) {
      ++i;
      continue;
    } else if ((c & 0xE0) == 0xC0) {
      len = 2;
      cp = c & 0x1F;
    } else if ((c & 0xF0) == 0xE0) {
      len = 3;
      cp = c & 0x0F;
    } else if ((c & 0xF8) == 0xF0) {
      len = 4;
      cp = c & 0x07;
    } else {
      return false;
    }
    if (i + len > n) return false;
    for (std::size_t j = 1; j < len; ++j) {
      const auto cc = static_cast<unsigned char>(text[i + j]);
      if ((cc & 0xC0) != 0x80) return false;
      cp = (cp << 6) | (cc & 0x3F);
    }
    // overlong encodings, surrogates, out of range
    if ((len == 2 && cp < 0x80) || (len == 3 && cp < 0x800) ||
        (len == 4 && (cp < 0x10000 || cp > 0x10FFFF)) ||
        (cp >= 0xD800 && cp <= 0xDFFF)) {
      return false;
    }
    i += len;
  }
  return true;
}

Parsed<ListeningEvent> parse_events(std::string_view text,
                                    const ParseOptions& options) {
  return parse_lines<ListeningEvent>(text, options, "events", parse_event_line);
}

Parsed<ListeningEvent> parse_events(std::istream& in,
                                    const ParseOptions& options) {
  const auto text = read_all(in);
  return parse_events(text, options);
}

std::string format_event(const ListeningEvent& event) {
  std::string line;
  line.reserve(64);
  line += event.user_id;
  line += '\t';
  line += event.artist_id;
  line += '\t';
  if (event.album_id) line += *event.album_id;
  line += '\t';
  line += event.track_id;
  line += '\t';
  line += std::to_string(event.timestamp);
  return line;
}

void write_events(std::ostream& out, std::span<const ListeningEvent> events) {
  for (const auto& e : events) out << format_event(e) << '\n';
}

Parsed<UserProfile> parse_profiles(std::istream& in,
                                   const ParseOptions& options) {
  const auto text = read_all(in);
  return parse_lines<UserProfile>(text, options, "profiles", parse_profile_line);
}

void write_profiles(std::ostream& out, std::span<const UserProfile> profiles) {
  for (const auto& p : profiles) {
    out << p.user_id << '\t' << (p.country ? *p.country : "-") << '\t'
        << (p.age ? std::to_string(*p.age) : "-") << '\t';
    if (!p.gender) {
      out << '-';
    } else {
      switch (*p.gender) {
        case Gender::kMale: out << 'm'; break;
        case Gender::kFemale: out << 'f'; break;
        case Gender::kUnknown: out << 'n'; break;
      }
    }
    out << '\t'
        << (p.mainstreaminess ? detail::format_double(*p.mainstreaminess) : "-")
        << '\n';
  }
}

Parsed<TagRecord> parse_tags(std::istream& in, const ParseOptions& options) {
  const auto text = read_all(in);
  return parse_lines<TagRecord>(text, options, "tags", parse_tag_line);
}

void write_tags(std::ostream& out, std::span<const TagRecord> tags) {
  for (const auto& t : tags) {
    out << t.artist_id << '\t' << t.tag << '\t'
        << detail::format_double(t.relative_frequency) << '\n';
  }
}

std::set<std::string> parse_genre_list(std::istream& in) {
  const auto text = read_all(in);
  std::set<std::string> genres;
  for (auto line : split_lines(text)) {
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (line.empty()) continue;
    if (!is_valid_utf8(line)) fail(ErrorKind::kData, "genre list: invalid UTF-8");
    genres.emplace(line);
  }
  return genres;
}

std::set<std::string> filter_users(std::span<const ListeningEvent> events,
                                   std::size_t min_le, std::size_t max_le) {
  if (min_le > max_le) fail(ErrorKind::kUsage, "min_le must not exceed max_le");
  std::unordered_map<std::string_view, std::size_t> counts;
  for (const auto& e : events) ++counts[e.user_id];
  std::set<std::string> kept;
  for (const auto& [user, n] : counts) {
    if (n >= min_le && n <= max_le) kept.emplace(user);
  }
  return kept;
}

std::map<std::string, double> compute_mainstreaminess(
    std::span<const ListeningEvent> events,
    std::span<const UserProfile> profiles, MainstreamMode mode) {
  const auto log = ListeningLog::build(events);

  std::vector<std::uint64_t> global(log.artists().size(), 0);
  for (const auto& user : log.users()) {
    for (const auto& play : user.plays) ++global[play.artist];
  }
  double global_norm2 = 0.0;
  for (const auto c : global) global_norm2 += static_cast<double>(c) * static_cast<double>(c);
  const double global_norm = std::sqrt(global_norm2);

  std::unordered_map<std::string_view, double> supplied;
  if (mode == MainstreamMode::kPreferSupplied) {
    for (const auto& p : profiles) {
      if (p.mainstreaminess) supplied[p.user_id] = *p.mainstreaminess;
    }
  }

  std::map<std::string, double> scores;
  for (const auto& user : log.users()) {
    if (auto it = supplied.find(user.user_id); it != supplied.end()) {
      scores.emplace(user.user_id, it->second);
      continue;
    }
    std::vector<ArtistIndex> artists;
    artists.reserve(user.plays.size());
    for (const auto& play : user.plays) artists.push_back(play.artist);
    std::sort(artists.begin(), artists.end());

    double dot = 0.0;
    double norm2 = 0.0;
    for (std::size_t i = 0; i < artists.size();) {
      std::size_t j = i;
      while (j < artists.size() && artists[j] == artists[i]) ++j;
      const auto count = static_cast<double>(j - i);
      dot += count * static_cast<double>(global[artists[i]]);
      norm2 += count * count;
      i = j;
    }
    double cosine = 0.0;
    if (norm2 > 0.0 && global_norm > 0.0) {
      cosine = dot / (std::sqrt(norm2) * global_norm);
    }
    scores.emplace(user.user_id, std::clamp(cosine, 0.0, 1.0));
  }
  return scores;
}

GroupSplit split_groups(const std::map<std::string, double>& scores,
                        std::size_t group_size) {
  if (group_size == 0) fail(ErrorKind::kUsage, "group_size must be positive");
  const std::size_t required = 3 * group_size;
  if (scores.size() < required) {
    fail(ErrorKind::kData, "split_groups needs " + std::to_string(required) +
                               " scored users, but only " +
                               std::to_string(scores.size()) + " are available");
  }
  std::vector<std::pair<double, std::string>> ranked;
  ranked.reserve(scores.size());
  for (const auto& [user, score] : scores) ranked.emplace_back(score, user);
  std::sort(ranked.begin(), ranked.end());

  const std::size_t n = ranked.size();
  std::size_t med_begin = n / 2 - group_size / 2;
  med_begin = std::clamp(med_begin, group_size, n - 2 * group_size);

  auto make = [&](std::string name, std::size_t begin) {
    UserGroup g;
    g.name = std::move(name);
    for (std::size_t i = begin; i < begin + group_size; ++i) {
      g.user_ids.push_back(ranked[i].second);
    }
    std::sort(g.user_ids.begin(), g.user_ids.end());
    return g;
  };

  GroupSplit split;
  split.low = make("LowMS", 0);
  split.med = make("MedMS", med_begin);
  split.high = make("HighMS", n - group_size);
  split.median_score = n % 2 == 1
                           ? ranked[n / 2].first
                           : 0.5 * (ranked[n / 2 - 1].first + ranked[n / 2].first);
  return split;
}

GroupStats compute_group_stats(const std::vector<std::string>& user_ids,
                               std::span<const ListeningEvent> events,
                               const GenreCatalog& catalog,
                               const std::map<std::string, double>& scores) {
  const std::set<std::string_view> members(user_ids.begin(), user_ids.end());
  std::set<std::string_view> artists;
  std::set<GenreId> genres;
  GroupStats stats;
  stats.users = members.size();
  for (const auto& e : events) {
    if (!members.contains(e.user_id)) continue;
    ++stats.events;
    artists.insert(e.artist_id);
    const auto g = catalog.genres_of(e.artist_id);
    stats.genre_assignments += g.size();
    genres.insert(g.begin(), g.end());
  }
  stats.artists = artists.size();
  stats.genres = genres.size();
  double sum = 0.0;
  std::size_t scored = 0;
  for (const auto& u : members) {
    if (auto it = scores.find(std::string(u)); it != scores.end()) {
      sum += it->second;
      ++scored;
    }
  }
  stats.avg_mainstreaminess = scored ? sum / static_cast<double>(scored) : 0.0;
  return stats;
}

}  // namespace genremem::ingest
