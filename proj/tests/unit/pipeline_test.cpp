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

#include <gtest/gtest.h>
#include <sys/wait.h>
#include <unistd.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <nlohmann/json.hpp>
#include <set>
#include <sstream>

#include "genremem/error.hpp"

namespace genremem::pipeline {
namespace {

namespace fs = std::filesystem;

const fs::path kFixtures = GENREMEM_FIXTURE_DIR;

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

nlohmann::json read_json(const fs::path& p) { return nlohmann::json::parse(slurp(p)); }

class Pipeline : public ::testing::Test {
 protected:
  void SetUp() override {
    const auto* info = ::testing::UnitTest::GetInstance()->current_test_info();
    dir_ = fs::temp_directory_path() /
           (std::string("genremem_") + info->test_suite_name() + "_" + info->name());
    fs::remove_all(dir_);
    config_.events = kFixtures / "events.tsv";
    config_.tags = kFixtures / "tags.tsv";
    config_.allowed_genres = kFixtures / "genres.txt";
    config_.profiles = kFixtures / "profiles.tsv";
    config_.out_dir = dir_ / "out";
    config_.min_le = 20;
    config_.max_le = 60;
    config_.group_size = 3;
  }
  void TearDown() override { fs::remove_all(dir_); }

  fs::path dir_;
  RunConfig config_;
};

ErrorKind kind_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.kind();
  }
  ADD_FAILURE() << "no genremem::Error thrown";
  return ErrorKind::kUsage;
}

// Straightforward recount of the fixture with the same thresholds.
struct Tally {
  std::size_t read = 0;
  std::size_t skipped = 0;
  std::size_t users = 0;
  std::size_t kept_users = 0;
  std::size_t kept_events = 0;
  std::size_t kept_assignments = 0;
};

Tally tally(std::size_t min_le, std::size_t max_le) {
  std::set<std::string> allowed;
  {
    std::ifstream in(kFixtures / "genres.txt");
    for (std::string line; std::getline(in, line);) {
      if (!line.empty()) allowed.insert(line);
    }
  }
  std::map<std::string, std::size_t> genre_count;
  {
    std::ifstream in(kFixtures / "tags.tsv");
    for (std::string line; std::getline(in, line);) {
      std::istringstream fields(line);
      std::string artist, tag, freq;
      std::getline(fields, artist, '\t');
      std::getline(fields, tag, '\t');
      std::getline(fields, freq, '\t');
      if (allowed.count(tag) && std::stod(freq) >= 0.5) ++genre_count[artist];
    }
  }
  Tally t;
  std::vector<std::pair<std::string, std::string>> events;
  std::ifstream in(kFixtures / "events.tsv");
  for (std::string line; std::getline(in, line);) {
    std::vector<std::string> f;
    std::istringstream fields(line);
    for (std::string x; std::getline(fields, x, '\t');) f.push_back(x);
    if (line.back() == '\t') f.emplace_back();
    const bool ok = f.size() == 5 && !f[0].empty() && !f[1].empty() &&
                    f[4].find_first_not_of("0123456789") == std::string::npos &&
                    !f[4].empty();
    if (!ok) {
      ++t.skipped;
      continue;
    }
    ++t.read;
    events.emplace_back(f[0], f[1]);
  }
  std::map<std::string, std::size_t> per_user;
  for (const auto& e : events) ++per_user[e.first];
  t.users = per_user.size();
  for (const auto& [u, n] : per_user) t.kept_users += n >= min_le && n <= max_le;
  for (const auto& [u, a] : events) {
    const auto n = per_user[u];
    if (n < min_le || n > max_le) continue;
    ++t.kept_events;
    t.kept_assignments += genre_count[a];
  }
  return t;
}

TEST_F(Pipeline, IngestCountsMatchAnIndependentTally) {
  cmd_ingest(config_);
  const auto manifest = read_json(config_.out_dir / "manifest.json");
  const auto& c = manifest["counts"]["ingest"];
  const auto t = tally(20, 60);
  EXPECT_EQ(c["events_read"], t.read);
  EXPECT_EQ(c["events_skipped"], t.skipped);
  EXPECT_EQ(c["users_before_filter"], t.users);
  EXPECT_EQ(c["users_after_filter"], t.kept_users);
  EXPECT_EQ(c["events_kept"], t.kept_events);
  EXPECT_EQ(c["genre_assignments_kept"], t.kept_assignments);
  EXPECT_EQ(t.read, 483u);
  EXPECT_EQ(t.kept_users, 10u);
  EXPECT_EQ(manifest["inputs"]["events"]["fnv1a64"], file_digest(config_.events));
}

TEST_F(Pipeline, StrictIngestRejectsTheMalformedLines) {
  config_.strict = true;
  EXPECT_EQ(kind_of([&] { cmd_ingest(config_); }), ErrorKind::kData);
}

TEST_F(Pipeline, MissingInputIsAUsageError) {
  config_.events = dir_ / "absent.tsv";
  EXPECT_EQ(kind_of([&] { cmd_ingest(config_); }), ErrorKind::kUsage);
}

TEST_F(Pipeline, StagesRequireTheirPredecessors) {
  EXPECT_EQ(kind_of([&] { cmd_split_groups(config_); }), ErrorKind::kUsage);
  cmd_ingest(config_);
  EXPECT_EQ(kind_of([&] { cmd_fit_decay(config_, "LowMS"); }), ErrorKind::kUsage);
  cmd_split_groups(config_);
  const auto all = eval::default_algorithms();
  EXPECT_EQ(kind_of([&] { cmd_evaluate(config_, "LowMS", all); }), ErrorKind::kUsage);
  const eval::Algorithm no_decay[] = {eval::Algorithm::kTop, eval::Algorithm::kPopUser};
  EXPECT_NO_THROW(cmd_evaluate(config_, "LowMS", no_decay));
}

TEST_F(Pipeline, TooLargeGroupsNameTheCounts) {
  config_.group_size = 4;
  cmd_ingest(config_);
  try {
    cmd_split_groups(config_);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::kData);
    EXPECT_NE(std::string(e.what()).find("12"), std::string::npos) << e.what();
    EXPECT_NE(std::string(e.what()).find("10"), std::string::npos) << e.what();
  }
}

std::map<std::string, std::string> snapshot(const fs::path& root) {
  std::map<std::string, std::string> files;
  for (const auto& entry : fs::recursive_directory_iterator(root)) {
    if (entry.is_regular_file()) {
      files[fs::relative(entry.path(), root).string()] = slurp(entry.path());
    }
  }
  return files;
}

void run_all(const RunConfig& config) {
  cmd_ingest(config);
  cmd_split_groups(config);
  for (const char* g : {"LowMS", "MedMS", "HighMS"}) {
    cmd_fit_decay(config, g);
    cmd_evaluate(config, g, eval::default_algorithms());
  }
}

TEST_F(Pipeline, RerunsAreByteIdentical) {
  run_all(config_);
  const auto first = snapshot(config_.out_dir);
  run_all(config_);
  EXPECT_EQ(snapshot(config_.out_dir), first);
  config_.workers = 4;
  run_all(config_);
  const auto parallel = snapshot(config_.out_dir);
  for (const auto& [name, bytes] : first) {
    if (name == "manifest.json" || name == "config.ini") continue;
    EXPECT_EQ(parallel.at(name), bytes) << name;
  }
  EXPECT_EQ(first.count("eval/HighMS/predictions.jsonl"), 1u);
}

TEST_F(Pipeline, MetricTableHasEveryAlgorithm) {
  run_all(config_);
  std::istringstream csv(slurp(config_.out_dir / "eval" / "MedMS" / "metrics.csv"));
  std::map<std::string, std::set<std::string>> by_metric;
  std::string line;
  std::getline(csv, line);
  EXPECT_EQ(line, "group,algorithm,metric,k,value,n");
  while (std::getline(csv, line)) {
    std::istringstream f(line);
    std::string group, algorithm, metric;
    std::getline(f, group, ',');
    std::getline(f, algorithm, ',');
    std::getline(f, metric, ',');
    by_metric[metric].insert(algorithm);
  }
  for (const char* m : {"F1", "MRR", "MAP", "nDCG", "R", "P"}) {
    EXPECT_EQ(by_metric[m].size(), 7u) << m;
  }
  const auto report = cmd_report(config_);
  for (const char* g : {"LowMS", "MedMS", "HighMS"}) {
    EXPECT_NE(report.find(g), std::string::npos);
  }
  EXPECT_LT(report.find("LowMS"), report.find("HighMS"));
}

TEST_F(Pipeline, OverrideIsRecordedAsSuch) {
  cmd_ingest(config_);
  cmd_split_groups(config_);
  set_config_value(config_, "d-override", "LowMS=1.25");
  cmd_fit_decay(config_, "LowMS");
  const auto fit = read_json(config_.out_dir / "fits" / "LowMS.json");
  EXPECT_EQ(fit["provenance"], "override");
  EXPECT_DOUBLE_EQ(fit["d"].get<double>(), 1.25);
  EXPECT_TRUE(fit["slope"].is_null());
  const auto group = read_json(config_.out_dir / "groups" / "LowMS.json");
  EXPECT_DOUBLE_EQ(group["decay_d"].get<double>(), 1.25);
  const auto manifest = read_json(config_.out_dir / "manifest.json");
  EXPECT_EQ(manifest["fits"]["LowMS"]["provenance"], "override");
  cmd_evaluate(config_, "LowMS", eval::default_algorithms());
  EXPECT_DOUBLE_EQ(read_json(config_.out_dir / "manifest.json")["stages"]["evaluate"]["LowMS"]
                                ["decay_d"].get<double>(),
                   1.25);
}

TEST_F(Pipeline, FittedExponentIsRecorded) {
  cmd_ingest(config_);
  cmd_split_groups(config_);
  cmd_fit_decay(config_, "HighMS");
  const auto fit = read_json(config_.out_dir / "fits" / "HighMS.json");
  EXPECT_EQ(fit["provenance"], "fit");
  EXPECT_GT(fit["d"].get<double>(), 0.0);
  EXPECT_DOUBLE_EQ(fit["d"].get<double>(), -fit["slope"].get<double>());
}

TEST(Config, KeysAcceptDashesAndUnderscores) {
  RunConfig c;
  set_config_value(c, "group_size", "7");
  set_config_value(c, "Min-LE", "3");
  set_config_value(c, "split-fraction", "0.05");
  set_config_value(c, "paired", "false");
  set_config_value(c, "d_override", "LowMS=0.5, HighMS=1.5");
  EXPECT_EQ(c.group_size, 7u);
  EXPECT_EQ(c.min_le, 3u);
  EXPECT_DOUBLE_EQ(c.split_fraction, 0.05);
  EXPECT_FALSE(c.paired);
  EXPECT_EQ(c.d_override, (std::map<std::string, double>{{"HighMS", 1.5}, {"LowMS", 0.5}}));
}

TEST(Config, BadKeysAndValuesAreUsageErrors) {
  RunConfig c;
  EXPECT_EQ(kind_of([&] { set_config_value(c, "colour", "red"); }), ErrorKind::kUsage);
  EXPECT_EQ(kind_of([&] { set_config_value(c, "group-size", "many"); }), ErrorKind::kUsage);
  EXPECT_EQ(kind_of([&] { set_config_value(c, "d-override", "LowMS"); }), ErrorKind::kUsage);
  RunConfig bad;
  bad.split_fraction = 1.5;
  EXPECT_EQ(kind_of([&] { validate(bad); }), ErrorKind::kUsage);
}

TEST(Config, SnapshotReloadsToTheSameConfig) {
  RunConfig c;
  c.events = "/data/events.tsv";
  c.group_size = 17;
  c.alpha = 0.01;
  c.d_override = {{"MedMS", 0.75}};
  c.seed = 9;
  const auto path = fs::temp_directory_path() / "genremem_config_roundtrip.ini";
  {
    std::ofstream out(path);
    out << "; leading comment\n[section]\n" << config_to_ini(c);
  }
  RunConfig back;
  load_config_file(back, path);
  fs::remove(path);
  EXPECT_EQ(config_to_ini(back), config_to_ini(c));
}

// Command line tool

struct Run {
  int code = -1;
  std::string output;
};

Run cli(const std::string& args) {
  static int calls = 0;
  const auto log = fs::temp_directory_path() /
                   ("genremem_cli_" + std::to_string(::getpid()) + "_" + std::to_string(calls++) + ".txt");
  const std::string command =
      std::string("\"") + GENREMEM_CLI_PATH + "\" " + args + " > \"" + log.string() + "\" 2>&1";
  const int status = std::system(command.c_str());
  Run r;
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  r.output = slurp(log);
  fs::remove(log);
  return r;
}

std::string inputs(int group_size = 3) {
  return "--events \"" + (kFixtures / "events.tsv").string() + "\" --tags \"" +
         (kFixtures / "tags.tsv").string() + "\" --allowed-genres \"" +
         (kFixtures / "genres.txt").string() +
         "\" --min-le 20 --max-le 60 --group-size " + std::to_string(group_size);
}

TEST_F(Pipeline, CliRunsEveryStage) {
  const auto out = " --out \"" + config_.out_dir.string() + "\" ";
  auto r = cli(inputs() + out + "ingest");
  ASSERT_EQ(r.code, 0) << r.output;
  EXPECT_NE(r.output.find("users after LE filter: 10"), std::string::npos) << r.output;
  const auto cfg = " --config \"" + (config_.out_dir / "config.ini").string() + "\" ";
  EXPECT_EQ(cli(cfg + "split-groups").code, 0);
  EXPECT_EQ(cli(cfg + "fit-decay").code, 0);
  r = cli(cfg + "evaluate LowMS -a TOP,BLL,ACT");
  ASSERT_EQ(r.code, 0) << r.output;
  EXPECT_NE(r.output.find("ACT_ua"), std::string::npos);
  EXPECT_EQ(r.output.find("CF_u"), std::string::npos);
  r = cli(cfg + "report");
  EXPECT_EQ(r.code, 0);
  EXPECT_NE(r.output.find("nDCG@10"), std::string::npos);
}

TEST_F(Pipeline, CliExitCodes) {
  const auto out = " --out \"" + config_.out_dir.string() + "\" ";
  EXPECT_EQ(cli("--no-such-flag ingest").code, 1);
  EXPECT_EQ(cli(out + "split-groups").code, 1);
  EXPECT_EQ(cli(inputs() + out + "--strict ingest").code, 2);
  ASSERT_EQ(cli(inputs() + out + "ingest").code, 0);
  EXPECT_EQ(cli(inputs(4) + out + "split-groups").code, 2);
  // three events per user at one gap length: no slope to fit
  fs::create_directories(dir_);
  {
    std::ofstream events(dir_ / "flat.tsv");
    for (int u = 0; u < 3; ++u) {
      for (int i = 0; i < 3; ++i) {
        events << "u" << u << "\ta01\t\tt\t" << 1000 + 60 * i << "\n";
      }
    }
  }
  const auto flat = "--events \"" + (dir_ / "flat.tsv").string() + "\" --tags \"" +
                    (kFixtures / "tags.tsv").string() +
                    "\" --min-le 1 --max-le 10 --group-size 1 --out \"" +
                    (dir_ / "flat").string() + "\" ";
  ASSERT_EQ(cli(flat + "ingest").code, 0);
  ASSERT_EQ(cli(flat + "split-groups").code, 0);
  const auto degenerate = cli(flat + "fit-decay LowMS");
  EXPECT_EQ(degenerate.code, 3) << degenerate.output;
  EXPECT_NE(degenerate.output.find("--d-override"), std::string::npos) << degenerate.output;
  EXPECT_EQ(cli(flat + "--d-override LowMS=0.9 fit-decay LowMS").code, 0);
}

TEST_F(Pipeline, CommandLineBeatsConfigFile) {
  fs::create_directories(dir_);
  const auto ini = dir_ / "run.ini";
  {
    std::ofstream out(ini);
    out << "# settings\nevents = " << (kFixtures / "events.tsv").string()
        << "\ntags = " << (kFixtures / "tags.tsv").string()
        << "\nmin_le = 20\nmax_le = 60\ngroup_size = 3\nout = " << config_.out_dir.string()
        << "\n";
  }
  ASSERT_EQ(cli("--config \"" + ini.string() + "\" --max-le 30 ingest").code, 0);
  RunConfig saved;
  load_config_file(saved, config_.out_dir / "config.ini");
  EXPECT_EQ(saved.max_le, 30u);
  EXPECT_EQ(saved.min_le, 20u);
  const auto manifest = read_json(config_.out_dir / "manifest.json");
  EXPECT_EQ(manifest["counts"]["ingest"]["users_after_filter"], tally(20, 30).kept_users);
}

}  // namespace
}  // namespace genremem::pipeline
