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

// genremem: staged genre-preference modelling pipeline.
//
//   genremem ingest        --events E --tags T [--profiles P] [--allowed-genres G]
//   genremem split-groups  [--group-size N]
//   genremem fit-decay     [GROUP...]
//   genremem evaluate      [GROUP...] [--algorithms TOP,BLL_u,...]
//   genremem report
//
// Exit codes: 0 ok, 1 usage, 2 data, 3 degenerate computation.

#include <iostream>
#include <map>
#include <memory>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "genremem/genremem.h"

namespace {

struct ConfigDeleter {
  void operator()(gm_config* c) const { gm_config_destroy(c); }
};
using ConfigPtr = std::unique_ptr<gm_config, ConfigDeleter>;

int report_failure(gm_status status) {
  std::cerr << "genremem: " << gm_last_error() << '\n';
  return status == GM_ERR_INTERNAL ? 4 : static_cast<int>(status);
}

// Runs one stage, prints its summary and returns the process exit code.
template <typename Stage>
int run(Stage&& stage) {
  char* summary = nullptr;
  const gm_status status = stage(&summary);
  if (summary) {
    std::cout << summary;
    gm_string_free(summary);
  }
  return status == GM_OK ? 0 : report_failure(status);
}

const std::vector<std::string> kAllGroups = {"LowMS", "MedMS", "HighMS"};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Genre preference modelling with human memory models"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(gm_version()));

  std::string config_file;
  bool strict = false;
  // Option values keyed by configuration key; only options given on the
  // command line are applied, after the config file.
  std::map<std::string, std::string> values;
  const std::vector<std::pair<std::string, std::string>> options = {
      {"out", "Output directory"},
      {"workers", "Worker threads (results do not depend on it)"},
      {"seed", "Seed for the random debug predictor"},
      {"events", "Listening events TSV"},
      {"profiles", "User profiles TSV"},
      {"tags", "Artist tags TSV"},
      {"allowed-genres", "Genre whitelist, one name per line"},
      {"group-size", "Users per mainstreaminess group"},
      {"min-le", "Minimum listening events per user"},
      {"max-le", "Maximum listening events per user"},
      {"min-rel-freq", "Minimum relative tag frequency"},
      {"mainstream-mode", "cosine or supplied"},
      {"split-fraction", "Most recent fraction of events held out per user"},
      {"k-max", "Longest cut-off of the ranking metrics"},
      {"f1-k", "Cut-off of the reported F1"},
      {"decay-bins", "Log-spaced bins of the decay fit"},
      {"d-override", "GROUP=VALUE[,GROUP=VALUE...] bypassing the decay fit"},
      {"cf-user-neighbors", "Neighbourhood size of CF_u"},
      {"cf-item-neighbors", "Neighbourhood size of CF_i"},
      {"cf-top-artists", "Top artists per user considered by CF_i"},
      {"attentional-weight", "Weight of each context genre in ACT_ua"},
      {"alpha", "Significance level"},
      {"paired", "Paired (true) or Welch (false) t-test"},
  };
  app.add_option("--config", config_file, "key = value configuration file")
      ->check(CLI::ExistingFile);
  app.add_flag("--strict", strict, "Fail on the first malformed input line");
  for (const auto& [key, help] : options) app.add_option("--" + key, values[key], help);

  auto* ingest = app.add_subcommand("ingest", "Parse, filter and normalise the input files");
  auto* split = app.add_subcommand("split-groups", "Split users into LowMS / MedMS / HighMS");
  auto* fit = app.add_subcommand("fit-decay", "Fit the decay exponent of each group");
  auto* evaluate = app.add_subcommand("evaluate", "Evaluate algorithms on each group");
  auto* report = app.add_subcommand("report", "Print the metric tables");

  std::vector<std::string> fit_groups;
  fit->add_option("groups", fit_groups, "Groups (default: all three)");
  std::vector<std::string> eval_groups;
  std::string algorithms;
  evaluate->add_option("groups", eval_groups, "Groups (default: all three)");
  evaluate->add_option("--algorithms,-a", algorithms,
                       "Comma separated list (default: TOP,CF_u,CF_i,POP_u,TIME_u,BLL_u,ACT_ua)");
  for (auto* sub : {ingest, split, fit, evaluate, report}) sub->fallthrough();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  gm_config* raw = nullptr;
  if (gm_config_create(&raw) != GM_OK) return report_failure(GM_ERR_INTERNAL);
  ConfigPtr config(raw);

  if (!config_file.empty()) {
    if (const auto s = gm_config_load(config.get(), config_file.c_str()); s != GM_OK) {
      return report_failure(s);
    }
  }
  for (const auto& [key, help] : options) {
    if (app.count("--" + key) == 0) continue;
    if (const auto s = gm_config_set(config.get(), key.c_str(), values[key].c_str()); s != GM_OK) {
      return report_failure(s);
    }
  }
  if (strict) gm_config_set(config.get(), "strict", "true");

  gm_config* c = config.get();
  if (ingest->parsed()) return run([&](char** s) { return gm_ingest(c, s); });
  if (split->parsed()) return run([&](char** s) { return gm_split_groups(c, s); });
  if (report->parsed()) return run([&](char** s) { return gm_report(c, s); });

  if (fit->parsed()) {
    for (const auto& g : fit_groups.empty() ? kAllGroups : fit_groups) {
      if (const int code = run([&](char** s) { return gm_fit_decay(c, g.c_str(), s); })) {
        return code;
      }
    }
    return 0;
  }
  for (const auto& g : eval_groups.empty() ? kAllGroups : eval_groups) {
    const int code =
        run([&](char** s) { return gm_evaluate(c, g.c_str(), algorithms.c_str(), s); });
    if (code) return code;
  }
  return 0;
}
