// Copyright 2026 The ebmlab Authors
// SPDX-License-Identifier: Apache-2.0

// ebm: run experiments, the invariant check suite, or list what is available.
// Exit codes: 0 success, 1 assertion failure, 2 usage or config error.

#include <CLI11.hpp>

#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "ebm/experiments/check_suite.hpp"
#include "ebm/experiments/config.hpp"
#include "ebm/experiments/experiment.hpp"
#include "ebm/numerics/errors.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitFailed = 1;
constexpr int kExitUsage = 2;

std::string read_file(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw ebm::ConfigError("cannot read config file " + path);
  std::ostringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

int cmd_run(const std::string& config_path, const std::optional<std::int64_t>& seed,
            const std::optional<std::string>& out) {
  ebm::ExperimentConfig cfg = ebm::parse_config(read_file(config_path));
  if (seed) cfg.set("seed", *seed);
  if (out) cfg.set("out", *out);
  const ebm::RunArtifacts artifacts = ebm::run_experiment(cfg);
  for (const auto& row : artifacts.result.summary) {
    const auto pass = row.pass();
    if (!pass) continue;
    std::printf("%s %s = %s\n", *pass ? "PASS" : "FAIL", row.name.c_str(), ebm::format_number(row.value).c_str());
  }
  std::printf("wrote %s\n", artifacts.run_csv.string().c_str());
  std::printf("wrote %s\n", artifacts.summary_csv.string().c_str());
  return artifacts.result.passed() ? kExitOk : kExitFailed;
}

int cmd_check(const ebm::CheckOptions& options, const std::optional<std::string>& report_path) {
  const auto rows = ebm::run_check_suite(options);
  if (rows.empty()) {
    std::fprintf(stderr, "no property matches filter '%s'\n", options.filter.c_str());
    return kExitUsage;
  }
  bool all = true;
  for (const auto& row : rows) {
    std::printf("%s %s/%s measured=%s tolerance=%s\n", row.pass ? "PASS" : "FAIL", row.module.c_str(),
                row.property.c_str(), ebm::format_number(row.measured).c_str(),
                ebm::format_number(row.tolerance).c_str());
    all = all && row.pass;
  }
  std::filesystem::path path;
  if (report_path) {
    path = *report_path;
  } else if (const char* root = std::getenv("EBM_OUT"); root && *root) {
    path = std::filesystem::path(root) / "report.csv";
  } else {
    path = std::filesystem::path("runs") / "report.csv";
  }
  ebm::check_report(rows).write(path);
  std::printf("wrote %s\n", path.string().c_str());
  return all ? kExitOk : kExitFailed;
}

int cmd_list() {
  std::printf("experiments:\n");
  for (const auto& name : ebm::experiment_names()) std::printf("  %s\n", name.c_str());
  std::printf("estimators:\n");
  for (const auto& name : ebm::estimator_names()) std::printf("  %s\n", name.c_str());
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"ebm: energy-based model training laboratory"};
  app.require_subcommand(1);

  auto* run = app.add_subcommand("run", "run an experiment from a config file");
  std::string config_path;
  std::optional<std::int64_t> seed;
  std::optional<std::string> out;
  run->add_option("--config", config_path, "config file (key = value lines)")->required();
  run->add_option("--seed", seed, "override the config seed");
  run->add_option("--out", out, "output directory");

  auto* check = app.add_subcommand("check", "run the invariant check suite");
  ebm::CheckOptions check_options;
  std::optional<std::string> report_path;
  check->add_option("--filter", check_options.filter, "only properties or modules containing NAME");
  check->add_flag("--flip-sm-sign", check_options.flip_sm_sign, "debug: flip the score-matching Hessian sign");
  check->add_option("--report", report_path, "report path (default $EBM_OUT/report.csv or runs/report.csv)");

  app.add_subcommand("list", "list experiments and estimators");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (*run) return cmd_run(config_path, seed, out);
    if (*check) return cmd_check(check_options, report_path);
    return cmd_list();
  } catch (const ebm::ConfigError& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return kExitUsage;
  } catch (const ebm::InvalidArgument& e) {
    std::fprintf(stderr, "invalid argument: %s\n", e.what());
    return kExitUsage;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitFailed;
  }
}
