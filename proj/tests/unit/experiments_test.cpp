// Copyright 2026 The ebmlab Authors
// SPDX-License-Identifier: Apache-2.0

#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "ebm/experiments/check_suite.hpp"
#include "ebm/experiments/config.hpp"
#include "ebm/experiments/csv.hpp"
#include "ebm/experiments/experiment.hpp"

namespace ebm {
namespace {

namespace fs = std::filesystem;

std::string slurp(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

fs::path scratch_dir(const std::string& leaf) {
  const fs::path dir = fs::temp_directory_path() / ("ebm_experiments_test_" + leaf);
  fs::remove_all(dir);
  return dir;
}

// Expects a ConfigError whose message contains `needle` and whose line is `line`.
void expect_config_error(std::string_view text, const std::string& needle, std::optional<std::size_t> line) {
  try {
    parse_config(text);
    FAIL() << "no error for: " << text;
  } catch (const ConfigError& e) {
    EXPECT_NE(std::string(e.what()).find(needle), std::string::npos) << e.what();
    EXPECT_EQ(e.line(), line) << e.what();
  }
}

TEST(Config, EmptyTextListsMissingRequiredKeys) {
  expect_config_error("", "missing required keys: experiment, seed", std::nullopt);
}

TEST(Config, CommentsAndWhitespace) {
  const auto cfg = parse_config("# header\n\n  experiment = de_bruijn   # trailing\nseed=3\n");
  EXPECT_EQ(cfg.experiment(), "de_bruijn");
  EXPECT_EQ(cfg.seed(), 3u);
}

TEST(Config, RangeErrorNamesKeyAndLine) {
  expect_config_error("experiment = gaussian_recovery\nseed = 1\nestimator.sigma = -1\n", "estimator.sigma", 3);
}

TEST(Config, ZeroStepSizeIsRangeError) {
  expect_config_error("experiment = cd_sm_connection\nseed = 1\neval.eps = 0.1,0\n", "eval.eps", 3);
}

TEST(Config, DuplicateAndUnknownKeys) {
  expect_config_error("experiment = de_bruijn\nseed = 1\nseed = 2\n", "duplicate key 'seed'", 3);
  expect_config_error("experiment = de_bruijn\nsead = 1\n", "unknown key 'sead'", 2);
}

TEST(Config, TypeMismatch) {
  expect_config_error("experiment = de_bruijn\nseed = one\n", "seed", 2);
  expect_config_error("experiment = de_bruijn\nseed = 1\nlog.wall_clock = maybe\n", "log.wall_clock", 3);
}

TEST(Config, UnknownExperimentListsAvailable) {
  try {
    parse_config("experiment = nope\nseed = 1\n");
    FAIL();
  } catch (const ConfigError& e) {
    const std::string msg = e.what();
    for (const auto& name : experiment_names()) EXPECT_NE(msg.find(name), std::string::npos) << msg;
  }
}

TEST(Config, SerializeRoundTrip) {
  const auto cfg = parse_config(
      "experiment = gaussian_recovery\nseed = 9\nestimator = ssm\nestimator.projection = rademacher\n"
      "eval.eps = 0.5,0.25\nfamily = \"mixture_rbf(2,1)\"\nlog.wall_clock = true\noptimizer.lr = 0.1\n");
  const auto again = parse_config(serialize_config(cfg));
  EXPECT_EQ(cfg, again);
  EXPECT_EQ(serialize_config(cfg), serialize_config(again));
  EXPECT_EQ(again.get_string("family"), "mixture_rbf(2,1)");
  EXPECT_EQ(again.get_list("eval.eps"), (std::vector<double>{0.5, 0.25}));
}

TEST(Config, DefaultsLayerExperimentOverSchema) {
  const auto nce = parse_config("experiment = nce_partition\nseed = 1\n");
  EXPECT_EQ(nce.get_string("estimator"), "nce");
  const auto rec = parse_config("experiment = gaussian_recovery\nseed = 1\n");
  EXPECT_EQ(rec.get_string("estimator"), "sm");
  EXPECT_DOUBLE_EQ(rec.get_double("data.var"), 4.0);
}

TEST(Config, FamilySpecs) {
  EXPECT_EQ(family_from_spec("gaussian(3)").dim(), 3u);
  EXPECT_EQ(family_from_spec("mixture_rbf(2,1)").param_count(), 6u);
  EXPECT_EQ(family_from_spec("poly1d(4)").dim(), 1u);
  EXPECT_EQ(family_from_spec("mlp(2,8,1)").dim(), 2u);
  EXPECT_THROW(family_from_spec("gaussian(0)"), ConfigError);
  EXPECT_THROW(family_from_spec("gaussian(1"), ConfigError);
  EXPECT_THROW(family_from_spec("tree(2)"), ConfigError);
  EXPECT_THROW(family_from_spec("mlp(2,3,2)"), ConfigError);
}

TEST(Experiment, FamilyDimensionMismatchIsConfigError) {
  const auto cfg = parse_config("experiment = gaussian_recovery\nseed = 1\nfamily = gaussian(2)\ndata.dim = 3\n");
  EXPECT_THROW(validate_experiment(cfg), ConfigError);
}

TEST(Experiment, NcePartitionNeedsNce) {
  const auto cfg = parse_config("experiment = nce_partition\nseed = 1\nestimator = sm\n");
  EXPECT_THROW(validate_experiment(cfg), ConfigError);
}

TEST(Experiment, ModeWeightNeedsOneDimensionalMixture) {
  const auto cfg = parse_config("experiment = mode_weight\nseed = 1\nfamily = gaussian(1)\n");
  EXPECT_THROW(validate_experiment(cfg), ConfigError);
}

TEST(Experiment, RunIsByteIdenticalAcrossInvocations) {
  const std::string text = "experiment = gaussian_recovery\nseed = 7\nsteps = 200\nout = ";
  const fs::path a = scratch_dir("a"), b = scratch_dir("b");
  const auto ra = run_experiment(parse_config(text + a.string() + "\n"));
  const auto rb = run_experiment(parse_config(text + b.string() + "\n"));
  const std::string run_a = slurp(ra.run_csv);
  ASSERT_FALSE(run_a.empty());
  EXPECT_EQ(run_a, slurp(rb.run_csv));
  EXPECT_EQ(slurp(ra.summary_csv), slurp(rb.summary_csv));
  EXPECT_EQ(run_a.find('\r'), std::string::npos);
  EXPECT_EQ(run_a.substr(0, run_a.find('\n')), "step,estimator,loss,mu[0],chol_log_diag[0],grad_norm,loss_var,wall_ms,seed");
  fs::remove_all(a);
  fs::remove_all(b);
}

TEST(Experiment, DifferentSeedsDiffer) {
  const auto r1 = evaluate_experiment(parse_config("experiment = gaussian_recovery\nseed = 1\nsteps = 20\n"));
  const auto r2 = evaluate_experiment(parse_config("experiment = gaussian_recovery\nseed = 2\nsteps = 20\n"));
  EXPECT_NE(r1.run.to_string(), r2.run.to_string());
}

TEST(Experiment, DeBruijnSummary) {
  const auto r = evaluate_experiment(parse_config("experiment = de_bruijn\nseed = 0\n"));
  EXPECT_TRUE(r.passed());
  ASSERT_NE(r.find("identical_lhs_abs"), nullptr);
  EXPECT_EQ(r.run.rows().size(), 3u);
}

TEST(Csv, Escaping) {
  EXPECT_EQ(csv_escape("plain"), "plain");
  EXPECT_EQ(csv_escape("a,b"), "\"a,b\"");
  EXPECT_EQ(csv_escape("say \"hi\""), "\"say \"\"hi\"\"\"");
  EXPECT_EQ(csv_escape("two\nlines"), "\"two\nlines\"");
}

TEST(Csv, NumbersRoundTrip) {
  for (double v : {0.1, 1.0 / 3.0, -2.5e-300, 123456789.125}) {
    EXPECT_EQ(std::stod(format_number(v)), v);
  }
  EXPECT_EQ(format_number(std::int64_t{-42}), "-42");
}

TEST(Csv, RowWidthChecked) {
  CsvTable t({"a", "b"});
  EXPECT_ANY_THROW(t.add_row({"1"}));
  t.add_row({"1", "x,y"});
  EXPECT_EQ(t.to_string(), "a,b\n1,\"x,y\"\n");
}

TEST(CheckSuite, FilterAndFlippedSign) {
  const auto rows = run_check_suite({.filter = "fisher_oracle"});
  ASSERT_EQ(rows.size(), 1u);
  EXPECT_TRUE(rows[0].pass);
  const auto flipped = run_check_suite({.filter = "fisher_oracle", .flip_sm_sign = true});
  ASSERT_EQ(flipped.size(), 1u);
  EXPECT_FALSE(flipped[0].pass);
  EXPECT_TRUE(run_check_suite({.filter = "no_such_property"}).empty());
}

TEST(CheckSuite, ReportHeader) {
  const auto rows = run_check_suite({.filter = "numerics"});
  EXPECT_FALSE(rows.empty());
  const auto table = check_report(rows);
  EXPECT_EQ(table.header(), (std::vector<std::string>{"property", "module", "measured", "tolerance", "pass"}));
  EXPECT_EQ(table.rows().size(), rows.size());
}

}  // namespace
}  // namespace ebm
