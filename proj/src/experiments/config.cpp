// Copyright 2026 The ebmlab Authors
// SPDX-License-Identifier: Apache-2.0

#include "ebm/experiments/config.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <set>

#include "ebm/numerics/errors.hpp"

namespace ebm {

namespace {

using Defaults = std::map<std::string, ConfigValue, std::less<>>;

KeySpec base(std::string key, ValueType type, ConfigValue def, std::string help) {
  KeySpec s;
  s.key = std::move(key);
  s.type = type;
  s.default_value = std::move(def);
  s.help = std::move(help);
  return s;
}

KeySpec str(std::string key, std::string def, std::string help, std::vector<std::string> choices = {}) {
  KeySpec s = base(std::move(key), ValueType::kString, std::move(def), std::move(help));
  s.choices = std::move(choices);
  return s;
}

KeySpec integer(std::string key, std::int64_t def, std::int64_t min, std::string help) {
  KeySpec s = base(std::move(key), ValueType::kInt, def, std::move(help));
  s.min = static_cast<double>(min);
  return s;
}

KeySpec real(std::string key, double def, std::string help, std::optional<double> min = std::nullopt,
             bool min_exclusive = false, std::optional<double> max = std::nullopt,
             bool max_exclusive = false) {
  KeySpec s = base(std::move(key), ValueType::kDouble, def, std::move(help));
  s.min = min;
  s.min_exclusive = min_exclusive;
  s.max = max;
  s.max_exclusive = max_exclusive;
  return s;
}

KeySpec positive(std::string key, double def, std::string help) {
  return real(std::move(key), def, std::move(help), 0.0, true);
}

KeySpec flag(std::string key, bool def, std::string help) {
  return base(std::move(key), ValueType::kBool, def, std::move(help));
}

KeySpec positive_list(std::string key, std::vector<double> def, std::string help) {
  KeySpec s = base(std::move(key), ValueType::kDoubleList, std::move(def), std::move(help));
  s.min = 0.0;
  s.min_exclusive = true;
  return s;
}

std::vector<KeySpec> build_schema() {
  std::vector<KeySpec> s;
  KeySpec exp = str("experiment", "", "experiment to run", experiment_names());
  exp.required = true;
  s.push_back(exp);
  KeySpec seed = integer("seed", 0, 0, "root RNG seed");
  seed.required = true;
  s.push_back(seed);
  s.push_back(integer("steps", 2000, 1, "optimizer steps"));
  s.push_back(str("out", "", "output directory (default $EBM_OUT/<experiment>_seed<seed>)"));
  s.push_back(integer("log.every", 10, 1, "log cadence in optimizer steps"));
  s.push_back(flag("log.wall_clock", false, "record wall_ms; off keeps CSVs byte-identical"));
  s.push_back(str("family", "gaussian(1)", "energy family spec"));
  s.push_back(real("init.mean", 0.0, "initial Gaussian mean"));
  s.push_back(positive("init.precision", 1.0, "initial Gaussian precision"));
  s.push_back(str("estimator", "sm", "training estimator", estimator_names()));
  s.push_back(integer("estimator.batch_size", 0, 0, "minibatch size, 0 = estimator default"));
  s.push_back(positive("estimator.sigma", 0.5, "DSM noise scale"));
  s.push_back(integer("estimator.slices", 64, 1, "SSM projections per sample"));
  s.push_back(str("estimator.projection", "gaussian", "SSM projection", {"gaussian", "rademacher"}));
  s.push_back(flag("estimator.variance_reduced", false, "SSM variance-reduced form"));
  s.push_back(positive("estimator.step_size", 0.1, "Langevin step size for CD"));
  s.push_back(integer("estimator.langevin_steps", 50, 1, "Langevin steps per CD chain"));
  s.push_back(flag("estimator.adjust", false, "MALA correction in CD chains"));
  s.push_back(integer("estimator.buffer_capacity", 10'000, 1, "PCD replay buffer capacity"));
  s.push_back(real("estimator.reinit_prob", 0.05, "PCD fresh-start probability", 0.0, false, 1.0));
  s.push_back(real("estimator.noise_mean", 1.0, "NCE noise mean"));
  s.push_back(positive("estimator.noise_var", 9.0, "NCE noise variance"));
  s.push_back(real("estimator.nu", 0.0, "NCE nu, 0 = N/M", 0.0));
  s.push_back(integer("estimator.noise_samples", 0, 0, "NCE noise sample count, 0 = data count"));
  s.push_back(flag("estimator.learn_log_z", true, "NCE learns log Z"));
  s.push_back(positive("optimizer.lr", 1e-2, "Adam learning rate"));
  s.push_back(real("optimizer.beta1", 0.9, "Adam beta1", 0.0, false, 1.0, true));
  s.push_back(real("optimizer.beta2", 0.999, "Adam beta2", 0.0, false, 1.0, true));
  s.push_back(positive("optimizer.epsilon", 1e-8, "Adam epsilon"));
  s.push_back(str("optimizer.decay", "none", "learning-rate schedule", {"none", "linear"}));
  s.push_back(integer("data.dim", 1, 1, "data dimension"));
  s.push_back(real("data.mean", 1.0, "Gaussian data mean (every coordinate)"));
  s.push_back(positive("data.var", 4.0, "Gaussian data variance (every coordinate)"));
  s.push_back(integer("data.samples", 10'000, 2, "data sample count"));
  s.push_back(real("data.weight", 0.7, "two-mode data: weight of the positive mode", 0.0, true, 1.0, true));
  s.push_back(positive("data.separation", 4.0, "two-mode data: modes at +-separation"));
  s.push_back(positive("data.component_var", 0.01, "two-mode data: per-mode variance"));
  s.push_back(positive_list("eval.eps", {0.3, 0.1, 0.03, 0.01}, "Langevin step sizes"));
  s.push_back(positive_list("eval.t", {0.1, 0.5, 1.0}, "smoothing variances"));
  s.push_back(positive("eval.h", 1e-4, "finite-difference step in t"));
  s.push_back(positive_list("eval.scales", {0.1, 0.05, 0.025, 0.0125, 0.00625}, "shift norms |v|"));
  s.push_back(real("eval.model_mean", 0.8, "model mean"));
  s.push_back(positive("eval.model_var", 2.25, "model variance"));
  s.push_back(integer("eval.resamples", 100, 1, "independent resamples"));
  s.push_back(positive_list("eval.sigmas", {0.01, 10.0}, "noise scales"));
  s.push_back(integer("eval.slices", 100'000, 2, "projections per sample"));
  s.push_back(positive("eval.bandwidth", 1.0, "RBF kernel bandwidth"));
  s.push_back(real("eval.shift", 2.0, "mean shift of the alternative"));
  s.push_back(integer("eval.chains", 10'000, 2, "independent chains"));
  s.push_back(integer("eval.chain_steps", 5000, 1, "steps per chain"));
  s.push_back(positive("eval.step_size", 0.01, "unadjusted Langevin step size"));
  s.push_back(positive("eval.mala_step_size", 0.5, "MALA step size"));
  s.push_back(integer("eval.mala_chains", 100, 1, "MALA chains"));
  s.push_back(integer("eval.mala_samples", 100'000, 2, "kept MALA samples over all chains"));
  s.push_back(integer("eval.burn_in", 500, 0, "MALA burn-in steps per chain"));
  s.push_back(integer("anneal.levels", 5, 1, "noise levels"));
  s.push_back(positive("anneal.sigma_max", 2.0, "largest noise level"));
  s.push_back(positive("anneal.sigma_min", 0.1, "smallest noise level"));
  s.push_back(integer("anneal.train_steps", 400, 1, "DSM optimizer steps per level"));
  s.push_back(integer("anneal.batch_size", 2000, 1, "DSM minibatch per step"));
  s.push_back(integer("anneal.steps_per_level", 500, 1, "Langevin steps per level"));
  s.push_back(positive("anneal.step_size", 0.05, "Langevin step size at the smallest level"));
  s.push_back(integer("anneal.chains", 10'000, 1, "sampler chains"));
  return s;
}

const std::map<std::string, Defaults, std::less<>>& experiment_defaults() {
  static const std::map<std::string, Defaults, std::less<>> table = {
      {"gaussian_recovery", {}},
      {"mode_weight",
       {{"family", std::string("mixture_rbf(2,1)")}, {"optimizer.lr", 0.05}, {"optimizer.decay", std::string("linear")}}},
      {"cd_sm_connection", {{"data.mean", 0.5}, {"data.var", 1.0}, {"data.samples", std::int64_t{100'000}}}},
      {"de_bruijn", {{"data.mean", 0.0}, {"data.var", 1.0}}},
      {"ssm_nce_equiv",
       {{"data.mean", 0.0}, {"data.var", 1.0}, {"init.mean", 0.3}, {"init.precision", 2.0}}},
      {"nce_partition",
       {{"estimator", std::string("nce")},
        {"data.mean", 0.0},
        {"data.var", 1.0},
        {"data.samples", std::int64_t{100'000}},
        {"estimator.noise_mean", 0.0},
        {"estimator.noise_var", 2.0},
        {"steps", std::int64_t{300}},
        {"optimizer.lr", 0.05},
        {"optimizer.decay", std::string("linear")}}},
      {"dsm_control_variate", {{"data.mean", 0.0}, {"data.var", 1.0}, {"data.samples", std::int64_t{1000}}}},
      {"ssm_unbiased",
       {{"family", std::string("gaussian(3)")},
        {"data.dim", std::int64_t{3}},
        {"data.mean", 0.0},
        {"data.var", 1.0},
        {"data.samples", std::int64_t{10}}}},
      {"ksd_test", {{"data.mean", 0.0}, {"data.var", 1.0}}},
      {"sampler_moments", {}},
  };
  return table;
}

const KeySpec* find_spec(std::string_view key) {
  for (const auto& s : config_schema()) {
    if (s.key == key) return &s;
  }
  return nullptr;
}

std::string_view trim(std::string_view s) {
  const auto begin = s.find_first_not_of(" \t\r");
  if (begin == std::string_view::npos) return {};
  const auto end = s.find_last_not_of(" \t\r");
  return s.substr(begin, end - begin + 1);
}

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

const char* type_name(ValueType t) {
  switch (t) {
    case ValueType::kString: return "a string";
    case ValueType::kInt: return "an integer";
    case ValueType::kDouble: return "a number";
    case ValueType::kBool: return "true or false";
    case ValueType::kDoubleList: return "a comma-separated list of numbers";
  }
  return "?";
}

std::optional<double> parse_double(std::string_view text) {
  text = trim(text);
  if (text.empty()) return std::nullopt;
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc() || ptr != text.data() + text.size() || !std::isfinite(v)) return std::nullopt;
  return v;
}

void check_range(const KeySpec& spec, double v) {
  auto fail = [&](const std::string& rule) {
    throw ConfigError(spec.key + ": must be " + rule + " (got " + format_double(v) + ")");
  };
  if (spec.min) {
    if (spec.min_exclusive ? !(v > *spec.min) : !(v >= *spec.min)) {
      fail((spec.min_exclusive ? "> " : ">= ") + format_double(*spec.min));
    }
  }
  if (spec.max) {
    if (spec.max_exclusive ? !(v < *spec.max) : !(v <= *spec.max)) {
      fail((spec.max_exclusive ? "< " : "<= ") + format_double(*spec.max));
    }
  }
}

void validate_value(const KeySpec& spec, const ConfigValue& value) {
  const bool type_ok = std::visit(
      [&](const auto& v) {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, std::string>) return spec.type == ValueType::kString;
        if constexpr (std::is_same_v<T, std::int64_t>) return spec.type == ValueType::kInt;
        if constexpr (std::is_same_v<T, double>) return spec.type == ValueType::kDouble;
        if constexpr (std::is_same_v<T, bool>) return spec.type == ValueType::kBool;
        if constexpr (std::is_same_v<T, std::vector<double>>) return spec.type == ValueType::kDoubleList;
      },
      value);
  if (!type_ok) throw ConfigError(spec.key + ": expects " + type_name(spec.type));
  if (const auto* i = std::get_if<std::int64_t>(&value)) check_range(spec, static_cast<double>(*i));
  if (const auto* d = std::get_if<double>(&value)) check_range(spec, *d);
  if (const auto* l = std::get_if<std::vector<double>>(&value)) {
    if (l->empty()) throw ConfigError(spec.key + ": list must not be empty");
    for (double v : *l) check_range(spec, v);
  }
  if (const auto* s = std::get_if<std::string>(&value); s && !spec.choices.empty()) {
    if (std::find(spec.choices.begin(), spec.choices.end(), *s) == spec.choices.end()) {
      std::string all;
      for (const auto& c : spec.choices) all += (all.empty() ? "" : ", ") + c;
      throw ConfigError(spec.key + ": unknown value '" + *s + "'; available: " + all);
    }
  }
}

std::string format_value(const ConfigValue& value) {
  return std::visit(
      [](const auto& v) -> std::string {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, std::string>) return v;
        if constexpr (std::is_same_v<T, std::int64_t>) return std::to_string(v);
        if constexpr (std::is_same_v<T, double>) return format_double(v);
        if constexpr (std::is_same_v<T, bool>) return v ? "true" : "false";
        if constexpr (std::is_same_v<T, std::vector<double>>) {
          std::string out;
          for (double x : v) out += (out.empty() ? "" : ",") + format_double(x);
          return out;
        }
      },
      value);
}

}  // namespace

ConfigError::ConfigError(const std::string& what, std::optional<std::size_t> line)
    : std::runtime_error(line ? "line " + std::to_string(*line) + ": " + what : what), line_(line) {}

const std::vector<std::string>& experiment_names() {
  static const std::vector<std::string> names = {
      "gaussian_recovery", "mode_weight",         "cd_sm_connection", "de_bruijn",
      "ssm_nce_equiv",     "nce_partition",       "dsm_control_variate", "ssm_unbiased",
      "ksd_test",          "sampler_moments"};
  return names;
}

const std::vector<std::string>& estimator_names() {
  static const std::vector<std::string> names = {"sm", "ssm", "dsm", "nce", "cd", "pcd"};
  return names;
}

const std::vector<KeySpec>& config_schema() {
  static const std::vector<KeySpec> schema = build_schema();
  return schema;
}

ConfigValue parse_value(const std::string& key, std::string_view text) {
  const KeySpec* spec = find_spec(key);
  if (!spec) throw ConfigError("unknown key '" + key + "'");
  text = trim(text);
  ConfigValue value;
  switch (spec->type) {
    case ValueType::kString: {
      if (text.size() >= 2 && text.front() == '"' && text.back() == '"') text = text.substr(1, text.size() - 2);
      value = std::string(text);
      break;
    }
    case ValueType::kInt: {
      std::int64_t v = 0;
      const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
      if (text.empty() || ec != std::errc() || ptr != text.data() + text.size()) {
        throw ConfigError(key + ": expects an integer, got '" + std::string(text) + "'");
      }
      value = v;
      break;
    }
    case ValueType::kDouble: {
      const auto v = parse_double(text);
      if (!v) throw ConfigError(key + ": expects a number, got '" + std::string(text) + "'");
      value = *v;
      break;
    }
    case ValueType::kBool: {
      if (text == "true") {
        value = true;
      } else if (text == "false") {
        value = false;
      } else {
        throw ConfigError(key + ": expects true or false, got '" + std::string(text) + "'");
      }
      break;
    }
    case ValueType::kDoubleList: {
      std::vector<double> list;
      std::size_t start = 0;
      while (start <= text.size()) {
        const auto comma = text.find(',', start);
        const auto item = text.substr(start, comma == std::string_view::npos ? text.npos : comma - start);
        const auto v = parse_double(item);
        if (!v) throw ConfigError(key + ": expects a comma-separated list of numbers, got '" + std::string(text) + "'");
        list.push_back(*v);
        if (comma == std::string_view::npos) break;
        start = comma + 1;
      }
      value = std::move(list);
      break;
    }
  }
  validate_value(*spec, value);
  return value;
}

void ExperimentConfig::set(const std::string& key, ConfigValue value) {
  const KeySpec* spec = find_spec(key);
  if (!spec) throw ConfigError("unknown key '" + key + "'");
  validate_value(*spec, value);
  values_[key] = std::move(value);
}

const ConfigValue& ExperimentConfig::lookup(std::string_view key, ValueType type) const {
  const KeySpec* spec = find_spec(key);
  if (!spec) throw ConfigError("unknown key '" + std::string(key) + "'");
  if (spec->type != type) throw ConfigError(std::string(key) + ": is not " + type_name(type));
  if (auto it = values_.find(std::string(key)); it != values_.end()) return it->second;
  if (auto exp = values_.find("experiment"); exp != values_.end()) {
    const auto& table = experiment_defaults();
    if (auto e = table.find(std::get<std::string>(exp->second)); e != table.end()) {
      if (auto d = e->second.find(key); d != e->second.end()) return d->second;
    }
  }
  if (spec->required) throw ConfigError("missing required key '" + std::string(key) + "'");
  return spec->default_value;
}

const std::string& ExperimentConfig::experiment() const {
  return std::get<std::string>(lookup("experiment", ValueType::kString));
}

std::uint64_t ExperimentConfig::seed() const {
  return static_cast<std::uint64_t>(std::get<std::int64_t>(lookup("seed", ValueType::kInt)));
}

std::string ExperimentConfig::get_string(std::string_view key) const {
  return std::get<std::string>(lookup(key, ValueType::kString));
}
std::int64_t ExperimentConfig::get_int(std::string_view key) const {
  return std::get<std::int64_t>(lookup(key, ValueType::kInt));
}
double ExperimentConfig::get_double(std::string_view key) const {
  return std::get<double>(lookup(key, ValueType::kDouble));
}
bool ExperimentConfig::get_bool(std::string_view key) const {
  return std::get<bool>(lookup(key, ValueType::kBool));
}
std::vector<double> ExperimentConfig::get_list(std::string_view key) const {
  return std::get<std::vector<double>>(lookup(key, ValueType::kDoubleList));
}

ExperimentConfig parse_config(std::string_view text) {
  ExperimentConfig cfg;
  std::set<std::string> seen;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const auto nl = text.find('\n', pos);
    std::string_view line = text.substr(pos, nl == std::string_view::npos ? text.npos : nl - pos);
    pos = nl == std::string_view::npos ? text.size() + 1 : nl + 1;
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) throw ConfigError("expected 'key = value'", line_no);
    const std::string key(trim(line.substr(0, eq)));
    if (key.empty()) throw ConfigError("missing key before '='", line_no);
    if (!find_spec(key)) throw ConfigError("unknown key '" + key + "'", line_no);
    if (!seen.insert(key).second) throw ConfigError("duplicate key '" + key + "'", line_no);
    try {
      cfg.set(key, parse_value(key, line.substr(eq + 1)));
    } catch (const ConfigError& e) {
      throw ConfigError(e.what(), line_no);
    }
  }
  std::string missing;
  for (const auto& spec : config_schema()) {
    if (spec.required && !cfg.has(spec.key)) missing += (missing.empty() ? "" : ", ") + spec.key;
  }
  if (!missing.empty()) throw ConfigError("missing required keys: " + missing);
  return cfg;
}

std::string serialize_config(const ExperimentConfig& cfg) {
  std::string out;
  for (const auto& [key, value] : cfg.values()) out += key + " = " + format_value(value) + "\n";
  return out;
}

EnergyFamily family_from_spec(std::string_view spec) {
  const std::string text(trim(spec));
  const auto open = text.find('(');
  if (open == std::string::npos || text.back() != ')') {
    throw ConfigError("family: malformed spec '" + text + "'");
  }
  const std::string kind = text.substr(0, open);
  std::vector<std::size_t> args;
  std::string_view inner = std::string_view(text).substr(open + 1, text.size() - open - 2);
  std::size_t start = 0;
  while (start <= inner.size()) {
    const auto comma = inner.find(',', start);
    const auto item = trim(inner.substr(start, comma == std::string_view::npos ? inner.npos : comma - start));
    std::size_t v = 0;
    const auto [ptr, ec] = std::from_chars(item.data(), item.data() + item.size(), v);
    if (item.empty() || ec != std::errc() || ptr != item.data() + item.size()) {
      throw ConfigError("family: bad argument in '" + text + "'");
    }
    args.push_back(v);
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  try {
    if (kind == "gaussian" && args.size() == 1) return EnergyFamily::gaussian(args[0]);
    if (kind == "mixture_rbf" && args.size() == 2) return EnergyFamily::mixture_rbf(args[0], args[1]);
    if (kind == "poly1d" && args.size() == 1) return EnergyFamily::poly1d(static_cast<unsigned>(args[0]));
    if (kind == "mlp") return EnergyFamily::mlp(args);
  } catch (const InvalidArgument& e) {
    throw ConfigError(std::string("family: ") + e.what());
  }
  throw ConfigError("family: unknown spec '" + text +
                    "'; expected gaussian(d), mixture_rbf(K,d), poly1d(n) or mlp(d,...,1)");
}

}  // namespace ebm
