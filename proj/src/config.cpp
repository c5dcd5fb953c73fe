#include "filament/config.hpp"

#include <algorithm>
#include <charconv>
#include <functional>
#include <map>
#include <optional>

#include "filament/io.hpp"

namespace filament {
namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::string join_messages(const std::vector<std::string>& errors) {
  std::string msg = "invalid configuration:";
  for (const auto& e : errors) msg += "\n  " + e;
  return msg;
}

bool to_double(const std::string& s, double& out) {
  const char* end = s.data() + s.size();
  auto [p, ec] = std::from_chars(s.data(), end, out);
  return ec == std::errc() && p == end;
}

template <class Int>
bool to_integer(const std::string& s, Int& out) {
  const char* end = s.data() + s.size();
  auto [p, ec] = std::from_chars(s.data(), end, out);
  return ec == std::errc() && p == end;
}

bool to_bool(const std::string& s, bool& out) {
  if (s == "true" || s == "1" || s == "yes") return out = true, true;
  if (s == "false" || s == "0" || s == "no") return out = false, true;
  return false;
}

// A setter returns an error message, or nothing on success.
using Setter = std::function<std::optional<std::string>(const std::string&)>;

Setter real(double& dst) {
  return [&dst](const std::string& v) -> std::optional<std::string> {
    if (!to_double(v, dst)) return "expected a real number, got '" + v + "'";
    return std::nullopt;
  };
}

template <class Int>
Setter integer(Int& dst) {
  return [&dst](const std::string& v) -> std::optional<std::string> {
    if (!to_integer(v, dst)) return "expected an integer, got '" + v + "'";
    return std::nullopt;
  };
}

Setter boolean(bool& dst) {
  return [&dst](const std::string& v) -> std::optional<std::string> {
    if (!to_bool(v, dst)) return "expected true or false, got '" + v + "'";
    return std::nullopt;
  };
}

Setter text(std::string& dst) {
  return [&dst](const std::string& v) -> std::optional<std::string> {
    dst = v;
    return std::nullopt;
  };
}

template <class Parse, class T>
Setter choice(T& dst, Parse parse) {
  return [&dst, parse](const std::string& v) -> std::optional<std::string> {
    try {
      dst = parse(v);
    } catch (const std::exception& e) {
      return std::string(e.what());
    }
    return std::nullopt;
  };
}

InitialCurveKind parse_curve_kind(const std::string& v) {
  if (v == "circle") return InitialCurveKind::circle;
  if (v == "perturbed-circle") return InitialCurveKind::perturbed_circle;
  if (v == "trefoil") return InitialCurveKind::trefoil;
  if (v == "file") return InitialCurveKind::file;
  throw std::invalid_argument("unknown initial curve '" + v + "' (expected circle, perturbed-circle, trefoil or file)");
}

const char* curve_kind_name(InitialCurveKind k) {
  switch (k) {
    case InitialCurveKind::circle: return "circle";
    case InitialCurveKind::perturbed_circle: return "perturbed-circle";
    case InitialCurveKind::trefoil: return "trefoil";
    default: return "file";
  }
}

void add_common(std::map<std::string, Setter>& keys, TimeStepping& ts, InitialCurveSpec& init, StepperOptions& st) {
  keys["dt"] = real(ts.dt);
  keys["dt_policy"] = choice(ts.policy, parse_dt_policy);
  keys["dt_max"] = real(ts.dt_max);
  keys["dt_growth"] = real(ts.growth);
  keys["initial_curve"] = choice(init.kind, parse_curve_kind);
  keys["perturbation_mode"] = integer(init.mode);
  keys["perturbation_amplitude"] = real(init.amplitude);
  keys["curve_file"] = text(init.path);
  keys["inextensibility_tol"] = real(st.inextensibility_tol);
  keys["cg_tol"] = real(st.tension.cg_tol);
  keys["cg_max_iter"] = integer(st.tension.max_iter);
  keys["energy_tol"] = real(st.energy_tol);
  keys["reparam_every"] = integer(st.reparam_every);
}

// Applies every assignment through the key table; returns the keys seen.
std::map<std::string, int> apply(const std::vector<KeyValue>& kvs, const std::map<std::string, Setter>& keys,
                                 std::vector<std::string>& errors) {
  std::map<std::string, int> seen;
  for (const auto& kv : kvs) {
    const auto it = keys.find(kv.key);
    if (it == keys.end()) {
      errors.push_back("line " + std::to_string(kv.line) + ": unknown key '" + kv.key + "'");
      continue;
    }
    seen[kv.key] = kv.line;
    if (auto err = it->second(kv.value)) errors.push_back("line " + std::to_string(kv.line) + ": " + kv.key + ": " + *err);
  }
  return seen;
}

std::string where(const std::map<std::string, int>& seen, const std::string& key) {
  const auto it = seen.find(key);
  return it == seen.end() ? key + ": " : "line " + std::to_string(it->second) + ": " + key + ": ";
}

void check_common(const std::map<std::string, int>& seen, const TimeStepping& ts, const InitialCurveSpec& init,
                  const StepperOptions& st, int n, std::vector<std::string>& errors) {
  auto positive = [&](const std::string& key, double v) {
    if (!(v > 0.0)) errors.push_back(where(seen, key) + "must be positive");
  };
  positive("dt", ts.dt);
  positive("dt_max", ts.dt_max);
  if (!(ts.growth >= 1.0)) errors.push_back(where(seen, "dt_growth") + "must be >= 1");
  positive("inextensibility_tol", st.inextensibility_tol);
  positive("cg_tol", st.tension.cg_tol);
  positive("energy_tol", st.energy_tol);
  if (st.tension.max_iter < 0) errors.push_back(where(seen, "cg_max_iter") + "must be nonnegative");
  if (st.reparam_every < 1) errors.push_back(where(seen, "reparam_every") + "must be >= 1");
  if (init.kind == InitialCurveKind::perturbed_circle) {
    if (init.mode < 2 || (n >= 32 && init.mode + 1 > n / 3))
      errors.push_back(where(seen, "perturbation_mode") + "must be >= 2 and resolved by the grid");
    if (!(init.amplitude > 0.0 && init.amplitude < 0.5))
      errors.push_back(where(seen, "perturbation_amplitude") + "must lie in (0, 0.5)");
  }
  if (init.kind == InitialCurveKind::file && init.path.empty())
    errors.push_back(where(seen, "curve_file") + "required when initial_curve = file");
}

void check_grid(const std::map<std::string, int>& seen, const std::string& key, int n, std::vector<std::string>& errors) {
  if (n < 32 || !is_power_of_two(n)) errors.push_back(where(seen, key) + "must be a power of two >= 32");
}

void echo_common(ConfigEcho& e, const TimeStepping& ts, const InitialCurveSpec& init, const StepperOptions& st) {
  e.emplace_back("dt_policy", dt_policy_name(ts.policy));
  e.emplace_back("dt", format_double(ts.dt));
  e.emplace_back("dt_max", format_double(ts.dt_max));
  e.emplace_back("dt_growth", format_double(ts.growth));
  e.emplace_back("initial_curve", curve_kind_name(init.kind));
  e.emplace_back("perturbation_mode", std::to_string(init.mode));
  e.emplace_back("perturbation_amplitude", format_double(init.amplitude));
  e.emplace_back("curve_file", init.path);
  e.emplace_back("inextensibility_tol", format_double(st.inextensibility_tol));
  e.emplace_back("cg_tol", format_double(st.tension.cg_tol));
  e.emplace_back("cg_max_iter", std::to_string(st.tension.max_iter));
  e.emplace_back("energy_tol", format_double(st.energy_tol));
  e.emplace_back("reparam_every", std::to_string(st.reparam_every));
}

}  // namespace

ConfigError::ConfigError(std::vector<std::string> errors)
    : std::runtime_error(join_messages(errors)), errors_(std::move(errors)) {}

std::vector<KeyValue> parse_key_values(const std::string& content, std::vector<std::string>& errors) {
  std::vector<KeyValue> out;
  std::map<std::string, int> first;
  std::size_t pos = 0;
  int lineno = 0;
  while (pos <= content.size()) {
    const auto nl = content.find('\n', pos);
    std::string line = content.substr(pos, nl == std::string::npos ? std::string::npos : nl - pos);
    pos = nl == std::string::npos ? content.size() + 1 : nl + 1;
    ++lineno;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      errors.push_back("line " + std::to_string(lineno) + ": expected key = value");
      continue;
    }
    KeyValue kv{trim(line.substr(0, eq)), trim(line.substr(eq + 1)), lineno};
    if (kv.key.empty() || kv.value.empty()) {
      errors.push_back("line " + std::to_string(lineno) + ": empty key or value");
      continue;
    }
    if (const auto it = first.find(kv.key); it != first.end()) {
      errors.push_back("line " + std::to_string(lineno) + ": duplicate key '" + kv.key + "' (first set on line " +
                       std::to_string(it->second) + ")");
      continue;
    }
    first[kv.key] = lineno;
    out.push_back(std::move(kv));
  }
  return out;
}

std::string describe(const InitialCurveSpec& spec) {
  switch (spec.kind) {
    case InitialCurveKind::perturbed_circle:
      return "perturbed-circle(mode=" + std::to_string(spec.mode) + ", amplitude=" + format_double(spec.amplitude) + ")";
    case InitialCurveKind::file: return "file(" + spec.path + ")";
    default: return curve_kind_name(spec.kind);
  }
}

PeriodicCurve make_initial_curve(const InitialCurveSpec& spec, int n) {
  switch (spec.kind) {
    case InitialCurveKind::circle: return circle_curve(make_grid(n));
    case InitialCurveKind::perturbed_circle: return perturbed_circle(make_grid(n), spec.mode, spec.amplitude);
    case InitialCurveKind::trefoil: return trefoil_curve(make_grid(n));
    default: {
      PeriodicCurve c = read_curve_csv(spec.path);
      if (c.n() != n)
        throw std::runtime_error("curve file has " + std::to_string(c.n()) + " points but n = " + std::to_string(n));
      return reparameterize_arclength(c);
    }
  }
}

RunOptions RunConfig::run_options() const {
  RunOptions o;
  o.horizon = horizon;
  o.rescaled_time = rescaled_time;
  o.stepping = stepping;
  o.snapshot_every = snapshot_every;
  o.max_steps = max_steps;
  o.stepper = stepper;
  return o;
}

ConfigEcho RunConfig::echo() const {
  ConfigEcho e{{"model", model_name(model)},
               {"epsilon", format_double(epsilon)},
               {"n", std::to_string(n)},
               {"horizon", format_double(horizon)},
               {"rescaled_time", rescaled_time ? "true" : "false"}};
  echo_common(e, stepping, initial, stepper);
  e.emplace_back("snapshot_every", std::to_string(snapshot_every));
  e.emplace_back("max_steps", std::to_string(max_steps));
  e.emplace_back("seed", std::to_string(seed));
  e.emplace_back("output_dir", output_dir);
  return e;
}

RunConfig parse_config(const std::string& content) {
  std::vector<std::string> errors;
  const auto kvs = parse_key_values(content, errors);
  RunConfig c;
  std::map<std::string, Setter> keys;
  keys["model"] = choice(c.model, parse_model);
  keys["epsilon"] = real(c.epsilon);
  keys["n"] = integer(c.n);
  keys["horizon"] = real(c.horizon);
  keys["rescaled_time"] = boolean(c.rescaled_time);
  keys["snapshot_every"] = integer(c.snapshot_every);
  keys["max_steps"] = integer(c.max_steps);
  keys["seed"] = integer(c.seed);
  keys["output_dir"] = text(c.output_dir);
  add_common(keys, c.stepping, c.initial, c.stepper);
  const auto seen = apply(kvs, keys, errors);

  for (const char* req : {"model", "epsilon", "n", "horizon"})
    if (!seen.count(req)) errors.push_back(std::string("missing required key '") + req + "'");
  if (seen.count("epsilon") && !(c.epsilon > 0.0 && c.epsilon <= 0.1))
    errors.push_back(where(seen, "epsilon") + "must lie in (0, 0.1], got " + format_double(c.epsilon));
  if (seen.count("n")) check_grid(seen, "n", c.n, errors);
  if (seen.count("horizon") && !(c.horizon > 0.0)) errors.push_back(where(seen, "horizon") + "must be positive");
  if (c.snapshot_every < 0) errors.push_back(where(seen, "snapshot_every") + "must be nonnegative");
  if (c.max_steps < 0) errors.push_back(where(seen, "max_steps") + "must be nonnegative");
  check_common(seen, c.stepping, c.initial, c.stepper, c.n, errors);
  if (!errors.empty()) throw ConfigError(std::move(errors));
  return c;
}

ConfigEcho SweepConfig::echo() const {
  std::string eps;
  for (double e : epsilons) eps += (eps.empty() ? "" : ",") + format_double(e);
  ConfigEcho e{{"epsilons", eps}, {"horizon", format_double(horizon)}, {"n", std::to_string(n)}};
  echo_common(e, stepping, initial, stepper);
  e.emplace_back("confirmation_n", std::to_string(confirmation_n));
  e.emplace_back("confirmation_epsilon", format_double(confirmation_epsilon));
  e.emplace_back("jobs", std::to_string(jobs));
  e.emplace_back("output_dir", output_dir);
  return e;
}

SweepConfig parse_sweep_config(const std::string& content) {
  std::vector<std::string> errors;
  const auto kvs = parse_key_values(content, errors);
  SweepConfig c;
  std::map<std::string, Setter> keys;
  keys["epsilons"] = [&c](const std::string& v) -> std::optional<std::string> {
    c.epsilons.clear();
    std::size_t pos = 0;
    while (pos <= v.size()) {
      const auto comma = v.find(',', pos);
      const std::string item = trim(v.substr(pos, comma == std::string::npos ? std::string::npos : comma - pos));
      double d = 0.0;
      if (!to_double(item, d)) return "expected a comma-separated list of reals, got '" + v + "'";
      c.epsilons.push_back(d);
      if (comma == std::string::npos) break;
      pos = comma + 1;
    }
    return std::nullopt;
  };
  keys["horizon"] = real(c.horizon);
  keys["n"] = integer(c.n);
  keys["confirmation_n"] = integer(c.confirmation_n);
  keys["confirmation_epsilon"] = real(c.confirmation_epsilon);
  keys["jobs"] = integer(c.jobs);
  keys["output_dir"] = text(c.output_dir);
  add_common(keys, c.stepping, c.initial, c.stepper);
  const auto seen = apply(kvs, keys, errors);
  check_common(seen, c.stepping, c.initial, c.stepper, c.n, errors);
  if (!errors.empty()) throw ConfigError(std::move(errors));
  validate(c);
  return c;
}

void validate(const SweepConfig& c) {
  std::vector<std::string> errors;
  const std::map<std::string, int> none;
  if (c.epsilons.empty()) errors.push_back("epsilons: must not be empty");
  for (std::size_t i = 0; i < c.epsilons.size(); ++i) {
    if (!(c.epsilons[i] > 0.0 && c.epsilons[i] < 0.1)) errors.push_back("epsilons: every value must lie in (0, 0.1)");
    if (i > 0 && !(c.epsilons[i] < c.epsilons[i - 1])) errors.push_back("epsilons: must be strictly decreasing");
  }
  if (!(c.horizon > 0.0)) errors.push_back("horizon: must be positive");
  check_grid(none, "n", c.n, errors);
  if (c.confirmation_n != 0) {
    check_grid(none, "confirmation_n", c.confirmation_n, errors);
    if (!(c.confirmation_epsilon > 0.0 && c.confirmation_epsilon < 0.1))
      errors.push_back("confirmation_epsilon: must lie in (0, 0.1)");
  }
  if (c.jobs < 1) errors.push_back("jobs: must be >= 1");
  if (!errors.empty()) {
    std::sort(errors.begin(), errors.end());
    errors.erase(std::unique(errors.begin(), errors.end()), errors.end());
    throw ConfigError(std::move(errors));
  }
}

}  // namespace filament
