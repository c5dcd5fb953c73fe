// key = value run and sweep configuration.
//
// One assignment per line, '#' starts a comment, blank lines are ignored.
// Parsing collects every problem (unknown key, bad value, violated
// constraint, duplicate) with its line number before failing.
#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "filament/curves.hpp"
#include "filament/evolution.hpp"
#include "filament/mobility.hpp"

namespace filament {

class ConfigError : public std::runtime_error {
 public:
  explicit ConfigError(std::vector<std::string> errors);
  const std::vector<std::string>& errors() const { return errors_; }

 private:
  std::vector<std::string> errors_;
};

struct KeyValue {
  std::string key;
  std::string value;
  int line = 0;
};

/// Split into assignments. Malformed lines and duplicate keys are appended
/// to errors; for a duplicate the first occurrence is kept.
std::vector<KeyValue> parse_key_values(const std::string& text, std::vector<std::string>& errors);

enum class InitialCurveKind { circle, perturbed_circle, trefoil, file };

struct InitialCurveSpec {
  InitialCurveKind kind = InitialCurveKind::perturbed_circle;
  int mode = 3;
  double amplitude = 0.05;
  std::string path;
};

std::string describe(const InitialCurveSpec& spec);
PeriodicCurve make_initial_curve(const InitialCurveSpec& spec, int n);

/// Ordered key/value echo of a parsed configuration, for manifests.
using ConfigEcho = std::vector<std::pair<std::string, std::string>>;

struct RunConfig {
  Model model = Model::leps;
  double epsilon = 0.0;
  int n = 0;
  double horizon = 0.0;
  bool rescaled_time = true;
  TimeStepping stepping{DtPolicy::adaptive, 1e-7, 1e-3, 1.01};
  InitialCurveSpec initial;
  StepperOptions stepper;
  int snapshot_every = 0;
  long max_steps = 10'000'000;
  std::uint64_t seed = 0;  ///< reserved; the pipeline is deterministic
  std::string output_dir;

  RunOptions run_options() const;
  ConfigEcho echo() const;
};

/// Required keys: model, epsilon, n, horizon. Throws ConfigError.
RunConfig parse_config(const std::string& text);

struct SweepConfig {
  std::vector<double> epsilons{1e-2, 1e-3, 1e-4, 1e-5, 1e-6};
  double horizon = 0.5;  ///< rescaled time
  int n = 256;
  TimeStepping stepping{DtPolicy::ramp, 1e-7, 1e-3, 1.01};
  InitialCurveSpec initial;
  StepperOptions stepper;
  int confirmation_n = 1024;          ///< 0 disables the confirmation run
  double confirmation_epsilon = 1e-4;
  int jobs = 4;
  std::string output_dir;

  ConfigEcho echo() const;
};

/// All keys optional. Throws ConfigError.
SweepConfig parse_sweep_config(const std::string& text);
/// Throws ConfigError if the invariants (strictly decreasing epsilons, all
/// below 0.1, positive numerics) fail.
void validate(const SweepConfig& config);

}  // namespace filament
