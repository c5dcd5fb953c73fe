// IMEX Euler time stepping for both filament models.
//
// Per step, with tau solved at the current curve and V = -L[X_ssss - (tau X_s)_s]:
//
//   X^(k)+ = (X^(k) + dt G^(k)) / (1 + dt lambda(k)),  G = V + T_lambda X_ssss
//
// lambda(k) = m_n(k)(2 pi k)^4 is the principal part of L[X_ssss]; the
// remainder and the tension force are explicit. The resistive model uses
// its normal coefficient |log eps|/4pi in the same role.
#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "filament/curves.hpp"
#include "filament/mobility.hpp"
#include "filament/tension.hpp"

namespace filament {

struct DiagnosticsRecord {
  long step = 0;
  double time = 0.0;             ///< run time (rescaled when the run is rescaled)
  double energy = 0.0;           ///< 1/2 int |X_ss|^2
  double dissipation = 0.0;      ///< ||X_sss - tau X_s||^2 in H^{1/2} (homogeneous)
  double dissipation_rate = 0.0; ///< int Z_s . L Z_s, equal to -dE/dt
  double inext_residual = 0.0;
  double tension_h12 = 0.0;
  int cg_iterations = 0;
  bool energy_flag = false;
  bool reparameterized = false;
};

struct StepperOptions {
  double inextensibility_tol = 1e-6;
  double energy_tol = 1e-8;  ///< relative to the initial energy
  int reparam_every = 20;
  TensionOptions tension;
};

struct EvolutionState {
  PeriodicCurve curve;
  TensionField tension;
  double time = 0.0;
  long step = 0;
  double initial_energy = 0.0;
  int steps_since_reparam = 0;
  DiagnosticsRecord diagnostics;
};

double energy(const PeriodicCurve& curve);
/// ||X_sss - tau X_s||^2 in homogeneous H^{1/2}.
double dissipation(const PeriodicCurve& curve, const ScalarField& tau);
/// int Z_s . L Z_s with Z = X_sss - tau X_s.
double dissipation_rate(const PeriodicCurve& curve, const Mobility& mobility, const ScalarField& tau);

struct PrincipalSplit {
  std::vector<double> linear;  ///< lambda(k) = m_n(k) (2 pi k)^4, k = 0..n/2
  VectorField remainder;       ///< L[X_ssss] - T_{m_n} X_ssss
};
PrincipalSplit decompose_principal(const PeriodicCurve& curve, const MultiplierTable& table);

/// Implicit coefficient lambda(k) for k = 0..n/2.
std::vector<double> implicit_coefficients(const Mobility& mobility, int n);

class Integrator {
 public:
  Integrator(Mobility mobility, StepperOptions options = {});

  const Mobility& mobility() const { return mobility_; }
  const StepperOptions& options() const { return options_; }

  /// Solve the tension and fill diagnostics for an initial curve.
  EvolutionState initialize(const PeriodicCurve& curve) const;
  /// Advance by dt in model time; time_increment is what the state clock
  /// advances by (dt itself, or dt |log eps| in rescaled runs).
  EvolutionState step(const EvolutionState& state, double dt, double time_increment) const;
  EvolutionState step(const EvolutionState& state, double dt) const { return step(state, dt, dt); }

  /// Explicit forcing G = V + T_lambda X_ssss at the state.
  VectorField forcing(const EvolutionState& state) const;

 private:
  Mobility mobility_;
  StepperOptions options_;
};

EvolutionState step_leps(const EvolutionState& state, double dt, const MultiplierTable& table,
                         const StepperOptions& options = {});
EvolutionState step_rft(const EvolutionState& state, double dt, double epsilon, const StepperOptions& options = {});

enum class DtPolicy { fixed, ramp, adaptive };

const char* dt_policy_name(DtPolicy p);
DtPolicy parse_dt_policy(const std::string& name);

/// Step sizes in run time. ramp: dt_j = min(dt_max, dt growth^j).
/// adaptive: starts from the forcing at t = 0 (dt ||G||_{H2} <= 1e-2 ||X||_{H2})
/// and grows like ramp; a step with an energy flag is retried at half the
/// size, and the halving persists.
struct TimeStepping {
  DtPolicy policy = DtPolicy::fixed;
  double dt = 1e-6;
  double dt_max = 1e-3;
  double growth = 1.01;
};

/// Deterministic dt sequence; the last step is clipped to the horizon.
class DtSchedule {
 public:
  DtSchedule(TimeStepping ts, double horizon);
  /// Next step size given the current run time; 0 once the horizon is reached.
  double next(double time);
  void halve() { scale_ *= 0.5; }

 private:
  TimeStepping ts_;
  double horizon_;
  long count_ = 0;
  double scale_ = 1.0;
};

struct RunOptions {
  double horizon = 1e-3;
  bool rescaled_time = false;
  TimeStepping stepping;
  int snapshot_every = 0;  ///< 0: initial and final only
  long max_steps = 10'000'000;
  StepperOptions stepper;
};

struct Trajectory {
  std::vector<EvolutionState> snapshots;
  std::vector<DiagnosticsRecord> diagnostics;
  bool completed = false;
  std::string error;
};

/// Called after every accepted step (and once for the initial state).
using StepObserver = std::function<void(const EvolutionState&)>;

/// Forcing-based initial step for the adaptive policy (run time units).
double adaptive_initial_dt(const Integrator& integrator, const EvolutionState& state, bool rescaled_time);

/// Step errors are caught: the trajectory keeps what was computed, completed
/// is false and error holds the message.
Trajectory run(const Mobility& mobility, const PeriodicCurve& initial, const RunOptions& options,
               const StepObserver& observer = {});

}  // namespace filament
