#include "filament/evolution.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace filament {
namespace {

constexpr double two_pi = 2.0 * std::numbers::pi;

double log_eps(double epsilon) { return std::abs(std::log(epsilon)); }

VectorField zee(const PeriodicCurve& curve, const TangentFrame& frame, const ScalarField& tau) {
  return curve.derivative(3) - frame.scale(tau);
}

}  // namespace

double energy(const PeriodicCurve& curve) {
  const VectorField xss = curve.derivative(2);
  return 0.5 * inner(xss, xss);
}

double dissipation(const PeriodicCurve& curve, const ScalarField& tau) {
  const double z = sobolev_norm(zee(curve, curve.frame(), tau), {0.5, true});
  return z * z;
}

double dissipation_rate(const PeriodicCurve& curve, const Mobility& mobility, const ScalarField& tau) {
  const TangentFrame frame = curve.frame();
  return mobility.quadratic_form(frame, derivative(zee(curve, frame, tau), 1));
}

PrincipalSplit decompose_principal(const PeriodicCurve& curve, const MultiplierTable& table) {
  const Grid& g = curve.grid();
  PrincipalSplit out;
  out.linear.resize(static_cast<std::size_t>(g.modes()));
  for (int k = 0; k < g.modes(); ++k) out.linear[static_cast<std::size_t>(k)] = table.mn(k) * std::pow(two_pi * k, 4);
  const VectorField x4 = curve.derivative(4);
  out.remainder = apply_L_eps(curve.frame(), table, x4) - apply_multiplier(x4, table.normal());
  return out;
}

std::vector<double> implicit_coefficients(const Mobility& mobility, int n) {
  std::vector<double> lambda(static_cast<std::size_t>(n / 2 + 1));
  for (int k = 0; k <= n / 2; ++k) lambda[static_cast<std::size_t>(k)] = mobility.mn(k) * std::pow(two_pi * k, 4);
  return lambda;
}

Integrator::Integrator(Mobility mobility, StepperOptions options)
    : mobility_(std::move(mobility)), options_(options) {}

EvolutionState Integrator::initialize(const PeriodicCurve& curve) const {
  const TensionProblem problem(curve, mobility_);
  EvolutionState s{curve, problem.solve(options_.tension), 0.0, 0, 0.0, 0, {}};
  s.initial_energy = energy(curve);
  auto& d = s.diagnostics;
  d.energy = s.initial_energy;
  d.dissipation = dissipation(curve, s.tension.tau);
  d.dissipation_rate = dissipation_rate(curve, mobility_, s.tension.tau);
  d.inext_residual = inextensibility_residual(curve);
  d.tension_h12 = sobolev_norm(s.tension.tau, {0.5, false});
  d.cg_iterations = s.tension.solve.iterations;
  return s;
}

VectorField Integrator::forcing(const EvolutionState& state) const {
  const TensionProblem problem(state.curve, mobility_);
  const std::vector<double> lambda = implicit_coefficients(mobility_, state.curve.n());
  VectorField g = problem.velocity(state.tension.tau);
  const VectorField& x = state.curve.coeffs();
  for (int c = 0; c < 3; ++c)
    for (std::size_t k = 0; k < lambda.size(); ++k) g.hat[c][k] += lambda[k] * x.hat[c][k];
  return g;
}

EvolutionState Integrator::step(const EvolutionState& state, double dt, double time_increment) const {
  if (!(dt > 0.0)) throw std::invalid_argument("step: dt must be positive");
  const PeriodicCurve& x = state.curve;
  const Grid& g = x.grid();
  const std::vector<double> lambda = implicit_coefficients(mobility_, g.n());

  const VectorField force = forcing(state);
  VectorField next = x.coeffs();
  for (int c = 0; c < 3; ++c)
    for (std::size_t k = 0; k < lambda.size(); ++k)
      next.hat[c][k] = (next.hat[c][k] + dt * force.hat[c][k]) / (1.0 + dt * lambda[k]);

  PeriodicCurve curve(x.grid_ptr(), std::move(next));
  int since = state.steps_since_reparam + 1;
  bool reparam = false;
  if (inextensibility_residual(curve) > 0.5 * options_.inextensibility_tol || since >= options_.reparam_every) {
    curve = reparameterize_arclength(curve);
    since = 0;
    reparam = true;
  }

  const TensionProblem problem(curve, mobility_);
  TensionField tension = problem.solve(options_.tension, &state.tension.tau);

  EvolutionState out{std::move(curve), std::move(tension), state.time + time_increment, state.step + 1,
                     state.initial_energy, since, {}};
  auto& d = out.diagnostics;
  d.step = out.step;
  d.time = out.time;
  d.energy = energy(out.curve);
  d.dissipation = dissipation(out.curve, out.tension.tau);
  d.dissipation_rate = dissipation_rate(out.curve, mobility_, out.tension.tau);
  d.inext_residual = inextensibility_residual(out.curve);
  d.tension_h12 = sobolev_norm(out.tension.tau, {0.5, false});
  d.cg_iterations = out.tension.solve.iterations;
  d.reparameterized = reparam;
  d.energy_flag = d.energy > state.diagnostics.energy + options_.energy_tol * state.initial_energy;
  return out;
}

EvolutionState step_leps(const EvolutionState& state, double dt, const MultiplierTable& table,
                         const StepperOptions& options) {
  return Integrator(Mobility::slender_body(table), options).step(state, dt);
}

EvolutionState step_rft(const EvolutionState& state, double dt, double epsilon, const StepperOptions& options) {
  return Integrator(Mobility::resistive(epsilon, state.curve.grid().nyquist()), options).step(state, dt);
}

const char* dt_policy_name(DtPolicy p) {
  switch (p) {
    case DtPolicy::fixed: return "fixed";
    case DtPolicy::ramp: return "ramp";
    default: return "adaptive";
  }
}

DtPolicy parse_dt_policy(const std::string& name) {
  if (name == "fixed") return DtPolicy::fixed;
  if (name == "ramp") return DtPolicy::ramp;
  if (name == "adaptive") return DtPolicy::adaptive;
  throw std::invalid_argument("unknown dt policy '" + name + "' (expected fixed, ramp or adaptive)");
}

DtSchedule::DtSchedule(TimeStepping ts, double horizon) : ts_(ts), horizon_(horizon) {
  if (!(ts.dt > 0.0)) throw std::invalid_argument("DtSchedule: dt must be positive");
  if (ts.policy != DtPolicy::fixed && !(ts.growth >= 1.0)) throw std::invalid_argument("DtSchedule: growth must be >= 1");
}

double DtSchedule::next(double time) {
  const double remaining = horizon_ - time;
  // Tolerate round-off in the accumulated clock.
  if (remaining <= 1e-12 * horizon_) return 0.0;
  double dt = ts_.dt;
  if (ts_.policy != DtPolicy::fixed)
    dt = std::min(ts_.dt_max, ts_.dt * std::pow(ts_.growth, static_cast<double>(count_)));
  dt *= scale_;
  ++count_;
  return std::min(dt, remaining);
}

double adaptive_initial_dt(const Integrator& integrator, const EvolutionState& state, bool rescaled_time) {
  const VectorField g = integrator.forcing(state);
  const double gx = sobolev_norm(g, {2.0, false});
  const double xx = sobolev_norm(state.curve.coeffs(), {2.0, false});
  double dt = gx > 0.0 ? 1e-2 * xx / gx : 1.0;
  if (rescaled_time) dt *= log_eps(integrator.mobility().epsilon());
  return dt;
}

constexpr int kMaxRetries = 30;

Trajectory run(const Mobility& mobility, const PeriodicCurve& initial, const RunOptions& options,
               const StepObserver& observer) {
  if (!(options.horizon >= 0.0)) throw std::invalid_argument("run: horizon must be nonnegative");
  const Integrator integrator(mobility, options.stepper);
  const double time_scale = options.rescaled_time ? log_eps(mobility.epsilon()) : 1.0;

  Trajectory traj;
  std::optional<EvolutionState> state;
  try {
    state = integrator.initialize(initial);
  } catch (const std::exception& e) {
    traj.error = e.what();
    return traj;
  }
  traj.snapshots.push_back(*state);
  traj.diagnostics.push_back(state->diagnostics);
  if (observer) observer(*state);

  TimeStepping ts = options.stepping;
  if (ts.policy == DtPolicy::adaptive) ts.dt = adaptive_initial_dt(integrator, *state, options.rescaled_time);
  DtSchedule schedule(ts, options.horizon);

  try {
    while (state->step < options.max_steps) {
      double dt = schedule.next(state->time);
      if (dt <= 0.0) break;
      EvolutionState next = integrator.step(*state, options.rescaled_time ? dt / time_scale : dt, dt);
      // adaptive: a flagged step is retried at half the size
      for (int retry = 0; next.diagnostics.energy_flag && ts.policy == DtPolicy::adaptive && retry < kMaxRetries;
           ++retry) {
        schedule.halve();
        dt = schedule.next(state->time);
        next = integrator.step(*state, options.rescaled_time ? dt / time_scale : dt, dt);
      }
      state = std::move(next);
      traj.diagnostics.push_back(state->diagnostics);
      if (observer) observer(*state);
      if (options.snapshot_every > 0 && state->step % options.snapshot_every == 0) traj.snapshots.push_back(*state);
    }
    traj.completed = true;
  } catch (const std::exception& e) {
    traj.error = e.what();
  }
  if (traj.snapshots.back().step != state->step) traj.snapshots.push_back(*state);
  return traj;
}

}  // namespace filament
