#include "filament/tension.hpp"

#include <cmath>
#include <numbers>
#include <string>

namespace filament {
namespace {
constexpr double two_pi = 2.0 * std::numbers::pi;
}

TensionProblem::TensionProblem(const PeriodicCurve& curve, Mobility mobility)
    : curve_(curve), mobility_(std::move(mobility)), frame_(curve.frame()), x4_(curve.derivative(4)) {
  const Grid& g = curve.grid();
  if (mobility_.table().kmax() < g.nyquist())
    throw std::invalid_argument("TensionProblem: multiplier table must cover k <= n/2");
  const VectorField xss = curve.derivative(2);
  const double curvature_sq = inner(xss, xss);
  diag_.resize(static_cast<std::size_t>(g.modes()));
  for (int k = 0; k < g.modes(); ++k) {
    const double w = two_pi * k;
    diag_[static_cast<std::size_t>(k)] = mobility_.mt(k) * w * w + mobility_.mn(k) * curvature_sq;
  }
}

VectorField TensionProblem::apply_A(const ScalarField& tau) const { return derivative(frame_.scale(tau), 1); }

ScalarField TensionProblem::apply_At(const VectorField& v) const {
  ScalarField out = frame_.dot(derivative(v, 1));
  out *= -1.0;
  return out;
}

ScalarField TensionProblem::apply_B(const ScalarField& tau) const {
  return apply_At(mobility_.apply(frame_, apply_A(tau)));
}

ScalarField TensionProblem::assemble_rhs() const { return apply_At(mobility_.apply(frame_, x4_)); }

ScalarField TensionProblem::precondition(const ScalarField& r) const {
  ScalarField z = r;
  for (std::size_t k = 0; k < z.hat.size(); ++k) z.hat[k] /= diag_[k];
  return z;
}

TensionField TensionProblem::solve(const TensionOptions& options, const ScalarField* initial) const {
  const Grid& g = curve_.grid();
  CgOptions opt;
  opt.tol = options.cg_tol;
  opt.max_iter = options.max_iter > 0 ? options.max_iter : 10 * g.n();
  const ScalarField b = assemble_rhs();
  ScalarField x = initial ? band_limit(*initial, g.bandlimit()) : ScalarField::zero(g);
  const CgResult res = conjugate_gradient(
      [this](const ScalarField& t) { return apply_B(t); }, [this](const ScalarField& r) { return precondition(r); },
      [](const ScalarField& a, const ScalarField& c) { return inner(a, c); }, b, x, opt);
  if (!res.converged)
    throw SolverError("tension CG did not converge in " + std::to_string(res.iterations) +
                          " iterations (relative residual " + std::to_string(res.relative_residual) + ")",
                      res.history);
  TensionField out;
  out.mean = x.mean();
  out.tau = std::move(x);
  out.solve = res;
  return out;
}

VectorField TensionProblem::velocity(const ScalarField& tau) const {
  VectorField v = mobility_.apply(frame_, x4_ - apply_A(tau));
  v *= -1.0;
  return v;
}

TensionField solve_tension(const PeriodicCurve& curve, const MultiplierTable& table, const TensionOptions& options) {
  return TensionProblem(curve, Mobility::slender_body(table)).solve(options);
}

// The resistive map is |log eps|/4pi times (I + X_s (x) X_s) and the factor
// cancels from both sides, so tau_Y does not depend on eps. eps = exp(-4 pi)
// makes the prefactor exactly one.
TensionField solve_tension_rft(const PeriodicCurve& curve, const TensionOptions& options) {
  const double eps = std::exp(-4.0 * std::numbers::pi);
  return TensionProblem(curve, Mobility::resistive(eps, curve.grid().nyquist())).solve(options);
}

}  // namespace filament
