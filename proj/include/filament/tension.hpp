// Tension determination.
//
// With A tau = (tau X_s)_s and its L2 adjoint A^T v = -X_s . v_s, the weak
// problem  int L[(tau X_s)_s] . (phi X_s)_s = int L[X_ssss] . (phi X_s)_s
// for all phi reads  B tau = r  with  B = A^T L A  and  r = A^T L X_ssss.
// B is symmetric positive definite on band-limited scalars, so it is solved
// matrix-free by preconditioned CG.
#pragma once

#include <stdexcept>
#include <vector>

#include "filament/cg.hpp"
#include "filament/curves.hpp"
#include "filament/mobility.hpp"

namespace filament {

struct TensionOptions {
  double cg_tol = 1e-10;
  int max_iter = 0;  ///< 0 means 10 n
};

/// CG failed to converge; carries the residual history.
class SolverError : public std::runtime_error {
 public:
  SolverError(const std::string& what, std::vector<double> history)
      : std::runtime_error(what), history_(std::move(history)) {}
  const std::vector<double>& history() const { return history_; }

 private:
  std::vector<double> history_;
};

struct TensionField {
  ScalarField tau;
  double mean = 0.0;
  CgResult solve;

  std::vector<double> samples(const Grid& g) const { return filament::samples(g, tau); }
};

class TensionProblem {
 public:
  TensionProblem(const PeriodicCurve& curve, Mobility mobility);

  const PeriodicCurve& curve() const { return curve_; }
  const Mobility& mobility() const { return mobility_; }
  const TangentFrame& frame() const { return frame_; }

  /// (tau X_s)_s
  VectorField apply_A(const ScalarField& tau) const;
  /// -X_s . v_s
  ScalarField apply_At(const VectorField& v) const;
  /// Riesz representative of phi -> B(tau, phi).
  ScalarField apply_B(const ScalarField& tau) const;
  /// Riesz representative of phi -> int L[X_ssss] . (phi X_s)_s.
  ScalarField assemble_rhs() const;
  /// Diagonal spectral preconditioner 1 / (m_t(k)(2 pi k)^2 + m_n(k) int |X_ss|^2).
  ScalarField precondition(const ScalarField& r) const;

  /// Throws SolverError on nonconvergence.
  TensionField solve(const TensionOptions& options = {}, const ScalarField* initial = nullptr) const;

  /// -L[X_ssss - (tau X_s)_s]
  VectorField velocity(const ScalarField& tau) const;

 private:
  PeriodicCurve curve_;
  Mobility mobility_;
  TangentFrame frame_;
  VectorField x4_;
  std::vector<double> diag_;
};

TensionField solve_tension(const PeriodicCurve& curve, const MultiplierTable& table, const TensionOptions& options = {});
TensionField solve_tension_rft(const PeriodicCurve& curve, const TensionOptions& options = {});

}  // namespace filament
