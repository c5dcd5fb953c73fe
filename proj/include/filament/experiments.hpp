// Studies built on the simulator: the multiplier and coercivity suite, and
// the epsilon sweep comparing the slender-body dynamics X with the resistive
// dynamics Y in rescaled time.
#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "filament/config.hpp"
#include "filament/evolution.hpp"
#include "filament/multipliers.hpp"

namespace filament {

// ---------------------------------------------------------------------------
// discrepancy W = X - Y

struct DiscrepancyRecord {
  double epsilon = 0.0;
  double log_eps = 0.0;
  int n = 0;
  double sup_h2 = 0.0;           ///< sup_t ||W||_{H^2}
  double compensated = 0.0;      ///< |log eps|^{1/2} sup_h2
  double l2t_h72 = 0.0;          ///< (int ||W||^2_{dot H^{7/2}} dt)^{1/2}
  double max_EW = 0.0;           ///< max_t ||W_ss||^2
  double int_DW = 0.0;           ///< int D_W dt
  double max_mean_sq = 0.0;      ///< max_t |W_0|^2
  std::vector<double> time, EW, DW, mean_sq;
  bool ok = true;
  std::string error;
};

/// Accumulates the discrepancy statistics one shared time level at a time.
/// D_W = ||T_{m_t}^{1/2} P W_ssss||^2 + ||T_{m_n}^{1/2} P^perp W_ssss||^2
/// with the projections taken along X.
class DiscrepancyAccumulator {
 public:
  DiscrepancyAccumulator(const MultiplierTable& table, double epsilon);
  /// dt is the run-time increment since the previous call (0 for the first).
  void add(const PeriodicCurve& x, const PeriodicCurve& y, double time, double dt);
  const DiscrepancyRecord& record() const { return rec_; }

 private:
  const MultiplierTable* table_;
  DiscrepancyRecord rec_;
  double last_h72_sq_ = 0.0;
  double last_dw_ = 0.0;
  bool first_ = true;
};

/// Discrepancy of two runs sampled on identical snapshot times. Throws
/// std::invalid_argument if the times differ.
DiscrepancyRecord discrepancy_energy_trace(const std::vector<EvolutionState>& run_x,
                                           const std::vector<EvolutionState>& run_y, const MultiplierTable& table);

struct ComparisonResult {
  DiscrepancyRecord discrepancy;
  std::vector<DiagnosticsRecord> diag_x, diag_y;
};

/// Runs X (slender body with the given table) and Y (resistive) in lockstep
/// in rescaled time on a shared dt schedule.
ComparisonResult compare_models(const PeriodicCurve& initial, const MultiplierTable& table, double horizon,
                                const TimeStepping& stepping, const StepperOptions& stepper);

struct StudyResult {
  std::vector<DiscrepancyRecord> rows;
  std::vector<ComparisonResult> runs;  ///< parallel to rows (diagnostics only)
  std::optional<DiscrepancyRecord> confirmation;
  bool monotone = false;       ///< sup_h2 strictly decreasing along the sweep
  double band_ratio = 0.0;     ///< max/min of the compensated error
  double band_center = 0.0;    ///< geometric mean of the two coarsest compensated errors
  double band_worst = 0.0;     ///< largest factor between a compensated error and band_center
  bool band_ok = false;        ///< band_worst <= 2
  double fitted_EW = 0.0;      ///< max_EW |log eps| at the coarsest eps
  double fitted_DW = 0.0;      ///< int_DW |log eps| at the coarsest eps
  bool EW_bounded = false;     ///< finer rows within 1.1 fitted_EW
  bool DW_bounded = false;
  double wall_seconds = 0.0;
};

StudyResult convergence_study(const SweepConfig& config);

// ---------------------------------------------------------------------------
// multiplier and coercivity suite

struct SuiteCheck {
  std::string name;
  bool passed = false;
  double fitted = 0.0;  ///< the constant fitted on the coarsest epsilon
  double worst = 0.0;   ///< the most demanding value over the finer epsilons
  std::string detail;
};

struct LemmaReport {
  std::vector<SuiteCheck> checks;
  bool all_passed() const;
  const SuiteCheck* find(const std::string& name) const;
};

/// Hook applied to every table before the coercivity trials (mutation tests).
using TableMutation = std::function<MultiplierTable(const MultiplierTable&)>;

struct LemmaSuiteOptions {
  int kmax = 4096;
  int coercivity_n = 128;
  int coercivity_trials = 50;
  double slack = 1.1;
  TableMutation mutate;
};

/// Fitted-constant protocol: each constant is fitted on the first (coarsest)
/// epsilon and must hold for every other epsilon within the slack factor.
LemmaReport lemma_suite(const std::vector<double>& epsilons, const LemmaSuiteOptions& options = {});

/// Smallest <f, L f> / (|log eps| ||f||^2_{H^{-1/2}}) along a perturbed
/// circle, over `trials` random H^{-1/2}-normalized fields plus one
/// out-of-plane single-mode probe per resolved wavenumber.
double coercivity_ratio(const MultiplierTable& table, int n, int trials, std::uint64_t seed);

}  // namespace filament
