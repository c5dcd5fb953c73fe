#include "filament/experiments.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <iomanip>
#include <limits>
#include <numbers>
#include <random>
#include <sstream>
#include <thread>

#include <spdlog/spdlog.h>

#include "filament/io.hpp"

namespace filament {
namespace {

double log_eps(double e) { return std::abs(std::log(e)); }

// Runs task(i) for i in [0, count) on up to jobs threads.
template <class F>
void parallel_for(int count, int jobs, F&& task) {
  std::atomic<int> next{0};
  auto worker = [&] {
    for (int i = next++; i < count; i = next++) task(i);
  };
  const int nthreads = std::max(1, std::min(jobs, count));
  std::vector<std::thread> pool;
  for (int t = 1; t < nthreads; ++t) pool.emplace_back(worker);
  worker();
  for (auto& th : pool) th.join();
}

}  // namespace

DiscrepancyAccumulator::DiscrepancyAccumulator(const MultiplierTable& table, double epsilon) : table_(&table) {
  rec_.epsilon = epsilon;
  rec_.log_eps = log_eps(epsilon);
}

void DiscrepancyAccumulator::add(const PeriodicCurve& x, const PeriodicCurve& y, double time, double dt) {
  const VectorField w = x.coeffs() - y.coeffs();
  rec_.n = x.n();
  const double h2 = sobolev_norm(w, {2.0, false});
  const double h72 = sobolev_norm(w, {3.5, true});
  const VectorField wss = derivative(w, 2);
  const double ew = inner(wss, wss);

  const TangentFrame frame = x.frame();
  const VectorField w4 = derivative(w, 4);
  const VectorField g = frame.project_tangent(w4);
  const VectorField h = band_limit(w4, x.grid().bandlimit()) - g;
  const VectorField gt = apply_multiplier(g, table_->tangential(), 0.5);
  const VectorField hn = apply_multiplier(h, table_->normal(), 0.5);
  const double dw = inner(gt, gt) + inner(hn, hn);

  const Vec3 m = w.mean();
  const double mean_sq = m[0] * m[0] + m[1] * m[1] + m[2] * m[2];

  if (!first_) {
    rec_.int_DW += 0.5 * dt * (last_dw_ + dw);
    rec_.l2t_h72 = std::sqrt(rec_.l2t_h72 * rec_.l2t_h72 + 0.5 * dt * (last_h72_sq_ + h72 * h72));
  }
  first_ = false;
  last_dw_ = dw;
  last_h72_sq_ = h72 * h72;
  rec_.sup_h2 = std::max(rec_.sup_h2, h2);
  rec_.compensated = std::sqrt(rec_.log_eps) * rec_.sup_h2;
  rec_.max_EW = std::max(rec_.max_EW, ew);
  rec_.max_mean_sq = std::max(rec_.max_mean_sq, mean_sq);
  rec_.time.push_back(time);
  rec_.EW.push_back(ew);
  rec_.DW.push_back(dw);
  rec_.mean_sq.push_back(mean_sq);
}

DiscrepancyRecord discrepancy_energy_trace(const std::vector<EvolutionState>& run_x,
                                           const std::vector<EvolutionState>& run_y, const MultiplierTable& table) {
  if (run_x.size() != run_y.size()) throw std::invalid_argument("discrepancy_energy_trace: snapshot counts differ");
  DiscrepancyAccumulator acc(table, table.epsilon());
  for (std::size_t i = 0; i < run_x.size(); ++i) {
    if (run_x[i].time != run_y[i].time)
      throw std::invalid_argument("discrepancy_energy_trace: snapshot times differ at index " + std::to_string(i));
    acc.add(run_x[i].curve, run_y[i].curve, run_x[i].time, i == 0 ? 0.0 : run_x[i].time - run_x[i - 1].time);
  }
  return acc.record();
}

ComparisonResult compare_models(const PeriodicCurve& initial, const MultiplierTable& table, double horizon,
                                const TimeStepping& stepping, const StepperOptions& stepper) {
  const double eps = table.epsilon();
  const double le = log_eps(eps);
  const Integrator ix(Mobility::slender_body(table), stepper);
  const Integrator iy(Mobility::resistive(eps, initial.grid().nyquist()), stepper);

  ComparisonResult out;
  DiscrepancyAccumulator acc(ix.mobility().table(), eps);
  EvolutionState x = ix.initialize(initial);
  EvolutionState y = iy.initialize(initial);
  out.diag_x.push_back(x.diagnostics);
  out.diag_y.push_back(y.diagnostics);
  acc.add(x.curve, y.curve, 0.0, 0.0);

  DtSchedule schedule(stepping, horizon);
  for (;;) {
    const double dt = schedule.next(x.time);
    if (dt <= 0.0) break;
    x = ix.step(x, dt / le, dt);
    y = iy.step(y, dt / le, dt);
    out.diag_x.push_back(x.diagnostics);
    out.diag_y.push_back(y.diagnostics);
    acc.add(x.curve, y.curve, x.time, dt);
  }
  out.discrepancy = acc.record();
  return out;
}

StudyResult convergence_study(const SweepConfig& config) {
  validate(config);
  const auto t0 = std::chrono::steady_clock::now();
  StudyResult res;
  const int rows = static_cast<int>(config.epsilons.size());
  const int tasks = rows + (config.confirmation_n > 0 ? 1 : 0);
  res.rows.resize(static_cast<std::size_t>(rows));
  res.runs.resize(static_cast<std::size_t>(rows));
  DiscrepancyRecord confirmation;

  parallel_for(tasks, config.jobs, [&](int i) {
    const bool confirm = i == rows;
    const double eps = confirm ? config.confirmation_epsilon : config.epsilons[static_cast<std::size_t>(i)];
    const int n = confirm ? config.confirmation_n : config.n;
    DiscrepancyRecord rec;
    rec.epsilon = eps;
    rec.log_eps = log_eps(eps);
    rec.n = n;
    ComparisonResult cmp;
    try {
      spdlog::info("sweep: eps = {:g}, n = {} started", eps, n);
      const PeriodicCurve initial = make_initial_curve(config.initial, n);
      const MultiplierTable table = build_table(eps, n / 2);
      cmp = compare_models(initial, table, config.horizon, config.stepping, config.stepper);
      rec = cmp.discrepancy;
      spdlog::info("sweep: eps = {:g}, n = {} done, sup H2 = {:.6e}", eps, n, rec.sup_h2);
    } catch (const std::exception& e) {
      rec.ok = false;
      rec.error = e.what();
      spdlog::error("sweep: eps = {:g} failed: {}", eps, e.what());
    }
    if (confirm) {
      confirmation = std::move(rec);
    } else {
      res.rows[static_cast<std::size_t>(i)] = std::move(rec);
      res.runs[static_cast<std::size_t>(i)] = std::move(cmp);
    }
  });
  if (config.confirmation_n > 0) res.confirmation = std::move(confirmation);

  const bool all_ok = std::all_of(res.rows.begin(), res.rows.end(), [](const auto& r) { return r.ok; });
  res.monotone = all_ok;
  for (std::size_t i = 1; i < res.rows.size(); ++i)
    if (!(res.rows[i].sup_h2 < res.rows[i - 1].sup_h2)) res.monotone = false;

  if (all_ok && !res.rows.empty()) {
    double lo = std::numeric_limits<double>::infinity(), hi = 0.0;
    for (const auto& r : res.rows) {
      lo = std::min(lo, r.compensated);
      hi = std::max(hi, r.compensated);
    }
    res.band_ratio = hi / lo;
    const auto& rows = res.rows;
    res.band_center = rows.size() > 1 ? std::sqrt(rows[0].compensated * rows[1].compensated) : rows[0].compensated;
    for (const auto& r : rows)
      res.band_worst = std::max({res.band_worst, r.compensated / res.band_center, res.band_center / r.compensated});
    res.band_ok = res.band_worst <= 2.0;
    res.fitted_EW = res.rows[0].max_EW * res.rows[0].log_eps;
    res.fitted_DW = res.rows[0].int_DW * res.rows[0].log_eps;
    res.EW_bounded = res.DW_bounded = true;
    for (const auto& r : res.rows) {
      if (r.max_EW * r.log_eps > 1.1 * res.fitted_EW) res.EW_bounded = false;
      if (r.int_DW * r.log_eps > 1.1 * res.fitted_DW) res.DW_bounded = false;
    }
  }
  res.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return res;
}

// ---------------------------------------------------------------------------

bool LemmaReport::all_passed() const {
  return std::all_of(checks.begin(), checks.end(), [](const SuiteCheck& c) { return c.passed; });
}

const SuiteCheck* LemmaReport::find(const std::string& name) const {
  for (const auto& c : checks)
    if (c.name == name) return &c;
  return nullptr;
}

double coercivity_ratio(const MultiplierTable& table, int n, int trials, std::uint64_t seed) {
  const auto grid = make_grid(n);
  const PeriodicCurve curve = perturbed_circle(grid, 3, 0.05);
  const TangentFrame frame = curve.frame();
  const int K = grid->bandlimit();
  const double le = log_eps(table.epsilon());
  const SobolevIndex hm12{-0.5, false};

  auto ratio = [&](VectorField f) {
    const double norm = sobolev_norm(f, hm12);
    f *= 1.0 / norm;
    return slender_body_form(frame, table, f) / le;
  };

  double worst = std::numeric_limits<double>::infinity();
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss;
  for (int t = 0; t < trials; ++t) {
    VectorField f = VectorField::zero(*grid);
    for (int c = 0; c < 3; ++c) {
      f.hat[c][0] = gauss(rng);
      for (int k = 1; k <= K; ++k) f.hat[c][k] = std::pow(1.0 + double(k) * k, 0.25) * cplx(gauss(rng), gauss(rng));
    }
    worst = std::min(worst, ratio(std::move(f)));
  }
  // Single-mode probes out of the plane of the (planar) curve, where the
  // tangential projection vanishes and the form isolates m_n(k).
  for (int k = 0; k <= K; ++k) {
    VectorField f = VectorField::zero(*grid);
    f.hat[2][k] = 1.0;
    worst = std::min(worst, ratio(std::move(f)));
  }
  return worst;
}

namespace {

struct EpsData {
  double eps;
  double le;
  MultiplierTable table;
  long low;  // largest low wavenumber covered by the table
};

// Fit on the first entry (max-type constant), then require the others to stay
// below slack * fitted.
SuiteCheck fit_upper(const std::string& name, const std::vector<double>& values, double slack, std::string detail = {}) {
  SuiteCheck c;
  c.name = name;
  c.fitted = values.front();
  c.worst = *std::max_element(values.begin(), values.end());
  c.passed = std::isfinite(c.worst) && c.worst <= slack * c.fitted;
  c.detail = std::move(detail);
  return c;
}

// Same for min-type constants.
SuiteCheck fit_lower(const std::string& name, const std::vector<double>& values, double slack, std::string detail = {}) {
  SuiteCheck c;
  c.name = name;
  c.fitted = values.front();
  c.worst = *std::min_element(values.begin(), values.end());
  c.passed = c.worst > 0.0 && c.worst >= c.fitted / slack;
  c.detail = std::move(detail);
  return c;
}

std::string per_eps(const std::vector<EpsData>& data, const std::vector<double>& v) {
  std::ostringstream s;
  s << std::setprecision(6);
  for (std::size_t i = 0; i < data.size(); ++i) s << (i ? ", " : "") << data[i].eps << ": " << v[i];
  return s.str();
}

}  // namespace

LemmaReport lemma_suite(const std::vector<double>& epsilons, const LemmaSuiteOptions& opt) {
  if (epsilons.empty()) throw std::invalid_argument("lemma_suite: no epsilons");
  std::vector<EpsData> data;
  for (double e : epsilons) {
    EpsData d{e, log_eps(e), build_table(e, opt.kmax), std::min<long>(low_wavenumber_limit(e), opt.kmax)};
    data.push_back(std::move(d));
  }
  const double slack = opt.slack;
  LemmaReport rep;
  const std::size_t ne = data.size();

  {
    SuiteCheck c{"positivity", true, 0.0, 0.0, ""};
    double minval = std::numeric_limits<double>::infinity();
    for (const auto& d : data)
      for (int k = 0; k <= opt.kmax; ++k) minval = std::min({minval, d.table.mt(k), d.table.mn(k)});
    c.passed = minval > 0.0;
    c.worst = minval;
    c.detail = "smallest multiplier value over all eps and k <= " + std::to_string(opt.kmax);
    rep.checks.push_back(c);
  }

  // Low wavenumbers |k| < 1/(2 pi eps): m <= c |log eps| and 1/m <= c / |log eps|.
  std::vector<double> low_up(ne), low_inv(ne);
  for (std::size_t i = 0; i < ne; ++i) {
    const auto& d = data[i];
    double up = 0.0, inv = 0.0;
    for (long k = 0; k <= d.low; ++k)
      for (double m : {d.table.mt(k), d.table.mn(k)}) {
        up = std::max(up, m / d.le);
        inv = std::max(inv, d.le / m);
      }
    low_up[i] = up;
    low_inv[i] = inv;
  }
  rep.checks.push_back(fit_upper("lowk_upper", low_up, slack, "max m/|log eps| per eps: " + per_eps(data, low_up)));
  rep.checks.push_back(fit_upper("lowk_inverse", low_inv, slack, "max |log eps|/m per eps: " + per_eps(data, low_inv)));

  // High wavenumbers: m <= c/(eps|k|) and 1/m <= c eps|k|. Only epsilons whose
  // high range intersects k <= kmax take part.
  std::vector<double> hi_up, hi_inv;
  std::vector<EpsData> hi_data;
  for (const auto& d : data) {
    if (d.low >= opt.kmax) continue;
    double up = 0.0, inv = 0.0;
    for (long k = d.low + 1; k <= opt.kmax; ++k) {
      const double ek = d.eps * static_cast<double>(k);
      for (double m : {d.table.mt(k), d.table.mn(k)}) {
        up = std::max(up, m * ek);
        inv = std::max(inv, 1.0 / (m * ek));
      }
    }
    hi_up.push_back(up);
    hi_inv.push_back(inv);
    hi_data.push_back(d);
  }
  if (!hi_up.empty()) {
    rep.checks.push_back(fit_upper("highk_upper", hi_up, slack, "max m eps|k| per eps: " + per_eps(hi_data, hi_up)));
    rep.checks.push_back(
        fit_upper("highk_inverse", hi_inv, slack, "max 1/(m eps|k|) per eps: " + per_eps(hi_data, hi_inv)));
  }

  // Linear growth sandwich c eps|k| <= 1/m <= c (eps|k| + 1) for all k > 0.
  for (Direction dir : {Direction::tangential, Direction::normal}) {
    const std::string name = dir == Direction::tangential ? "sandwich_t" : "sandwich_n";
    // Largest admissible lower constant on the coarsest eps.
    double c = std::numeric_limits<double>::infinity();
    const auto& d0 = data.front();
    for (int k = 1; k <= opt.kmax; ++k) c = std::min(c, 1.0 / (d0.table(dir, k) * d0.eps * k));
    double worst_low = std::numeric_limits<double>::infinity(), worst_up = 0.0;
    for (const auto& d : data)
      for (int k = 1; k <= opt.kmax; ++k) {
        const double inv = 1.0 / d.table(dir, k);
        const double ek = d.eps * k;
        worst_low = std::min(worst_low, inv / (c * ek));
        worst_up = std::max(worst_up, inv / (c * (ek + 1.0)));
      }
    SuiteCheck chk;
    chk.name = name;
    chk.fitted = c;
    chk.worst = std::max(worst_up, 1.0 / worst_low);
    chk.passed = worst_low >= 1.0 / slack && worst_up <= slack;
    chk.detail = "min (1/m)/(c eps k) = " + format_double(worst_low) + ", max (1/m)/(c (eps k + 1)) = " +
                 format_double(worst_up);
    rep.checks.push_back(chk);
  }

  // Refined low-wavenumber difference |m - m_rft| <= c (1 + |log k|).
  std::vector<double> diff(ne);
  for (std::size_t i = 0; i < ne; ++i) {
    const auto& d = data[i];
    double worst = 0.0;
    for (long k = 1; k <= d.low; ++k)
      for (Direction dir : {Direction::tangential, Direction::normal})
        worst = std::max(worst, std::abs(lowk_rft_difference(d.eps, k, dir)) / (1.0 + std::log(double(k))));
    diff[i] = worst;
  }
  rep.checks.push_back(
      fit_upper("lowk_difference", diff, slack, "max |m - m_rft|/(1 + log k) per eps: " + per_eps(data, diff)));

  // Comparability m_t / m_n within a fitted two-sided band.
  std::vector<double> ratio_hi(ne), ratio_lo_inv(ne);
  for (std::size_t i = 0; i < ne; ++i) {
    double hi = 0.0, lo = std::numeric_limits<double>::infinity();
    for (int k = 0; k <= opt.kmax; ++k) {
      const double r = data[i].table.mt(k) / data[i].table.mn(k);
      hi = std::max(hi, r);
      lo = std::min(lo, r);
    }
    ratio_hi[i] = hi;
    ratio_lo_inv[i] = 1.0 / lo;
  }
  rep.checks.push_back(fit_upper("comparability_upper", ratio_hi, slack, "max mt/mn per eps: " + per_eps(data, ratio_hi)));
  rep.checks.push_back(
      fit_upper("comparability_lower", ratio_lo_inv, slack, "max mn/mt per eps: " + per_eps(data, ratio_lo_inv)));

  // Coercivity of the quadratic form in H^{-1/2}.
  std::vector<double> coer(ne);
  const int kc = opt.coercivity_n / 2;
  for (std::size_t i = 0; i < ne; ++i) {
    MultiplierTable t = build_table(data[i].eps, kc);
    if (opt.mutate) t = opt.mutate(t);
    coer[i] = coercivity_ratio(t, opt.coercivity_n, opt.coercivity_trials, 1000 + i);
  }
  rep.checks.push_back(fit_lower("coercivity", coer, slack,
                                 "min <f,Lf>/(|log eps| |f|^2_{H^-1/2}) per eps: " + per_eps(data, coer)));
  return rep;
}

}  // namespace filament
