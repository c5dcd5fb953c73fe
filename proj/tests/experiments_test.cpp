#include <doctest.h>

#include <cmath>

#include "filament/experiments.hpp"

using namespace filament;

TEST_SUITE("experiments") {

TEST_CASE("identical runs have zero discrepancy") {
  const auto grid = make_grid(64);
  RunOptions o;
  o.horizon = 0.005;
  o.rescaled_time = true;
  o.stepping = {DtPolicy::ramp, 1e-7, 1e-3, 1.01};
  o.snapshot_every = 50;
  const auto table = build_table(1e-2, 32);
  const auto tr = run(Mobility::slender_body(table), perturbed_circle(grid, 3, 0.05), o);
  REQUIRE(tr.snapshots.size() > 2);
  const DiscrepancyRecord r = discrepancy_energy_trace(tr.snapshots, tr.snapshots, table);
  CHECK(r.sup_h2 == 0.0);
  CHECK(r.max_EW == 0.0);
  CHECK(r.int_DW == 0.0);
  for (double v : r.DW) CHECK(v == 0.0);
  CHECK(r.EW.size() == tr.snapshots.size());
}

TEST_CASE("mismatched snapshot times are rejected") {
  const auto grid = make_grid(64);
  const auto table = build_table(1e-2, 32);
  const Integrator integ(Mobility::slender_body(table));
  const auto s0 = integ.initialize(circle_curve(grid));
  const auto s1 = integ.step(s0, 1e-4);
  CHECK_THROWS_AS(discrepancy_energy_trace({s0, s1}, {s0, s0}, table), std::invalid_argument);
}

TEST_CASE("resistive-constant multipliers make the two models coincide") {
  const auto grid = make_grid(64);
  const double eps = 1e-3;
  const auto flat = MultiplierTable::rft_constant(eps, 32);
  const ComparisonResult cr =
      compare_models(perturbed_circle(grid, 3, 0.05), flat, 0.01, {DtPolicy::ramp, 1e-7, 1e-3, 1.01}, {});
  CHECK(cr.discrepancy.ok);
  CHECK(cr.discrepancy.EW.front() == 0.0);
  CHECK(cr.discrepancy.sup_h2 < 1e-8);
  CHECK(cr.diag_x.size() == cr.diag_y.size());
}

TEST_CASE("the discrepancy of the true models is nonzero and starts at zero") {
  const auto grid = make_grid(64);
  const auto table = build_table(1e-2, 32);
  const ComparisonResult cr =
      compare_models(perturbed_circle(grid, 3, 0.05), table, 0.01, {DtPolicy::ramp, 1e-7, 1e-3, 1.01}, {});
  const auto& d = cr.discrepancy;
  CHECK(d.EW.front() == 0.0);
  CHECK(d.sup_h2 > 0.0);
  CHECK(d.compensated == doctest::Approx(std::sqrt(d.log_eps) * d.sup_h2));
  for (double v : d.DW) CHECK(v >= 0.0);
}

TEST_CASE("coercivity fails once a multiplier sign is flipped") {
  LemmaSuiteOptions opt;
  opt.kmax = 256;
  opt.coercivity_n = 64;
  opt.coercivity_trials = 10;
  const LemmaReport good = lemma_suite({1e-2, 1e-3}, opt);
  REQUIRE(good.find("coercivity"));
  CHECK(good.find("coercivity")->passed);
  opt.mutate = [](const MultiplierTable& t) {
    std::vector<double> mt(t.tangential().begin(), t.tangential().end());
    std::vector<double> mn(t.normal().begin(), t.normal().end());
    mn[2] = -mn[2];
    return MultiplierTable::from_values(t.epsilon(), mt, mn);
  };
  const LemmaReport bad = lemma_suite({1e-2, 1e-3}, opt);
  CHECK_FALSE(bad.find("coercivity")->passed);
}

TEST_CASE("lemma suite is deterministic") {
  LemmaSuiteOptions opt;
  opt.kmax = 256;
  opt.coercivity_n = 64;
  opt.coercivity_trials = 5;
  const LemmaReport a = lemma_suite({1e-2, 1e-3, 1e-4}, opt), b = lemma_suite({1e-2, 1e-3, 1e-4}, opt);
  REQUIRE(a.checks.size() == b.checks.size());
  for (std::size_t i = 0; i < a.checks.size(); ++i) {
    CHECK(a.checks[i].name == b.checks[i].name);
    CHECK(a.checks[i].fitted == b.checks[i].fitted);
    CHECK(a.checks[i].worst == b.checks[i].worst);
  }
  CHECK(a.find("no_such_check") == nullptr);
}

TEST_CASE("coercivity ratio is positive on the true multipliers") {
  CHECK(coercivity_ratio(build_table(1e-3, 64), 64, 10, 1) > 0.0);
}

TEST_CASE("small sweep: band bookkeeping") {
  SweepConfig cfg;
  cfg.epsilons = {1e-2, 1e-3, 1e-4};
  cfg.n = 32;
  cfg.horizon = 1e-3;
  cfg.confirmation_n = 0;
  cfg.jobs = 2;
  const StudyResult res = convergence_study(cfg);
  REQUIRE(res.rows.size() == 3);
  for (const auto& r : res.rows) CHECK(r.ok);
  CHECK(res.band_center == doctest::Approx(std::sqrt(res.rows[0].compensated * res.rows[1].compensated)));
  CHECK(res.band_worst >= 1.0);
  CHECK(res.band_worst <= res.band_ratio + 1e-12);
  CHECK(res.band_ok == (res.band_worst <= 2.0));
  CHECK_FALSE(res.confirmation.has_value());
}

}
