#include <doctest.h>

#include <cmath>
#include <numbers>

#include "filament/tension.hpp"
#include "oracles.hpp"

using namespace filament;

namespace {

constexpr double kFourPi2 = 4.0 * std::numbers::pi * std::numbers::pi;

double relative_h12(const ScalarField& a, const ScalarField& b) {
  return sobolev_norm(a - b, {0.5, false}) / sobolev_norm(b, {0.5, false});
}

}  // namespace

TEST_SUITE("tension") {

TEST_CASE("matches the dense Galerkin solve for both models") {
  const auto grid = make_grid(32);
  for (std::uint64_t seed : {1u, 2u, 3u}) {
    const PeriodicCurve curve = random_curve(grid, seed, 0.1, 4);
    const double eps = 1e-3;
    const auto table = build_table(eps, 16);
    const oracle::TrigBasis basis(grid->bandlimit(), 8);

    const auto dense_l = oracle::dense_tension(curve, &table, 0.0);
    const TensionField tl = solve_tension(curve, table);
    const ScalarField ref_l{basis.to_spectrum(dense_l.tau, grid->modes())};
    CHECK(relative_h12(tl.tau, ref_l) < 1e-8);

    const double cn = RftConstants::from_epsilon(eps).normal;
    const auto dense_r = oracle::dense_tension(curve, nullptr, cn);
    const TensionProblem pr(curve, Mobility::resistive(eps, 16));
    const ScalarField ref_r{basis.to_spectrum(dense_r.tau, grid->modes())};
    CHECK(relative_h12(pr.solve().tau, ref_r) < 1e-8);
  }
}

TEST_CASE("matrix-free operator equals the dense matrix") {
  const auto grid = make_grid(32);
  const PeriodicCurve curve = random_curve(grid, 7, 0.1, 4);
  const auto table = build_table(1e-2, 16);
  const oracle::TrigBasis basis(grid->bandlimit(), 8);
  const auto dense = oracle::dense_tension(curve, &table, 0.0);
  const TensionProblem p(curve, Mobility::slender_body(table));
  for (int j = 0; j < basis.size(); j += 3) {
    Eigen::VectorXd e = Eigen::VectorXd::Zero(basis.size());
    e(j) = 1.0;
    const ScalarField phi{basis.to_spectrum(e, grid->modes())};
    const Eigen::VectorXd col = basis.from_spectrum(p.apply_B(phi).hat);
    CHECK((col - dense.B.col(j)).norm() < 1e-9 * dense.B.col(j).norm());
  }
  CHECK((basis.from_spectrum(p.assemble_rhs().hat) - dense.rhs).norm() < 1e-9 * dense.rhs.norm());
}

TEST_CASE("circle tension is -4 pi^2 for both models") {
  for (int n : {32, 128}) {
    const PeriodicCurve c = circle_curve(make_grid(n));
    for (double eps : {1e-2, 1e-4}) {
      const auto tl = solve_tension(c, build_table(eps, n / 2));
      for (double v : tl.samples(c.grid())) CHECK(v == doctest::Approx(-kFourPi2).epsilon(1e-10));
    }
    const auto tr = solve_tension_rft(c);
    CHECK(tr.mean == doctest::Approx(-kFourPi2).epsilon(1e-10));
  }
}

TEST_CASE("B is symmetric positive definite") {
  const auto grid = make_grid(64);
  const PeriodicCurve curve = perturbed_circle(grid, 3, 0.1);
  const TensionProblem p(curve, Mobility::slender_body(build_table(1e-3, 32)));
  ScalarField a = ScalarField::zero(*grid), b = ScalarField::zero(*grid);
  for (int k = 0; k <= grid->bandlimit(); ++k) {
    a.hat[static_cast<std::size_t>(k)] = cplx(std::cos(k), k ? std::sin(2.0 * k) : 0.0) / (1.0 + k);
    b.hat[static_cast<std::size_t>(k)] = cplx(1.0 / (1.0 + k * k), k ? 0.3 : 0.0);
  }
  CHECK(inner(p.apply_B(a), b) == doctest::Approx(inner(a, p.apply_B(b))).epsilon(1e-12));
  CHECK(inner(p.apply_B(a), a) > 0.0);
  CHECK(inner(p.apply_B(b), b) > 0.0);
}

TEST_CASE("velocity satisfies the discrete constraint") {
  const auto grid = make_grid(128);
  const PeriodicCurve curve = perturbed_circle(grid, 3, 0.05);
  for (const auto& mob : {Mobility::slender_body(build_table(1e-3, 64)), Mobility::resistive(1e-3, 64)}) {
    const TensionProblem p(curve, mob);
    const TensionField tau = p.solve();
    const VectorField V = p.velocity(tau.tau);
    const ScalarField c = p.apply_At(V);
    CHECK(sobolev_norm(c, {0.0, false}) < 1e-8 * sobolev_norm(V, {1.0, false}));
    CHECK(tau.solve.converged);
    CHECK(tau.solve.iterations < 50);
  }
}

TEST_CASE("solution is unique: warm starts converge to the same tension") {
  const auto grid = make_grid(64);
  const PeriodicCurve curve = random_curve(grid, 21, 0.05);
  const TensionProblem p(curve, Mobility::slender_body(build_table(1e-2, 32)));
  const TensionField cold = p.solve();
  ScalarField guess = cold.tau;
  guess *= 3.0;
  guess.hat[2] += cplx(5.0, -1.0);
  const TensionField warm = p.solve({}, &guess);
  CHECK(relative_h12(warm.tau, cold.tau) < 1e-8);
}

TEST_CASE("resistive tension does not depend on epsilon") {
  const auto grid = make_grid(64);
  const PeriodicCurve curve = random_curve(grid, 4, 0.05);
  const auto a = TensionProblem(curve, Mobility::resistive(1e-2, 32)).solve();
  const auto b = TensionProblem(curve, Mobility::resistive(1e-6, 32)).solve();
  CHECK(relative_h12(a.tau, b.tau) < 1e-9);
}

TEST_CASE("nonconvergence raises SolverError with the history") {
  const auto grid = make_grid(64);
  const PeriodicCurve curve = random_curve(grid, 8, 0.05);
  TensionOptions opt;
  opt.max_iter = 1;
  opt.cg_tol = 1e-14;
  try {
    solve_tension(curve, build_table(1e-3, 32), opt);
    FAIL("expected SolverError");
  } catch (const SolverError& e) {
    CHECK(e.history().size() == 2);
  }
}

TEST_CASE("table must cover the grid") {
  const PeriodicCurve c = circle_curve(make_grid(64));
  CHECK_THROWS(TensionProblem(c, Mobility::slender_body(build_table(1e-2, 8))));
}

}
