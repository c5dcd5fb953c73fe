#include <doctest.h>

#include <cmath>
#include <numbers>

#include "filament/bessel.hpp"
#include "filament/multipliers.hpp"
#include "oracles.hpp"

using namespace filament;

namespace {

using LD = long double;

// Multipliers from the closed forms with quadrature Bessel values (the exp(x)
// scaling cancels between numerator and denominator).
LD mt_oracle(LD x) {
  const LD k0 = oracle::bessel_k_quadrature_scaled(0, x), k1 = oracle::bessel_k_quadrature_scaled(1, x);
  return (2 * k0 * k1 + x * (k0 * k0 - k1 * k1)) / (4 * std::numbers::pi_v<LD> * x * k1 * k1);
}

LD mn_oracle(LD x) {
  const LD k0 = oracle::bessel_k_quadrature_scaled(0, x), k1 = oracle::bessel_k_quadrature_scaled(1, x),
           k2 = oracle::bessel_k_quadrature_scaled(2, x);
  const LD num = 2 * k0 * k1 * k2 + x * (k1 * k1 * (k0 + k2) - 2 * k0 * k0 * k2);
  const LD den = 2 * std::numbers::pi_v<LD> * x * (4 * k1 * k1 * k2 + x * k1 * (k1 * k1 - k0 * k2));
  return num / den;
}

}  // namespace

TEST_SUITE("multipliers") {

TEST_CASE("closed forms against quadrature Bessel values") {
  for (double x : {1e-5, 1e-2, 0.3, 1.0, 2.0, 5.0, 40.0, 300.0, 599.0}) {
    CAPTURE(x);
    CHECK(tangential_multiplier_of_x(x) == doctest::Approx(static_cast<double>(mt_oracle(x))).epsilon(1e-11));
    CHECK(normal_multiplier_of_x(x) == doctest::Approx(static_cast<double>(mn_oracle(x))).epsilon(1e-11));
  }
}

TEST_CASE("large-x series beyond the switch") {
  for (double x : {601.0, 2000.0, 1e4}) {
    CAPTURE(x);
    CHECK(tangential_multiplier_of_x(x) == doctest::Approx(static_cast<double>(mt_oracle(x))).epsilon(1e-11));
    CHECK(normal_multiplier_of_x(x) == doctest::Approx(static_cast<double>(mn_oracle(x))).epsilon(1e-11));
  }
  const double lo = kMultiplierAsymptoticX * (1 - 1e-12), hi = kMultiplierAsymptoticX * (1 + 1e-12);
  CHECK(tangential_multiplier_of_x(lo) == doctest::Approx(tangential_multiplier_of_x(hi)).epsilon(1e-11));
  CHECK(normal_multiplier_of_x(lo) == doctest::Approx(normal_multiplier_of_x(hi)).epsilon(1e-11));
}

TEST_CASE("zero mode takes the resistive constants") {
  const double eps = 1e-3;
  CHECK(eval_mt(eps, 0) == doctest::Approx(std::abs(std::log(eps)) / (2 * std::numbers::pi)).epsilon(1e-15));
  CHECK(eval_mn(eps, 0) == doctest::Approx(std::abs(std::log(eps)) / (4 * std::numbers::pi)).epsilon(1e-15));
  const RftConstants c = RftConstants::from_epsilon(eps);
  CHECK(c[Direction::tangential] == 2.0 * c[Direction::normal]);
}

TEST_CASE("small-x expansions") {
  // m_t ~ (-log(pi eps k) - gamma - 1/2)/2pi,  m_n ~ (-log(pi eps k) - gamma + 1/2)/4pi
  CHECK(eval_mt(1e-4, 1) == doctest::Approx(1.112241354410428).epsilon(1e-5));
  CHECK(eval_mn(1e-4, 1) == doctest::Approx(0.63569600349152).epsilon(1e-5));
  const double eps = 1e-7;
  for (long k : {1L, 10L, 100L}) {
    const double L = -std::log(std::numbers::pi * eps * static_cast<double>(k));
    CHECK(eval_mt(eps, k) == doctest::Approx((L - std::numbers::egamma - 0.5) / (2 * std::numbers::pi)).epsilon(1e-6));
    CHECK(eval_mn(eps, k) == doctest::Approx((L - std::numbers::egamma + 0.5) / (4 * std::numbers::pi)).epsilon(1e-6));
  }
}

TEST_CASE("large-k decay like 1/(eps k)") {
  // x m_t -> 1/(4 pi) ... both multipliers scale like 1/x
  const double a = tangential_multiplier_of_x(1e3) * 1e3, b = tangential_multiplier_of_x(1e4) * 1e4;
  CHECK(a == doctest::Approx(b).epsilon(2e-3));
  const double c = normal_multiplier_of_x(1e3) * 1e3, d = normal_multiplier_of_x(1e4) * 1e4;
  CHECK(c == doctest::Approx(d).epsilon(2e-3));
}

TEST_CASE("even in k, positive, decreasing") {
  const double eps = 1e-2;
  double prev_t = INFINITY, prev_n = INFINITY;
  for (long k = 0; k <= 4096; ++k) {
    const double t = eval_mt(eps, k), n = eval_mn(eps, k);
    CHECK(eval_mt(eps, -k) == t);
    CHECK(eval_mn(eps, -k) == n);
    REQUIRE(t > 0.0);
    REQUIRE(n > 0.0);
    if (k > 0) {
      CHECK(t < prev_t);
      CHECK(n < prev_n);
    }
    prev_t = t;
    prev_n = n;
  }
}

TEST_CASE("table agrees bitwise with pointwise evaluation") {
  const auto table = build_table(1e-4, 512);
  CHECK(table.kmax() == 512);
  for (long k = -512; k <= 512; ++k) {
    CHECK(table.mt(k) == eval_mt(1e-4, k));
    CHECK(table.mn(k) == eval_mn(1e-4, k));
    CHECK(table(Direction::normal, k) == eval_multiplier(Direction::normal, 1e-4, k));
  }
  const auto flat = MultiplierTable::rft_constant(1e-4, 8);
  for (long k = 0; k <= 8; ++k) CHECK(flat.mn(k) == RftConstants::from_epsilon(1e-4).normal);
}

TEST_CASE("low-wavenumber differences") {
  const double eps = 1e-3;
  CHECK(low_wavenumber_limit(eps) == 159);
  CHECK(lowk_rft_difference(eps, 0, Direction::tangential) == 0.0);
  CHECK(lowk_rft_difference(eps, 7, Direction::normal) ==
        doctest::Approx(eval_mn(eps, 7) - RftConstants::from_epsilon(eps).normal).epsilon(1e-15));
}

TEST_CASE("invalid epsilon") {
  CHECK_THROWS_AS(check_epsilon(0.0), std::domain_error);
  CHECK_THROWS_AS(check_epsilon(1.0), std::domain_error);
  CHECK_THROWS_AS(eval_mt(-1e-3, 1), std::domain_error);
  CHECK_THROWS(build_table(1e-3, 0));
}

}
