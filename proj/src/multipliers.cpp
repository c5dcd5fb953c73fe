#include "filament/multipliers.hpp"

#include <array>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

#include "filament/bessel.hpp"

namespace filament {
namespace {

constexpr double pi = std::numbers::pi;

// Large-x expansions obtained by inserting the Hankel series of K_0, K_1, K_2
// into the multiplier quotients (the exp(-x) sqrt(pi/2x) prefactors cancel):
//   4 pi x m_t = sum_j kT[j] / x^j,   2 pi x m_n = sum_j kN[j] / x^j.
constexpr std::array<double, 10> kT = {
    1.0, 0.0, -3.0 / 8.0, 3.0 / 4.0, -189.0 / 128.0,
    27.0 / 8.0, -9495.0 / 1024.0, 243.0 / 8.0, -3804381.0 / 32768.0, 32427.0 / 64.0};
constexpr std::array<double, 10> kN = {
    2.0 / 3.0, -1.0 / 3.0, 1.0 / 4.0, -5.0 / 12.0, 223.0 / 192.0,
    -55.0 / 16.0, 15499.0 / 1536.0, -185.0 / 6.0, 1707241.0 / 16384.0, -311045.0 / 768.0};

template <std::size_t N>
double horner(const std::array<double, N>& c, double u) {
  double r = c[N - 1];
  for (std::size_t i = N - 1; i-- > 0;) r = r * u + c[i];
  return r;
}

void check_x(double x) {
  if (!(x > 0.0)) throw std::domain_error("multiplier: x = 2 pi eps |k| must be positive");
}

}  // namespace

RftConstants RftConstants::from_epsilon(double epsilon) {
  check_epsilon(epsilon);
  const double L = std::abs(std::log(epsilon));
  return RftConstants{epsilon, L / (2.0 * pi), L / (4.0 * pi)};
}

void check_epsilon(double epsilon) {
  if (!(epsilon > 0.0 && epsilon < 1.0))
    throw std::domain_error("epsilon must lie in (0, 1), got " + std::to_string(epsilon));
}

double tangential_multiplier_of_x(double x) {
  check_x(x);
  if (x > kMultiplierAsymptoticX) return horner(kT, 1.0 / x) / (4.0 * pi * x);
  // Scaled Bessel values: the quotient is homogeneous of degree zero.
  const BesselEval b = bessel_k012_scaled(x);
  const double num = 2.0 * b.k0 * b.k1 + x * (b.k0 * b.k0 - b.k1 * b.k1);
  return num / (4.0 * pi * x * b.k1 * b.k1);
}

double normal_multiplier_of_x(double x) {
  check_x(x);
  if (x > kMultiplierAsymptoticX) return horner(kN, 1.0 / x) / (2.0 * pi * x);
  const BesselEval b = bessel_k012_scaled(x);
  const double k0 = b.k0, k1 = b.k1, k2 = b.k2;
  const double num = 2.0 * k0 * k1 * k2 + x * (k1 * k1 * (k0 + k2) - 2.0 * k0 * k0 * k2);
  const double den = 4.0 * k1 * k1 * k2 + x * k1 * (k1 * k1 - k0 * k2);
  return num / (2.0 * pi * x * den);
}

double eval_mt(double epsilon, long k) {
  check_epsilon(epsilon);
  if (k == 0) return std::abs(std::log(epsilon)) / (2.0 * pi);
  return tangential_multiplier_of_x(2.0 * pi * epsilon * std::abs(static_cast<double>(k)));
}

double eval_mn(double epsilon, long k) {
  check_epsilon(epsilon);
  if (k == 0) return std::abs(std::log(epsilon)) / (4.0 * pi);
  return normal_multiplier_of_x(2.0 * pi * epsilon * std::abs(static_cast<double>(k)));
}

double eval_multiplier(Direction d, double epsilon, long k) {
  return d == Direction::tangential ? eval_mt(epsilon, k) : eval_mn(epsilon, k);
}

long low_wavenumber_limit(double epsilon) {
  check_epsilon(epsilon);
  // largest integer strictly below 1/(2 pi eps)
  const double bound = 1.0 / (2.0 * pi * epsilon);
  long k = static_cast<long>(std::floor(bound));
  if (static_cast<double>(k) >= bound) --k;
  return k;
}

double lowk_rft_difference(double epsilon, long k, Direction d) {
  check_epsilon(epsilon);
  const long ak = k < 0 ? -k : k;
  if (static_cast<double>(ak) >= 1.0 / (2.0 * pi * epsilon))
    throw std::domain_error("lowk_rft_difference: |k| must be below 1/(2 pi eps)");
  if (ak == 0) return 0.0;
  return eval_multiplier(d, epsilon, ak) - RftConstants::from_epsilon(epsilon)[d];
}

MultiplierTable MultiplierTable::build(double epsilon, int kmax) {
  check_epsilon(epsilon);
  if (kmax < 1) throw std::domain_error("build_table: kmax must be >= 1");
  MultiplierTable t;
  t.epsilon_ = epsilon;
  t.mt_.resize(static_cast<std::size_t>(kmax) + 1);
  t.mn_.resize(static_cast<std::size_t>(kmax) + 1);
  for (int k = 0; k <= kmax; ++k) {
    t.mt_[static_cast<std::size_t>(k)] = eval_mt(epsilon, k);
    t.mn_[static_cast<std::size_t>(k)] = eval_mn(epsilon, k);
  }
  return t;
}

MultiplierTable MultiplierTable::from_values(double epsilon, std::vector<double> mt, std::vector<double> mn) {
  if (mt.size() != mn.size() || mt.size() < 2)
    throw std::invalid_argument("MultiplierTable::from_values: mismatched or empty arrays");
  MultiplierTable t;
  t.epsilon_ = epsilon;
  t.mt_ = std::move(mt);
  t.mn_ = std::move(mn);
  return t;
}

MultiplierTable MultiplierTable::rft_constant(double epsilon, int kmax) {
  const RftConstants c = RftConstants::from_epsilon(epsilon);
  const auto size = static_cast<std::size_t>(kmax) + 1;
  return from_values(epsilon, std::vector<double>(size, c.tangential), std::vector<double>(size, c.normal));
}

}  // namespace filament
